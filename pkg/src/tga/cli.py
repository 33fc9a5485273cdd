"""Command-line front end: ``tga validate|decide|witness|oracle|sweep``.

Exit codes: 0 success, 1 invalid factor system / sweep disagreement,
2 configuration or parse error, 3 instance not admissible, 4 no witness.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from . import deciders as dec
from .catalog import InstanceSpec, default_catalog, load_config
from .exceptions import ConfigError, NotAdmissible, TGAError, ZeroEntry
from .sweep import DEFAULT_PROPERTIES, SCAN_BUDGET, run_sweep, write_reports

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_NOT_ADMISSIBLE, EXIT_NO_WITNESS = 0, 1, 2, 3, 4

WITNESS_KINDS = ("unit_commutation", "char_p", "quaternion", "regularity",
                 "strong_regularity", "n_weak", "xiN")
DECIDE_PROPERTIES = ("no_nilpotents", "n_weak", "strongly_regular", "xi_N",
                     "equivalences", "group_ring_n_weak", "closure")


def _dump(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _seed(args) -> Optional[int]:
    return args.seed if args.seed is not None else None  # deciders fall back to TGA_SEED


def _single(args) -> InstanceSpec:
    specs = load_config(args.config)
    if len(specs) != 1:
        raise ConfigError(f"expected a single instance in {args.config}, found {len(specs)}")
    return specs[0]


def cmd_validate(args) -> int:
    specs = load_config(args.config)
    status = EXIT_OK
    results = []
    for spec in specs:
        try:
            A = spec.resolve(validate=False)
        except ZeroEntry as exc:
            results.append({"instance": spec.label(), "valid": False, "error": str(exc)})
            status = EXIT_INVALID
            continue
        report = A.rho.validate()
        results.append({"instance": spec.label(), **report.to_json()})
        if not report.valid:
            status = EXIT_INVALID
    _dump(results[0] if len(results) == 1 else results)
    return status


def cmd_decide(args) -> int:
    A = _single(args).resolve()
    prop = args.property
    try:
        if prop == "closure":
            _dump(dec.sufficiently_closed(A).to_json())
            return EXIT_OK
        if prop == "group_ring_n_weak":
            _dump(dec.decide_group_ring_n_weak(A, args.n).to_json())
            return EXIT_OK
        if prop == "equivalences":
            rep = dec.decide_equivalences(A, args.n_max, seed=_seed(args))
            rep["witnesses"] = [[s.to_json(), r.to_json()] for s, r in rep["witnesses"]]
            _dump(rep)
            return EXIT_OK
        decision = {
            "no_nilpotents": lambda: dec.decide_no_nilpotents(A),
            "n_weak": lambda: dec.decide_n_weakly_regular(A, args.n),
            "strongly_regular": lambda: dec.decide_strongly_regular(A),
            "xi_N": lambda: dec.decide_xi_N(A),
        }[prop]()
    except NotAdmissible as exc:
        _dump({"error": "not_admissible", "message": str(exc), "closure": exc.report.to_json()})
        return EXIT_NOT_ADMISSIBLE
    _dump(decision.to_json())
    return EXIT_OK


def cmd_witness(args) -> int:
    A = _single(args).resolve()
    kind = args.kind
    if kind in ("unit_commutation", "char_p", "quaternion"):
        closure = dec.sufficiently_closed(A)
        if not closure.passes:
            _dump({"error": "not_admissible", "closure": closure.to_json()})
            return EXIT_NOT_ADMISSIBLE
        V = dec.v_basis(A)
        ctor = {"unit_commutation": dec.witness_unit_commutation,
                "char_p": dec.witness_char_p,
                "quaternion": dec.witness_quaternion}[kind]
        w = ctor(A, V)
    else:
        if not args.element:
            raise ConfigError(f"witness kind {kind!r} needs --element")
        a = A.parse(args.element)
        if kind == "regularity":
            w = dec.regularity_witness(a)
        elif kind == "strong_regularity":
            w = dec.strong_regularity_witness(a)
        elif kind == "n_weak":
            w = dec.n_weak_witness(a, args.n)
        else:
            w = dec.xiN_witness(a)
    if w is None:
        _dump({"witness": None, "kind": kind})
        return EXIT_NO_WITNESS
    _dump(w.to_json())
    return EXIT_OK


def cmd_oracle(args) -> int:
    spec = _single(args)
    A = spec.resolve()
    budget = args.budget if args.budget is not None else (spec.budget or dec.DEFAULT_BUDGET)
    seed = _seed(args) if args.seed is not None else spec.seed
    if args.property == "no_nilpotents":
        res = dec.oracle_nilpotent_search(A, budget, seed, parallelism=args.parallelism)
    else:
        prop = f"n_weak({args.n})" if args.property == "n_weak" else args.property
        res = dec.oracle_property_scan(A, prop, budget, seed, parallelism=args.parallelism)
    _dump(res.to_json())
    return EXIT_OK


def cmd_sweep(args) -> int:
    catalog = default_catalog() if args.config in (None, "default") else load_config(args.config)
    props = []
    for item in args.property or DEFAULT_PROPERTIES:
        props.extend(p.strip() for p in item.split(",") if p.strip())
    budget = args.budget if args.budget is not None else dec.DEFAULT_BUDGET
    report = run_sweep(catalog, props, budget, _seed(args), args.parallelism, args.scan_budget)
    paths = write_reports(report, args.out_dir, figures=not args.no_figures)
    summary = report.summary()
    print(json.dumps({"summary": summary, "files": {k: str(v) for k, v in paths.items()}},
                     indent=2, sort_keys=True))
    return EXIT_INVALID if summary["disagree"] else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tga", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        p.add_argument("--config", required=config_required, help="JSON instance or catalog file")
        p.add_argument("--seed", type=int, default=None, help="random seed (default: $TGA_SEED)")
        p.add_argument("--budget", type=int, default=None, help="random samples past the exhaustive cap")
        p.add_argument("--parallelism", type=int, default=1, help="oracle worker threads")
        p.add_argument("--n", type=int, default=2, help="exponent for n-weak regularity")

    p = sub.add_parser("validate", help="check the factor system of each instance")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("decide", help="run a decider and print the Decision")
    common(p)
    p.add_argument("--property", choices=DECIDE_PROPERTIES, default="no_nilpotents")
    p.add_argument("--n-max", type=int, default=4, help="largest n for --property equivalences")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("witness", help="construct a witness")
    common(p)
    p.add_argument("--kind", choices=WITNESS_KINDS, required=True)
    p.add_argument("--element", help="element expression such as '1+g' or '2*g_3 - g_1'")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("oracle", help="run a brute-force oracle")
    common(p)
    p.add_argument("--property", default="no_nilpotents",
                   choices=("no_nilpotents", "regular", "strongly_regular", "n_weak", "xi_N"))
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("sweep", help="decider-vs-oracle campaign over a catalog")
    common(p, config_required=False)
    p.add_argument("--property", action="append",
                   help=f"properties to check (repeatable or comma separated; default {','.join(DEFAULT_PROPERTIES)})")
    p.add_argument("--scan-budget", type=int, default=SCAN_BUDGET,
                   help="samples for property scans on algebras above 2^12 elements")
    p.add_argument("--out-dir", default="tga-report")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except NotAdmissible as exc:
        _dump({"error": "not_admissible", "message": str(exc),
               "closure": exc.report.to_json() if exc.report else None})
        return EXIT_NOT_ADMISSIBLE
    except (TGAError, ValueError, KeyError) as exc:
        print(f"tga: error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
