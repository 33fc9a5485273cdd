"""Decider-versus-oracle campaigns over instance catalogs, and report files."""

from __future__ import annotations

import csv
import io
import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .catalog import InstanceSpec
from .deciders import (
    DEFAULT_BUDGET,
    EXHAUSTIVE_CAP,
    SCHEMA_VERSION,
    decide_n_weakly_regular,
    decide_no_nilpotents,
    decide_strongly_regular,
    decide_xi_N,
    default_seed,
    oracle_nilpotent_search,
    oracle_property_scan,
    sufficiently_closed,
)
from .exceptions import NotAdmissible, TGAError

log = logging.getLogger(__name__)

DEFAULT_PROPERTIES = ("no_nilpotents", "n_weak(2)", "xi_N")
# property scans run one linear solve per element, so campaigns scan them
# exhaustively only up to SCAN_CAP elements and sample SCAN_BUDGET beyond
SCAN_CAP = 2**12
SCAN_BUDGET = 2000
CSV_VERSION = 1
CSV_COLUMNS = [
    "csv_version", "instance", "property", "status", "decider", "oracle", "agree",
    "oracle_exhaustive", "oracle_examined", "witness_kind", "witness_construction",
    "witness", "detail",
]


@dataclass
class SweepRow:
    instance: str
    property: str
    status: str  # ok | not_admissible | error
    decider: Optional[bool] = None
    oracle: Optional[bool] = None
    oracle_exhaustive: Optional[bool] = None
    oracle_examined: Optional[int] = None
    witness_kind: str = ""
    witness_construction: str = ""
    witness: str = ""
    detail: str = ""

    @property
    def agree(self) -> Optional[bool]:
        if self.status != "ok":
            return None
        return self.decider == self.oracle

    def to_json(self):
        return {
            "instance": self.instance,
            "property": self.property,
            "status": self.status,
            "decider": self.decider,
            "oracle": self.oracle,
            "agree": self.agree,
            "oracle_exhaustive": self.oracle_exhaustive,
            "oracle_examined": self.oracle_examined,
            "witness_kind": self.witness_kind,
            "witness_construction": self.witness_construction,
            "witness": self.witness,
            "detail": self.detail,
        }


@dataclass
class SweepReport:
    rows: list[SweepRow]
    seed: int
    budget: int
    properties: tuple
    timings: dict = field(default_factory=dict)
    scan_budget: int = SCAN_BUDGET

    @property
    def disagreements(self) -> list[SweepRow]:
        return [r for r in self.rows if r.agree is False]

    def summary(self) -> dict:
        counts = {"rows": len(self.rows), "ok": 0, "not_admissible": 0, "error": 0,
                  "agree": 0, "disagree": 0}
        for r in self.rows:
            counts[r.status] += 1
            if r.agree is True:
                counts["agree"] += 1
            elif r.agree is False:
                counts["disagree"] += 1
        return counts

    def to_json(self, include_timings: bool = True):
        out = {
            "schema": SCHEMA_VERSION,
            "seed": self.seed,
            "budget": self.budget,
            "scan_budget": self.scan_budget,
            "properties": list(self.properties),
            "summary": self.summary(),
            "rows": [r.to_json() for r in self.rows],
        }
        if include_timings:
            out["timings"] = self.timings
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in self.rows:
            d = r.to_json()
            writer.writerow([CSV_VERSION] + [_cell(d[c]) for c in CSV_COLUMNS[1:]])
        return buf.getvalue()

    def to_markdown(self) -> str:
        s = self.summary()
        lines = [
            "# Sweep report",
            "",
            f"seed `{self.seed}`, budget `{self.budget}`, properties: {', '.join(self.properties)}",
            "",
            "| rows | ok | not admissible | errors | agree | disagree |",
            "|---:|---:|---:|---:|---:|---:|",
            f"| {s['rows']} | {s['ok']} | {s['not_admissible']} | {s['error']} | {s['agree']} | {s['disagree']} |",
            "",
            "| instance | property | status | decider | oracle | agree | witness |",
            "|---|---|---|---|---|---|---|",
        ]
        for r in self.rows:
            lines.append(
                f"| {r.instance} | {r.property} | {r.status} | {_cell(r.decider)} | "
                f"{_cell(r.oracle)} | {_cell(r.agree)} | {r.witness_construction or r.witness_kind} |"
            )
        return "\n".join(lines) + "\n"


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return v


def _decide(A, prop: str):
    if prop == "no_nilpotents":
        return decide_no_nilpotents(A)
    if prop.startswith("n_weak"):
        digits = "".join(ch for ch in prop if ch.isdigit())
        return decide_n_weakly_regular(A, int(digits) if digits else 2)
    if prop == "strongly_regular":
        return decide_strongly_regular(A)
    if prop == "xi_N":
        return decide_xi_N(A)
    raise ValueError(f"unknown property {prop!r}")


def _oracle(A, prop: str, budget: int, seed: int, parallelism: int, scan_budget: int):
    if prop == "no_nilpotents":
        res = oracle_nilpotent_search(A, budget, seed, parallelism=parallelism)
        return res.verdict, res.exhaustive, res.examined
    if A.is_commutative():
        res = oracle_property_scan(A, prop, scan_budget, seed, cap=SCAN_CAP, parallelism=parallelism)
    else:
        # falls back to a nilpotent search, which is cheap enough for the full cap
        res = oracle_property_scan(A, prop, budget, seed, cap=EXHAUSTIVE_CAP, parallelism=parallelism)
    return res.passed, res.exhaustive, res.examined


def run_instance(inst: InstanceSpec, properties: Sequence[str], budget: int, seed: int,
                 parallelism: int = 1, timings: Optional[dict] = None,
                 scan_budget: int = SCAN_BUDGET) -> list[SweepRow]:
    rows = []
    label = inst.label()
    try:
        A = inst.resolve()
    except TGAError as exc:
        return [SweepRow(label, prop, "error", detail=str(exc)) for prop in properties]
    closure = sufficiently_closed(A)
    if not closure.passes:
        detail = f"suggested k'={closure.suggested_k}"
        return [SweepRow(label, prop, "not_admissible", detail=detail) for prop in properties]
    b = inst.budget if inst.budget is not None else budget
    s = inst.seed if inst.seed is not None else seed
    for prop in properties:
        t0 = time.perf_counter()
        try:
            d = _decide(A, prop)
            verdict, exhaustive, examined = _oracle(A, prop, b, s, parallelism, scan_budget)
        except NotAdmissible as exc:  # pragma: no cover - closure checked above
            rows.append(SweepRow(label, prop, "not_admissible", detail=str(exc)))
            continue
        except (TGAError, AssertionError) as exc:
            log.exception("row %s/%s failed", label, prop)
            rows.append(SweepRow(label, prop, "error", detail=f"{type(exc).__name__}: {exc}"))
            continue
        w = d.witness
        rows.append(SweepRow(
            label, prop, "ok", d.verdict, verdict, exhaustive, examined,
            w.kind if w else "", str(w.params.get("construction", "")) if w else "",
            repr(w["x"]) if w and "x" in w.data else "",
        ))
        if timings is not None:
            timings[f"{label}|{prop}"] = round(time.perf_counter() - t0, 4)
    return rows


def run_sweep(catalog: Iterable[InstanceSpec], properties: Sequence[str] = DEFAULT_PROPERTIES,
              budget: int = DEFAULT_BUDGET, seed: Optional[int] = None,
              parallelism: int = 1, scan_budget: int = SCAN_BUDGET) -> SweepReport:
    seed = default_seed() if seed is None else seed
    rows, timings = [], {}
    start = time.perf_counter()
    for inst in catalog:
        rows.extend(run_instance(inst, properties, budget, seed, parallelism, timings, scan_budget))
    timings["total"] = round(time.perf_counter() - start, 3)
    return SweepReport(rows, seed, budget, tuple(properties), timings, scan_budget)


def write_reports(report: SweepReport, out_dir, figures: bool = True) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "json": out / "report.json",
        "csv": out / "report.csv",
        "md": out / "report.md",
    }
    paths["json"].write_text(json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n")
    paths["csv"].write_text(report.to_csv())
    paths["md"].write_text(report.to_markdown())
    if figures:
        from .plotting import plot_agreement, plot_timings

        paths["agreement_png"] = plot_agreement(report, out / "agreement.png")
        paths["timings_png"] = plot_timings(report, out / "timings.png")
    return paths
