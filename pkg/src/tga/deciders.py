"""Decision procedures for ring properties of K_rho G, their witnesses and oracles.

Deciders read off the group/cocycle conditions.  Witness constructors build
explicit certificates (nilpotent elements, solutions b, c of the defining
equations) and every :class:`Witness` re-checks its equation when created.
Oracles search elements directly and never consult the deciders.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from . import linalg
from .algebra import (
    AlgebraElement,
    TwistedGroupAlgebra,
    is_central,
    nilradical_matrix,
)
from .cocycle import FactorSystem, is_symmetric, power_scalar, unit_power_rescaling
from .exceptions import NotAdmissible, NotCommutative, PreconditionFailed
from .field import FieldElem, ff_integer_invertible, ff_isotropic, has_nth_root_in_degree, minus_one_is_square
from .group import classify, element_order, element_orders, find_quaternion_pair

__all__ = [
    "Decision",
    "Witness",
    "ClosureReport",
    "sufficiently_closed",
    "v_basis",
    "decide_no_nilpotents",
    "witness_unit_commutation",
    "witness_char_p",
    "witness_quaternion",
    "regularity_witness",
    "strong_regularity_witness",
    "n_weak_witness",
    "xiN_witness",
    "decide_n_weakly_regular",
    "decide_xi_N",
    "decide_equivalences",
    "decide_group_ring_n_weak",
    "oracle_nilpotent_search",
    "oracle_property_scan",
    "EXHAUSTIVE_CAP",
    "DEFAULT_SEED",
    "DEFAULT_BUDGET",
]

EXHAUSTIVE_CAP = 2**20
DEFAULT_SEED = 20240611
DEFAULT_BUDGET = 10**5
SCHEMA_VERSION = 1


def default_seed() -> int:
    env = os.environ.get("TGA_SEED")
    return int(env) if env else DEFAULT_SEED


# -- witnesses ---------------------------------------------------------------------

def _witness_check(kind: str, data: dict, params: dict) -> tuple[str, bool]:
    if kind == "none_found":
        return "none", True
    if kind == "nilpotent_element":
        x = data["x"]
        e = params.get("power", 2)
        return f"x != 0 and x^{e} = 0", (not x.is_zero()) and (x**e).is_zero()
    if kind == "regularity_pair":
        a, b = data["a"], data["b"]
        return "a*b*a = a", a * b * a == a
    if kind == "strong_regularity_pair":
        a, b = data["a"], data["b"]
        return "b*a^2 = a", b * (a * a) == a
    if kind == "n_weak_pair":
        a, b, c = data["a"], data["b"], data["c"]
        n = params["n"]
        return f"a*b*a^{n}*c = a", a * b * (a**n) * c == a
    if kind == "xiN_pair":
        a, b, z = data["a"], data["b"], data["z"]
        ok = z == a * a * b - a
        ok = ok and (z ** z.ambient.n).is_zero() and is_central(z)
        return "z = a^2*b - a, z central nilpotent", bool(ok)
    raise ValueError(f"unknown witness kind {kind!r}")


@dataclass(frozen=True, eq=False)
class Witness:
    """A certificate whose verification equation is evaluated on construction."""

    kind: str
    data: dict
    params: dict = field(default_factory=dict)
    check: str = field(init=False)
    holds: bool = field(init=False)

    def __post_init__(self):
        check, holds = _witness_check(self.kind, self.data, self.params)
        object.__setattr__(self, "check", check)
        object.__setattr__(self, "holds", bool(holds))
        if not holds:
            raise AssertionError(f"witness {self.kind} fails its check {check}")

    def verify(self) -> bool:
        return _witness_check(self.kind, self.data, self.params)[1]

    def __getitem__(self, key) -> AlgebraElement:
        return self.data[key]

    def to_json(self):
        return {
            "kind": self.kind,
            "data": {k: {"coeffs": v.to_json(), "text": repr(v)} for k, v in self.data.items()},
            "params": _jsonable(self.params),
            "check": self.check,
            "holds": self.holds,
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, FieldElem):
        return obj.to_json()
    if isinstance(obj, AlgebraElement):
        return obj.to_json()
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return obj


@dataclass(frozen=True)
class Decision:
    property: str
    verdict: bool
    conditions: dict
    witness: Optional[Witness] = None
    notes: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "schema": SCHEMA_VERSION,
            "property": self.property,
            "verdict": self.verdict,
            "conditions": _jsonable(self.conditions),
            "witness": self.witness.to_json() if self.witness else None,
            "notes": _jsonable(self.notes),
        }


# -- closure ------------------------------------------------------------------------

@dataclass(frozen=True)
class ClosureReport:
    passes: bool
    missing_roots: tuple  # (g, n, alpha_g) with no n-th root of alpha_g^{-1}
    needs_isotropic: bool
    isotropic_pair: Optional[tuple]
    suggested_k: Optional[int]

    def __bool__(self):
        return self.passes

    def to_json(self):
        return {
            "passes": self.passes,
            "missing_roots": [
                {"g": g, "order": n, "alpha": a.to_json()} for g, n, a in self.missing_roots
            ],
            "needs_isotropic": self.needs_isotropic,
            "isotropic_pair": [e.to_json() for e in self.isotropic_pair] if self.isotropic_pair else None,
            "suggested_k": self.suggested_k,
        }


def sufficiently_closed(A: TwistedGroupAlgebra) -> ClosureReport:
    """Check that K contains the roots used by the structure theorems' proofs.

    These are an ord(g)-th root of alpha_g^{-1} for every g and, when G is
    hamiltonian or has an element of order 4, a nonzero solution of
    alpha^2 + beta^2 = 0.
    """
    K, G, rho = A.field, A.group, A.rho
    res = unit_power_rescaling(rho)
    missing = () if res else res.failures
    orders = element_orders(G)
    needs_iso = classify(G) == "hamiltonian" or 4 in orders
    iso = ff_isotropic(K, 2) if needs_iso else None
    passes = not missing and (not needs_iso or iso is not None)
    suggestion = None
    if not passes:
        k2 = 2 * K.k
        while K.p**k2 <= 2**16:
            ok = all(has_nth_root_in_degree(a.inverse(), n, k2) for _, n, a in missing)
            if needs_iso and not minus_one_is_square(K.p, k2):
                ok = False
            if ok:
                suggestion = k2
                break
            k2 += K.k
    return ClosureReport(passes, tuple(missing), needs_iso, iso, suggestion)


def _require_admissible(A: TwistedGroupAlgebra) -> ClosureReport:
    report = sufficiently_closed(A)
    if not report.passes:
        raise NotAdmissible(f"{A!r} is not sufficiently closed", report)
    return report


# -- v-basis and nilpotent witnesses -------------------------------------------------

@dataclass(frozen=True, eq=False)
class VBasis:
    """Rescaled units v_g = u_g mu_g with v_g^{ord g} = 1, as elements of A."""

    ambient: TwistedGroupAlgebra
    mu: tuple
    v: tuple  # AlgebraElement per group element

    def __getitem__(self, g: int) -> AlgebraElement:
        return self.v[g]

    def power(self, g: int, i: int) -> AlgebraElement:
        return self.v[g] ** i


def v_basis(A: TwistedGroupAlgebra) -> Optional[VBasis]:
    res = unit_power_rescaling(A.rho)
    if not res:
        return None
    mu, _ = res
    return VBasis(A, mu.mu, tuple(A.unit(g, mu[g]) for g in range(A.n)))


def _geometric_sum(V: VBasis, g: int, n: int) -> AlgebraElement:
    A = V.ambient
    s, cur = A.zero(), A.one()
    for _ in range(n):
        s = s + cur
        cur = cur * V[g]
    return s


def _unit_commutation_element(V: VBasis, g: int, h: int) -> AlgebraElement:
    A = V.ambient
    n = element_order(A.group, g)
    return (V[g] - A.one()) * A.unit(h) * _geometric_sum(V, g, n)


def eq1_holds(V: VBasis, g: int, h: int) -> bool:
    """Whether u_h = v_g u_h v_g^i for some 0 <= i < ord(g)."""
    A = V.ambient
    n = element_order(A.group, g)
    uh = A.unit(h)
    left = V[g] * uh
    cur = A.one()
    for _ in range(n):
        if left * cur == uh:
            return True
        cur = cur * V[g]
    return False


def witness_unit_commutation(A: TwistedGroupAlgebra, V: Optional[VBasis] = None) -> Optional[Witness]:
    """First nonzero x = (v_g - 1) u_h (1 + v_g + ... + v_g^{n-1}) over pairs (g, h)."""
    V = V or v_basis(A)
    if V is None:
        raise PreconditionFailed("no v-basis: some power scalar has no root in K")
    for g in range(A.n):
        for h in range(A.n):
            x = _unit_commutation_element(V, g, h)
            if not x.is_zero():
                return Witness("nilpotent_element", {"x": x},
                               {"power": 2, "construction": "unit_commutation", "g": g, "h": h})
    return None


def witness_char_p(A: TwistedGroupAlgebra, V: Optional[VBasis] = None) -> Optional[Witness]:
    """s = 1 + v_g + ... + v_g^{p-1} for the first g of order p; s^p = 0."""
    p = A.p
    orders = element_orders(A.group)
    candidates = [g for g, o in enumerate(orders) if o == p]
    if not candidates:
        return None
    V = V or v_basis(A)
    if V is None:
        raise PreconditionFailed("no v-basis: some power scalar has no root in K")
    g = candidates[0]
    s = _geometric_sum(V, g, p)
    return Witness("nilpotent_element", {"x": s}, {"power": p, "construction": "char_p", "g": g})


def witness_quaternion(A: TwistedGroupAlgebra, V: Optional[VBasis] = None,
                       pair: Optional[tuple] = None) -> Optional[Witness]:
    """w = alpha (v_g^2 v_h - v_h) + beta (v_g^3 v_h - v_g v_h) on a Q8 subgroup <g, h>.

    (alpha, beta) is the first isotropic pair of K.  If v_g v_h v_g = -v_h the
    generator v_g is replaced by zeta v_g with zeta^2 = -1 so that
    v_h = v_g v_h v_g holds; any other scalar leaves no witness.
    """
    if A.group.is_abelian():
        return None
    loc = find_quaternion_pair(A.group)
    if loc is None:
        return None
    iso = pair if pair is not None else ff_isotropic(A.field, 2)
    if iso is None:
        return None
    alpha, beta = iso
    V = V or v_basis(A)
    if V is None:
        raise PreconditionFailed("no v-basis: some power scalar has no root in K")
    g, h = loc
    vg, vh = V[g], V[h]
    K = A.field
    conj = vg * vh * vg
    zeta = None
    if conj != vh:
        if conj == -vh and not (beta / alpha).is_zero():
            zeta = beta / alpha  # zeta^2 = -1
            vg = vg.scale(zeta)
        else:
            return None
    assert vg * vh * vg == vh
    vg2 = vg * vg
    vg3 = vg2 * vg
    w = (vg2 * vh - vh).scale(alpha) + (vg3 * vh - vg * vh).scale(beta)
    params = {"power": 2, "construction": "quaternion", "g": g, "h": h,
              "alpha": alpha, "beta": beta}
    if zeta is not None:
        params["zeta"] = zeta
    if w.is_zero():  # pragma: no cover - supports of the two summands differ
        return None
    return Witness("nilpotent_element", {"x": w}, params)


def _nilpotent_witness(A: TwistedGroupAlgebra, V: Optional[VBasis], cond: dict) -> Optional[Witness]:
    """Try first the constructor aimed at the condition that fails, then the others."""
    if V is None:
        return None
    order = [witness_unit_commutation, witness_char_p, witness_quaternion]
    if cond["group_class"] == "hamiltonian":
        order = [witness_quaternion, witness_unit_commutation, witness_char_p]
    elif cond["abelian"] and cond["symmetric"] and not cond["orders_invertible"]:
        order = [witness_char_p, witness_unit_commutation, witness_quaternion]
    for ctor in order:
        w = ctor(A, V)
        if w is not None:
            return w
    return None


def _conditions(A: TwistedGroupAlgebra) -> dict:
    G = A.group
    cls = classify(G)
    orders = element_orders(G)
    bad_orders = sorted({o for o in orders if not ff_integer_invertible(A.field, o)})
    sym, pair = is_symmetric(A.rho)
    return {
        "group_class": cls,
        "abelian": cls == "abelian",
        "orders_invertible": not bad_orders,
        "non_invertible_orders": bad_orders,
        "symmetric": sym,
        "asymmetric_pair": list(pair) if pair else None,
    }


def decide_no_nilpotents(A: TwistedGroupAlgebra) -> Decision:
    closure = _require_admissible(A)
    cond = _conditions(A)
    cond["sufficiently_closed"] = closure.passes
    verdict = cond["abelian"] and cond["orders_invertible"] and cond["symmetric"]
    witness = None if verdict else _nilpotent_witness(A, v_basis(A), cond)
    return Decision("no_nilpotents", verdict, cond, witness)


# -- per-element solvers ----------------------------------------------------------------

def _require_commutative(A: TwistedGroupAlgebra) -> None:
    if not A.is_commutative():
        raise NotCommutative(f"{A!r} is not commutative")


def solve_regular_batch(A: TwistedGroupAlgebra, X: np.ndarray):
    """b with a b a = a for each row a of X: (L_a R_a) b = a."""
    L = A.left_matrices(X)
    R = A.right_matrices(X)
    M = np.einsum("bij,bjk->bik", L, R) % A.p
    return linalg.solve_batch(M, X, A.p)


def solve_strong_batch(A: TwistedGroupAlgebra, X: np.ndarray):
    """b with b a^2 = a for each row a: (R_{a^2}) b = a."""
    sq = A.mul_batch(X, X)
    return linalg.solve_batch(A.right_matrices(sq), X, A.p)


def solve_xiN_batch(A: TwistedGroupAlgebra, X: np.ndarray):
    """b with a^2 b - a in the nilradical N, plus z = a^2 b - a (commutative A)."""
    N = nilradical_matrix(A)
    sq = A.mul_batch(X, X)
    L = A.left_matrices(sq)
    r = N.shape[0]
    if r:
        M = np.concatenate([L, np.broadcast_to(N.T, (len(X), A.dim, r))], axis=2)
    else:
        M = L
    sol, ok = linalg.solve_batch(M, X, A.p)
    b = sol[:, : A.dim]
    z = (A.mul_batch(sq, b) - X) % A.p
    return b, z, ok


def regularity_witness(a: AlgebraElement) -> Optional[Witness]:
    A = a.ambient
    sol, ok = solve_regular_batch(A, a.vector[None])
    if not ok[0]:
        return None
    return Witness("regularity_pair", {"a": a, "b": A.from_vector(sol[0])})


def strong_regularity_witness(a: AlgebraElement) -> Optional[Witness]:
    A = a.ambient
    sol, ok = solve_strong_batch(A, a.vector[None])
    if not ok[0]:
        return None
    return Witness("strong_regularity_pair", {"a": a, "b": A.from_vector(sol[0])})


def n_weak_witness(a: AlgebraElement, n: int) -> Optional[Witness]:
    """(b, c) with a = a b a^n c, from b solving a^2 b = a and c = b^{n-1}."""
    if n < 2:
        raise ValueError("n must be >= 2")
    A = a.ambient
    _require_commutative(A)
    sol, ok = solve_strong_batch(A, a.vector[None])
    if not ok[0]:
        return None
    b = A.from_vector(sol[0])
    c = b ** (n - 1)
    return Witness("n_weak_pair", {"a": a, "b": b, "c": c}, {"n": n})


def xiN_witness(a: AlgebraElement) -> Optional[Witness]:
    A = a.ambient
    _require_commutative(A)
    b, z, ok = solve_xiN_batch(A, a.vector[None])
    if not ok[0]:
        return None
    return Witness("xiN_pair", {"a": a, "b": A.from_vector(b[0]), "z": A.from_vector(z[0])})


# -- remaining deciders -------------------------------------------------------------------

def decide_n_weakly_regular(A: TwistedGroupAlgebra, n: int = 2) -> Decision:
    if n < 2:
        raise ValueError("n must be >= 2")
    closure = _require_admissible(A)
    cond = _conditions(A)
    cond["sufficiently_closed"] = closure.passes
    verdict = cond["abelian"] and cond["orders_invertible"] and cond["symmetric"]
    witness = None if verdict else _nilpotent_witness(A, v_basis(A), cond)
    return Decision("n_weakly_regular", verdict, cond, witness, {"n": n})


def decide_strongly_regular(A: TwistedGroupAlgebra) -> Decision:
    d = decide_n_weakly_regular(A, 2)
    return Decision("strongly_regular", d.verdict, d.conditions, d.witness)


def decide_xi_N(A: TwistedGroupAlgebra) -> Decision:
    closure = _require_admissible(A)
    cond = _conditions(A)
    cond["sufficiently_closed"] = closure.passes
    verdict = cond["abelian"] and cond["symmetric"]
    witness = None
    notes = {}
    if not verdict:
        witness = _nilpotent_witness(A, v_basis(A), cond)
        if witness is not None:
            notes["witness_central"] = is_central(witness["x"])
    return Decision("xi_N", verdict, cond, witness, notes)


def decide_equivalences(A: TwistedGroupAlgebra, n_max: int = 4, samples: int = 64,
                        seed: Optional[int] = None) -> dict:
    """Compare n-weak regularity for n = 2..n_max with the condition set.

    When everything is true, a seeded sample of elements is checked for
    strong regularity (b a^2 = a) and regularity (a b a = a) with explicit
    witnesses.
    """
    closure = _require_admissible(A)
    cond = _conditions(A)
    conditions_hold = cond["abelian"] and cond["orders_invertible"] and cond["symmetric"]
    verdicts = {n: decide_n_weakly_regular(A, n).verdict for n in range(2, n_max + 1)}
    all_equal = len(set(verdicts.values()) | {conditions_hold}) == 1
    witnesses = []
    if all_equal and conditions_hold:
        rng = np.random.default_rng(default_seed() if seed is None else seed)
        X = _sample_or_all(A, samples, rng)
        for v in X:
            a = A.from_vector(v)
            sw = strong_regularity_witness(a)
            rw = regularity_witness(a)
            if sw is None or rw is None:
                all_equal = False
                break
            witnesses.append((sw, rw))
    return {
        "schema": SCHEMA_VERSION,
        "instance": repr(A),
        "closure": closure.to_json(),
        "conditions": _jsonable(cond),
        "conditions_hold": conditions_hold,
        "n_weak_verdicts": {str(n): v for n, v in verdicts.items()},
        "all_equal": all_equal,
        "strong_regularity_checked": len(witnesses),
        "witnesses": witnesses,
    }


def _sample_or_all(A: TwistedGroupAlgebra, count: int, rng: np.random.Generator) -> np.ndarray:
    if A.size <= count:
        return A.enumerate_vectors(0, A.size)
    return A.random_vectors(rng, count)


def decide_group_ring_n_weak(A: TwistedGroupAlgebra, n: int = 2) -> Decision:
    """n-weak regularity of an ordinary group algebra KG over a finite field K.

    Over a finite field only the positive-characteristic branch can hold:
    G abelian without elements of order divisible by p.  A hamiltonian G
    always fails, and the first nontrivial solution of x^2 + y^2 + z^2 = 0 is
    reported to show why the characteristic-zero branch cannot apply.
    """
    if not np.all(A.rho.table == 1):
        raise PreconditionFailed("group-ring decider needs the trivial factor system")
    G, K = A.group, A.field
    cls = classify(G)
    orders = element_orders(G)
    p_elements = [g for g, o in enumerate(orders) if o % K.p == 0]
    cond = {
        "group_class": cls,
        "abelian": cls == "abelian",
        "no_p_elements": not p_elements,
        "p_elements": p_elements,
        "char": K.p,
    }
    notes = {}
    if cls == "hamiltonian":
        notes["isotropic_triple"] = list(ff_isotropic(K, 3))
    verdict = cond["abelian"] and cond["no_p_elements"]
    return Decision("group_ring_n_weakly_regular", verdict, cond, None, {**notes, "n": n})


# -- oracles -------------------------------------------------------------------------------

@dataclass
class OracleResult:
    found: Optional[AlgebraElement]
    exhaustive: bool
    examined: int
    seed: Optional[int] = None
    source: str = ""

    @property
    def verdict(self) -> bool:
        """True when no element with the searched-for defect was seen."""
        return self.found is None

    def to_json(self):
        return {
            "found": self.found.to_json() if self.found is not None else None,
            "found_text": repr(self.found) if self.found is not None else None,
            "exhaustive": self.exhaustive,
            "examined": self.examined,
            "seed": self.seed,
            "source": self.source,
        }


def _chunks(total: int, size: int):
    for start in range(0, total, size):
        yield start, min(total, start + size)


def _first_hit(A: TwistedGroupAlgebra, predicate, parallelism: int = 1, chunk: int = 1 << 15):
    """Scan all elements in numbering order; return the first vector where predicate holds."""
    total = A.size

    def run(bounds):
        start, stop = bounds
        X = A.enumerate_vectors(start, stop)
        mask = predicate(X)
        hits = np.flatnonzero(mask)
        return X[hits[0]] if len(hits) else None

    bounds = list(_chunks(total, chunk))
    if parallelism > 1:
        with ThreadPoolExecutor(parallelism) as ex:
            # results come back in submission order, so the earliest chunk wins
            for res in ex.map(run, bounds):
                if res is not None:
                    return res
        return None
    for b in bounds:
        res = run(b)
        if res is not None:
            return res
    return None


def _nonzero_nilpotent_mask(A: TwistedGroupAlgebra):
    def pred(X):
        return A.nilpotent_mask(X) & X.any(axis=1)
    return pred


def _noncentral_mask(A: TwistedGroupAlgebra, X: np.ndarray) -> np.ndarray:
    out = np.zeros(len(X), dtype=bool)
    if A.is_commutative():
        return out
    for g in range(A.n):
        ug = np.tile(A.unit(g).vector, (len(X), 1))
        out |= np.any(A.mul_batch(X, ug) != A.mul_batch(ug, X), axis=1)
    return out


def oracle_nilpotent_search(A: TwistedGroupAlgebra, budget: int = DEFAULT_BUDGET,
                            seed: Optional[int] = None, *, cap: int = EXHAUSTIVE_CAP,
                            parallelism: int = 1, noncentral: bool = False) -> OracleResult:
    """Search for a nonzero nilpotent element (optionally a non-central one).

    Exhaustive in element-numbering order when q^|G| <= cap; otherwise the
    witness constructors, ``budget`` random elements and random products
    (v_g - 1) r (1 + v_g + ...) are tried, and a miss proves nothing.
    """
    def pred(X):
        m = A.nilpotent_mask(X) & X.any(axis=1)
        if noncentral and m.any():
            idx = np.flatnonzero(m)
            m[idx] = _noncentral_mask(A, X[idx])
        return m

    if A.size <= cap:
        hit = _first_hit(A, pred, parallelism)
        found = A.from_vector(hit) if hit is not None else None
        return OracleResult(found, True, A.size, None, "exhaustive")
    seed = default_seed() if seed is None else seed
    rng = np.random.default_rng(seed)
    V = v_basis(A)
    examined = 0
    if V is not None:
        for ctor in (witness_unit_commutation, witness_char_p, witness_quaternion):
            w = ctor(A, V)
            examined += 1
            if w is not None and pred(w["x"].vector[None])[0]:
                return OracleResult(w["x"], False, examined, seed, f"constructor:{ctor.__name__}")
    done = 0
    step = 1 << 14
    while done < budget:
        m = min(step, budget - done)
        X = A.random_vectors(rng, m)
        if V is not None:
            # replace half of the batch with random (v_g - 1) r S_g products
            half = m // 2
            gs = rng.integers(0, A.n, size=half)
            R = A.random_vectors(rng, half)
            for g in np.unique(gs):
                sel = np.flatnonzero(gs == g)
                n = element_order(A.group, int(g))
                left = np.tile((V[int(g)] - A.one()).vector, (len(sel), 1))
                right = np.tile(_geometric_sum(V, int(g), n).vector, (len(sel), 1))
                X[sel] = A.mul_batch(A.mul_batch(left, R[sel]), right)
        mask = pred(X)
        hits = np.flatnonzero(mask)
        examined += m
        done += m
        if len(hits):
            return OracleResult(A.from_vector(X[hits[0]]), False, examined, seed, "random")
    return OracleResult(None, False, examined, seed, "random")


@dataclass
class ScanReport:
    property: str
    passed: bool
    exhaustive: bool
    examined: int
    witnesses_verified: int
    counterexample: Optional[AlgebraElement] = None
    seed: Optional[int] = None
    method: str = "solver"

    @property
    def verdict(self) -> bool:
        return self.passed

    def to_json(self):
        return {
            "property": self.property,
            "passed": self.passed,
            "exhaustive": self.exhaustive,
            "examined": self.examined,
            "witnesses_verified": self.witnesses_verified,
            "counterexample": self.counterexample.to_json() if self.counterexample is not None else None,
            "counterexample_text": repr(self.counterexample) if self.counterexample is not None else None,
            "seed": self.seed,
            "method": self.method,
        }


def _parse_property(prop: str):
    if prop.startswith("n_weak"):
        digits = "".join(ch for ch in prop if ch.isdigit())
        return "n_weak", int(digits) if digits else 2
    return prop, None


def _verify_batch(A, kind, X, n, B, C=None, Z=None):
    """Vectorised witness checks; returns a boolean mask of rows that verify."""
    mul = A.mul_batch
    if kind == "regular":
        return np.all(mul(mul(X, B), X) == X, axis=1)
    if kind == "strongly_regular":
        return np.all(mul(B, mul(X, X)) == X, axis=1)
    if kind == "n_weak":
        an = A.power_batch(X, n)
        return np.all(mul(mul(mul(X, B), an), C) == X, axis=1)
    if kind == "xi_N":
        ok = np.all(Z == (mul(mul(X, X), B) - X) % A.p, axis=1)
        return ok & A.nilpotent_mask(Z) & ~_noncentral_mask(A, Z)
    raise ValueError(kind)


def oracle_property_scan(A: TwistedGroupAlgebra, prop: str, budget: int = DEFAULT_BUDGET,
                         seed: Optional[int] = None, *, cap: int = EXHAUSTIVE_CAP,
                         parallelism: int = 1) -> ScanReport:
    """Check the element-wise definition of ``prop`` on every (or a sample of) element.

    ``prop`` is one of ``regular``, ``strongly_regular``, ``n_weak(n)`` / ``n_weak:n``
    and ``xi_N``.  On a noncommutative ambient the strongly regular and n-weak
    properties are refuted by a nonzero nilpotent element, and xi_N by a
    non-central nilpotent one; the solvers only run on commutative ambients.
    """
    kind, n = _parse_property(prop)
    if kind not in ("regular", "strongly_regular", "n_weak", "xi_N"):
        raise ValueError(f"unknown property {prop!r}")
    label = f"n_weak({n})" if kind == "n_weak" else kind
    exhaustive = A.size <= cap
    if kind != "regular" and not A.is_commutative():
        res = oracle_nilpotent_search(A, budget, seed, cap=cap, parallelism=parallelism,
                                      noncentral=(kind == "xi_N"))
        return ScanReport(label, res.found is None, res.exhaustive, res.examined, 0,
                          res.found, res.seed, "nilpotent_search")
    if exhaustive:
        total = A.size
        batches = (A.enumerate_vectors(s, e) for s, e in _chunks(total, 2048))
        used_seed = None
    else:
        used_seed = default_seed() if seed is None else seed
        rng = np.random.default_rng(used_seed)
        total = budget
        batches = (A.random_vectors(rng, e - s) for s, e in _chunks(total, 2048))

    def run(X):
        C = Z = None
        if kind == "regular":
            B, ok = solve_regular_batch(A, X)
        elif kind == "xi_N":
            B, Z, ok = solve_xiN_batch(A, X)
        else:
            B, ok = solve_strong_batch(A, X)
            if kind == "n_weak":
                C = A.power_batch(B, n - 1)
        idx = np.flatnonzero(ok)
        sub = lambda M: None if M is None else M[idx]
        verified = _verify_batch(A, kind, X[idx], n, B[idx], sub(C), sub(Z))
        if not np.all(verified):
            raise AssertionError(f"{label} solver returned a witness that fails its check")
        bad = np.flatnonzero(~ok)
        return len(idx), (X[bad[0]] if len(bad) else None)

    examined = verified = 0
    counter = None
    if parallelism > 1:
        with ThreadPoolExecutor(parallelism) as ex:
            results = list(ex.map(run, list(batches)))
    else:
        results = []
        for X in batches:
            results.append(run(X))
            if results[-1][1] is not None:
                break
    for X_count, bad in results:
        verified += X_count
        examined += X_count + (0 if bad is None else 1)
        if bad is not None and counter is None:
            counter = A.from_vector(bad)
            break
    return ScanReport(label, counter is None, exhaustive, examined, verified, counter, used_seed)
