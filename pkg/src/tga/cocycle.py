"""Factor systems rho: G x G -> U(K) and their rescalings.

Tables are stored as integer field codes (see :mod:`tga.field`), dense
|G| x |G|.  The automorphism action is trivial throughout, so the cocycle
identity is just associativity of ``u_g u_h = rho(g, h) u_{gh}``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .exceptions import IncompatibleLambda, InvalidTable, ZeroEntry
from .field import FieldElem, FieldSpec, ff_nth_root
from .group import Group, element_order

__all__ = [
    "FactorSystem",
    "Rescaling",
    "ValidationReport",
    "validate_factor_system",
    "is_symmetric",
    "power_scalar",
    "apply_rescaling",
    "unit_power_rescaling",
    "make_factor_system",
    "trivial",
    "lambda_pairing",
    "coboundary",
]


@dataclass(frozen=True)
class ValidationReport:
    cocycle_violations: tuple[tuple[int, int, int], ...] = ()
    normalization_violations: tuple[tuple[int, int], ...] = ()

    @property
    def valid(self) -> bool:
        return not self.cocycle_violations and not self.normalization_violations

    def __bool__(self):
        return self.valid

    def to_json(self):
        return {
            "valid": self.valid,
            "cocycle_violations": [list(t) for t in self.cocycle_violations],
            "normalization_violations": [list(t) for t in self.normalization_violations],
        }


def _cocycle_check(field: FieldSpec, group: Group, codes: np.ndarray) -> ValidationReport:
    tab = field.tables
    if np.any(codes == 0):
        g, h = np.argwhere(codes == 0)[0]
        raise ZeroEntry(f"rho({int(g)},{int(h)}) = 0 is not a unit")
    q1 = field.q - 1
    logs = tab.log[codes] if q1 > 0 else np.zeros_like(codes)
    t = group.table
    n = group.order
    ar = np.arange(n)
    # log rho(g,h) + log rho(gh,f)  vs  log rho(h,f) + log rho(g,hf)
    lhs = logs[:, :, None] + logs[t[:, :, None], ar[None, None, :]]
    rhs = logs[None, :, :] + logs[ar[:, None, None], t[None, :, :]]
    if q1 > 0:
        bad = np.argwhere((lhs - rhs) % q1 != 0)
    else:
        bad = np.empty((0, 3), dtype=np.int64)
    norm = []
    for g in range(n):
        if codes[g, 0] != 1:
            norm.append((g, 0))
        if g and codes[0, g] != 1:
            norm.append((0, g))
    return ValidationReport(tuple(tuple(int(x) for x in b) for b in bad), tuple(norm))


@dataclass(frozen=True, eq=False)
class FactorSystem:
    field: FieldSpec
    group: Group
    table: np.ndarray  # field codes, shape (|G|, |G|)
    label: str = "explicit"
    descriptor: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        codes = np.asarray(self.table, dtype=np.int64)
        if codes.shape != (self.group.order, self.group.order):
            raise InvalidTable("factor system table has the wrong shape")
        if np.any(codes == 0):
            g, h = np.argwhere(codes == 0)[0]
            raise ZeroEntry(f"rho({int(g)},{int(h)}) = 0 is not a unit")
        codes = codes.copy()
        codes.setflags(write=False)
        object.__setattr__(self, "table", codes)

    def __call__(self, g: int, h: int) -> FieldElem:
        return self.field.from_int(int(self.table[g, h]))

    def __eq__(self, other):
        return (
            isinstance(other, FactorSystem)
            and self.field == other.field
            and self.group == other.group
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self):
        return hash((self.field, self.group, self.table.tobytes()))

    def validate(self) -> ValidationReport:
        return _cocycle_check(self.field, self.group, self.table)

    def element_table(self) -> list[list[FieldElem]]:
        return [[self(g, h) for h in range(self.group.order)] for g in range(self.group.order)]

    def to_json(self):
        if self.descriptor:
            return dict(self.descriptor)
        return {"kind": "explicit", "table": [[e.to_json() for e in row] for row in self.element_table()]}

    def __repr__(self):
        return f"FactorSystem({self.label}, {self.group!r}, {self.field!r})"


@dataclass(frozen=True)
class Rescaling:
    """Diagonal change of basis u_g -> u_g mu(g); mu(1) must be 1."""

    mu: tuple[FieldElem, ...]

    def __post_init__(self):
        if any(m.is_zero() for m in self.mu):
            raise ZeroEntry("rescaling values must be nonzero")
        if self.mu and self.mu[0] != 1:
            raise ValueError("rescaling must send the identity to 1")

    def __getitem__(self, g: int) -> FieldElem:
        return self.mu[g]

    def __mul__(self, other: "Rescaling") -> "Rescaling":
        return Rescaling(tuple(a * b for a, b in zip(self.mu, other.mu)))

    def inverse(self) -> "Rescaling":
        return Rescaling(tuple(m.inverse() for m in self.mu))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Rescaling":
        return cls(tuple(field.one() for _ in range(n)))

    def to_json(self):
        return [m.to_json() for m in self.mu]


def validate_factor_system(rho: FactorSystem) -> ValidationReport:
    return rho.validate()


def is_symmetric(rho: FactorSystem) -> tuple[bool, Optional[tuple[int, int]]]:
    """Check rho(g,h) == rho(h,g) on commuting pairs; return the first violating pair."""
    t = rho.group.table
    commuting = t == t.T
    bad = np.argwhere(commuting & (rho.table != rho.table.T))
    if len(bad):
        return False, (int(bad[0][0]), int(bad[0][1]))
    return True, None


def power_scalar(rho: FactorSystem, g: int) -> FieldElem:
    """alpha_g with u_g^n = alpha_g u_1, n = ord(g): the product of rho(g, g^i), i = 1..n-1."""
    G = rho.group
    tab = rho.field.tables
    acc, cur = 1, g
    while cur != 0:
        acc = tab.mul(acc, int(rho.table[g, cur]))
        cur = G.mul(g, cur)
    return rho.field.from_int(acc)


def apply_rescaling(rho: FactorSystem, mu: Rescaling) -> FactorSystem:
    """rho'(g,h) = rho(g,h) mu(g) mu(h) / mu(gh)."""
    G, F = rho.group, rho.field
    n = G.order
    codes = np.empty((n, n), dtype=np.int64)
    tab = F.tables
    mc = [m.code for m in mu.mu]
    for g in range(n):
        for h in range(n):
            v = tab.mul(int(rho.table[g, h]), tab.mul(mc[g], mc[h]))
            codes[g, h] = tab.mul(v, tab.power(mc[G.mul(g, h)], -1))
    return FactorSystem(F, G, codes, f"{rho.label}*mu")


@dataclass(frozen=True)
class RescalingFailure:
    """Elements whose power scalar has no root: entries (g, ord(g), alpha_g)."""

    failures: tuple[tuple[int, int, FieldElem], ...]

    def __bool__(self):
        return False


def unit_power_rescaling(rho: FactorSystem):
    """Rescale so that v_g^{ord g} = 1 for every g.

    Returns ``(Rescaling, FactorSystem)`` on success and a falsy
    :class:`RescalingFailure` listing ``(g, n, alpha_g)`` otherwise.
    """
    G, F = rho.group, rho.field
    mus, failures = [], []
    for g in range(G.order):
        n = element_order(G, g)
        alpha = power_scalar(rho, g)
        mu = ff_nth_root(alpha.inverse(), n)
        if mu is None:
            failures.append((g, n, alpha))
            mus.append(F.one())
        else:
            mus.append(mu)
    if failures:
        return RescalingFailure(tuple(failures))
    resc = Rescaling(tuple(mus))
    return resc, apply_rescaling(rho, resc)


# -- constructors ----------------------------------------------------------------------

def trivial(G: Group, K: FieldSpec) -> FactorSystem:
    return FactorSystem(K, G, np.ones((G.order, G.order), dtype=np.int64), "trivial",
                        {"kind": "trivial"})


def _cyclic_factors(G: Group) -> tuple[int, int]:
    if G.kind != "direct_product":
        raise IncompatibleLambda("lambda pairing needs a direct product C_m x C_n")
    g1, g2 = G.params
    if g1.kind != "cyclic" or g2.kind != "cyclic":
        raise IncompatibleLambda("lambda pairing needs cyclic factors")
    return g1.order, g2.order


def lambda_pairing(G: Group, K: FieldSpec, lam) -> FactorSystem:
    """rho((a1,a2),(b1,b2)) = lam^(a2*b1) on C_m x C_n.

    Well defined only when lam^gcd(m, n) = 1 (exponents are read mod m and mod n).
    """
    m, n = _cyclic_factors(G)
    lam = K(lam)
    if lam.is_zero():
        raise IncompatibleLambda("lambda must be nonzero")
    d = math.gcd(m, n)
    if lam**d != 1:
        raise IncompatibleLambda(f"lambda={lam!r} does not satisfy lambda^{d} = 1")
    size = m * n
    codes = np.empty((size, size), dtype=np.int64)
    for x, y in itertools.product(range(size), repeat=2):
        a2 = x % n
        b1 = y // n
        codes[x, y] = (lam ** (a2 * b1)).code
    rho = FactorSystem(K, G, codes, f"lambda({lam!r})", {"kind": "lambda_pairing", "lambda": lam.to_json()})
    return rho


def coboundary(G: Group, K: FieldSpec, mu, base: Optional[FactorSystem] = None) -> FactorSystem:
    if not isinstance(mu, Rescaling):
        mu = Rescaling(tuple(K(m) for m in mu))
    if len(mu.mu) != G.order:
        raise InvalidTable("rescaling length must equal the group order")
    base = base if base is not None else trivial(G, K)
    out = apply_rescaling(base, mu)
    return FactorSystem(K, G, out.table, "coboundary",
                        {"kind": "coboundary", "mu": mu.to_json()})


def make_factor_system(kind, G: Group, K: FieldSpec, *, lam=None, mu=None, table=None) -> FactorSystem:
    """Build a factor system from a kind name and its parameter.

    ``kind`` may also be a JSON descriptor dict such as
    ``{"kind": "lambda_pairing", "lambda": [4]}``.
    """
    if isinstance(kind, Mapping):
        desc = kind
        kind = desc["kind"]
        lam = desc.get("lambda", lam)
        mu = desc.get("mu", mu)
        table = desc.get("table", table)
    if kind == "trivial":
        return trivial(G, K)
    if kind == "lambda_pairing":
        return lambda_pairing(G, K, _elem(K, lam))
    if kind == "coboundary":
        return coboundary(G, K, [_elem(K, m) for m in mu])
    if kind == "explicit":
        codes = np.array([[_elem(K, e).code for e in row] for row in table], dtype=np.int64)
        rho = FactorSystem(K, G, codes, "explicit")
        report = rho.validate()
        if not report.valid:
            raise InvalidTable(f"explicit table is not a normalized factor system: {report.to_json()}")
        return rho
    raise InvalidTable(f"unknown factor system kind {kind!r}")


def explicit_unchecked(G: Group, K: FieldSpec, table: Sequence[Sequence]) -> FactorSystem:
    """Explicit table without validation (used by the validate command)."""
    codes = np.array([[_elem(K, e).code for e in row] for row in table], dtype=np.int64)
    return FactorSystem(K, G, codes, "explicit",
                        {"kind": "explicit", "table": [[_elem(K, e).to_json() for e in row] for row in table]})


def _elem(K: FieldSpec, value) -> FieldElem:
    if isinstance(value, FieldElem):
        return K(value)
    if isinstance(value, (list, tuple)):
        if len(value) == K.k:
            return K(value)
        if len(value) == 1:
            return K(int(value[0]))
    return K(int(value))
