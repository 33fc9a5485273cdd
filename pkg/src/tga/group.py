"""Finite groups given by Cayley tables.

Elements are integer indices with the identity at 0.  Each constructor fixes
a canonical numbering so that cocycle tables and reports are reproducible:

* ``cyclic(m)``: index i is g^i.
* ``direct_product(G1, G2)``: index i1 * |G2| + i2 (lexicographic pairs).
* ``dihedral(m)``: index a + m*b is r^a s^b.
* ``quaternion8()``: 1, g, g^2, g^3, h, gh, g^2h, g^3h.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .exceptions import InvalidTable

MAX_GROUP_ORDER = 64

__all__ = [
    "Group",
    "cyclic",
    "direct_product",
    "dihedral",
    "quaternion8",
    "from_table",
    "build_group",
    "element_order",
    "element_orders",
    "cyclic_subgroup",
    "find_quaternion_pair",
    "classify",
    "generated_subgroup",
    "subgroup_closure",
    "commuting_pairs",
]


@dataclass(frozen=True, eq=False)
class Group:
    table: np.ndarray
    names: tuple[str, ...] = ()
    # constructor descriptor, e.g. ("cyclic", (4,)) or ("direct_product", (G1, G2))
    kind: str = "table"
    params: tuple = ()
    label: str = ""
    inverse: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64)
        t.setflags(write=False)
        object.__setattr__(self, "table", t)
        _check_table(t)
        inv = np.empty(len(t), dtype=np.int64)
        for g in range(len(t)):
            inv[g] = int(np.flatnonzero(t[g] == 0)[0])
        inv.setflags(write=False)
        object.__setattr__(self, "inverse", inv)
        if not self.names:
            object.__setattr__(self, "names", tuple(f"g{i}" for i in range(len(t))))

    @property
    def order(self) -> int:
        return len(self.table)

    n = order

    def __len__(self):
        return len(self.table)

    def mul(self, g: int, h: int) -> int:
        return int(self.table[g, h])

    def inv(self, g: int) -> int:
        return int(self.inverse[g])

    def power(self, g: int, e: int) -> int:
        if e < 0:
            g, e = self.inv(g), -e
        result = 0
        for _ in range(e):
            result = int(self.table[result, g])
        return result

    def conjugate(self, g: int, h: int) -> int:
        """h^{-1} g h."""
        return int(self.table[self.table[self.inverse[h], g], h])

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def name(self, g: int) -> str:
        return self.names[g]

    def __eq__(self, other):
        return isinstance(other, Group) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def __repr__(self):
        return f"Group({self.label or self.kind}, order={self.order})"

    def to_json(self):
        if self.kind == "cyclic":
            return {"kind": "cyclic", "params": list(self.params)}
        if self.kind == "dihedral":
            return {"kind": "dihedral", "params": list(self.params)}
        if self.kind == "quaternion8":
            return {"kind": "quaternion8", "params": []}
        if self.kind == "direct_product":
            return {"kind": "direct_product", "params": [g.to_json() for g in self.params]}
        return {"table": self.table.tolist()}


def _check_table(t: np.ndarray) -> None:
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise InvalidTable("Cayley table must be a non-empty square array")
    n = t.shape[0]
    if n > MAX_GROUP_ORDER:
        raise InvalidTable(f"group order {n} exceeds cap {MAX_GROUP_ORDER}")
    if t.min() < 0 or t.max() >= n:
        raise InvalidTable("table entries out of range")
    ar = np.arange(n)
    if not (np.array_equal(t[0], ar) and np.array_equal(t[:, 0], ar)):
        raise InvalidTable("index 0 must be the identity")
    srt = np.sort(t, axis=1)
    if not (np.all(srt == ar) and np.all(np.sort(t, axis=0) == ar[:, None])):
        raise InvalidTable("table is not a Latin square")
    # (gh)f == g(hf) for all triples at once
    left = t[t[:, :, None], ar[None, None, :]]
    right = t[ar[:, None, None], t[None, :, :]]
    if not np.array_equal(left, right):
        bad = np.argwhere(left != right)[0]
        raise InvalidTable(f"table is not associative at {tuple(int(x) for x in bad)}")


# -- constructors -----------------------------------------------------------------

def cyclic(m: int) -> Group:
    if m < 1:
        raise ValueError("cyclic group order must be >= 1")
    ar = np.arange(m)
    names = ("1",) + tuple("g" if i == 1 else f"g^{i}" for i in range(1, m))
    return Group((ar[:, None] + ar[None, :]) % m, names, "cyclic", (m,), f"C{m}")


def direct_product(g1: Group, g2: Group) -> Group:
    n1, n2 = g1.order, g2.order
    t = np.empty((n1 * n2, n1 * n2), dtype=np.int64)
    for (a1, a2), (b1, b2) in itertools.product(
        itertools.product(range(n1), range(n2)), repeat=2
    ):
        t[a1 * n2 + a2, b1 * n2 + b2] = g1.table[a1, b1] * n2 + g2.table[a2, b2]
    names = tuple(f"({x},{y})" for x in g1.names for y in g2.names)
    label = f"{g1.label or g1.kind}x{g2.label or g2.kind}"
    return Group(t, names, "direct_product", (g1, g2), label)


def dihedral(m: int) -> Group:
    """Dihedral group of order 2m, r^a s^b at index a + m*b, with s r s = r^{-1}."""
    if m < 1:
        raise ValueError("dihedral parameter must be >= 1")
    n = 2 * m
    t = np.empty((n, n), dtype=np.int64)
    for a, b, c, d in itertools.product(range(m), range(2), range(m), range(2)):
        # r^a s^b r^c s^d = r^(a + (-1)^b c) s^(b+d)
        e = (a + (c if b == 0 else -c)) % m
        t[a + m * b, c + m * d] = e + m * ((b + d) % 2)
    names = tuple(
        ("1" if a == 0 else ("r" if a == 1 else f"r^{a}")) if b == 0
        else ("s" if a == 0 else ("rs" if a == 1 else f"r^{a}s"))
        for b in range(2) for a in range(m)
    )
    return Group(t, names, "dihedral", (m,), f"D{m}")


def quaternion8() -> Group:
    """<g, h | g^4 = h^4 = 1, g^2 = h^2, h^{-1} g h = g^{-1}>, index a + 4b for g^a h^b."""
    t = np.empty((8, 8), dtype=np.int64)
    for a, b, c, d in itertools.product(range(4), range(2), range(4), range(2)):
        e = a + (c if b == 0 else -c)
        f = b + d
        if f == 2:
            e, f = e + 2, 0
        t[a + 4 * b, c + 4 * d] = e % 4 + 4 * f
    names = ("1", "g", "g^2", "g^3", "h", "gh", "g^2h", "g^3h")
    return Group(t, names, "quaternion8", (), "Q8")


def from_table(table: Sequence[Sequence[int]], names: Sequence[str] = ()) -> Group:
    return Group(np.asarray(table, dtype=np.int64), tuple(names))


def build_group(spec) -> Group:
    """Build a group from a JSON-style descriptor.

    Accepts ``{"kind": "cyclic", "params": [m]}``, ``dihedral``, ``quaternion8``,
    ``direct_product`` (params are two descriptors) or ``{"table": [[...]]}``.
    A short string such as ``"C4"``, ``"Q8"``, ``"D3"`` or ``"C2xC4"`` is also
    accepted.
    """
    if isinstance(spec, Group):
        return spec
    if isinstance(spec, str):
        return _parse_short(spec)
    if "table" in spec:
        return from_table(spec["table"], spec.get("names", ()))
    kind = spec["kind"]
    params = spec.get("params", [])
    if kind == "cyclic":
        return cyclic(int(params[0]))
    if kind == "dihedral":
        return dihedral(int(params[0]))
    if kind == "quaternion8":
        return quaternion8()
    if kind == "direct_product":
        if len(params) != 2:
            raise InvalidTable("direct_product takes exactly two factors")
        return direct_product(build_group(params[0]), build_group(params[1]))
    raise InvalidTable(f"unknown group kind {kind!r}")


def _parse_short(text: str) -> Group:
    parts = [s.strip() for s in text.replace("×", "x").split("x")]
    groups = []
    for part in parts:
        up = part.upper()
        if up == "Q8":
            groups.append(quaternion8())
        elif up == "S3":
            groups.append(dihedral(3))
        elif up.startswith("C") and up[1:].isdigit():
            groups.append(cyclic(int(up[1:])))
        elif up.startswith("D") and up[1:].isdigit():
            groups.append(dihedral(int(up[1:])))
        else:
            raise InvalidTable(f"cannot parse group name {text!r}")
    result = groups[0]
    for g in groups[1:]:
        result = direct_product(result, g)
    return result


# -- structure ----------------------------------------------------------------------

def element_order(G: Group, g: int) -> int:
    m, cur = 1, g
    while cur != 0:
        cur = int(G.table[cur, g])
        m += 1
    return m


def element_orders(G: Group) -> list[int]:
    return [element_order(G, g) for g in range(G.order)]


def cyclic_subgroup(G: Group, g: int) -> list[int]:
    """Powers g^0, g^1, ..., g^{ord-1} in order."""
    out, cur = [0], g
    while cur != 0:
        out.append(cur)
        cur = int(G.table[cur, g])
    return out


def classify(G: Group) -> str:
    """'abelian', 'hamiltonian' (nonabelian, every subgroup normal) or 'other'."""
    if G.is_abelian():
        return "abelian"
    for g in range(G.order):
        cyc = set(cyclic_subgroup(G, g))
        if any(G.conjugate(g, h) not in cyc for h in range(G.order)):
            return "other"
    return "hamiltonian"


def subgroup_closure(G: Group, S: Iterable[int]) -> list[int]:
    """Sorted indices of the subgroup generated by S (finite, so closure under products suffices)."""
    gens = sorted({int(s) for s in S})
    inside = np.zeros(G.order, dtype=bool)
    inside[0] = True
    inside[gens] = True
    frontier = np.flatnonzero(inside)
    while len(frontier) and gens:
        prods = G.table[np.ix_(frontier, gens)].ravel()
        new = np.unique(prods[~inside[prods]])
        inside[new] = True
        frontier = new
    return [int(g) for g in np.flatnonzero(inside)]


def generated_subgroup(G: Group, S: Iterable[int]) -> tuple[Group, list[int]]:
    """Closure of S with its embedding map (subgroup index -> index in G).

    Subgroup elements are numbered by increasing index in G, so the identity
    stays at 0.
    """
    gens = sorted({int(s) for s in S})
    embed = subgroup_closure(G, gens)
    pos = {g: i for i, g in enumerate(embed)}
    sub = np.array([[pos[int(G.table[a, b])] for b in embed] for a in embed], dtype=np.int64)
    names = tuple(G.names[g] for g in embed)
    return Group(sub, names, "table", (), f"<{','.join(G.names[s] for s in gens)}>"), embed


def commuting_pairs(G: Group) -> list[tuple[int, int]]:
    t = G.table
    return [(int(g), int(h)) for g, h in np.argwhere(t == t.T)]


def find_quaternion_pair(G: Group) -> Optional[tuple[int, int]]:
    """First (g, h) in index order with g of order 4, h^2 = g^2 and h^{-1} g h = g^{-1}."""
    for g in range(G.order):
        if element_order(G, g) != 4:
            continue
        g2 = G.mul(g, g)
        for h in range(G.order):
            if G.mul(h, h) == g2 and G.conjugate(g, h) == G.inv(g):
                return g, h
    return None
