"""Elements of the twisted group algebra K_rho G and their arithmetic.

An element sum_g u_g alpha_g is stored as an integer array of shape (|G|, k):
row g holds the coefficient alpha_g as k residues mod p.  Flattened, this is
the element's coordinate vector in the GF(p)-space of dimension k*|G|, which
is the space all matrices in this module act on.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from . import linalg
from .cocycle import FactorSystem, trivial
from .exceptions import AmbientMismatch, NotCommutative, PreconditionFailed
from .field import FieldElem, FieldSpec
from .group import Group, generated_subgroup, subgroup_closure

__all__ = [
    "TwistedGroupAlgebra",
    "AlgebraElement",
    "alg_arith",
    "support",
    "left_right_rep",
    "is_nilpotent",
    "is_central",
    "center_basis",
    "nilradical_commutative",
    "restrict_equation",
    "restrict_equation_batch",
]

# batch size for vectorised products; keeps (B, |G|, k) temporaries small
CHUNK = 4096


class TwistedGroupAlgebra:
    """The ambient K_rho G.  Immutable once built."""

    def __init__(self, field: FieldSpec, group: Group, rho: Optional[FactorSystem] = None):
        rho = rho if rho is not None else trivial(group, field)
        if rho.field != field or rho.group != group:
            raise AmbientMismatch("factor system is defined over a different field or group")
        self.field = field
        self.group = group
        self.rho = rho
        self.p = field.p
        self.k = field.k
        self.n = group.order
        self.dim = self.n * self.k
        tab = field.tables
        self._ftensor = tab.mul_tensor
        self._rho_codes = rho.table
        # extension fields up to this size multiply through code lookup tables
        self._use_codes = self.k > 1 and field.q <= 256
        if self.k == 1:
            self._rho_res = tab.digits[rho.table][:, :, 0]
        elif self._use_codes:
            self._add_t = tab.add_table
            self._mul_t = tab.mul_table
            self._digits = tab.digits
            self._weights = tab.weights
        if self.k > 1:
            mats = np.empty((self.n, self.n, self.k, self.k), dtype=np.int64)
            for g in range(self.n):
                for h in range(self.n):
                    mats[g, h] = tab.mul_matrix(int(rho.table[g, h]))
            self._rho_mats = mats
        # left-division table: _left_div[g, z] = g^-1 z
        self._left_div = np.asarray(group.table, dtype=np.int64)[group.inverse]
        gi = np.arange(self.n)[:, None]
        if self.k == 1:
            self._rho_div = self._rho_res[gi, self._left_div]
        else:
            self._rho_div = self._rho_codes[gi, self._left_div]
            self._rho_div_mats = self._rho_mats[gi, self._left_div]

    def __eq__(self, other):
        return isinstance(other, TwistedGroupAlgebra) and self.rho == other.rho

    def __hash__(self):
        return hash(self.rho)

    def __repr__(self):
        return f"{self.field!r}_rho[{self.group.label or self.group.kind}] ({self.rho.label})"

    # -- construction ------------------------------------------------------------
    def element(self, coeffs) -> "AlgebraElement":
        """From a length-|G| sequence of field elements / ints, or a (|G|, k) array."""
        if isinstance(coeffs, np.ndarray) and coeffs.dtype != object:
            return AlgebraElement(self, coeffs.reshape(self.n, self.k))
        if len(coeffs) != self.n:
            raise ValueError(f"expected {self.n} coefficients")
        vec = np.array([self.field(c).coeffs for c in coeffs], dtype=np.int64).reshape(self.n, self.k)
        return AlgebraElement(self, vec)

    def from_vector(self, v) -> "AlgebraElement":
        return AlgebraElement(self, np.asarray(v, dtype=np.int64).reshape(self.n, self.k) % self.p)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, np.zeros((self.n, self.k), dtype=np.int64))

    def one(self) -> "AlgebraElement":
        return self.unit(0)

    def unit(self, g: int, coef=1) -> "AlgebraElement":
        vec = np.zeros((self.n, self.k), dtype=np.int64)
        vec[g] = self.field(coef).coeffs
        return AlgebraElement(self, vec)

    def basis(self) -> list["AlgebraElement"]:
        """GF(p)-basis u_g x^i, in coordinate order."""
        return [self.from_vector(row) for row in np.eye(self.dim, dtype=np.int64)]

    def is_commutative(self) -> bool:
        return self.group.is_abelian() and bool(np.array_equal(self._rho_codes, self._rho_codes.T))

    def parse(self, text: str) -> "AlgebraElement":
        return parse_element(self, text)

    # -- vectorised arithmetic on coordinate batches -------------------------------
    def mul_batch(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Products of coordinate batches X, Y of shape (B, dim); returns (B, dim)."""
        X = np.asarray(X, dtype=np.int64)
        Y = np.asarray(Y, dtype=np.int64)
        if X.shape[0] > CHUNK:
            return np.concatenate(
                [self.mul_batch(X[i:i + CHUNK], Y[i:i + CHUNK]) for i in range(0, X.shape[0], CHUNK)]
            )
        B = X.shape[0]
        n, k, p = self.n, self.k, self.p
        # (u_g x_g)(u_h y_h) lands on z = gh, so coordinate z collects
        # sum_g x_g rho(g, g^-1 z) y_{g^-1 z}
        idx = self._left_div
        if k == 1:
            Yp = Y[:, idx] * self._rho_div  # (B, g, z)
            return np.matmul(X[:, None, :], Yp)[:, 0, :] % p
        Xg = X.reshape(B, n, k)
        Yg = Y.reshape(B, n, k)
        if self._use_codes:
            xc = Xg @ self._weights
            yc = Yg @ self._weights
            prod = self._mul_t[self._mul_t[xc[:, :, None], self._rho_div[None]], yc[:, idx]]
            return (self._digits[prod].sum(axis=1) % p).reshape(B, n * k)
        W = np.einsum("bgi,gzij->bgzj", Xg, self._rho_div_mats) % p
        Z = np.einsum("bgzi,bgzj,ijl->bzl", W, Yg[:, idx], self._ftensor) % p
        return Z.reshape(B, n * k)

    def square_batch(self, X: np.ndarray) -> np.ndarray:
        return self.mul_batch(X, X)

    def power_batch(self, X: np.ndarray, e: int) -> np.ndarray:
        X = np.asarray(X, dtype=np.int64)
        result = np.tile(self.one().vector, (X.shape[0], 1))
        base = X
        while e:
            if e & 1:
                result = self.mul_batch(result, base)
            e >>= 1
            if e:
                base = self.mul_batch(base, base)
        return result

    def nilpotent_mask(self, X: np.ndarray) -> np.ndarray:
        """x^(2^e) == 0 with 2^e >= |G|; nilpotency index never exceeds |G|."""
        X = np.asarray(X, dtype=np.int64)
        Y = X
        for _ in range(max(0, (self.n - 1).bit_length())):
            Y = self.mul_batch(Y, Y)
        return ~np.any(Y, axis=1)

    @functools.cached_property
    def structure_tensor(self) -> np.ndarray:
        """T[a, c, d] = coordinate d of e_a * e_c."""
        D = self.dim
        eye = np.eye(D, dtype=np.int64)
        X = np.repeat(eye, D, axis=0)
        Y = np.tile(eye, (D, 1))
        return self.mul_batch(X, Y).reshape(D, D, D)

    def left_matrices(self, X: np.ndarray) -> np.ndarray:
        """Matrices of y -> x*y for a batch of x; shape (B, dim, dim)."""
        return np.einsum("ba,acd->bdc", np.asarray(X, dtype=np.int64), self.structure_tensor) % self.p

    def right_matrices(self, Y: np.ndarray) -> np.ndarray:
        """Matrices of x -> x*y for a batch of y."""
        return np.einsum("bc,acd->bda", np.asarray(Y, dtype=np.int64), self.structure_tensor) % self.p

    # -- enumeration ------------------------------------------------------------
    @property
    def size(self) -> int:
        """Number of elements, q^|G|."""
        return self.field.q ** self.n

    def enumerate_vectors(self, start: int, stop: int) -> np.ndarray:
        """Coordinate vectors of elements numbered start..stop-1.

        Element number N has coordinate i equal to the i-th base-p digit of N.
        """
        idx = np.arange(start, stop, dtype=np.int64)
        powers = self.p ** np.arange(self.dim, dtype=np.int64)
        return (idx[:, None] // powers[None, :]) % self.p

    def random_vectors(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return rng.integers(0, self.p, size=(count, self.dim), dtype=np.int64)


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    ambient: TwistedGroupAlgebra
    coords: np.ndarray  # (|G|, k) residues mod p

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=np.int64) % self.ambient.p
        c = c.reshape(self.ambient.n, self.ambient.k)
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @property
    def vector(self) -> np.ndarray:
        return self.coords.reshape(-1)

    @property
    def coeffs(self) -> list[FieldElem]:
        F = self.ambient.field
        return [F(tuple(row)) for row in self.coords]

    def coefficient(self, g: int) -> FieldElem:
        return self.ambient.field(tuple(self.coords[g]))

    def _check(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            if other.ambient is not self.ambient and other.ambient != self.ambient:
                raise AmbientMismatch("elements live in different algebras")
            return other
        if isinstance(other, (int, np.integer, FieldElem)):
            return self.ambient.unit(0, other)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return AlgebraElement(self.ambient, self.coords + other.coords)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.ambient, -self.coords)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return AlgebraElement(self.ambient, self.coords - other.coords)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, np.integer, FieldElem)):
            return self.scale(other)
        other = self._check(other)
        if other is NotImplemented:
            return other
        prod = self.ambient.mul_batch(self.vector[None], other.vector[None])[0]
        return self.ambient.from_vector(prod)

    def __rmul__(self, other):
        if isinstance(other, (int, np.integer, FieldElem)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c) -> "AlgebraElement":
        """Multiply every coefficient by the scalar c (scalars are central)."""
        A = self.ambient
        c = A.field(c)
        if A.k == 1:
            return AlgebraElement(A, self.coords * c.coeffs[0])
        M = A.field.tables.mul_matrix(c.code)
        return AlgebraElement(A, self.coords @ M)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not supported")
        return self.ambient.from_vector(self.ambient.power_batch(self.vector[None], e)[0])

    def is_zero(self) -> bool:
        return not self.coords.any()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, np.integer, FieldElem)):
            other = self.ambient.unit(0, other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.ambient == other.ambient and np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash(self.coords.tobytes())

    def support(self) -> set[int]:
        return support(self)

    def to_json(self):
        return [list(int(c) for c in row) for row in self.coords]

    def __repr__(self):
        return format_element(self)


# -- formatting and parsing ------------------------------------------------------------

def format_element(a: AlgebraElement) -> str:
    terms = []
    names = a.ambient.group.names
    for g, c in enumerate(a.coeffs):
        if c.is_zero():
            continue
        # extension-field coefficients use the bracketed form the parser reads
        cs = repr(c) if a.ambient.field.k == 1 else "[" + ",".join(map(str, c.coeffs)) + "]"
        if g == 0:
            terms.append(cs)
        elif c == 1:
            terms.append(names[g])
        else:
            terms.append(f"{cs}*{names[g]}")
    return " + ".join(terms) if terms else "0"


_TERM = re.compile(r"^\s*(?:(?P<coef>\[[^\]]*\]|\d+)\s*\*?\s*)?(?P<name>[A-Za-z(][^\s]*)?\s*$")


def parse_element(A: TwistedGroupAlgebra, text: str) -> AlgebraElement:
    """Parse a sum of terms ``coef*name``.

    ``name`` is either a display name of the group (``g``, ``g^2``, ``gh``...)
    or an index name ``g_i`` / ``gi``; a bare coefficient is a multiple of
    the identity.  Coefficients are integers or bracketed coefficient lists
    ``[c0,c1,...]`` for extension fields.  Terms are joined by ``+`` or ``-``.
    """
    G, F = A.group, A.field
    by_name = {name: i for i, name in enumerate(G.names)}
    result = A.zero()
    # split on +/- at bracket depth 0
    pieces, sign, buf, depth = [], 1, "", 0
    for ch in text.strip():
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if depth == 0 and ch in "+-":
            if buf.strip():
                pieces.append((sign, buf))
            sign = -1 if ch == "-" else 1
            buf = ""
            continue
        buf += ch
    if buf.strip():
        pieces.append((sign, buf))
    if not pieces:
        raise ValueError(f"empty element expression {text!r}")
    for sgn, piece in pieces:
        m = _TERM.match(piece)
        if not m or (m.group("coef") is None and m.group("name") is None):
            raise ValueError(f"cannot parse term {piece!r}")
        coef_txt, name = m.group("coef"), m.group("name")
        if coef_txt is None:
            coef = F.one()
        elif coef_txt.startswith("["):
            vals = [int(v) for v in coef_txt[1:-1].split(",") if v.strip()]
            coef = F(vals) if len(vals) == F.k else F(vals[0])
        else:
            coef = F(int(coef_txt))
        if name is None:
            g = 0
        elif name in by_name:
            g = by_name[name]
        else:
            mi = re.fullmatch(r"g_?(\d+)", name)
            if not mi or int(mi.group(1)) >= G.order:
                raise ValueError(f"unknown group element {name!r}")
            g = int(mi.group(1))
        term = A.unit(g, coef)
        result = result + term if sgn > 0 else result - term
    return result


# -- spec operations --------------------------------------------------------------------

def alg_arith(op: str, a: AlgebraElement, b=None) -> AlgebraElement:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        if not isinstance(b, AlgebraElement):
            raise AmbientMismatch("mul expects an algebra element; use scalar_mul for scalars")
        return a * b
    if op == "scalar_mul":
        return a.scale(b)
    if op == "neg":
        return -a
    raise ValueError(f"unknown algebra operation {op!r}")


def support(a: AlgebraElement) -> set[int]:
    return {int(g) for g in np.flatnonzero(a.coords.any(axis=1))}


def left_right_rep(a: AlgebraElement, side: str = "left") -> np.ndarray:
    """Matrix of x -> a*x (side='left') or x -> x*a on the GF(p)-coordinates."""
    A = a.ambient
    if side == "left":
        return A.left_matrices(a.vector[None])[0]
    if side == "right":
        return A.right_matrices(a.vector[None])[0]
    raise ValueError("side must be 'left' or 'right'")


def is_nilpotent(a: AlgebraElement) -> bool:
    return bool(a.ambient.nilpotent_mask(a.vector[None])[0])


def _commutator_system(A: TwistedGroupAlgebra) -> np.ndarray:
    """Stacked matrices of a -> a u_g - u_g a over all g."""
    units = np.stack([A.unit(g).vector for g in range(A.n)])
    R = A.right_matrices(units)
    L = A.left_matrices(units)
    return ((R - L) % A.p).reshape(A.n * A.dim, A.dim)


def is_central(a: AlgebraElement) -> bool:
    A = a.ambient
    units = np.stack([A.unit(g).vector for g in range(A.n)])
    left = A.mul_batch(np.tile(a.vector, (A.n, 1)), units)
    right = A.mul_batch(units, np.tile(a.vector, (A.n, 1)))
    return bool(np.array_equal(left, right))


def center_basis(A: TwistedGroupAlgebra) -> list[AlgebraElement]:
    return [A.from_vector(v) for v in linalg.kernel(_commutator_system(A), A.p)]


def _require_commutative(A: TwistedGroupAlgebra) -> None:
    if not A.is_commutative():
        raise NotCommutative(f"{A!r} is not commutative")


def frobenius_matrix(A: TwistedGroupAlgebra) -> np.ndarray:
    """Matrix of x -> x^p, GF(p)-linear when A is commutative."""
    _require_commutative(A)
    eye = np.eye(A.dim, dtype=np.int64)
    return A.power_batch(eye, A.p).T % A.p


@functools.lru_cache(maxsize=256)
def _nilradical_rows(A: TwistedGroupAlgebra) -> np.ndarray:
    F = frobenius_matrix(A)
    e = 1
    while A.p**e < A.dim:
        e += 1
    rows = linalg.kernel(linalg.matpow(F, e, A.p), A.p)
    rows.setflags(write=False)
    return rows


def nilradical_commutative(A: TwistedGroupAlgebra) -> list[AlgebraElement]:
    """GF(p)-basis of the nilpotent elements of a commutative ambient."""
    return [A.from_vector(v) for v in _nilradical_rows(A)]


def nilradical_matrix(A: TwistedGroupAlgebra) -> np.ndarray:
    """Nilradical basis as rows of GF(p)-coordinates."""
    _require_commutative(A)
    return _nilradical_rows(A)


def restrict_equation(a: AlgebraElement, x: AlgebraElement, b: AlgebraElement,
                      c: AlgebraElement) -> tuple[AlgebraElement, list[int]]:
    """Truncate x to H = <Supp a, Supp b, Supp c> keeping a*y*b = c.

    Returns ``(y, H)`` where H is listed by its indices in G.
    """
    A = a.ambient
    for other in (x, b, c):
        a._check(other)
    Y, subgroups = restrict_equation_batch(A, a.vector[None], x.vector[None],
                                           b.vector[None], c.vector[None])
    return A.from_vector(Y[0]), subgroups[0]


def restrict_equation_batch(A: TwistedGroupAlgebra, Xa, Xx, Xb, Xc):
    """Row-wise restrict_equation on coordinate batches.

    Returns ``(Y, subgroups)``: Y[i] is Xx[i] truncated to H_i and subgroups[i]
    lists H_i.  Raises PreconditionFailed if any row has a*x*b != c.
    """
    Xa, Xx, Xb, Xc = (np.asarray(M, dtype=np.int64) % A.p for M in (Xa, Xx, Xb, Xc))
    if not np.array_equal(A.mul_batch(A.mul_batch(Xa, Xx), Xb), Xc):
        raise PreconditionFailed("a*x*b != c")
    B = len(Xa)
    supp = np.zeros((B, A.n), dtype=bool)
    for M in (Xa, Xb, Xc):
        supp |= M.reshape(B, A.n, A.k).any(axis=2)
    masks = np.zeros((B, A.n), dtype=bool)
    subgroups = [None] * B
    keys, inverse = np.unique(supp, axis=0, return_inverse=True)
    for j, key in enumerate(keys):
        embed = subgroup_closure(A.group, np.flatnonzero(key))
        rows = np.flatnonzero(inverse.reshape(-1) == j)
        masks[np.ix_(rows, embed)] = True
        for r in rows:
            subgroups[r] = list(embed)
    Y = (Xx.reshape(B, A.n, A.k) * masks[:, :, None]).reshape(B, A.dim)
    # products a*(x - y)*b live in cosets HgH disjoint from H, where c lives
    assert np.array_equal(A.mul_batch(A.mul_batch(Xa, Y), Xb), Xc)
    return Y, subgroups
