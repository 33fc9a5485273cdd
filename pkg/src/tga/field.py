"""Exact arithmetic in GF(p^k).

Elements are stored as coefficient tuples (constant term first) relative to a
:class:`FieldSpec`.  Internally every element also has an integer encoding
``sum(c_i * p**i)`` which indexes the exp/log tables built once per field.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .exceptions import DivisionByZero, FieldMismatch, InvalidField, ZeroArgument

MAX_FIELD_SIZE = 2**16

__all__ = [
    "FieldSpec",
    "FieldElem",
    "GF",
    "is_prime",
    "is_irreducible",
    "smallest_irreducible",
    "ff_arith",
    "ff_nth_root",
    "ff_isotropic",
    "ff_integer_invertible",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


# -- polynomials over GF(p), coefficient lists constant term first ------------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a, m, p):
    a = _trim(a)
    m = _trim(m)
    inv_lead = pow(m[-1], -1, p)
    while len(a) >= len(m):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a = _trim(a)
    return a


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    poly = _trim([c % p for c in poly])
    deg = len(poly) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            if not _polymod(poly, list(tail) + [1], p):
                return False
    return True


@functools.lru_cache(maxsize=None)
def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest (constant term first) monic irreducible of degree k."""
    if k == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=k):
        cand = tail + (1,)
        if cand[0] != 0 and is_irreducible(cand, p):
            return cand
    raise InvalidField(f"no irreducible polynomial of degree {k} over GF({p})")


# -- field spec ----------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """The field GF(p^k) = GF(p)[x]/(modulus)."""

    p: int
    k: int = 1
    modulus: tuple[int, ...] = ()

    def __post_init__(self):
        if not is_prime(self.p):
            raise InvalidField(f"characteristic {self.p} is not prime")
        if self.k < 1:
            raise InvalidField("extension degree must be >= 1")
        if self.p**self.k > MAX_FIELD_SIZE:
            raise InvalidField(f"field size {self.p}^{self.k} exceeds cap {MAX_FIELD_SIZE}")
        if not self.modulus:
            object.__setattr__(self, "modulus", smallest_irreducible(self.p, self.k))
        else:
            mod = tuple(int(c) % self.p for c in self.modulus)
            object.__setattr__(self, "modulus", mod)
            if len(mod) != self.k + 1 or mod[-1] != 1:
                raise InvalidField("modulus must be monic of degree k")
            if not is_irreducible(mod, self.p):
                raise InvalidField(f"modulus {mod} is reducible over GF({self.p})")

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def characteristic(self) -> int:
        return self.p

    def __repr__(self):
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k})"

    # element construction
    def __call__(self, value) -> "FieldElem":
        if isinstance(value, FieldElem):
            if value.field != self:
                raise FieldMismatch(f"{value!r} does not belong to {self!r}")
            return value
        if isinstance(value, (int, np.integer)):
            return FieldElem(self, (int(value) % self.p,) + (0,) * (self.k - 1))
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) != self.k:
            raise ValueError(f"expected {self.k} coefficients, got {len(coeffs)}")
        return FieldElem(self, coeffs)

    def from_int(self, code: int) -> "FieldElem":
        """Element with integer encoding ``code`` (base-p digits, constant first)."""
        return FieldElem(self, tuple(int(d) for d in self.tables.digits[code]))

    def zero(self) -> "FieldElem":
        return self(0)

    def one(self) -> "FieldElem":
        return self(1)

    def gen(self) -> "FieldElem":
        """The class of x in GF(p)[x]/(modulus)."""
        if self.k == 1:
            return self(-self.modulus[0])
        return self([0, 1] + [0] * (self.k - 2))

    def elements(self) -> Iterator["FieldElem"]:
        """All q elements in lexicographic order of their coefficient tuples."""
        for coeffs in itertools.product(range(self.p), repeat=self.k):
            yield FieldElem(self, coeffs)

    def lex_order(self) -> np.ndarray:
        return self.tables.lex_order

    @property
    def tables(self) -> "_Tables":
        return _tables(self)

    def to_json(self):
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, obj) -> "FieldSpec":
        return cls(int(obj["p"]), int(obj.get("k", 1)), tuple(obj.get("modulus", ())))

    def integer_invertible(self, n: int) -> bool:
        return ff_integer_invertible(self, n)


def GF(p: int, k: int = 1, modulus: Sequence[int] = ()) -> FieldSpec:
    return FieldSpec(p, k, tuple(modulus))


class _Tables:
    """Precomputed encodings, exp/log tables and GF(p)-matrices of the field."""

    def __init__(self, spec: FieldSpec):
        p, k, q = spec.p, spec.k, spec.q
        self.p, self.k, self.q = p, k, q
        codes = np.arange(q)
        self.digits = np.stack([(codes // p**i) % p for i in range(k)], axis=1).astype(np.int64)
        self.weights = p ** np.arange(k, dtype=np.int64)
        # powers of x reduced mod the modulus, used for multiplication
        red = np.zeros((2 * k - 1, k), dtype=np.int64)
        cur = [1] + [0] * (k - 1)
        mod = spec.modulus
        for e in range(2 * k - 1):
            red[e] = cur
            # multiply cur by x
            top = cur[-1]
            shifted = [0] + cur[:-1]
            cur = [(shifted[i] - top * mod[i]) % p for i in range(k)]
        # mul_tensor[i, j, l]: coefficient of x^l in x^(i+j)
        self.mul_tensor = np.zeros((k, k, k), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                self.mul_tensor[i, j] = red[i + j]
        self.exp, self.log = self._build_exp_log()
        # lexicographic rank of coefficient tuples (constant term first)
        lex_codes = np.zeros(q, dtype=np.int64)
        for rank, coeffs in enumerate(itertools.product(range(p), repeat=k)):
            lex_codes[rank] = sum(c * p**i for i, c in enumerate(coeffs))
        self.lex_order = lex_codes
        self.lex_rank = np.empty(q, dtype=np.int64)
        self.lex_rank[lex_codes] = np.arange(q)

    @functools.cached_property
    def add_table(self) -> np.ndarray:
        """q x q table of code sums (only built for small fields)."""
        d = self.digits
        return (((d[:, None, :] + d[None, :, :]) % self.p) @ self.weights).astype(np.int64)

    @functools.cached_property
    def mul_table(self) -> np.ndarray:
        q = self.q
        out = np.zeros((q, q), dtype=np.int64)
        if q > 2:
            la = self.log[1:]
            out[1:, 1:] = self.exp[(la[:, None] + la[None, :]) % (q - 1)]
        else:
            out[1, 1] = 1
        return out

    def mul_codes_slow(self, a: int, b: int) -> int:
        da, db = self.digits[a], self.digits[b]
        prod = np.einsum("i,j,ijl->l", da, db, self.mul_tensor) % self.p
        return int(prod @ self.weights)

    def _build_exp_log(self):
        q = self.q
        if q == 2:
            return np.array([1], dtype=np.int64), np.array([-1, 0], dtype=np.int64)
        order = q - 1
        factors = _prime_factors(order)
        for cand in range(2, q):
            ok = True
            for f in factors:
                if self.pow_slow(cand, order // f) == 1:
                    ok = False
                    break
            if ok:
                gen = cand
                break
        else:  # pragma: no cover
            raise InvalidField("no primitive element found")
        exp = np.zeros(order, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        cur = 1
        for e in range(order):
            exp[e] = cur
            log[cur] = e
            cur = self.mul_codes_slow(cur, gen)
        return exp, log

    def pow_slow(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul_codes_slow(result, base)
            base = self.mul_codes_slow(base, base)
            e >>= 1
        return result

    # fast integer-code arithmetic
    def add(self, a: int, b: int) -> int:
        return int(((self.digits[a] + self.digits[b]) % self.p) @ self.weights)

    def neg(self, a: int) -> int:
        return int(((-self.digits[a]) % self.p) @ self.weights)

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(self.log[a] + self.log[b]) % (self.q - 1)])

    def power(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise DivisionByZero("0 has no inverse")
            return 1 if e == 0 else 0
        return int(self.exp[(self.log[a] * e) % (self.q - 1)])

    def mul_matrix(self, a: int) -> np.ndarray:
        """k x k matrix M with digits(a*b) = digits(b) @ M."""
        return np.einsum("i,jil->jl", self.digits[a], self.mul_tensor) % self.p


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@functools.lru_cache(maxsize=64)
def _tables(spec: FieldSpec) -> _Tables:
    return _Tables(spec)


# -- elements --------------------------------------------------------------------

@dataclass(frozen=True)
class FieldElem:
    field: FieldSpec
    coeffs: tuple[int, ...]

    @property
    def code(self) -> int:
        p = self.field.p
        return sum(c * p**i for i, c in enumerate(self.coeffs))

    def _coerce(self, other) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other
        if isinstance(other, (int, np.integer)):
            return self.field(int(other))
        return NotImplemented

    def _wrap(self, code: int) -> "FieldElem":
        return self.field.from_int(code)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FieldElem(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElem(self.field, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._wrap(self.field.tables.mul(self.code, other.code))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        if self.is_zero():
            raise DivisionByZero(f"{self!r} is not invertible")
        return self._wrap(self.field.tables.power(self.code, -1))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        return self._wrap(self.field.tables.power(self.code, int(e)))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            return self == self.field(int(other))
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __lt__(self, other: "FieldElem") -> bool:
        # lexicographic on coefficient tuples, constant term first
        return self.coeffs < other.coeffs

    def multiplicative_order(self) -> int:
        if self.is_zero():
            raise ZeroArgument("0 has no multiplicative order")
        q1 = self.field.q - 1
        return q1 // math.gcd(q1, int(self.field.tables.log[self.code]))

    def to_json(self):
        return list(self.coeffs)

    def __repr__(self):
        if self.field.k == 1:
            return str(self.coeffs[0])
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(terms) if terms else "0"


# -- spec operations -------------------------------------------------------------

def ff_arith(op: str, a: FieldElem, b=None) -> FieldElem:
    """Dispatch one of add, sub, mul, neg, inv, pow."""
    if op == "add":
        return a + a._coerce(b)
    if op == "sub":
        return a - a._coerce(b)
    if op == "mul":
        return a * a._coerce(b)
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a ** int(b)
    raise ValueError(f"unknown field operation {op!r}")


def _all_nth_roots(a: FieldElem, n: int) -> list[FieldElem]:
    tables = a.field.tables
    q1 = a.field.q - 1
    log_a = int(tables.log[a.code])
    d = math.gcd(n, q1)
    if log_a % d:
        return []
    # n*m = log_a (mod q1)  <=>  (n/d) m = log_a/d (mod q1/d)
    mod = q1 // d
    m0 = (log_a // d) * pow(n // d, -1, mod) % mod if mod > 1 else 0
    return [a.field.from_int(int(tables.exp[(m0 + t * mod) % q1])) for t in range(d)]


def ff_nth_root(a: FieldElem, n: int) -> Optional[FieldElem]:
    """Some mu with mu**n == a, the lexicographically smallest one, or None."""
    if a.is_zero():
        raise ZeroArgument("nth root of 0 requested")
    if n < 1:
        raise ValueError("n must be positive")
    roots = _all_nth_roots(a, n)
    return min(roots) if roots else None


def has_nth_root_in_degree(a: FieldElem, n: int, k_prime: int) -> bool:
    """Whether a (embedded in GF(p^k') with k | k') has an n-th root there."""
    f = a.field
    if k_prime % f.k:
        raise ValueError("k' must be a multiple of k")
    qq = f.p**k_prime - 1
    order = a.multiplicative_order()
    return (qq // math.gcd(n, qq)) % order == 0


def minus_one_is_square(p: int, k: int) -> bool:
    return p == 2 or (p**k) % 4 == 1


def ff_isotropic(field: FieldSpec, dim: int) -> Optional[tuple[FieldElem, ...]]:
    """Lexicographically first nonzero solution of a sum of ``dim`` squares = 0."""
    if dim not in (2, 3):
        raise ValueError("dim must be 2 or 3")
    lex = [field.from_int(int(c)) for c in field.lex_order()]
    zero = field.zero()
    if dim == 2:
        for alpha in lex:
            if alpha.is_zero():
                continue
            beta = ff_nth_root(-(alpha * alpha), 2)
            # existence does not depend on alpha once alpha != 0
            return None if beta is None else (alpha, beta)
        return None
    for x in lex:
        for y in lex:
            rhs = -(x * x + y * y)
            if rhs.is_zero():
                if x.is_zero() and y.is_zero():
                    continue
                return (x, y, zero)
            z = ff_nth_root(rhs, 2)
            if z is not None:
                return (x, y, z)
    return None


def ff_integer_invertible(field: FieldSpec, n: int) -> bool:
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.gcd(n, field.p) == 1
