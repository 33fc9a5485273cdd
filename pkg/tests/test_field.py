"""Finite-field arithmetic against a schoolbook polynomial oracle."""

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tga.exceptions import DivisionByZero, FieldMismatch, InvalidField, ZeroArgument
from tga.field import (
    GF,
    FieldSpec,
    ff_arith,
    ff_integer_invertible,
    ff_isotropic,
    ff_nth_root,
    is_irreducible,
    smallest_irreducible,
)


# -- independent oracle: polynomials as coefficient lists, reduced by hand ---------------

def poly_mulmod(a, b, mod, p):
    k = len(mod) - 1
    prod = [0] * (2 * k)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for i in range(k + 1):
                prod[d - k + i] = (prod[d - k + i] - c * mod[i]) % p
    return tuple(prod[:k])


def brute_irreducible(poly, p):
    """No monic factor of degree 1..deg/2, by trial multiplication of all pairs."""
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for f in itertools.product(range(p), repeat=d):
            for g in itertools.product(range(p), repeat=deg - d):
                prod = [0] * (deg + 1)
                for i, x in enumerate(f + (1,)):
                    for j, y in enumerate(g + (1,)):
                        prod[i + j] = (prod[i + j] + x * y) % p
                if tuple(prod) == tuple(poly):
                    return False
    return True


FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (5, 2), (2, 4), (7, 2)]


@st.composite
def field_and_elems(draw, count=3):
    p, k = draw(st.sampled_from(FIELDS))
    K = GF(p, k)
    elems = [K(draw(st.lists(st.integers(0, p - 1), min_size=k, max_size=k))) for _ in range(count)]
    return K, elems


# -- examples -----------------------------------------------------------------------------

def test_gf5_inverse_of_two():
    K = GF(5)
    assert ff_arith("inv", K(2)) == K(3)


def test_gf4_x_times_x():
    K = GF(2, 2)
    assert K.modulus == (1, 1, 1)
    x = K.gen()
    assert ff_arith("mul", x, x) == K([1, 1])


def test_gf7_fermat():
    assert ff_arith("pow", GF(7)(3), 6) == 1


def test_negative_power_is_inverse_power():
    K = GF(3, 2)
    a = K([1, 2])
    assert ff_arith("pow", a, -3) == (a**3).inverse()


def test_inverse_of_zero_raises():
    with pytest.raises(DivisionByZero):
        ff_arith("inv", GF(5)(0))
    with pytest.raises(ZeroDivisionError):
        GF(5)(1) / GF(5)(0)


def test_mixed_fields_raise():
    with pytest.raises(FieldMismatch):
        GF(5)(1) + GF(7)(1)


def test_nth_root_examples():
    K = GF(5)
    assert ff_nth_root(K(4), 2) == K(2)
    assert ff_nth_root(K(2), 2) is None
    for p, k in FIELDS:
        F = GF(p, k)
        assert ff_nth_root(F(1), 1) == F(1)
    with pytest.raises(ZeroArgument):
        ff_nth_root(K(0), 3)


def test_isotropic_examples():
    a, b = ff_isotropic(GF(5), 2)
    assert (a, b) == (GF(5)(1), GF(5)(2))
    assert ff_isotropic(GF(7), 2) is None
    t = ff_isotropic(GF(7), 3)
    assert t == tuple(GF(7)(v) for v in (0, 1, 2)) or t == tuple(GF(7)(v) for v in (1, 2, 3))
    assert sum((v * v for v in t), GF(7)(0)) == 0


def test_integer_invertible_examples():
    assert ff_integer_invertible(GF(3, 2), 8)
    assert not ff_integer_invertible(GF(2), 2)
    assert ff_integer_invertible(GF(5), 1)


def test_default_moduli_are_smallest_irreducibles():
    # [DERIVED] lexicographic scan (constant term first) with the brute-force test above
    for p, k in [(2, 2), (3, 2), (5, 2), (7, 2), (2, 3), (2, 4), (3, 3)]:
        expected = None
        for tail in itertools.product(range(p), repeat=k):
            cand = tail + (1,)
            if brute_irreducible(cand, p):
                expected = cand
                break
        assert smallest_irreducible(p, k) == expected
        assert GF(p, k).modulus == expected


def test_irreducibility_matches_brute_force():
    for p, k in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)]:
        for tail in itertools.product(range(p), repeat=k):
            poly = tail + (1,)
            assert is_irreducible(poly, p) == brute_irreducible(poly, p), (poly, p)


def test_construction_errors():
    with pytest.raises(InvalidField):
        GF(4)
    with pytest.raises(InvalidField):
        GF(2, 17)
    with pytest.raises(InvalidField):
        GF(2, 2, (1, 0, 1))  # x^2 + 1 = (x + 1)^2
    with pytest.raises(InvalidField):
        GF(3, 2, (1, 0, 2))  # not monic


def test_json_round_trip():
    K = GF(5, 2)
    assert FieldSpec.from_json(K.to_json()) == K
    a = K([3, 4])
    assert a.to_json() == [3, 4]
    assert K(a.to_json()) == a


def test_elements_in_lex_order():
    K = GF(3, 2)
    elems = list(K.elements())
    assert len(elems) == 9
    assert [e.coeffs for e in elems] == sorted(e.coeffs for e in elems)
    assert all(K.from_int(e.code) == e for e in elems)


# -- properties -----------------------------------------------------------------------------

@given(field_and_elems())
def test_field_axioms(data):
    K, (a, b, c) = data
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == 0 and a + (-a) == 0
    if not a.is_zero():
        assert a * a.inverse() == 1


@given(field_and_elems(count=2))
def test_multiplication_matches_polynomial_oracle(data):
    K, (a, b) = data
    if K.k == 1:
        assert (a * b).coeffs[0] == a.coeffs[0] * b.coeffs[0] % K.p
    else:
        assert (a * b).coeffs == poly_mulmod(a.coeffs, b.coeffs, K.modulus, K.p)


@pytest.mark.parametrize("p,k", [(2, 1), (3, 1), (5, 1), (7, 1), (11, 1), (2, 2), (2, 3), (3, 2), (5, 2), (2, 4), (7, 2), (3, 3)])
def test_nth_root_exhaustive(p, k):
    K = GF(p, k)
    elems = list(K.elements())
    for a in elems[1:]:
        for n in (1, 2, 3, 4, 5, 6, 8):
            roots = sorted(m for m in elems if not m.is_zero() and m**n == a)
            got = ff_nth_root(a, n)
            if roots:
                assert got == roots[0], (a, n)
            else:
                assert got is None, (a, n)


def test_isotropic_dim2_criterion_exhaustive():
    # none iff p = 3 (mod 4) and k odd; brute force for every q <= 2^12 in range
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43):
        k = 1
        while p**k <= 2**12:
            K = GF(p, k)
            elems = list(K.elements())
            squares = {}
            for e in elems:
                squares.setdefault((e * e).code, []).append(e)
            # first (a, b) in lex order: for each a, the least b with b^2 = -a^2
            brute = None
            for a in elems:
                for b in squares.get((-(a * a)).code, []):
                    if not (a.is_zero() and b.is_zero()):
                        brute = (a, b)
                        break
                if brute:
                    break
            got = ff_isotropic(K, 2)
            assert got == brute, (p, k)
            assert (got is None) == (p % 4 == 3 and k % 2 == 1), (p, k)
            k += 1


@given(st.sampled_from(FIELDS))
def test_isotropic_dim3_always_exists(pk):
    K = GF(*pk)
    t = ff_isotropic(K, 3)
    assert t is not None and any(not v.is_zero() for v in t)
    assert (t[0] * t[0] + t[1] * t[1] + t[2] * t[2]).is_zero()
