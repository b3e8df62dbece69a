import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rmlab.exceptions import InvalidParameter, UnsupportedConfiguration
from rmlab.fields import (
    FqBasis, NormalBasis, build_tower, find_nonsquare, find_normal_element, first_irreducible,
    is_square, moore_matrix, prime_power, relative_norm, relative_trace, sqrt,
)

from oracles import digits, encode, has_root_free_factorisation, naive_add, naive_mul, naive_pow_fast


def first_irreducible_oracle(p, degree):
    for code in range(p ** degree):
        poly = digits(code, p, degree) + [1]
        if has_root_free_factorisation(poly, p):
            return tuple(poly)


@pytest.mark.parametrize("p,degree", [(2, 4), (2, 8), (3, 2), (3, 4), (3, 8), (5, 2), (5, 4), (7, 4)])
def test_modulus_is_first_irreducible(p, degree):
    assert first_irreducible(p, degree) == first_irreducible_oracle(p, degree)


def test_f9_modulus_and_generator():
    F = build_tower(3, 1, 2)
    assert F.modulus == (1, 0, 1)
    t = F.theta()
    assert t.value == 3
    assert (t * t).value == 2          # t^2 = -1
    assert t.frobenius(1).value == 6   # t^3 = -t


def test_prime_power():
    assert prime_power(81) == (3, 4)
    assert prime_power(2) == (2, 1)
    for bad in (1, 6, 12, 100):
        with pytest.raises(InvalidParameter):
            prime_power(bad)


def test_bad_modulus_rejected():
    from rmlab.fields import FieldContext
    with pytest.raises(InvalidParameter):
        FieldContext(3, 1, 2, (2, 0, 1))   # t^2 - 1 = (t-1)(t+1)


@pytest.mark.parametrize("p,e,n", [(3, 1, 8), (5, 1, 4), (2, 2, 4), (3, 2, 2), (3, 1, 14)])
def test_multiplication_matches_schoolbook(p, e, n):
    F = build_tower(p, e, n)
    rng = np.random.default_rng(1)
    a = rng.integers(0, F.order, 300)
    b = rng.integers(0, F.order, 300)
    got = F.vmul(a, b)
    for x, y, z in zip(a, b, got):
        assert int(z) == naive_mul(int(x), int(y), p, F.modulus)
        assert F.arith.add(int(x), int(y)) == naive_add(int(x), int(y), p, F.degree)


def test_poly_backend_used_above_table_limit():
    assert not build_tower(3, 1, 14).has_tables
    assert build_tower(3, 1, 8).has_tables


def test_pow_and_inverse():
    F = build_tower(3, 1, 14)
    rng = np.random.default_rng(2)
    for x in rng.integers(1, F.order, 20):
        x = int(x)
        k = int(rng.integers(0, 10 ** 6))
        assert F.arith.pow(x, k) == naive_pow_fast(x, k, 3, F.modulus)
        assert F.arith.mul(x, F.arith.inv(x)) == 1


def test_division_by_zero():
    F = build_tower(3, 1, 4)
    with pytest.raises(ZeroDivisionError):
        F(5) / F.zero


def test_level_checks():
    F = build_tower(3, 1, 8)
    with pytest.raises(InvalidParameter):
        F(5, 4)          # not in F_{q^4}
    with pytest.raises(InvalidParameter):
        F(1, 3)          # 3 does not divide 8
    assert len(F.subfield(4)) == 81
    assert len(F.subfield(2)) == 9
    assert set(F.subfield(2)) <= set(F.subfield(4))


@pytest.mark.parametrize("p,e,n", [(3, 1, 8), (2, 2, 4), (5, 1, 4)])
def test_frobenius_order(p, e, n):
    F = build_tower(p, e, n)
    g = int(F.arith.generator)
    assert F.ppow_raw(g, F.degree) == g
    assert all(F.ppow_raw(g, k) != g for k in range(1, F.degree))
    assert all(F.frob_raw(int(c), 1) == int(c) for c in F.subfield(1))


def test_subfield_matches_fixed_points():
    F = build_tower(3, 1, 4)
    allx = np.arange(F.order)
    fixed = allx[F.vfrob(allx, 2) == allx]
    assert np.array_equal(fixed, F.subfield(2))


def test_squares_exhaustive():
    F = build_tower(3, 1, 4)
    squares = {naive_mul(x, x, 3, F.modulus) for x in range(1, F.order)}
    assert len(squares) == (F.order - 1) // 2
    for x in range(1, F.order):
        assert is_square(F, F(x)) == (x in squares)
    sq9 = {naive_mul(int(x), int(x), 3, F.modulus) for x in F.subfield(2) if x}
    for x in F.subfield(2)[1:]:
        assert is_square(F, F(int(x), 2)) == (int(x) in sq9)


def test_sqrt():
    F9 = build_tower(3, 1, 2)
    assert sqrt(F9, F9(2, 2)).value == 3
    F = build_tower(3, 1, 14)           # Tonelli-Shanks path
    rng = np.random.default_rng(3)
    for x in rng.integers(1, F.order, 10):
        y = F(int(x)) * F(int(x))
        r = sqrt(F, y)
        assert r * r == y
    with pytest.raises(InvalidParameter):
        sqrt(F9, find_nonsquare(F9, 2))


def test_find_nonsquare():
    F3 = build_tower(3, 1, 1)
    assert find_nonsquare(F3, 1).value == 2
    F9 = build_tower(3, 1, 2)
    z = find_nonsquare(F9, 2)
    assert z.value == 4
    # nothing smaller is a non-square
    assert all(naive_pow_fast(x, 4, 3, F9.modulus) == 1 for x in range(1, 4))
    with pytest.raises(UnsupportedConfiguration):
        find_nonsquare(build_tower(2, 1, 4), 4)


def test_norm_and_trace():
    F = build_tower(3, 1, 8)
    rng = np.random.default_rng(4)
    for _ in range(50):
        x, y = F(int(rng.integers(1, F.order))), F(int(rng.integers(1, F.order)))
        assert relative_norm(F, x * y, 1) == relative_norm(F, x, 1) * relative_norm(F, y, 1)
        # the norm to F_q factors through F_{q^4} and F_{q^2}
        assert relative_norm(F, x, 1) == relative_norm(F, relative_norm(F, relative_norm(F, x, 4), 2, 4), 1, 2)
        assert relative_trace(F, x + y, 1) == relative_trace(F, x, 1) + relative_trace(F, y, 1)
    assert relative_norm(F, F.one, 4) == F.one
    assert relative_trace(F, F.one, 1).value == 8 % 3
    z = F(int(F.subfield(4)[7]), 4)
    assert relative_norm(F, z, 4) == z * z


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3 ** 8 - 1))
def test_norm_is_product_of_conjugates(x):
    F = build_tower(3, 1, 8)
    for m in (1, 2, 4):
        prod = F.one
        for k in range(8 // m):
            prod = prod * F(x).frobenius(m * k)
        assert relative_norm(F, F(x), m).value == prod.value


def test_normal_element_f9():
    F9 = build_tower(3, 1, 2)
    xi, M = find_normal_element(F9, 2)
    assert xi.value == 4                              # t + 1
    assert not moore_matrix(F9, F9.theta(), 2).nonsingular   # t, t^3 = -t are dependent
    assert M.nonsingular


def test_normal_element_is_primitive_for_basis():
    F = build_tower(3, 1, 8)
    xi, _ = find_normal_element(F, 4)
    # a normal element of F_{q^4} cannot lie in F_{q^2}
    assert xi.frobenius(2) != xi
    nb = NormalBasis(F, 4)
    vecs = set()
    for coords in itertools.product(range(3), repeat=4):
        vecs.add(nb.combine(coords).value)
    assert vecs == set(int(v) for v in F.subfield(4))


def test_basis_coordinates_round_trip():
    F = build_tower(5, 1, 4)
    th = F.theta()
    basis = FqBasis(F, [th ** i for i in range(4)])
    nb = NormalBasis(F, 4)
    rng = np.random.default_rng(5)
    for v in rng.integers(0, F.order, 40):
        y = F(int(v))
        assert basis.combine(basis.coordinates(y)) == y
        assert nb.combine(nb.coordinates(y)) == y
        # power-basis coordinates are the digits for e = 1
        assert list(basis.coordinates(y)) == digits(int(v), 5, 4)
    with pytest.raises(InvalidParameter):
        FqBasis(F, [F.one, F.one + F.one, th, th * th])


def test_extension_of_nonprime_q():
    F = build_tower(3, 2, 2)              # q = 9 inside F_81
    assert F.q == 9 and F.order == 81
    sub = F.subfield(1)
    assert len(sub) == 9
    assert encode([0, 0, 0, 0], 3) in sub
