import math

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from purecubic.cyclotomic import (
    CycloElement,
    PeriodElement,
    coset_index,
    cyclo_norm_element,
    cyclo_norm_product,
    galois_shift,
    period_cosets,
    period_polynomial,
    period_polynomial_direct,
    poly_discriminant,
)
from purecubic.errors import InvalidPrime

PRIMES = [p for p in sympy.primerange(7, 120) if p % 3 == 1]


def test_period_polynomial_seven():
    assert period_polynomial(7) == (1, 1, -2, -1)


@pytest.mark.parametrize("p", PRIMES)
def test_two_routes_agree(p):
    assert period_polynomial(p) == period_polynomial_direct(p)


@pytest.mark.parametrize("p", PRIMES)
def test_period_polynomial_shape(p):
    # x^3 + x^2 - (p-1)/3 x - (p(L+3) - 1)/27 with 4p = L^2 + 27 M^2, L = 1 mod 3
    _, c2, c1, c0 = period_polynomial(p)
    assert c2 == 1 and c1 == -(p - 1) // 3
    disc = poly_discriminant(period_polynomial(p))
    assert disc % (p * p) == 0
    m = math.isqrt(disc // (p * p))
    assert m * m * p * p == disc
    L = next(L for L in range(-2 * p, 2 * p) if L % 3 == 1 and (4 * p - L * L) % 27 == 0 and 4 * p - L * L >= 0 and math.isqrt((4 * p - L * L) // 27) ** 2 == (4 * p - L * L) // 27)
    assert c0 == -(p * (L + 3) - 1) // 27


@pytest.mark.parametrize("p", PRIMES)
def test_period_polynomial_irreducible(p):
    x = sympy.Symbol("x")
    assert sympy.Poly(list(period_polynomial(p)), x).is_irreducible


def test_cosets_partition():
    for p in PRIMES:
        cosets = period_cosets(p)
        assert sorted(t for c in cosets for t in c) == list(range(1, p))
        idx = coset_index(p)
        assert all(idx[t] == i for i, c in enumerate(cosets) for t in c)


def test_rejects_bad_primes():
    for bad in (5, 9, 3):
        with pytest.raises(InvalidPrime):
            period_polynomial(bad)


coords = st.tuples(st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20))


@given(coords, coords)
def test_shift_is_ring_automorphism(a, b):
    x, y = PeriodElement(13, a), PeriodElement(13, b)
    assert galois_shift(x * y) == galois_shift(x) * galois_shift(y)
    assert galois_shift(galois_shift(galois_shift(x))) == x


@given(coords, coords)
def test_period_mult_matches_cyclotomic(a, b):
    x, y = PeriodElement(19, a), PeriodElement(19, b)
    assert (x * y).to_cyclo() == x.to_cyclo() * y.to_cyclo()


@given(coords, coords)
def test_norm_multiplicative(a, b):
    x, y = PeriodElement(31, a), PeriodElement(31, b)
    assert (x * y).norm() == x.norm() * y.norm()


@given(st.integers(1, 6), st.integers(1, 6))
def test_cyclo_galois_composes(a, b):
    z = CycloElement.zeta_power(7, 1) + CycloElement.constant(7, 2)
    assert z.galois(a).galois(b) == z.galois(a * b % 7)


@pytest.mark.parametrize("p", PRIMES)
def test_cyclo_norm_element(p):
    gamma = cyclo_norm_element(p)
    assert gamma.to_cyclo() == cyclo_norm_product(p)
    assert gamma.norm() == p
    # gamma / sigma(gamma) is a unit of the cubic field
    ratio = gamma * galois_shift(gamma).inverse()
    assert ratio.norm() == 1


def test_inverse():
    x = PeriodElement(7, (2, -1, 5))
    one = x * x.inverse()
    assert one.is_scalar() and one.scalar_value() == 1
