import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from purecubic.errors import Reducible
from purecubic.orders import (
    IdealHNF,
    closure_automorphisms,
    closure_order,
    decompose_prime,
    factor_ideal,
    maximalize,
    order_from_polynomial,
    prime_product,
    pure_cubic_order,
)
from purecubic.orders.ideals import apply_automorphism
from purecubic.orders.order import is_maximal_at

coords = st.tuples(*[st.integers(-9, 9)] * 3)


@pytest.fixture(scope="module")
def O10():
    return pure_cubic_order(10)


@given(coords, coords, coords)
def test_multiplication_is_a_commutative_ring(x, y, z):
    o = pure_cubic_order(10)
    assert o.mul(x, y) == o.mul(y, x)
    assert o.mul(o.mul(x, y), z) == o.mul(x, o.mul(y, z))
    assert o.mul(x, o.add(y, z)) == o.add(o.mul(x, y), o.mul(x, z))
    assert tuple(o.mul(x, o.one())) == tuple(x)


@given(coords, coords)
def test_norm_is_multiplicative(x, y):
    o = pure_cubic_order(10)
    assert o.norm(o.mul(x, y)) == o.norm(x) * o.norm(y)


def test_equation_order_discriminants():
    assert order_from_polynomial([1, 0, 0, -2]).discriminant == -108
    assert order_from_polynomial([1, 0, 0, -10]).discriminant == -2700
    with pytest.raises(Reducible):
        order_from_polynomial([1, 0, 0, -8])


def test_maximalize_pure_cubic_ramified_at_three(O10):
    # 10 = 1 mod 9, so 3 is not totally ramified and the index at 3 is 3
    o = order_from_polynomial([1, 0, 0, -10])
    assert not is_maximal_at(o, 3)
    m = maximalize(o, 3)
    assert m.discriminant == -300
    assert is_maximal_at(m, 3)
    assert O10.discriminant == -300


@pytest.mark.parametrize("p", [2, 5, 7, 11, 13, 17, 61, 67])
def test_pure_cubic_discriminants(p):
    from oracles import pure_cubic_discriminant

    assert pure_cubic_order(p).discriminant == pure_cubic_discriminant(p)


@pytest.mark.parametrize("m,q", [(10, 2), (10, 3), (10, 5), (10, 7), (61, 3), (61, 61), (61, 5), (61, 13), (7, 3)])
def test_prime_decomposition(m, q):
    o = pure_cubic_order(m)
    primes = decompose_prime(o, q)
    assert sum(P.e * P.f for P in primes) == 3
    qO = IdealHNF.principal(o, o.scalar(q))
    assert prime_product(o, [(P, P.e) for P in primes]) == qO
    for P in primes:
        assert P.norm == q**P.f
        assert P.ideal_valuation(qO) == P.e


def test_ideal_norms_multiply(O10):
    a = IdealHNF.from_generators(O10, [O10.scalar(6), (1, 1, 0)])
    b = IdealHNF.from_generators(O10, [O10.scalar(35), (2, 0, 1)])
    assert (a * b).norm == a.norm * b.norm
    assert (a**3).norm == a.norm**3
    x = (3, 1, 1)
    assert IdealHNF.principal(O10, x).norm == abs(O10.norm(x))


def test_factor_ideal_round_trip(O10):
    x = (5, 2, 1)
    I = IdealHNF.principal(O10, x)
    fac = factor_ideal(I)
    assert prime_product(O10, fac) == I
    assert sympy.prod([P.norm**e for P, e in fac]) == abs(O10.norm(x))


@pytest.fixture(scope="module")
def K7():
    return closure_order(7)


def test_closure_discriminant_and_ramification(K7):
    assert K7.discriminant == -(3**7) * 7**4
    three = decompose_prime(K7, 3)
    assert [(P.e, P.f) for P in three] == [(6, 1)]
    seven = decompose_prime(K7, 7)
    assert sorted((P.e, P.f) for P in seven) == [(3, 1), (3, 1)]


def test_closure_automorphisms_are_ring_maps(K7):
    auts = closure_automorphisms(7)
    assert len(auts) == 6
    x = tuple(range(1, 7))
    y = (2, -1, 0, 3, 1, -2)
    for _, S in auts:
        assert apply_automorphism(S, K7.mul(x, y)) == tuple(K7.mul(apply_automorphism(S, x), apply_automorphism(S, y)))
        assert K7.norm(apply_automorphism(S, x)) == K7.norm(x)
    images = {apply_automorphism(S, y) for _, S in auts}
    assert len(images) == 6
