import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import isprime, primerange

from oracles import brute_cubic_char, brute_is_cube
from purecubic.eisenstein import (
    LAMBDA,
    OMEGA,
    EisensteinInt,
    cubic_char,
    factor,
    inert_char,
    is_cube_mod_p,
    is_primary,
    norm,
    normalize,
    rational_prime_places,
    split_prime,
)
from purecubic.errors import InvalidPrime, NotCoprime, ZeroArgument
from strategies import eisenstein


def test_omega_relation():
    assert OMEGA * OMEGA + OMEGA + 1 == EisensteinInt(0)
    assert OMEGA**3 == EisensteinInt(1)
    assert LAMBDA.norm() == 3


@given(eisenstein(), eisenstein())
def test_norm_multiplicative(x, y):
    assert norm(x * y) == norm(x) * norm(y)


@given(eisenstein(), eisenstein())
def test_divmod_remainder_is_small(x, y):
    q, r = x.divmod(y)
    assert q * y + r == x
    assert r.norm() < y.norm()


@pytest.mark.parametrize("p, alpha", [(7, EisensteinInt(1, 3)), (61, EisensteinInt(4, 9))])
def test_split_prime_known(p, alpha):
    a, abar = split_prime(p)
    assert a == alpha
    assert a * abar == EisensteinInt(p)


@pytest.mark.parametrize("p", list(primerange(7, 400, )))
def test_split_prime_normal_form(p):
    if p % 3 != 1:
        with pytest.raises(InvalidPrime):
            split_prime(p)
        return
    a, abar = split_prime(p)
    assert a.norm() == p and is_primary(a) and a.b > 0
    assert abar == a.conjugate()


def test_split_prime_rejects_composites():
    with pytest.raises(InvalidPrime):
        split_prime(91)


def _split_primes_below(n):
    out = []
    for q in primerange(7, n):
        if q % 3 == 1:
            out.extend(split_prime(q))
    return out


@pytest.mark.parametrize("pi", _split_primes_below(200))
def test_cubic_char_matches_brute_force(pi):
    # every residue class for small primes, a sample for larger ones
    q = pi.norm()
    for a in range(1, min(q, 40)):
        for b in (0, 1, 5):
            z = EisensteinInt(a, b)
            if pi.divides(z):
                continue
            k = int(cubic_char(z, pi))
            assert k == brute_cubic_char(z, pi)
            assert (k == 0) == brute_is_cube(z, pi)


@pytest.mark.parametrize("q", [2, 5, 11])
def test_inert_char_matches_brute_force(q):
    for a in range(q):
        for b in range(q):
            z = EisensteinInt(a, b)
            if a == 0 and b == 0:
                continue
            k = int(inert_char(z, q))
            assert k == brute_cubic_char(z, EisensteinInt(q))
            assert (k == 0) == brute_is_cube(z, EisensteinInt(q))


def test_cubic_char_of_omega_closed_form():
    for q in primerange(7, 300):
        if q % 3 == 1:
            a, _ = split_prime(q)
            assert int(cubic_char(OMEGA, a)) == ((q - 1) // 3) % 3


def test_cubic_char_errors():
    a, _ = split_prime(7)
    with pytest.raises(NotCoprime):
        cubic_char(a * 2, a)


@pytest.mark.parametrize("a, p, expected", [(2, 31, True), (3, 61, True), (3, 7, False), (3, 13, False)])
def test_is_cube_mod_p(a, p, expected):
    assert is_cube_mod_p(a, p) is expected


def test_is_cube_mod_p_exhaustive():
    for p in primerange(7, 200):
        if p % 3 == 1:
            cubes = {pow(x, 3, p) for x in range(1, p)}
            for a in range(1, p):
                assert is_cube_mod_p(a, p) == (a in cubes)


@given(eisenstein(300))
def test_factor_roundtrip(z):
    f = factor(z)
    assert f.expand() == z
    assert f.unit.is_unit()
    for pi, e in f:
        assert e > 0 and normalize(pi) == pi
        assert isprime(pi.norm()) or (pi.b == 0 and isprime(abs(pi.a)))


def test_factor_zero():
    with pytest.raises(ZeroArgument):
        factor(0)


def test_rational_prime_places():
    assert rational_prime_places(3) == [LAMBDA]
    assert len(rational_prime_places(7)) == 2
    (q,) = rational_prime_places(5)
    assert q.norm() == 25


@given(st.integers(1, 10**6))
def test_normalize_idempotent(n):
    z = EisensteinInt(n, n // 7)
    assert normalize(normalize(z)) == normalize(z)
