import random

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from sympy import primerange

from purecubic.eisenstein import LAMBDA, OMEGA, EisensteinInt, SymbolValue, split_prime
from purecubic.errors import ZeroArgument
from purecubic.localfield import LAMBDA_ADIC, embed_eisenstein
from purecubic.symbols import (
    LAMBDA_PLACE,
    PlaceOfK,
    exponent_rank_f3,
    galois_conjugate_symbol_check,
    hilbert_symbol,
    lift_unit,
    places_dividing,
    product_formula_check,
    symbol_profile,
    tame_symbol,
    wild_symbol,
    wild_symbol_by_lift,
    wild_symbol_local,
)
from strategies import coprime_to_3, eisenstein

SMALL = eisenstein(40)


def _all_places(*zs):
    return [LAMBDA_PLACE] + [pl for pl in places_dividing(*zs) if pl.kind != "lambda"]


def test_hil1_closed_form_small():
    for p in (7, 13, 19, 31, 37, 43, 61):
        a, _ = split_prime(p)
        assert int(tame_symbol(OMEGA, a * a * a.conjugate(), a)) == ((p - 1) // 3) % 3


def test_units_pair_trivially_at_tame_places():
    a, _ = split_prime(13)
    assert tame_symbol(OMEGA, -1, a).is_trivial()


@pytest.mark.parametrize("p", [p for p in primerange(5, 200) if p % 3 == 1])
def test_lemma_type_values(p):
    a, _ = split_prime(p)
    s = wild_symbol(OMEGA, p)
    assert s.is_trivial() == (p % 9 == 1)
    if p % 9 != 1:
        assert not tame_symbol(OMEGA, a, a).is_trivial()


def test_wild_trivial_on_rationals():
    for a in range(1, 27):
        for b in range(1, 27):
            if a % 3 and b % 3:
                assert wild_symbol(a, b).is_trivial()


@given(SMALL, SMALL, SMALL)
def test_bilinearity(a1, a2, b):
    for v in _all_places(a1, a2, b):
        lhs = hilbert_symbol(a1 * a2, b, v)
        assert lhs == hilbert_symbol(a1, b, v) + hilbert_symbol(a2, b, v)
        assert hilbert_symbol(b, a1 * a2, v) == hilbert_symbol(b, a1, v) + hilbert_symbol(b, a2, v)


@given(SMALL, SMALL)
def test_antisymmetry(a, b):
    for v in _all_places(a, b):
        assert (hilbert_symbol(a, b, v) + hilbert_symbol(b, a, v)).is_trivial()


@given(SMALL)
def test_steinberg(a):
    assume(a != EisensteinInt(1))
    one_minus = EisensteinInt(1) - a
    for v in _all_places(a, one_minus):
        assert hilbert_symbol(a, one_minus, v).is_trivial()
        assert hilbert_symbol(a, -a, v).is_trivial()


@given(eisenstein(12), SMALL, SMALL)
def test_cube_triviality(c, u, b):
    for v in _all_places(c, u, b):
        assert hilbert_symbol(c**3 * u, b, v) == hilbert_symbol(u, b, v)


@given(SMALL, SMALL)
def test_product_formula(a, b):
    prof = symbol_profile(a, b)
    assert sum(int(x) for x in prof.values()) % 3 == 0
    assert product_formula_check(a, b)


def test_product_formula_lambda_lambda():
    assert product_formula_check(LAMBDA, LAMBDA)
    assert product_formula_check(OMEGA, 61)


@given(coprime_to_3(), coprime_to_3(), st.integers(1, 30))
def test_lift_independence(a, b, offset):
    la, lb = (embed_eisenstein(z, LAMBDA_ADIC, 4) for z in (a, b))
    assert wild_symbol_local(la, lb, offset) == wild_symbol_local(la, lb, 0) == wild_symbol(a, b)


@given(coprime_to_3())
def test_lift_is_congruent_mod_9(u):
    loc = embed_eisenstein(u, LAMBDA_ADIC, 4)
    for off in (0, 3, 11):
        g = lift_unit(loc, off)
        assert (g.a - u.a) % 9 == 0 and (g.b - u.b) % 9 == 0


@given(eisenstein(80), eisenstein(80))
def test_wild_matches_lift_route(a, b):
    assert wild_symbol(a, b) == wild_symbol_by_lift(a, b, offset=2)


def test_wild_local_on_rational_residues():
    for a in range(1, 27):
        for b in range(1, 27):
            if a % 3 and b % 3:
                la, lb = (embed_eisenstein(x, LAMBDA_ADIC, 4) for x in (a, b))
                assert wild_symbol_local(la, lb).is_trivial()


def test_galois_conjugate_hil1():
    a, abar = split_prime(61)
    lhs = tame_symbol(OMEGA, 61 * a, a)
    rhs = tame_symbol(OMEGA * OMEGA, 61 * abar, abar)
    assert rhs == -lhs


@given(SMALL, SMALL)
def test_galois_conjugate_random(a, b):
    for v in _all_places(a, b):
        assert galois_conjugate_symbol_check(a, b, v)


def test_place_kinds():
    assert PlaceOfK.of(LAMBDA).kind == "lambda"
    assert PlaceOfK.of(EisensteinInt(5)).kind == "inert"
    assert PlaceOfK.of(split_prime(7)[0]).kind == "split"
    with pytest.raises(ValueError):
        PlaceOfK.of(EisensteinInt(7))


def test_zero_arguments():
    with pytest.raises(ZeroArgument):
        tame_symbol(0, 2, split_prime(7)[0])
    with pytest.raises(ZeroArgument):
        wild_symbol(3, 0)


def test_exponent_rank():
    assert exponent_rank_f3([[1, 1, 1]]) == 1
    assert exponent_rank_f3([[1, 1, 1], [2, 2, 2]]) == 1
    assert exponent_rank_f3([[1, 1, 1], [0, 1, 2]]) == 2
    assert exponent_rank_f3([[0, 0, 0]]) == 0
    rng = random.Random(5)
    for _ in range(50):
        rows = [[rng.randrange(3) for _ in range(4)] for _ in range(3)]
        assert exponent_rank_f3(rows) <= 3
        assert exponent_rank_f3(rows + [[(x + y) % 3 for x, y in zip(rows[0], rows[1])]]) == exponent_rank_f3(rows)


def test_symbol_value_arithmetic():
    assert SymbolValue(4) == SymbolValue(1)
    assert -SymbolValue(1) == SymbolValue(2)
    assert SymbolValue(2) * 2 == SymbolValue(1)
