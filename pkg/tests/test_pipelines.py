import json

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import isprime, primerange

from oracles import brute_cubic_char, case_by_brute_force, cubes_mod
from purecubic.eisenstein import OMEGA, EisensteinInt, split_prime
from purecubic.errors import InconsistentInputs, InvalidPrime
from purecubic.symbols import PlaceOfK
from purecubic.pipelines import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    CaseLabel,
    RamifiedPlaceData,
    beta_element,
    chevalley_order,
    classify,
    consistency_hK,
    gauss_sum,
    lambda_embeddings,
    m_kummer_generator,
    rho_map,
    solve_chevalley_base,
    verify_A_M,
    verify_main,
    verify_norm_equation_criterion,
    verify_schoof_symbols,
    verify_theorem2,
)

MAIN_BELOW_500 = [61, 67, 103, 151, 193, 367, 439, 499]


def _rho_w_oracle(p):
    # (w, p) at lambda = minus the tame symbols at alpha and alpha_bar: -(p-1)/3 mod 3
    return (-((p - 1) // 3)) % 3


@pytest.mark.parametrize("p", [p for p in primerange(2, 400) if p != 3])
def test_classify_matches_brute_force(p):
    assert classify(p).value == case_by_brute_force(p)


def test_classify_rejects_non_primes():
    for n in (1, 3, 9, 91):
        with pytest.raises(InvalidPrime):
            classify(n)


def test_main_case_primes_below_500():
    main = [p for p in primerange(5, 500) if classify(p) is CaseLabel.CASE_MAIN]
    assert main == MAIN_BELOW_500
    assert all(3 in cubes_mod(p) for p in main)


# -- Chevalley ---------------------------------------------------------------

def test_chevalley_examples():
    lam = [RamifiedPlaceData(f"l{i}", 3) for i in range(3)]
    assert chevalley_order(1, 3, lam, 3).result == 3
    assert chevalley_order(1, 3, lam + [RamifiedPlaceData("P", 1, 1, in_S=True)], 9).result == 1
    assert chevalley_order(1, 3, [RamifiedPlaceData("a", 3), RamifiedPlaceData("b", 3)], 3).result == 1
    assert chevalley_order(3, 3, [], 1).result == 1
    assert solve_chevalley_base(3, 3, [], 1) == 9
    assert solve_chevalley_base(1, 3, [RamifiedPlaceData("P'", 1, 1, in_S=True)], 1) == 3


def test_chevalley_rejects_inconsistent_inputs():
    with pytest.raises(InconsistentInputs):
        chevalley_order(1, 3, [RamifiedPlaceData("a", 3)], 9)
    with pytest.raises(InconsistentInputs):
        chevalley_order(0, 3, [], 1)
    with pytest.raises(InconsistentInputs):
        RamifiedPlaceData("bad", 0)
    with pytest.raises(InconsistentInputs):
        solve_chevalley_base(1, 3, [RamifiedPlaceData("a", 9)], 1)


@given(st.integers(0, 4), st.integers(0, 3), st.integers(0, 2))
def test_chevalley_round_trip(k, places, idx):
    base = 3**k
    data = [RamifiedPlaceData(f"v{i}", 3) for i in range(places)]
    try:
        cert = chevalley_order(base, 3, data, 3**idx)
    except InconsistentInputs:
        assert (base * 3**places) % 3 ** (idx + 1)
        return
    assert solve_chevalley_base(cert.result, 3, data, 3**idx) == base


# -- rho ---------------------------------------------------------------------

@pytest.fixture(scope="module")
def embs61():
    return lambda_embeddings(61)


def test_rho_examples(embs61):
    assert rho_map([OMEGA], 61, embs61).order == 3
    assert rho_map([EisensteinInt(8)], 61, embs61).order == 1
    assert rho_map([OMEGA, beta_element(61)], 61, embs61).order == 9
    a, ab = split_prime(61)
    assert rho_map([OMEGA], 61 * a, [PlaceOfK.of(a), PlaceOfK.of(ab)]).order == 3


def test_lambda_embeddings_are_distinct_cyclic_shifts(embs61):
    imgs = [e.images for e in embs61]
    assert len(set(imgs)) == 3
    first = imgs[0]
    shifts = {first[i:] + first[:i] for i in range(3)}
    assert set(imgs) == shifts


@pytest.mark.parametrize("p", [61, 67, 103])
def test_kummer_generator(p):
    alpha, _ = m_kummer_generator(p)
    assert alpha.norm() == p
    g = gauss_sum(p)
    assert (g**3).scalar_value() == alpha * p
    assert beta_element(p).norm() == alpha


# -- pipelines -----------------------------------------------------------------

@pytest.mark.parametrize("p", [p for p in primerange(5, 200) if p % 3 == 1])
def test_verify_A_M_exhaustive(p):
    cert = verify_A_M(p)
    assert cert.passed, cert.failures
    assert cert.computed_values["A_M_G_order"] == (3 if p % 9 == 1 else 1)
    # symbol at alpha equals the power residue of w, by square-and-multiply
    alpha, _ = split_prime(p)
    assert cert.computed_values["symbol_w_palpha_at_alpha"].exponent == brute_cubic_char(OMEGA, alpha)


@pytest.mark.parametrize("p", [61, 67])
def test_theorem2(p):
    cert = verify_theorem2(p)
    assert cert.verdict == PASS, cert.failures
    cv = cert.computed_values
    assert cv["rho_w"] == [_rho_w_oracle(p)] * 3
    assert sorted(cv["beta_symbols"]) == [0, 1, 2]
    assert cv["beta_symbols_hensel"] == [0, 1, 2]
    assert cv["A_L_G_order"] == 3
    assert cv["index_S"] == 9
    assert cv["chevalley_S_P"]["result"] == 1


@pytest.mark.slow
@pytest.mark.parametrize("p", MAIN_BELOW_500)
def test_theorem2_all_main_primes_below_500(p):
    cert = verify_theorem2(p)
    assert cert.passed, cert.failures
    assert cert.computed_values["rho_w"] == [_rho_w_oracle(p)] * 3


def test_theorem2_rejects_other_cases():
    for p in (7, 13, 19, 5):
        with pytest.raises(InvalidPrime):
            verify_theorem2(p)


def test_verify_main_without_class_groups():
    cert = verify_main(103)
    assert cert.passed, cert.failures
    cv = cert.computed_values
    assert cv["lower_bound"] == cv["upper_bound"] == 9
    assert cv["A_F"] == [3] and cv["A_K"] == [3, 3]
    with pytest.raises(InvalidPrime):
        verify_main(13)


def test_verify_main_with_class_group():
    cert = verify_main(61, with_class_groups=True)
    assert cert.passed, cert.failures
    assert cert.computed_values["class_group_F"]["invariants"] == [6]


@pytest.mark.parametrize("p", [7, 13, 61, 67, 43])
def test_schoof_symbols(p):
    cert = verify_schoof_symbols(p)
    assert cert.passed, cert.failures


def test_schoof_symbols_rejects_case3_and_case1():
    for p in (19, 37, 5):
        with pytest.raises(InvalidPrime):
            verify_schoof_symbols(p)


def test_consistency_hK():
    assert consistency_hK(61, 3, 9).computed_values["q"] == 3
    assert consistency_hK(61, 6, 36).computed_values["q"] == 3
    assert consistency_hK(7, 3, 3).computed_values["q"] == 1
    assert consistency_hK(7, 3, 3).verdict == PASS
    assert consistency_hK(61, 3, 3).verdict == FAIL
    incomplete = consistency_hK(61, 3, None)
    assert incomplete.verdict == INCONCLUSIVE
    assert incomplete.computed_values["status"] == "incomplete"
    with pytest.raises(InconsistentInputs):
        consistency_hK(61, 3, 81)
    with pytest.raises(InconsistentInputs):
        consistency_hK(61, 9, 1)


@pytest.mark.parametrize("p", [61, 67, 7, 13, 31, 43])
def test_norm_equation_criterion(p):
    cert = verify_norm_equation_criterion(p)
    assert cert.passed, cert.failures
    assert cert.computed_values["three_is_cube"] == (classify(p) is CaseLabel.CASE_MAIN)


def test_certificate_json():
    cert = verify_theorem2(61, with_units=False)
    doc = json.loads(cert.to_json())
    assert doc["verdict"] == "pass"
    assert doc["p"] == 61
    assert any(f.startswith("unramified-splitting") for f in doc["assumed_facts"])
    assert doc["computed_values"]["alpha_of_M"] == [-4, -9]


def test_inputs_must_be_prime():
    assert not isprime(91)
    with pytest.raises(InvalidPrime):
        verify_A_M(91)
