import random
from fractions import Fraction

import sympy
from hypothesis import given
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from purecubic.orders.linalg import (
    det,
    hnf,
    hnf_solve,
    inverse_unimodular,
    lll_gram,
    lll_rows,
    rank_mod,
    right_kernel_mod,
    smith_normal_form,
    solve_mod,
)

vec3 = st.lists(st.integers(-30, 30), min_size=3, max_size=3)


def _mat_mul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def _random_unimodular(n, rng):
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2)
        f = rng.randint(-3, 3)
        U[i] = [x + f * y for x, y in zip(U[i], U[j])]
    return U


@given(st.lists(vec3, min_size=3, max_size=5), st.integers(0, 10**6))
def test_hnf_canonical(rows, seed):
    if sympy.Matrix(rows).rank() < 3:
        return
    H = hnf(rows, 3)
    rng = random.Random(seed)
    U = _random_unimodular(len(rows), rng)
    assert hnf(_mat_mul(U, rows), 3) == H
    assert hnf(H, 3) == H
    # lower triangular, positive diagonal, reduced off-diagonal entries
    for i in range(3):
        assert H[i][i] > 0
        assert all(H[i][j] == 0 for j in range(i + 1, 3))
        assert all(0 <= H[k][i] < H[i][i] for k in range(i + 1, 3))
    for r in rows:
        assert hnf_solve(H, r) is not None


@given(st.lists(vec3, min_size=3, max_size=4))
def test_hnf_modular_agrees(rows):
    if sympy.Matrix(rows).rank() < 3:
        return
    H = hnf(rows, 3)
    D = abs(sympy.Matrix(H).det())
    assert hnf(rows, 3, modulus=D) == H


@given(st.lists(vec3, min_size=3, max_size=3))
def test_det_matches_sympy(rows):
    assert det(rows) == sympy.Matrix(rows).det()


@given(st.lists(st.lists(st.integers(-20, 20), min_size=4, max_size=4), min_size=2, max_size=5))
def test_snf_matches_sympy(rows):
    diag, U, V = smith_normal_form(rows)
    ref = sympy_snf(sympy.Matrix(rows), domain=sympy.ZZ)
    ref_diag = [abs(ref[i, i]) for i in range(min(ref.shape))]
    assert [d for d in diag if d] == [d for d in ref_diag if d]
    D = _mat_mul(_mat_mul(U, rows), V)
    for i, r in enumerate(D):
        for j, x in enumerate(r):
            assert x == (diag[i] if i == j and i < len(diag) else 0)
    assert abs(sympy.Matrix(U).det()) == 1 and abs(sympy.Matrix(V).det()) == 1
    Vi = inverse_unimodular(V)
    assert _mat_mul(V, Vi) == [[int(i == j) for j in range(len(V))] for i in range(len(V))]


def _gram_schmidt(B):
    Bs, mu = [], [[Fraction(0)] * len(B) for _ in B]
    for i, b in enumerate(B):
        v = [Fraction(x) for x in b]
        for j in range(i):
            mu[i][j] = sum(Fraction(x) * y for x, y in zip(b, Bs[j])) / sum(y * y for y in Bs[j])
            v = [x - mu[i][j] * y for x, y in zip(v, Bs[j])]
        Bs.append(v)
    return Bs, mu


def test_lll_reduces_and_preserves_lattice():
    rng = random.Random(3)
    for _ in range(20):
        B = [[rng.randint(-10**6, 10**6) for _ in range(4)] for _ in range(4)]
        if sympy.Matrix(B).det() == 0:
            continue
        R = lll_rows(B)
        assert hnf(R, 4) == hnf(B, 4)
        Bs, mu = _gram_schmidt(R)
        norms = [sum(x * x for x in v) for v in Bs]
        for i in range(1, 4):
            assert all(abs(mu[i][j]) <= Fraction(1, 2) + Fraction(1, 10**9) for j in range(i))
            assert norms[i] >= (Fraction(3, 4) - mu[i][i - 1] ** 2) * norms[i - 1] - Fraction(1, 10**9)


def test_lll_gram_transform():
    B = [[1, 0, 0, 12345], [0, 1, 0, 23456], [0, 0, 1, 34567], [0, 0, 0, 100003]]
    G = _mat_mul(B, [list(c) for c in zip(*B)])
    H = lll_gram(G)
    R = _mat_mul(H, B)
    assert abs(sympy.Matrix(H).det()) == 1
    assert max(sum(x * x for x in r) for r in R) < max(sum(x * x for x in r) for r in B)


def test_mod_p_linear_algebra():
    M = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    assert rank_mod(M, 7) == 2
    for k in right_kernel_mod(M, 3, 7):
        assert all(sum(a * b for a, b in zip(row, k)) % 7 == 0 for row in M)
    x = solve_mod(M, [2, 2, 4], 7)
    assert x is not None
    assert solve_mod(M, [1, 2, 0], 7) is None
    assert [sum(x[i] * M[i][j] for i in range(3)) % 7 for j in range(3)] == [2, 2, 4]
