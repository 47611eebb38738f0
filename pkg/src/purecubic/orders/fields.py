"""The concrete orders used by the pipelines: O_F, O_K and the period field."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath
import sympy

from .ideals import automorphisms
from .order import DEFAULT_DPS, OrderData, _poly_mulmod_frac, maximalize, order_from_polynomial

_x = sympy.Symbol("x")
_c = sympy.Symbol("c")


def pure_cubic_polynomial(m: int) -> sympy.Poly:
    return sympy.Poly(_x**3 - m, _x)


def closure_polynomial(m: int) -> sympy.Poly:
    """Minimal polynomial of cbrt(m) + w (degree 6), by a resultant."""
    return sympy.Poly(sympy.resultant(_c**3 - m, (_x - _c) ** 2 + (_x - _c) + 1, _c), _x)


@lru_cache(maxsize=None)
def pure_cubic_order(m: int, dps: int = DEFAULT_DPS) -> OrderData:
    """Maximal order of Q(cbrt m), maximalized at every q with q^2 | disc."""
    o = order_from_polynomial(pure_cubic_polynomial(m), dps)
    for q, e in sympy.factorint(abs(o.discriminant)).items():
        if e >= 2:
            o = maximalize(o, q)
    return o


@lru_cache(maxsize=None)
def closure_order(m: int, dps: int = DEFAULT_DPS) -> OrderData:
    """Maximal order of K = Q(cbrt m, w) from the power basis of cbrt(m) + w."""
    o = order_from_polynomial(closure_polynomial(m), dps)
    for q, e in sympy.factorint(abs(o.discriminant)).items():
        if e >= 2:
            o = maximalize(o, q)
    return o


def _rationalize(v, bound: int = 10**15) -> Fraction:
    return Fraction(str(mpmath.nstr(mpmath.re(v), 40))).limit_denominator(bound)


def _power_vec_mul(a, b, f):
    return _poly_mulmod_frac(a, b, f)


def closure_omega(K: OrderData, m: int) -> list[Fraction]:
    """w in K on the power basis of theta = cbrt(m) + w, found numerically and verified exactly."""
    n = K.n
    with mpmath.workdps(K.dps):
        roots = []
        for r in K.roots:
            roots.append(r)
            if mpmath.im(r) != 0:
                roots.append(mpmath.conj(r))
        w1 = mpmath.exp(2j * mpmath.pi / 3)
        targets = []
        for r in roots:
            cand = [w1, mpmath.conj(w1)]
            errs = [abs((r - w) ** 3 - m) for w in cand]
            targets.append(cand[0] if errs[0] < errs[1] else cand[1])
        V = mpmath.matrix([[r**j for j in range(n)] for r in roots])
        sol = mpmath.lu_solve(V, mpmath.matrix(targets))
        coeffs = [_rationalize(sol[j]) for j in range(n)]
    f = [Fraction(c) for c in K.poly]
    sq = _power_vec_mul(coeffs, coeffs, f)
    check = [a + b for a, b in zip(sq, coeffs)]
    check[0] += 1
    if any(check):
        raise ArithmeticError("failed to locate w in K")
    return coeffs


@lru_cache(maxsize=None)
def closure_automorphisms(m: int, dps: int = DEFAULT_DPS) -> tuple:
    """The six automorphisms of K as integer matrices on the O_K basis.

    sigma_(a, s): cbrt(m) -> w^a cbrt(m), w -> w^s; index 0 is the identity.
    """
    K = closure_order(m, dps)
    f = [Fraction(c) for c in K.poly]
    n = K.n
    w = closure_omega(K, m)
    theta = [Fraction(int(j == 1)) for j in range(n)]
    one = [Fraction(int(j == 0)) for j in range(n)]
    cube_root = [a - b for a, b in zip(theta, w)]
    w2 = _power_vec_mul(w, w, f)
    wpow = [one, w, w2]
    images = []
    labels = []
    for s in (1, 2):
        for a in range(3):
            img = [x + y for x, y in zip(_power_vec_mul(wpow[a], cube_root, f), wpow[s])]
            images.append(img)
            labels.append((a, s))
    mats = automorphisms(K, images)
    return tuple(zip(labels, mats))


@lru_cache(maxsize=None)
def period_field_order(p: int, dps: int = DEFAULT_DPS) -> OrderData:
    """Maximal order of the cubic subfield of Q(zeta_p), from the period polynomial."""
    from ..cyclotomic import period_polynomial

    o = order_from_polynomial(list(period_polynomial(p)), dps)
    for q, e in sympy.factorint(abs(o.discriminant)).items():
        if e >= 2:
            o = maximalize(o, q)
    return o


__all__ = [
    "closure_automorphisms",
    "closure_omega",
    "closure_order",
    "closure_polynomial",
    "period_field_order",
    "pure_cubic_order",
    "pure_cubic_polynomial",
]
