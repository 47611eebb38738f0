"""Independent reference computations used by the tests.

Nothing here calls the code under test except where noted: the analytic
class number formula needs only a regulator, and brute-force searches replace
closed forms.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import product

from sympy import isprime, primerange

from purecubic.eisenstein import OMEGA, EisensteinInt


def pure_cubic_discriminant(p: int) -> int:
    """Discriminant of Q(cbrt p), p prime: -3 p^2 if p = +-1 mod 9, else -27 p^2."""
    return -3 * p * p if p % 9 in (1, 8) else -27 * p * p


def _local_factor(p: int, q: int) -> float:
    """prod over primes P | q of (1 - N(P)^-1) for Q(cbrt p)."""
    if q == p:
        return 1 - 1 / q
    if q == 3:
        return (1 - 1 / 3) ** 2 if p % 9 in (1, 8) else 1 - 1 / 3
    if q % 3 == 2:
        return (1 - 1 / q) * (1 - q**-2)
    if pow(p % q, (q - 1) // 3, q) == 1:
        return (1 - 1 / q) ** 3
    return 1 - q**-3


def analytic_hR(p: int, limit: int = 200_000) -> float:
    """h R of Q(cbrt p) from the residue of the Dedekind zeta function (truncated Euler product).

    One real and one complex place, two roots of unity:
    h R = w sqrt|d| res / (2^r1 (2 pi)^r2).
    """
    d = abs(pure_cubic_discriminant(p))
    log_res = 0.0
    for q in primerange(2, limit):
        log_res += math.log((1 - 1 / q) / _local_factor(p, q))
    return math.exp(log_res) * math.sqrt(d) * 2 / (2 * 2 * math.pi)


def _reduce(z: EisensteinInt, pi: EisensteinInt) -> EisensteinInt:
    return z.divmod(pi)[1]


def brute_cubic_char(a, pi: EisensteinInt) -> int:
    """Exponent k with a^((N pi - 1)/3) = w^k mod pi, by square-and-multiply in Z[w]."""
    a = EisensteinInt.coerce(a)
    q = pi.norm()
    e = (q - 1) // 3
    t, base = EisensteinInt(1), _reduce(a, pi)
    while e:
        if e & 1:
            t = _reduce(t * base, pi)
        base = _reduce(base * base, pi)
        e >>= 1
    for k in range(3):
        if pi.divides(t - OMEGA**k):
            return k
    raise AssertionError("not a cube root of unity")


def brute_is_cube(a, pi: EisensteinInt) -> bool:
    """Exhaustive search for x with x^3 = a mod pi over a full residue system."""
    a = EisensteinInt.coerce(a)
    q = pi.norm()
    if pi.b == 0:  # inert: residues a + b w with 0 <= a, b < |pi|
        return a.reduce_mod(abs(pi.a)) in _inert_cubes(abs(pi.a))
    else:
        reps = (EisensteinInt(x) for x in range(q))
    return any(pi.divides(x**3 - a) for x in reps)


@lru_cache(maxsize=None)
def _inert_cubes(q: int) -> frozenset:
    return frozenset((EisensteinInt(x, y) ** 3).reduce_mod(q) for x, y in product(range(q), repeat=2))


def brute_norm_equation(p: int, t: int, box: int) -> tuple[int, int, int] | None:
    """Smallest-box search for x1^3 + p x2^3 + p^2 x3^3 - 3p x1 x2 x3 = t."""
    rng = range(-box, box + 1)
    for x2, x3 in product(rng, rng):
        # the form is a monic cubic in x1; scan x1 near the real root
        for x1 in rng:
            if x1**3 + p * x2**3 + p * p * x3**3 - 3 * p * x1 * x2 * x3 == t:
                return (x1, x2, x3)
    return None


def cubes_mod(p: int) -> set[int]:
    return {pow(x, 3, p) for x in range(1, p)}


def case_by_brute_force(p: int) -> str:
    assert isprime(p) and p != 3
    if p % 3 == 2:
        return "Case1"
    if p % 9 == 1:
        return "Case3"
    return "CaseMain" if 3 % p in cubes_mod(p) else "Case4"
