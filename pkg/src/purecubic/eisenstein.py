"""Exact arithmetic in the Eisenstein integers Z[w], w^2 + w + 1 = 0.

Elements are written ``a + b*w``.  The module also provides the splitting
``p = alpha * conj(alpha)`` of primes p = 1 mod 3 and the cubic residue
character of a prime element.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Union

from sympy import factorint, isprime
from sympy.ntheory import sqrt_mod

from .errors import (
    BadModulus,
    FactorizationTooHard,
    InvalidPrime,
    NotCoprime,
    ZeroArgument,
)

#: Largest norm ``factor`` will hand to the integer factoring backend.
DEFAULT_FACTOR_BUDGET = 10**30


@dataclass(frozen=True, order=True)
class EisensteinInt:
    a: int
    b: int = 0

    # -- construction -------------------------------------------------
    @classmethod
    def coerce(cls, x: Union["EisensteinInt", int]) -> "EisensteinInt":
        if isinstance(x, EisensteinInt):
            return x
        if isinstance(x, int):
            return cls(x, 0)
        raise TypeError(f"cannot coerce {type(x).__name__} to EisensteinInt")

    def __repr__(self) -> str:
        return f"EisensteinInt({self.a}, {self.b})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        return f"{self.a}{self.b:+}w"

    # -- ring operations ----------------------------------------------
    def __add__(self, other):
        if isinstance(other, int):
            return EisensteinInt(self.a + other, self.b)
        if isinstance(other, EisensteinInt):
            return EisensteinInt(self.a + other.a, self.b + other.b)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> "EisensteinInt":
        return EisensteinInt(-self.a, -self.b)

    def __sub__(self, other):
        if isinstance(other, (int, EisensteinInt)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, int):
            return EisensteinInt(other - self.a, -self.b)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, int):
            return EisensteinInt(self.a * other, self.b * other)
        if isinstance(other, EisensteinInt):
            a, b, c, d = self.a, self.b, other.a, other.b
            bd = b * d
            return EisensteinInt(a * c - bd, a * d + b * c - bd)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "EisensteinInt":
        if e < 0:
            raise ValueError("negative powers are not defined in Z[w]")
        result, base = ONE, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conjugate(self) -> "EisensteinInt":
        # conj(w) = w^2 = -1 - w
        return EisensteinInt(self.a - self.b, -self.b)

    def norm(self) -> int:
        return self.a * self.a - self.a * self.b + self.b * self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def is_rational(self) -> bool:
        return self.b == 0

    # -- division -----------------------------------------------------
    def divmod(self, other: "EisensteinInt") -> tuple["EisensteinInt", "EisensteinInt"]:
        """Euclidean division with remainder of norm < norm(other)."""
        other = EisensteinInt.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero in Z[w]")
        n = other.norm()
        num = self * other.conjugate()
        q = EisensteinInt(_round_div(num.a, n), _round_div(num.b, n))
        return q, self - q * other

    def exact_div(self, other) -> "EisensteinInt":
        other = EisensteinInt.coerce(other)
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def divides(self, other) -> bool:
        other = EisensteinInt.coerce(other)
        if self.is_zero():
            return other.is_zero()
        return other.divmod(self)[1].is_zero()

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def reduce_mod(self, m: int) -> "EisensteinInt":
        """Coefficientwise reduction into [0, m)."""
        return EisensteinInt(self.a % m, self.b % m)


ZERO = EisensteinInt(0, 0)
ONE = EisensteinInt(1, 0)
OMEGA = EisensteinInt(0, 1)
OMEGA2 = EisensteinInt(-1, -1)
LAMBDA = EisensteinInt(1, -1)  # 1 - w, the unique prime over 3
UNITS = (ONE, OMEGA, OMEGA2, -ONE, -OMEGA, -OMEGA2)


def _round_div(n: int, d: int) -> int:
    # nearest integer to n/d for d > 0
    return (2 * n + d) // (2 * d)


def norm(z: EisensteinInt | int) -> int:
    return EisensteinInt.coerce(z).norm()


def unit_exponent(u: EisensteinInt) -> tuple[int, int]:
    """Return (s, k) with u = (-1)^s * w^k."""
    for s in (0, 1):
        for k in range(3):
            if (-1) ** s * OMEGA**k == u:
                return s, k
    raise ValueError(f"{u} is not a unit")


def is_primary(z: EisensteinInt) -> bool:
    return z.a % 3 == 1 and z.b % 3 == 0


def lambda_valuation(z: EisensteinInt) -> tuple[int, EisensteinInt]:
    """Split z = lambda^v * w with lambda not dividing w."""
    if z.is_zero():
        raise ZeroArgument("valuation of zero")
    v = 0
    while (z.a + z.b) % 3 == 0:
        # z / (1 - w) = z * (2 + w) / 3
        t = z * EisensteinInt(2, 1)
        z = EisensteinInt(t.a // 3, t.b // 3)
        v += 1
    return v, z


def primary_associate(z: EisensteinInt) -> EisensteinInt:
    """The associate of z (coprime to 3) congruent to 1 mod 3."""
    for u in UNITS:
        w = u * z
        if is_primary(w):
            return w
    raise ValueError(f"{z} is divisible by 1 - w and has no primary associate")


def normalize(z: EisensteinInt) -> EisensteinInt:
    """Canonical associate: lambda^v times the primary associate of the rest."""
    if z.is_zero():
        return z
    v, w = lambda_valuation(z)
    return LAMBDA**v * primary_associate(w)


def gcd(z: EisensteinInt | int, w: EisensteinInt | int) -> EisensteinInt:
    z, w = EisensteinInt.coerce(z), EisensteinInt.coerce(w)
    while not w.is_zero():
        z, w = w, z.divmod(w)[1]
    return normalize(z)


@lru_cache(maxsize=4096)
def split_prime(p: int) -> tuple[EisensteinInt, EisensteinInt]:
    """Return (alpha, conj(alpha)) with alpha * conj(alpha) = p.

    alpha is primary (a = 1 mod 3, b = 0 mod 3) with b > 0, which pins it
    down among the twelve elements of norm p.
    """
    if not isprime(p) or p % 3 != 1:
        raise InvalidPrime(f"{p} is not a prime congruent to 1 mod 3")
    s = sqrt_mod(-3, p)
    r = (s - 1) * pow(2, -1, p) % p  # root of x^2 + x + 1 mod p
    pi = gcd(p, OMEGA - r)
    if pi.norm() != p:
        raise AssertionError(f"gcd route failed for {p}")
    pi = primary_associate(pi)
    if pi.b < 0:
        pi = pi.conjugate()
    return pi, pi.conjugate()


def _omega_image(pi: EisensteinInt, q: int) -> int:
    """Image of w in Z[w]/pi = F_q for pi of prime norm q."""
    return -pi.a * pow(pi.b, -1, q) % q


def _check_prime_element(pi: EisensteinInt) -> int:
    q = pi.norm()
    if q % 3 != 1 or not isprime(q):
        raise BadModulus(f"norm({pi}) = {q} is not a prime congruent to 1 mod 3")
    return q


def cubic_char(a: EisensteinInt | int, pi: EisensteinInt) -> "SymbolValue":
    """Cubic residue character: a^((N pi - 1)/3) = w^e mod pi."""
    a = EisensteinInt.coerce(a)
    q = _check_prime_element(pi)
    r = _omega_image(pi, q)
    x = (a.a + a.b * r) % q
    if x == 0:
        raise NotCoprime(f"{pi} divides {a}")
    t = pow(x, (q - 1) // 3, q)
    for e, root in enumerate((1, r, r * r % q)):
        if t == root:
            return SymbolValue(e)
    raise AssertionError("power residue is not a cube root of unity")


def _pow_mod(z: EisensteinInt, e: int, m: int) -> EisensteinInt:
    result, base = ONE, z.reduce_mod(m)
    while e:
        if e & 1:
            result = (result * base).reduce_mod(m)
        base = (base * base).reduce_mod(m)
        e >>= 1
    return result


def inert_char(a: EisensteinInt | int, q: int) -> "SymbolValue":
    """Cubic residue character modulo an inert rational prime q = 2 mod 3.

    The residue field is F_{q^2}, which contains the cube roots of unity.
    """
    a = EisensteinInt.coerce(a)
    if q % 3 != 2 or not isprime(q):
        raise BadModulus(f"{q} is not an inert rational prime")
    if a.a % q == 0 and a.b % q == 0:
        raise NotCoprime(f"{q} divides {a}")
    t = _pow_mod(a, (q * q - 1) // 3, q)
    for e, root in enumerate((ONE, OMEGA, OMEGA2)):
        if t == root.reduce_mod(q):
            return SymbolValue(e)
    raise AssertionError("power residue is not a cube root of unity")


def residue_char(a: EisensteinInt | int, pi: EisensteinInt) -> "SymbolValue":
    """Cubic character for any prime pi not above 3 (split or inert)."""
    if pi.b == 0 and abs(pi.a) % 3 == 2:
        return inert_char(a, abs(pi.a))
    return cubic_char(a, pi)


def is_cube_mod_p(a: int, p: int) -> bool:
    if not isprime(p) or p % 3 != 1:
        raise InvalidPrime(f"{p} is not a prime congruent to 1 mod 3")
    if a % p == 0:
        raise NotCoprime(f"{p} divides {a}")
    return pow(a, (p - 1) // 3, p) == 1


def rational_prime_places(q: int) -> list[EisensteinInt]:
    """Normalized prime elements of Z[w] above the rational prime q."""
    if q == 3:
        return [LAMBDA]
    if q % 3 == 2:
        return [primary_associate(EisensteinInt(q))]
    alpha, alpha_bar = split_prime(q)
    return [alpha, alpha_bar]


def valuation(z: EisensteinInt, pi: EisensteinInt) -> tuple[int, EisensteinInt]:
    """Split z = pi^v * w with pi not dividing w."""
    if z.is_zero():
        raise ZeroArgument("valuation of zero")
    v = 0
    while True:
        q, r = z.divmod(pi)
        if not r.is_zero():
            return v, z
        z, v = q, v + 1


@dataclass(frozen=True)
class Factorization:
    unit: EisensteinInt
    factors: tuple[tuple[EisensteinInt, int], ...]

    def __iter__(self) -> Iterator[tuple[EisensteinInt, int]]:
        return iter(self.factors)

    def expand(self) -> EisensteinInt:
        z = self.unit
        for pi, e in self.factors:
            z = z * pi**e
        return z

    def primes(self) -> list[EisensteinInt]:
        return [pi for pi, _ in self.factors]


def factor(z: EisensteinInt | int, budget: int = DEFAULT_FACTOR_BUDGET) -> Factorization:
    """Factor z into an explicit unit times normalized primes."""
    z = EisensteinInt.coerce(z)
    if z.is_zero():
        raise ZeroArgument("cannot factor zero")
    n = z.norm()
    if n > budget:
        raise FactorizationTooHard(f"norm {n} exceeds factoring budget {budget}")
    rest = z
    factors = []
    for q in sorted(factorint(n)):
        for pi in rational_prime_places(q):
            v, rest = valuation(rest, pi)
            if v:
                factors.append((pi, v))
    if not rest.is_unit():
        raise AssertionError(f"incomplete factorization of {z}")
    return Factorization(rest, tuple(factors))


@dataclass(frozen=True)
class SymbolValue:
    """A cube root of unity w^exponent, stored additively."""

    exponent: int

    def __post_init__(self):
        object.__setattr__(self, "exponent", self.exponent % 3)

    def __add__(self, other: "SymbolValue") -> "SymbolValue":
        return SymbolValue(self.exponent + other.exponent)

    def __sub__(self, other: "SymbolValue") -> "SymbolValue":
        return SymbolValue(self.exponent - other.exponent)

    def __neg__(self) -> "SymbolValue":
        return SymbolValue(-self.exponent)

    def __mul__(self, k: int) -> "SymbolValue":
        return SymbolValue(self.exponent * k)

    __rmul__ = __mul__

    def is_trivial(self) -> bool:
        return self.exponent == 0

    def __int__(self) -> int:
        return self.exponent

    def __repr__(self) -> str:
        return f"SymbolValue({self.exponent})"


TRIVIAL = SymbolValue(0)
