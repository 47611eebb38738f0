"""Truncated arithmetic in Q_3(w) (uniformizer lambda = 1 - w) and in Q_p.

A ``LocalNumber`` is ``lambda^valuation * unit`` (or ``p^valuation * unit``)
where the unit is known modulo 3^precision (resp. p^precision).  Precision is
always the exponent of the residue modulus of the unit part.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Union


from .cyclotomic import period_polynomial
from .eisenstein import EisensteinInt, lambda_valuation, split_prime, valuation
from .errors import NotAUnit, PrecisionExhausted, ZeroArgument

LAMBDA_ADIC = "lambda"
P_ADIC = "padic"

#: Default working precision: units are carried modulo 3^6.
DEFAULT_PRECISION = 6

Residue = Union[tuple[int, int], int]


def _emul(x: tuple[int, int], y: tuple[int, int], m: int) -> tuple[int, int]:
    a, b = x
    c, d = y
    bd = b * d
    return (a * c - bd) % m, (a * d + b * c - bd) % m


def _epow(x: tuple[int, int], e: int, m: int) -> tuple[int, int]:
    result, base = (1 % m, 0), (x[0] % m, x[1] % m)
    while e:
        if e & 1:
            result = _emul(result, base, m)
        base = _emul(base, base, m)
        e >>= 1
    return result


def _einv(x: tuple[int, int], m: int) -> tuple[int, int]:
    """Inverse of a lambda-unit modulo m = 3^N via the norm."""
    a, b = x
    n = (a * a - a * b + b * b) % m
    ninv = pow(n, -1, m)
    return (a - b) * ninv % m, -b * ninv % m


def _is_lambda_unit(x: tuple[int, int]) -> bool:
    return (x[0] + x[1]) % 3 != 0


def _div_lambda(x: tuple[int, int]) -> tuple[int, int]:
    # x / (1 - w) = x * (2 + w) / 3, exact on representatives once lambda | x
    a, b = x
    return (2 * a - b) // 3, (a + b) // 3


@dataclass(frozen=True)
class LocalNumber:
    base: str
    prime: int
    unit: Residue
    valuation: int
    precision: int

    def __post_init__(self):
        m = self.modulus
        if self.base == LAMBDA_ADIC:
            u = (self.unit[0] % m, self.unit[1] % m)  # type: ignore[index]
            if not _is_lambda_unit(u):
                raise NotAUnit(f"{u} is divisible by lambda")
        else:
            u = self.unit % m  # type: ignore[operator]
            if u % self.prime == 0:
                raise NotAUnit(f"{u} is divisible by {self.prime}")
        object.__setattr__(self, "unit", u)

    @property
    def modulus(self) -> int:
        return self.prime**self.precision

    # -- constructors ---------------------------------------------------
    @classmethod
    def from_residue(cls, x: Residue, precision: int, base: str = LAMBDA_ADIC, prime: int = 3) -> "LocalNumber":
        """Build from an absolute residue modulo prime^precision, extracting the valuation.

        Extracting lambda^v costs precision: the unit is only known modulo
        lambda^(2N - v), which is rounded down to a power of 3.
        """
        if base == LAMBDA_ADIC:
            m = 3**precision
            x = (x[0] % m, x[1] % m)  # type: ignore[index]
            v = 0
            while not _is_lambda_unit(x):
                if v >= 2 * precision - 1:
                    raise PrecisionExhausted("residue is zero to the stated precision")
                x = _div_lambda(x)
                v += 1
            new_prec = precision - (v + 1) // 2
            return cls(base, 3, x, v, new_prec)
        m = prime**precision
        x = x % m  # type: ignore[operator]
        if x == 0:
            raise PrecisionExhausted("residue is zero to the stated precision")
        v = 0
        while x % prime == 0:
            x //= prime
            v += 1
        return cls(base, prime, x, v, precision - v)

    # -- arithmetic -----------------------------------------------------
    def _check_compatible(self, other: "LocalNumber") -> None:
        if self.base != other.base or self.prime != other.prime:
            raise ValueError("local numbers live in different fields")

    def __mul__(self, other: "LocalNumber") -> "LocalNumber":
        self._check_compatible(other)
        n = min(self.precision, other.precision)
        m = self.prime**n
        if self.base == LAMBDA_ADIC:
            u = _emul(self.unit, other.unit, m)  # type: ignore[arg-type]
        else:
            u = self.unit * other.unit % m  # type: ignore[operator]
        return LocalNumber(self.base, self.prime, u, self.valuation + other.valuation, n)

    def inverse(self) -> "LocalNumber":
        m = self.modulus
        if self.base == LAMBDA_ADIC:
            u = _einv(self.unit, m)  # type: ignore[arg-type]
        else:
            u = pow(self.unit, -1, m)  # type: ignore[arg-type]
        return LocalNumber(self.base, self.prime, u, -self.valuation, self.precision)

    def __truediv__(self, other: "LocalNumber") -> "LocalNumber":
        return self * other.inverse()

    def __pow__(self, e: int) -> "LocalNumber":
        if e < 0:
            return self.inverse() ** (-e)
        m = self.modulus
        if self.base == LAMBDA_ADIC:
            u = _epow(self.unit, e, m)  # type: ignore[arg-type]
        else:
            u = pow(self.unit, e, m)  # type: ignore[arg-type]
        return LocalNumber(self.base, self.prime, u, self.valuation * e, self.precision)

    def unit_part(self) -> "LocalNumber":
        return LocalNumber(self.base, self.prime, self.unit, 0, self.precision)

    def residue(self) -> Residue:
        """Absolute residue of a non-negative-valuation element, modulo prime^precision."""
        if self.valuation < 0:
            raise ValueError("element is not integral")
        m = self.modulus
        if self.base == LAMBDA_ADIC:
            lam_v = _epow((1, -1), self.valuation, m)
            return _emul(self.unit, lam_v, m)  # type: ignore[arg-type]
        return self.unit * self.prime**self.valuation % m  # type: ignore[operator]

    def residue_mod9(self) -> tuple[int, int]:
        if self.base != LAMBDA_ADIC or self.precision < 2:
            raise PrecisionExhausted("need a lambda-adic unit known modulo 9")
        return self.unit[0] % 9, self.unit[1] % 9  # type: ignore[index]

    def equals(self, other: "LocalNumber", precision: int | None = None) -> bool:
        """Equality to the common (or given) precision."""
        self._check_compatible(other)
        if self.valuation != other.valuation:
            return False
        n = min(self.precision, other.precision)
        if precision is not None:
            n = min(n, precision)
        m = self.prime**n
        if self.base == LAMBDA_ADIC:
            return (self.unit[0] - other.unit[0]) % m == 0 and (self.unit[1] - other.unit[1]) % m == 0  # type: ignore[index]
        return (self.unit - other.unit) % m == 0  # type: ignore[operator]


def lambda_adic(x: Residue | EisensteinInt | int, precision: int = DEFAULT_PRECISION) -> LocalNumber:
    if isinstance(x, (EisensteinInt, int)):
        return embed_eisenstein(x, LAMBDA_ADIC, precision)
    return LocalNumber.from_residue(x, precision)


@lru_cache(maxsize=None)
def padic_omega(p: int, precision: int, pi: EisensteinInt | None = None) -> int:
    """Root of x^2 + x + 1 in Z_p matching the embedding induced by pi (default alpha)."""
    if pi is None:
        pi = split_prime(p)[0]
    r = -pi.a * pow(pi.b, -1, p) % p
    m = p
    for _ in range(precision.bit_length() + 1):
        m = min(m * m, p**precision)
        # Newton step for f(x) = x^2 + x + 1
        r = (r - (r * r + r + 1) * pow(2 * r + 1, -1, m)) % m
    m = p**precision
    assert (r * r + r + 1) % m == 0
    return r % m


def embed_eisenstein(
    z: EisensteinInt | int,
    base: str = LAMBDA_ADIC,
    precision: int = DEFAULT_PRECISION,
    prime: int | None = None,
    pi: EisensteinInt | None = None,
) -> LocalNumber:
    """Embed an exact element of Z[w] into Q_3(w) or into Q_p (via the prime pi over p)."""
    z = EisensteinInt.coerce(z)
    if z.is_zero():
        raise ZeroArgument("cannot embed zero as a local number")
    if base == LAMBDA_ADIC:
        v, w = lambda_valuation(z)
        return LocalNumber(LAMBDA_ADIC, 3, (w.a, w.b), v, precision)
    if prime is None:
        raise ValueError("p-adic embedding needs the prime")
    if pi is None:
        pi = split_prime(prime)[0]
    v_pi, _ = valuation(z, pi)
    work = precision + v_pi
    r = padic_omega(prime, work, pi)
    x = (z.a + z.b * r) % prime**work
    num = LocalNumber.from_residue(x, work, P_ADIC, prime)
    if num.valuation != v_pi:
        raise AssertionError("p-adic valuation disagrees with the pi-adic one")
    return LocalNumber(P_ADIC, prime, num.unit, num.valuation, precision)


@lru_cache(maxsize=None)
def unit_cubes_mod9() -> frozenset[tuple[int, int]]:
    """Image of cubing on the units of Z[w]/9."""
    out = set()
    for a, b in product(range(9), repeat=2):
        if _is_lambda_unit((a, b)):
            out.add(_epow((a, b), 3, 9))
    return frozenset(out)


def is_cube_unit(u: LocalNumber) -> bool:
    """Decide whether a lambda-adic unit is a cube (classes are determined mod 9)."""
    if u.base != LAMBDA_ADIC:
        raise ValueError("is_cube_unit works over Q_3(w)")
    if u.valuation != 0:
        raise NotAUnit("is_cube_unit needs valuation 0")
    return u.residue_mod9() in unit_cubes_mod9()


def is_cube(c: LocalNumber) -> bool:
    return c.valuation % 3 == 0 and is_cube_unit(c.unit_part())


@lru_cache(maxsize=None)
def _seed_table_mod27() -> dict[tuple[int, int], tuple[int, int]]:
    table: dict[tuple[int, int], tuple[int, int]] = {}
    for a, b in product(range(27), repeat=2):
        if _is_lambda_unit((a, b)):
            table.setdefault(_epow((a, b), 3, 27), (a, b))
    return table


def _lambda_cube_root_unit(u: tuple[int, int], precision: int) -> tuple[int, int] | None:
    seed = _seed_table_mod27().get((u[0] % 27, u[1] % 27))
    if seed is None:
        return None
    m = 3 ** (precision + 1)
    x = seed
    k = 3  # x^3 = u mod 3^k
    while k < precision:
        err = _emul(x, x, m)
        err = _emul(err, x, m)
        e = ((err[0] - u[0]) % m, (err[1] - u[1]) % m)
        # delta = e / (3 x^2)
        inv = _einv(_emul(x, x, m), m)
        d = _emul((e[0] // 3, e[1] // 3), inv, m)
        x = ((x[0] - d[0]) % m, (x[1] - d[1]) % m)
        k = 2 * k - 1
    return x


def cube_roots(c: LocalNumber) -> list[LocalNumber]:
    """All three cube roots r, w r, w^2 r in canonical (lexicographic) order, or [] if c is no cube."""
    if c.base == LAMBDA_ADIC:
        if c.valuation % 3 or not is_cube_unit(c.unit_part()):
            return []
        if c.precision < 3:
            raise PrecisionExhausted("cube roots need the unit modulo 27")
        x = _lambda_cube_root_unit(c.unit, c.precision)  # type: ignore[arg-type]
        n = c.precision - 1  # the root is determined modulo 3^(N-1)
        m = 3**n
        roots = []
        w = (0, 1)
        r = x
        for _ in range(3):
            roots.append((r[0] % m, r[1] % m))
            r = _emul(r, w, 3 ** (c.precision + 1))
        roots.sort()
        return [LocalNumber(LAMBDA_ADIC, 3, r, c.valuation // 3, n) for r in roots]
    p = c.prime
    if p == 3:
        raise NotImplementedError("cube roots in Q_3 are not needed")
    if c.valuation % 3:
        return []
    m = c.modulus
    u = c.unit
    roots = []
    for x in (x for x in range(1, p) if (x**3 - u) % p == 0):  # type: ignore[operator]
        mm = p
        while mm < m:
            mm = min(mm * mm, m)
            x = (x - (x**3 - u) * pow(3 * x * x, -1, mm)) % mm  # type: ignore[operator]
        roots.append(x % m)
    return [LocalNumber(P_ADIC, p, r, c.valuation // 3, c.precision) for r in sorted(roots)]


def hensel_cube_root(c: LocalNumber, precision: int | None = None) -> LocalNumber | None:
    """First cube root of c in canonical order, or None if c is not a cube."""
    if precision is not None and precision > c.precision:
        raise PrecisionExhausted(f"input only known to 3^{c.precision}")
    roots = cube_roots(c)
    return roots[0] if roots else None


@dataclass(frozen=True)
class NotSplit:
    """3 is inert in M+: the period polynomial has no root mod 3."""

    p: int
    roots_mod_3: tuple[int, ...]


def _zp_roots(coeffs: tuple[int, ...], q: int, precision: int, slack: int) -> list[int]:
    """Roots in Z_q of a separable integer polynomial, as residues mod q^precision.

    Solutions are grown digit by digit; working ``slack`` digits past the
    target absorbs roots that collide modulo small powers of q.
    """

    def f(x, m):
        acc = 0
        for c in coeffs:
            acc = (acc * x + c) % m
        return acc

    work = precision + slack
    sols = [r for r in range(q) if f(r, q) == 0]
    m = q
    for _ in range(1, work):
        nxt = []
        for r in sols:
            for t in range(q):
                x = r + t * m
                if f(x, m * q) == 0:
                    nxt.append(x)
        sols, m = nxt, m * q
    target = q**precision
    return sorted({r % target for r in sols})


def lift_period_roots(p: int, precision: int = DEFAULT_PRECISION) -> tuple[int, int, int] | NotSplit:
    """Three 3-adic roots of the period polynomial, as residues modulo 3^precision.

    Residues (not ``LocalNumber``) are returned because a root may be
    divisible by 3 and callers need absolute values for embeddings.  When 3
    divides the index of Z[eta_0] the polynomial has a double root mod 3, so
    plain Newton lifting from residues mod 3 is not enough.
    """
    from .cyclotomic import poly_discriminant

    coeffs = period_polynomial(p)
    roots3 = tuple(r for r in range(3) if sum(c * r ** (3 - i) for i, c in enumerate(coeffs)) % 3 == 0)
    if not roots3:
        return NotSplit(p, roots3)
    disc = poly_discriminant(coeffs)
    slack = 1
    while disc % 3**slack == 0:
        slack += 1
    roots = _zp_roots(coeffs, 3, precision, slack)
    if len(roots) != 3:
        return NotSplit(p, roots3)
    return tuple(roots)  # type: ignore[return-value]


def period_root_numbers(p: int, precision: int = DEFAULT_PRECISION) -> list[LocalNumber] | NotSplit:
    """The lifted period roots as 3-adic ``LocalNumber`` values."""
    roots = lift_period_roots(p, precision)
    if isinstance(roots, NotSplit):
        return roots
    return [LocalNumber.from_residue(r, precision, P_ADIC, 3) for r in roots]
