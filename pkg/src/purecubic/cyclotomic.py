"""Exact arithmetic in Z[x]/Phi_p and in the cubic subfield M+ of Q(zeta_p).

Gaussian periods are labelled by the least primitive root g of p:
``eta_i = sum(zeta^t for t in g^i * H)`` where H is the subgroup of cubes in
(Z/pZ)^*.  The Galois element zeta -> zeta^g sends eta_i to eta_{i+1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Sequence

from sympy import isprime, primitive_root

from .errors import InvalidPrime


def _check(p: int) -> None:
    if not isprime(p) or p % 3 != 1:
        raise InvalidPrime(f"{p} is not a prime congruent to 1 mod 3")


@lru_cache(maxsize=None)
def period_cosets(p: int) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """The three cosets g^i * H of the cubes in (Z/pZ)^*."""
    _check(p)
    g = primitive_root(p)
    cosets: list[list[int]] = [[], [], []]
    x = 1
    for k in range(p - 1):
        cosets[k % 3].append(x)
        x = x * g % p
    return tuple(tuple(sorted(c)) for c in cosets)  # type: ignore[return-value]


@lru_cache(maxsize=None)
def coset_index(p: int) -> tuple[int, ...]:
    """coset_index(p)[t] = i with t in g^i H (index 0 unused)."""
    idx = [-1] * p
    for i, c in enumerate(period_cosets(p)):
        for t in c:
            idx[t] = i
    return tuple(idx)


class CycloElement:
    """Element of Z[zeta_p] on the power basis 1, zeta, ..., zeta^(p-2)."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Sequence[int]):
        if len(coeffs) > p - 1:
            coeffs = _reduce_phi(p, list(coeffs))
        self.p = p
        self.coeffs = tuple(coeffs) + (0,) * (p - 1 - len(coeffs))

    @classmethod
    def zeta_power(cls, p: int, k: int) -> "CycloElement":
        full = [0] * p
        full[k % p] = 1
        return cls(p, _reduce_phi(p, full))

    @classmethod
    def constant(cls, p: int, c: int) -> "CycloElement":
        return cls(p, [c])

    def __eq__(self, other) -> bool:
        return isinstance(other, CycloElement) and self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __repr__(self) -> str:
        return f"CycloElement({self.p}, {list(self.coeffs)})"

    def __add__(self, other: "CycloElement") -> "CycloElement":
        return CycloElement(self.p, [x + y for x, y in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "CycloElement") -> "CycloElement":
        return CycloElement(self.p, [x - y for x, y in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "CycloElement":
        return CycloElement(self.p, [-x for x in self.coeffs])

    def __mul__(self, other):
        p = self.p
        if isinstance(other, int):
            return CycloElement(p, [x * other for x in self.coeffs])
        full = [0] * p
        nz = [(j, y) for j, y in enumerate(other.coeffs) if y]
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in nz:
                    full[(i + j) % p] += x * y
        return CycloElement(p, _reduce_phi(p, full))

    __rmul__ = __mul__

    def galois(self, a: int) -> "CycloElement":
        """The automorphism sigma_a: zeta -> zeta^a."""
        p = self.p
        if a % p == 0:
            raise ValueError("sigma_a needs gcd(a, p) = 1")
        full = [0] * p
        for i, x in enumerate(self.coeffs):
            full[i * a % p] += x
        return CycloElement(p, _reduce_phi(p, full))

    def normal_coords(self) -> list[int]:
        """Coordinates on the integral basis zeta^1, ..., zeta^(p-1) (index 0 unused)."""
        c0 = self.coeffs[0]
        d = [0] * self.p
        for i in range(1, self.p - 1):
            d[i] = self.coeffs[i] - c0
        d[self.p - 1] = -c0
        return d

    def to_period(self) -> "PeriodElement":
        """Rewrite an element of M+ on the period basis; fails off M+."""
        d = self.normal_coords()
        coords = []
        for c in period_cosets(self.p):
            vals = {d[t] for t in c}
            if len(vals) != 1:
                raise ValueError("element is not fixed by the cubes; not in M+")
            coords.append(vals.pop())
        return PeriodElement(self.p, coords)


def _reduce_phi(p: int, full: list[int]) -> list[int]:
    """Reduce a vector of length p (mod x^p - 1) modulo Phi_p."""
    full = full + [0] * (p - len(full)) if len(full) < p else full
    if len(full) > p:
        folded = [0] * p
        for i, x in enumerate(full):
            folded[i % p] += x
        full = folded
    top = full[p - 1]
    return [x - top for x in full[: p - 1]]


def period_as_cyclo(p: int, i: int) -> CycloElement:
    full = [0] * p
    for t in period_cosets(p)[i % 3]:
        full[t] = 1
    return CycloElement(p, _reduce_phi(p, full))


@lru_cache(maxsize=None)
def structure_constants(p: int) -> tuple[tuple[tuple[int, int, int], ...], ...]:
    """c[i][j] = coordinates of eta_i * eta_j on the period basis."""
    cosets = period_cosets(p)
    idx = coset_index(p)
    f = (p - 1) // 3
    table = []
    for i in range(3):
        row = []
        for j in range(3):
            counts = [0, 0, 0]
            zero = 0
            for s in cosets[i]:
                for t in cosets[j]:
                    u = (s + t) % p
                    if u == 0:
                        zero += 1
                    else:
                        counts[idx[u]] += 1
            # the value 1 = -(eta_0 + eta_1 + eta_2)
            row.append(tuple(counts[k] // f - zero for k in range(3)))
        table.append(tuple(row))
    return tuple(table)


class PeriodElement:
    """Element of M+ (or of k*M+) on the basis eta_0, eta_1, eta_2.

    Coordinates may be ints, Fractions or any scalar ring that mixes with
    ints (for instance Eisenstein integers, giving elements of M = k*M+).
    """

    __slots__ = ("p", "coords")

    def __init__(self, p: int, coords: Sequence[Any]):
        self.p = p
        self.coords = tuple(coords)

    @classmethod
    def rational(cls, p: int, c) -> "PeriodElement":
        return cls(p, (-c, -c, -c))

    @classmethod
    def period(cls, p: int, i: int) -> "PeriodElement":
        coords = [0, 0, 0]
        coords[i % 3] = 1
        return cls(p, coords)

    def __repr__(self) -> str:
        return f"PeriodElement({self.p}, {list(self.coords)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PeriodElement) and self.p == other.p and self.coords == other.coords

    def __hash__(self):
        return hash((self.p, self.coords))

    def __add__(self, other):
        if not isinstance(other, PeriodElement):
            other = PeriodElement.rational(self.p, other)
        return PeriodElement(self.p, [x + y for x, y in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self):
        return PeriodElement(self.p, [-x for x in self.coords])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, PeriodElement):
            return PeriodElement(self.p, [x * other for x in self.coords])
        c = structure_constants(self.p)
        out: list[Any] = [0, 0, 0]
        for i, x in enumerate(self.coords):
            if x == 0:
                continue
            for j, y in enumerate(other.coords):
                if y == 0:
                    continue
                xy = x * y
                for k in range(3):
                    if c[i][j][k]:
                        out[k] = out[k] + xy * c[i][j][k]
        return PeriodElement(self.p, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = PeriodElement.rational(self.p, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def shift(self, k: int = 1) -> "PeriodElement":
        """Apply sigma_g^k: eta_i -> eta_{i+k}."""
        k %= 3
        return PeriodElement(self.p, [self.coords[(i - k) % 3] for i in range(3)])

    def is_scalar(self) -> bool:
        return self.coords[0] == self.coords[1] == self.coords[2]

    def scalar_value(self):
        """The value of an element lying in the base ring (all coords equal)."""
        if not self.is_scalar():
            raise ValueError("element is not a scalar")
        return -self.coords[0]

    def norm(self):
        """Norm down to the scalar ring: product of the three conjugates."""
        return (self * self.shift(1) * self.shift(2)).scalar_value()

    def trace(self):
        return -(self.coords[0] + self.coords[1] + self.coords[2])

    def char_poly(self) -> list:
        """Monic characteristic polynomial [1, c2, c1, c0] over the scalar ring."""
        a, b, c = self, self.shift(1), self.shift(2)
        e1 = (a + b + c).scalar_value()
        e2 = (a * b + a * c + b * c).scalar_value()
        e3 = (a * b * c).scalar_value()
        return [1, -e1, e2, -e3]

    def inverse(self) -> "PeriodElement":
        n = self.norm()
        adj = self.shift(1) * self.shift(2)
        return PeriodElement(self.p, [Fraction(x) / n if isinstance(x, int) else x / n for x in adj.coords])

    def evaluate(self, images: Sequence[Any]):
        """sum(coord_i * images[i]); images are the values of eta_0..eta_2."""
        total = 0
        for x, y in zip(self.coords, images):
            total = total + x * y
        return total

    def to_cyclo(self) -> CycloElement:
        out = CycloElement.constant(self.p, 0)
        for i, x in enumerate(self.coords):
            if not isinstance(x, int):
                raise TypeError("only integral rational coordinates convert to Z[zeta]")
            out = out + period_as_cyclo(self.p, i) * x
        return out


def galois_shift(e: PeriodElement) -> PeriodElement:
    return e.shift(1)


@lru_cache(maxsize=None)
def period_polynomial(p: int) -> tuple[int, int, int, int]:
    """Minimal polynomial of eta_0 as (1, c2, c1, c0) for x^3 + c2 x^2 + c1 x + c0."""
    _check(p)
    return tuple(PeriodElement.period(p, 0).char_poly())  # type: ignore[return-value]


def period_polynomial_direct(p: int) -> tuple[int, int, int, int]:
    """Same polynomial expanded inside Z[zeta_p]; an independent route."""
    _check(p)
    etas = [period_as_cyclo(p, i) for i in range(3)]
    one = CycloElement.constant(p, 1)

    def rational(z: CycloElement) -> int:
        if any(z.coeffs[1:]):
            raise AssertionError("symmetric function is not rational")
        return z.coeffs[0]

    e1 = rational(etas[0] + etas[1] + etas[2])
    e2 = rational(etas[0] * etas[1] + etas[0] * etas[2] + etas[1] * etas[2])
    e3 = rational(etas[0] * etas[1] * etas[2] * one)
    return (1, -e1, e2, -e3)


def poly_discriminant(c: Sequence[int]) -> int:
    """Discriminant of the monic cubic x^3 + b x^2 + c x + d."""
    _, b, cc, d = c
    return b * b * cc * cc - 4 * cc**3 - 4 * b**3 * d - 27 * d * d + 18 * b * cc * d


@lru_cache(maxsize=None)
def cyclo_norm_product(p: int) -> CycloElement:
    """prod over cubes t of (1 - zeta^t), computed in Z[zeta_p]."""
    _check(p)
    full_one = CycloElement.constant(p, 1)
    acc = full_one
    for t in period_cosets(p)[0]:
        acc = acc * (full_one - CycloElement.zeta_power(p, t))
    return acc


def cyclo_norm_element(p: int) -> PeriodElement:
    """N_{Q(zeta_p)/M+}(1 - zeta_p) on the period basis."""
    return cyclo_norm_product(p).to_period()
