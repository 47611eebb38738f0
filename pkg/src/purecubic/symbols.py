"""Cubic Hilbert symbols over k = Q(w) and its completion at lambda = 1 - w.

Orientation: at a place v away from 3 with residue character chi_v,

    (a, b)_v = chi_v((-1)^(v(a) v(b)) * b^v(a) / a^v(b)),

so that (w, p*alpha)_(alpha) = w^((p-1)/3).  The symbol at lambda is defined
through the product formula (k has no real places).  Values are returned as
``SymbolValue`` exponents of w.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .eisenstein import (
    LAMBDA,
    DEFAULT_FACTOR_BUDGET,
    EisensteinInt,
    SymbolValue,
    TRIVIAL,
    factor,
    normalize,
    rational_prime_places,
    residue_char,
    valuation,
)
from .errors import LiftSearchFailed, PrecisionExhausted, ZeroArgument
from .localfield import LAMBDA_ADIC, LocalNumber, embed_eisenstein

SPLIT = "split"
INERT = "inert"
WILD = "lambda"


@dataclass(frozen=True)
class PlaceOfK:
    kind: str
    generator: EisensteinInt

    @classmethod
    def of(cls, pi: EisensteinInt) -> "PlaceOfK":
        pi = normalize(EisensteinInt.coerce(pi))
        n = pi.norm()
        if n == 3:
            return cls(WILD, pi)
        if n % 3 == 1 and pi.b != 0:
            return cls(SPLIT, pi)
        if pi.b == 0 and abs(pi.a) % 3 == 2:
            return cls(INERT, pi)
        raise ValueError(f"{pi} does not generate a prime of Z[w]")

    @property
    def residue_size(self) -> int:
        return self.generator.norm()

    def conjugate(self) -> "PlaceOfK":
        return PlaceOfK.of(self.generator.conjugate())

    def __str__(self) -> str:
        return f"({self.generator})"


LAMBDA_PLACE = PlaceOfK(WILD, LAMBDA)


def _coerce_place(v) -> PlaceOfK:
    return v if isinstance(v, PlaceOfK) else PlaceOfK.of(v)


def tame_symbol(a, b, v) -> SymbolValue:
    a, b = EisensteinInt.coerce(a), EisensteinInt.coerce(b)
    if a.is_zero() or b.is_zero():
        raise ZeroArgument("Hilbert symbol of zero")
    v = _coerce_place(v)
    if v.kind == WILD:
        raise ValueError("tame_symbol is for places away from 3; use wild_symbol")
    va, a0 = valuation(a, v.generator)
    vb, b0 = valuation(b, v.generator)
    if va == 0 and vb == 0:
        return TRIVIAL
    # (-1) is a cube, so the sign in the tame formula never matters
    return residue_char(b0, v.generator) * va - residue_char(a0, v.generator) * vb


def places_dividing(*elements: EisensteinInt, budget: int = DEFAULT_FACTOR_BUDGET) -> list[PlaceOfK]:
    seen: dict[EisensteinInt, PlaceOfK] = {}
    for z in elements:
        for pi, _ in factor(z, budget):
            if pi not in seen:
                seen[pi] = PlaceOfK.of(pi)
    return sorted(seen.values(), key=lambda pl: (pl.residue_size, pl.generator))


def wild_symbol(a, b, budget: int = DEFAULT_FACTOR_BUDGET) -> SymbolValue:
    """(a, b) at lambda, minus the sum of all tame symbols."""
    a, b = EisensteinInt.coerce(a), EisensteinInt.coerce(b)
    if a.is_zero() or b.is_zero():
        raise ZeroArgument("Hilbert symbol of zero")
    total = TRIVIAL
    for pl in places_dividing(a, b, budget=budget):
        if pl.kind != WILD:
            total = total + tame_symbol(a, b, pl)
    return -total


def hilbert_symbol(a, b, v) -> SymbolValue:
    v = _coerce_place(v)
    if v.kind == WILD:
        return wild_symbol(a, b)
    return tame_symbol(a, b, v)


def symbol_profile(a, b) -> dict[PlaceOfK, SymbolValue]:
    """All places where (a, b) can be non-trivial, with their values."""
    a, b = EisensteinInt.coerce(a), EisensteinInt.coerce(b)
    out = {LAMBDA_PLACE: wild_symbol(a, b)}
    for pl in places_dividing(a, b):
        if pl.kind != WILD:
            out[pl] = tame_symbol(a, b, pl)
    return out


# -- symbols of local numbers at lambda -----------------------------------

def _centered(x: int, m: int) -> int:
    x %= m
    return x - m if x > m // 2 else x


def lift_unit(u: LocalNumber, offset: int = 0, radius: int = 4) -> EisensteinInt:
    """A global element congruent to the lambda-adic unit u modulo 9.

    ``offset`` selects among distinct lifts (``offset = 0`` is the smallest
    one); the symbol at lambda does not depend on the choice because units
    congruent to 1 mod 9 are cubes.
    """
    if u.base != LAMBDA_ADIC:
        raise ValueError("lift_unit works over Q_3(w)")
    if u.valuation != 0:
        raise ValueError("lift_unit needs a unit")
    x, y = u.residue_mod9()
    base = EisensteinInt(_centered(x, 9), _centered(y, 9))
    if offset == 0:
        return base
    shifts = [(s, t) for s, t in product(range(-radius, radius + 1), repeat=2) if (s, t) != (0, 0)]
    shifts.sort(key=lambda st: (abs(st[0]) + abs(st[1]), st))
    if offset > len(shifts):
        raise LiftSearchFailed(f"no lift number {offset} within radius {radius}")
    s, t = shifts[offset - 1]
    return base + EisensteinInt(9 * s, 9 * t)


def wild_symbol_local(a: LocalNumber, b: LocalNumber, offset: int = 0) -> SymbolValue:
    """Symbol at lambda of two elements of Q_3(w).

    a = lambda^m u and b = lambda^n w split by bilinearity; (lambda, lambda)
    vanishes because (lambda, -lambda) does and -1 is a cube.
    """
    for x in (a, b):
        if x.base != LAMBDA_ADIC:
            raise ValueError("wild_symbol_local works over Q_3(w)")
        if x.precision < 2:
            raise PrecisionExhausted("symbol classes need units modulo 9")
    u = lift_unit(a.unit_part(), offset)
    w = lift_unit(b.unit_part(), offset)
    total = wild_symbol(u, w)
    if a.valuation:
        total = total + wild_symbol(LAMBDA, w) * a.valuation
    if b.valuation:
        total = total + wild_symbol(u, LAMBDA) * b.valuation
    return total


def wild_symbol_by_lift(a, b, offset: int = 1, precision: int = 3) -> SymbolValue:
    """(a, b) at lambda recomputed through unit lifts with fresh global representatives."""
    la = embed_eisenstein(a, LAMBDA_ADIC, precision)
    lb = embed_eisenstein(b, LAMBDA_ADIC, precision)
    return wild_symbol_local(la, lb, offset)


def product_formula_check(a, b, offset: int = 1) -> bool:
    """Sum of all local symbols of (a, b) is trivial.

    The lambda-component is recomputed through lifts of the local units, so
    its product formula runs over different primes than the tame part here.
    """
    a, b = EisensteinInt.coerce(a), EisensteinInt.coerce(b)
    total = wild_symbol_by_lift(a, b, offset)
    for pl in places_dividing(a, b):
        if pl.kind != WILD:
            total = total + tame_symbol(a, b, pl)
    return total.is_trivial()


def galois_conjugate_symbol_check(a, b, v) -> bool:
    """Complex conjugation: conj((a, b)_v) = (conj a, conj b)_(conj v)."""
    a, b = EisensteinInt.coerce(a), EisensteinInt.coerce(b)
    v = _coerce_place(v)
    lhs = hilbert_symbol(a, b, v)
    rhs = hilbert_symbol(a.conjugate(), b.conjugate(), v.conjugate())
    return rhs == -lhs


def rho_row(element_images: Sequence[LocalNumber], kummer: LocalNumber) -> list[SymbolValue]:
    """Symbols (x_j, kummer) at lambda for the images of one element under several embeddings."""
    return [wild_symbol_local(x, kummer) for x in element_images]


def exponent_rank_f3(rows: Iterable[Sequence[SymbolValue | int]]) -> int:
    """Rank over F_3 of a matrix of symbol exponents."""
    mat = [[int(x) % 3 for x in row] for row in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = 1 if mat[rank][col] == 1 else 2
        mat[rank] = [x * inv % 3 for x in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col]:
                f = mat[r][col]
                mat[r] = [(x - f * y) % 3 for x, y in zip(mat[r], mat[rank])]
        rank += 1
    return rank


__all__ = [
    "LAMBDA_PLACE",
    "PlaceOfK",
    "exponent_rank_f3",
    "galois_conjugate_symbol_check",
    "hilbert_symbol",
    "lift_unit",
    "places_dividing",
    "product_formula_check",
    "rho_row",
    "symbol_profile",
    "tame_symbol",
    "wild_symbol",
    "wild_symbol_by_lift",
    "wild_symbol_local",
    "rational_prime_places",
]
