"""Integral ideals in Hermite normal form, prime decomposition and valuations."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterator, Sequence

import mpmath
import sympy

from ..errors import NotMaximalAtQ
from .linalg import hnf, hnf_solve, left_kernel_mod, lll_gram, rank_mod, solve_mod
from .order import Element, OrderData, frobenius_power, is_maximal_at


@dataclass(frozen=True, eq=False)
class IdealHNF:
    """Ideal of an order given by a lower-triangular HNF (rows = Z-basis).

    ``matrix`` gives the same data in column convention (upper triangular).
    Only integral ideals are created by the engine, so the denominator is 1
    unless set explicitly.
    """

    order: OrderData
    rows: tuple[tuple[int, ...], ...]
    denominator: int = 1

    @classmethod
    def from_generators(cls, o: OrderData, gens: Sequence[Element], modulus: int | None = None) -> "IdealHNF":
        vecs = []
        for g in gens:
            vecs.extend(o.mult_matrix(g))
        if modulus is None:
            nz = [g for g in gens if any(g)]
            modulus = abs(reduce(lambda a, b: sympy.gcd(a, b), [o.norm(g) for g in nz]))
        return cls(o, tuple(tuple(r) for r in hnf(vecs, o.n, modulus)))

    @classmethod
    def principal(cls, o: OrderData, x: Element) -> "IdealHNF":
        return cls(o, tuple(tuple(r) for r in hnf(o.mult_matrix(x), o.n, abs(o.norm(x)))))

    @classmethod
    def unit(cls, o: OrderData) -> "IdealHNF":
        return cls(o, tuple(tuple(int(i == j) for j in range(o.n)) for i in range(o.n)))

    @property
    def matrix(self) -> list[list[int]]:
        n = len(self.rows)
        return [[self.rows[j][i] for j in range(n)] for i in range(n)]

    @property
    def norm(self) -> Fraction | int:
        v = 1
        for i, r in enumerate(self.rows):
            v *= r[i]
        if self.denominator == 1:
            return v
        return Fraction(v, self.denominator ** len(self.rows))

    @property
    def minimum(self) -> int:
        """Least positive integer in the ideal (row 0 is a multiple of w_0 = 1)."""
        return self.rows[0][0]

    def __eq__(self, other) -> bool:
        return isinstance(other, IdealHNF) and self.rows == other.rows and self.denominator == other.denominator

    def __hash__(self):
        return hash((self.rows, self.denominator))

    def __repr__(self) -> str:
        return f"IdealHNF(norm={self.norm}, rows={list(map(list, self.rows))})"

    def contains(self, x: Element) -> bool:
        return hnf_solve([list(r) for r in self.rows], x) is not None

    def basis(self) -> list[Element]:
        return [tuple(r) for r in self.rows]

    def __mul__(self, other: "IdealHNF") -> "IdealHNF":
        o = self.order
        vecs = [o.mul(a, b) for a in self.rows for b in other.rows]
        D = self.minimum * other.minimum
        return IdealHNF(o, tuple(tuple(r) for r in hnf(vecs, o.n, D)))

    def __add__(self, other: "IdealHNF") -> "IdealHNF":
        import math

        D = math.gcd(self.minimum, other.minimum)
        return IdealHNF(self.order, tuple(tuple(r) for r in hnf(list(self.rows) + list(other.rows), self.order.n, D)))

    def __pow__(self, e: int) -> "IdealHNF":
        if e < 0:
            raise ValueError("negative powers need fractional ideals")
        result = IdealHNF.unit(self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def mul_element(self, x: Element) -> "IdealHNF":
        o = self.order
        vecs = [o.mul(x, b) for b in self.rows]
        D = self.minimum * abs(o.norm(x))
        return IdealHNF(o, tuple(tuple(r) for r in hnf(vecs, o.n, D)))

    def is_closed(self) -> bool:
        """Check closure under multiplication by every basis element of the order."""
        o = self.order
        for i in range(o.n):
            w = tuple(int(i == j) for j in range(o.n))
            for r in self.rows:
                if not self.contains(o.mul(w, r)):
                    return False
        return True


@dataclass(eq=False)
class PrimeIdeal:
    """A prime ideal above q with ramification index e and residue degree f."""

    ideal: IdealHNF
    q: int
    e: int
    f: int
    anti_uniformizer: Element

    def __iter__(self) -> Iterator:
        return iter((self.ideal, self.e, self.f))

    @property
    def norm(self) -> int:
        return self.q**self.f

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeIdeal) and self.ideal == other.ideal

    def __hash__(self):
        return hash(self.ideal)

    def __repr__(self) -> str:
        return f"PrimeIdeal(q={self.q}, e={self.e}, f={self.f})"

    def valuation(self, x: Element, norm: int | None = None) -> int:
        """v_P(x) for a nonzero element of the order."""
        o = self.ideal.order
        if not any(x):
            raise ValueError("valuation of zero")
        if norm is not None and norm % self.q:
            return 0
        v = 0
        q = self.q
        while True:
            y = o.mul(x, self.anti_uniformizer)
            if any(c % q for c in y):
                return v
            x = tuple(c // q for c in y)
            v += 1

    def ideal_valuation(self, I: IdealHNF) -> int:
        if I.norm % self.q:
            return 0
        return min(self.valuation(g) for g in I.basis() if any(g))


def _min_poly_mod(o: OrderData, x: Element, e: Element, q: int) -> list[int]:
    """Monic minimal polynomial (low -> high) of x inside the algebra e(O/qO)."""
    powers = [e]
    while True:
        nxt = o.mul(powers[-1], x, q)
        sol = solve_mod([list(p) for p in powers], list(nxt), q)
        if sol is not None:
            return [(-c) % q for c in sol] + [1]
        powers.append(nxt)


def _roots_mod(poly: Sequence[int], q: int) -> list[int]:
    if q < 5000:
        out = []
        for a in range(q):
            v = 0
            for c in reversed(poly):
                v = (v * a + c) % q
            if v == 0:
                out.append(a)
        return out
    x = sympy.Symbol("x")
    P = sympy.Poly(list(reversed(poly)), x, modulus=q)
    return sorted(int(r) % q for r in P.ground_roots())


def _split_idempotents(o: OrderData, q: int, rng: random.Random) -> list[Element]:
    n = o.n
    frob = []
    for i in range(n):
        w = tuple(int(i == j) for j in range(n))
        img = o.pow(w, q, q)
        frob.append([(img[j] - w[j]) % q for j in range(n)])
    berl = left_kernel_mod(frob, q)
    r = len(berl)
    idems = [o.one()]

    def count(e: Element) -> int:
        return rank_mod([list(o.mul(tuple(b), e, q)) for b in berl], q)

    done: list[Element] = []
    pending = idems
    tries = 0
    while pending:
        e = pending.pop()
        if count(e) == 1:
            done.append(e)
            continue
        tries += 1
        if tries > 500:
            raise ArithmeticError("idempotent splitting did not converge")
        coeffs = [rng.randrange(q) for _ in berl]
        b = tuple(sum(c * v[j] for c, v in zip(coeffs, berl)) % q for j in range(n))
        be = o.mul(b, e, q)
        mp = _min_poly_mod(o, be, e, q)
        roots = _roots_mod(mp, q)
        if len(roots) < 2:
            pending.append(e)
            continue
        for j, c in enumerate(roots):
            acc = e
            for l, c2 in enumerate(roots):
                if l == j:
                    continue
                inv = pow((c - c2) % q, -1, q)
                factor_ = tuple((be[k] - c2 * e[k]) * inv % q for k in range(n))
                acc = o.mul(acc, factor_, q)
            pending.append(acc)
    assert len(done) == r
    return done


def decompose_prime(o: OrderData, q: int, seed: int = 0, check: bool = True) -> list[PrimeIdeal]:
    """Primes of o above q with (e, f); o must be maximal at q."""
    if check and not is_maximal_at(o, q):
        raise NotMaximalAtQ(f"order is not maximal at {q}")
    cache_key = ("primes", q)
    if cache_key in o._cache:
        return o._cache[cache_key]
    n = o.n
    rng = random.Random(seed * 1000003 + q)
    idems = _split_idempotents(o, q, rng)
    big = frobenius_power(q, n)
    out = []
    for e_i in idems:
        imgs = []
        for i in range(n):
            w = tuple(int(i == j) for j in range(n))
            imgs.append(list(o.pow(o.mul(w, e_i, q), big, q)))
        ker = left_kernel_mod(imgs, q)
        f = n - len(ker)
        dim = rank_mod([list(o.mul(tuple(int(i == j) for j in range(n)), e_i, q)) for i in range(n)], q)
        e = dim // f
        P = IdealHNF(o, tuple(tuple(r) for r in hnf([list(v) for v in ker], n, q)))
        # anti-uniformizer: y with y * P in qO, y not in qO
        gens = [list(v) for v in ker]
        M = []
        for i in range(n):
            w = tuple(int(i == j) for j in range(n))
            row = []
            for g in gens:
                row.extend(o.mul(w, tuple(g), q))
            M.append(row)
        kk = left_kernel_mod(M, q) if gens else [[int(i == j) for j in range(n)] for i in range(n)]
        beta = next(tuple(v) for v in kk if any(v))
        out.append(PrimeIdeal(P, q, e, f, beta))
    out.sort(key=lambda P: (P.f, P.ideal.rows))
    if sum(P.e * P.f for P in out) != n:
        raise ArithmeticError("prime decomposition is inconsistent")
    o._cache[cache_key] = out
    return out


def factor_ideal(I: IdealHNF, seed: int = 0) -> list[tuple[PrimeIdeal, int]]:
    """Factor an integral ideal via the rational primes dividing its norm."""
    o = I.order
    out = []
    for q in sorted(sympy.factorint(int(I.norm))):
        for P in decompose_prime(o, q, seed, check=False):
            v = P.ideal_valuation(I)
            if v:
                out.append((P, v))
    return out


def prime_product(o: OrderData, factors: Sequence[tuple[PrimeIdeal, int]]) -> IdealHNF:
    acc = IdealHNF.unit(o)
    for P, v in factors:
        if v:
            acc = acc * (P.ideal**v)
    return acc


# -- lattice reduction of ideals ----------------------------------------

def weighted_gram(I_basis: Sequence[Element], o: OrderData, weights: Sequence[float] | None = None, bits: int = 100) -> list[list[int]]:
    """Integer approximation of the weighted T2 Gram matrix of a basis."""
    r1, r2 = o.signature
    places = r1 + r2
    if weights is None:
        weights = [1.0] * places
    with mpmath.workdps(o.dps):
        embs = [o.embed(b) for b in I_basis]
        W = [mpmath.mpf(w) ** 2 * (1 if k < r1 else 2) for k, w in enumerate(weights)]
        m = len(I_basis)
        G = [[mpmath.mpf(0)] * m for _ in range(m)]
        for a in range(m):
            for b in range(a, m):
                s = mpmath.fsum(W[k] * mpmath.re(embs[a][k] * mpmath.conj(embs[b][k])) for k in range(places))
                G[a][b] = G[b][a] = s
        smallest = min(G[a][a] for a in range(m))
        largest = max(G[a][a] for a in range(m))
        extra = int(mpmath.log(largest / smallest, 2))
        scale = mpmath.mpf(2) ** (bits + extra - int(mpmath.log(smallest, 2)))
        return [[int(mpmath.nint(G[a][b] * scale)) for b in range(m)] for a in range(m)]


def reduce_basis(I: IdealHNF, weights: Sequence[float] | None = None) -> list[Element]:
    """LLL-reduced Z-basis of I under a weighted T2 form.

    If the weighted form is too ill-conditioned for the embedding precision,
    the unweighted form is used instead.
    """
    o = I.order
    B = I.basis()
    for w in (weights, None):
        try:
            H = lll_gram(weighted_gram(B, o, w))
        except ValueError:
            continue
        return [tuple(sum(h * b[j] for h, b in zip(row, B)) for j in range(o.n)) for row in H]
    raise ArithmeticError("ideal lattice could not be reduced")


def small_combinations(basis: Sequence[Element], limit: int = 400, coeff: int = 1) -> Iterator[Element]:
    """Short combinations of a reduced basis, one per +- pair."""
    from itertools import product

    n = len(basis)
    m = len(basis[0])
    count = 0
    for b in basis:
        yield b
        count += 1
    rng = range(-coeff, coeff + 1)
    for c in product(rng, repeat=n):
        nz = [x for x in c if x]
        if len(nz) < 2:
            continue
        first = next(x for x in c if x)
        if first < 0:
            continue
        yield tuple(sum(ci * b[j] for ci, b in zip(c, basis)) for j in range(m))
        count += 1
        if count >= limit:
            return


# -- automorphisms --------------------------------------------------------

def automorphisms(o: OrderData, candidates: Sequence[Sequence[Fraction]]) -> list[list[list[int]]]:
    """Matrices (row i = coords of sigma(w_i)) for field automorphisms.

    ``candidates`` are images of theta on the power basis; each is verified
    exactly (f(image) = 0) before use.
    """
    from .order import _poly_mulmod_frac

    f = [Fraction(c) for c in o.poly]
    n = o.n
    mats = []
    for img in candidates:
        img = [Fraction(c) for c in img]
        # Horner: f(img) in Q[theta]/f
        acc = [Fraction(0)] * n
        acc[0] = f[n]
        for c in reversed(f[:n]):
            acc = _poly_mulmod_frac(acc, img, f)
            acc[0] += c
        if any(acc):
            raise ArithmeticError("candidate is not a root of the defining polynomial")
        powers = [[Fraction(int(j == 0)) for j in range(n)]]
        for _ in range(n - 1):
            powers.append(_poly_mulmod_frac(powers[-1], img, f))
        rows = []
        for brow in o.basis:
            v = [sum(Fraction(brow[j]) * powers[j][k] for j in range(n)) / o.denominator for k in range(n)]
            x = o.from_power(v)
            if x is None:
                raise ArithmeticError("automorphism does not preserve the order")
            rows.append(list(x))
        mats.append(rows)
    return mats


def apply_automorphism(S: Sequence[Sequence[int]], x: Element) -> Element:
    n = len(x)
    return tuple(sum(x[i] * S[i][j] for i in range(n)) for j in range(n))


def apply_automorphism_ideal(S, I: IdealHNF) -> IdealHNF:
    vecs = [apply_automorphism(S, r) for r in I.rows]
    return IdealHNF(I.order, tuple(tuple(r) for r in hnf(vecs, I.order.n, I.minimum)))


__all__ = [
    "IdealHNF",
    "PrimeIdeal",
    "apply_automorphism",
    "apply_automorphism_ideal",
    "automorphisms",
    "decompose_prime",
    "factor_ideal",
    "prime_product",
    "reduce_basis",
    "small_combinations",
    "weighted_gram",
]
