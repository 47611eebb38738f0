"""Orders in number fields of small degree, given by a multiplication table.

An order is stored on a Z-basis w_0 = 1, w_1, ..., w_{n-1} expressed on the
power basis of a root theta of the defining polynomial: w_i equals
``sum(basis[i][j] * theta**j) / denominator`` with ``basis`` in
lower-triangular Hermite form.  Elements are tuples of integer coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import mpmath
import sympy

from ..errors import Reducible
from .linalg import det, hnf, hnf_solve, left_kernel_mod, rank_mod

Element = tuple[int, ...]

DEFAULT_DPS = 60


def _poly_mulmod(a: Sequence[int], b: Sequence[int], f: Sequence[int]) -> list[int]:
    """Product of two polynomials (low -> high) modulo the monic f."""
    n = len(f) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for j in range(n):
                prod[k - n + j] -= c * f[j]
        prod[k] = 0
    return (prod + [0] * n)[:n]


def _poly_mulmod_frac(a, b, f):
    n = len(f) - 1
    prod = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for j in range(n):
                prod[k - n + j] -= c * f[j]
        prod[k] = Fraction(0)
    return (prod + [Fraction(0)] * n)[:n]


@dataclass(eq=False)
class OrderData:
    """An order with its multiplication table, discriminant and embeddings."""

    poly: tuple[int, ...]  # defining polynomial, low -> high, monic
    basis: tuple[tuple[int, ...], ...]
    denominator: int
    table: tuple
    discriminant: int
    dps: int = DEFAULT_DPS
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    @property
    def n(self) -> int:
        return len(self.poly) - 1

    # -- elements --------------------------------------------------------
    def zero(self) -> Element:
        return (0,) * self.n

    def one(self) -> Element:
        return (1,) + (0,) * (self.n - 1)

    def scalar(self, c: int) -> Element:
        return (c,) + (0,) * (self.n - 1)

    def add(self, x: Element, y: Element) -> Element:
        return tuple(a + b for a, b in zip(x, y))

    def sub(self, x: Element, y: Element) -> Element:
        return tuple(a - b for a, b in zip(x, y))

    def neg(self, x: Element) -> Element:
        return tuple(-a for a in x)

    def scale(self, x: Element, c: int) -> Element:
        return tuple(a * c for a in x)

    def mul(self, x: Element, y: Element, modulus: int | None = None) -> Element:
        n = self.n
        T = self.table
        out = [0] * n
        for i in range(n):
            xi = x[i]
            if not xi:
                continue
            Ti = T[i]
            for j in range(n):
                yj = y[j]
                if not yj:
                    continue
                c = xi * yj
                row = Ti[j]
                for k in range(n):
                    if row[k]:
                        out[k] += c * row[k]
        if modulus is not None:
            return tuple(v % modulus for v in out)
        return tuple(out)

    def pow(self, x: Element, e: int, modulus: int | None = None) -> Element:
        if e < 0:
            return self.pow(self.unit_inverse(x), -e, modulus)
        result = self.one()
        base = x
        while e:
            if e & 1:
                result = self.mul(result, base, modulus)
            e >>= 1
            if e:
                base = self.mul(base, base, modulus)
        return result

    def mult_matrix(self, x: Element) -> list[list[int]]:
        """Row i = coordinates of x * w_i."""
        n = self.n
        T = self.table
        M = [[0] * n for _ in range(n)]
        for j in range(n):
            xj = x[j]
            if not xj:
                continue
            Tj = T[j]
            for i in range(n):
                row = Tj[i]
                Mi = M[i]
                for k in range(n):
                    if row[k]:
                        Mi[k] += xj * row[k]
        return M

    def norm(self, x: Element) -> int:
        return det(self.mult_matrix(x))

    def trace(self, x: Element) -> int:
        return sum(a * t for a, t in zip(x, self.basis_traces))

    @cached_property
    def basis_traces(self) -> tuple[int, ...]:
        n = self.n
        return tuple(sum(self.table[i][j][j] for j in range(n)) for i in range(n))

    def divides(self, x: Element, y: Element) -> Element | None:
        """y / x if it lies in the order, else None."""
        M = self.mult_matrix(x)
        sol = _solve_rational(M, y)
        if sol is None or any(v.denominator != 1 for v in sol):
            return None
        return tuple(int(v) for v in sol)

    def unit_inverse(self, u: Element) -> Element:
        inv = self.divides(u, self.one())
        if inv is None:
            raise ValueError("element is not a unit of the order")
        return inv

    def is_zero(self, x: Element) -> bool:
        return not any(x)

    # -- power basis -----------------------------------------------------
    def to_power(self, x: Element) -> list[Fraction]:
        n = self.n
        d = self.denominator
        out = [0] * n
        for xi, row in zip(x, self.basis):
            if xi:
                for j in range(n):
                    out[j] += xi * row[j]
        return [Fraction(v, d) for v in out]

    def from_power(self, v: Sequence) -> Element | None:
        """Coordinates of a power-basis vector, or None if it is not in the order."""
        fr = [Fraction(c) for c in v]
        den = math.lcm(*[c.denominator for c in fr]) if fr else 1
        scaled = [int(c * den) for c in fr]
        # x * basis / d = scaled / den  ->  x * basis = scaled * d / den
        d = self.denominator
        if (d * 1) % den == 0:
            target = [c * (d // den) for c in scaled]
            sol = hnf_solve([list(r) for r in self.basis], target)
            return None if sol is None else tuple(sol)
        target = [Fraction(c * d, den) for c in scaled]
        if any(t.denominator != 1 for t in target):
            return None
        sol = hnf_solve([list(r) for r in self.basis], [int(t) for t in target])
        return None if sol is None else tuple(sol)

    def theta(self) -> Element:
        v = [0] * self.n
        if self.n > 1:
            v[1] = 1
        x = self.from_power(v)
        assert x is not None
        return x

    # -- embeddings ------------------------------------------------------
    @cached_property
    def roots(self) -> list:
        """Roots of the defining polynomial: real ones first, then one per conjugate pair."""
        with mpmath.workdps(self.dps + 20):
            coeffs = list(reversed(self.poly))
            rts = mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * self.dps + 200)
            tol = mpmath.mpf(10) ** (-(self.dps // 2))
            real = sorted((mpmath.re(r) for r in rts if abs(mpmath.im(r)) < tol))
            cplx = sorted((r for r in rts if mpmath.im(r) >= tol), key=lambda z: (mpmath.re(z), mpmath.im(z)))
            out = [mpmath.mpc(r, 0) for r in real] + list(cplx)
        if len(real) + 2 * len(cplx) != self.n:
            raise ArithmeticError("root isolation failed; raise the precision")
        return out

    @property
    def signature(self) -> tuple[int, int]:
        r1 = sum(1 for r in self.roots if mpmath.im(r) == 0)
        return r1, (self.n - r1) // 2

    @property
    def unit_rank(self) -> int:
        r1, r2 = self.signature
        return r1 + r2 - 1

    @cached_property
    def basis_embeddings(self) -> list[list]:
        """basis_embeddings[k][i] = sigma_k(w_i) for each place k."""
        out = []
        with mpmath.workdps(self.dps):
            for r in self.roots:
                powers = [mpmath.mpc(1)]
                for _ in range(self.n - 1):
                    powers.append(powers[-1] * r)
                out.append([
                    mpmath.fsum(c * pw for c, pw in zip(row, powers)) / self.denominator for row in self.basis
                ])
        return out

    def embed(self, x: Element) -> list:
        with mpmath.workdps(self.dps):
            return [mpmath.fsum(a * e for a, e in zip(x, emb) if a) for emb in self.basis_embeddings]

    def log_embedding(self, x: Element) -> list:
        r1, _ = self.signature
        with mpmath.workdps(self.dps):
            vals = self.embed(x)
            return [mpmath.log(abs(v)) * (1 if k < r1 else 2) for k, v in enumerate(vals)]

    @property
    def minkowski_bound(self) -> float:
        n = self.n
        _, r2 = self.signature
        return (4 / math.pi) ** r2 * math.factorial(n) / n**n * math.sqrt(abs(self.discriminant))

    def is_maximal_hint(self) -> bool:
        """True when no prime square divides the discriminant (then the order is maximal)."""
        return all(e == 1 for e in sympy.factorint(abs(self.discriminant)).values())

    def cache(self, key, builder):
        if key not in self._cache:
            self._cache[key] = builder()
        return self._cache[key]


def _solve_rational(M: Sequence[Sequence[int]], target: Sequence[int]) -> list[Fraction] | None:
    """x with x * M = target over Q for square nonsingular M."""
    n = len(M)
    A = [[Fraction(M[i][j]) for i in range(n)] + [Fraction(target[j])] for j in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return None
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [v * inv for v in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [v - f * w for v, w in zip(A[r], A[c])]
    return [A[i][n] for i in range(n)]


def _parse_poly(f) -> tuple[int, ...]:
    """Accept a sympy expression/Poly or a coefficient list (high -> low)."""
    if isinstance(f, (list, tuple)):
        coeffs = [int(c) for c in f]
    else:
        x = sympy.Symbol("x")
        P = f if isinstance(f, sympy.Poly) else sympy.Poly(f, x)
        coeffs = [int(c) for c in P.all_coeffs()]
    if coeffs[0] != 1:
        raise ValueError("defining polynomial must be monic")
    return tuple(reversed(coeffs))


def _table_for_basis(poly: tuple[int, ...], basis: Sequence[Sequence[int]], d: int) -> tuple:
    n = len(poly) - 1
    B = [list(r) for r in basis]
    table = []
    for i in range(n):
        row = []
        for j in range(n):
            v = _poly_mulmod(B[i], B[j], poly)
            # (x * B) / d = v / d^2  ->  x * B = v / d
            if any(c % d for c in v):
                raise ArithmeticError("basis is not closed under multiplication")
            x = hnf_solve(B, [c // d for c in v])
            if x is None:
                raise ArithmeticError("basis is not closed under multiplication")
            row.append(tuple(x))
        table.append(tuple(row))
    return tuple(table)


def _discriminant(table, n) -> int:
    traces = [sum(table[i][j][j] for j in range(n)) for i in range(n)]
    G = [[sum(table[i][j][k] * traces[k] for k in range(n)) for j in range(n)] for i in range(n)]
    return det(G)


def make_order(poly: Sequence[int], basis: Sequence[Sequence[int]], denominator: int, dps: int = DEFAULT_DPS) -> OrderData:
    n = len(poly) - 1
    g = math.gcd(denominator, *[c for r in basis for c in r])
    B = hnf([[c // g for c in r] for r in basis], n)
    d = denominator // g
    if B[0][0] != d:
        raise ArithmeticError("lattice does not contain 1")
    table = _table_for_basis(tuple(poly), B, d)
    return OrderData(
        poly=tuple(poly),
        basis=tuple(tuple(r) for r in B),
        denominator=d,
        table=table,
        discriminant=_discriminant(table, n),
        dps=dps,
    )


def order_from_polynomial(f, dps: int = DEFAULT_DPS) -> OrderData:
    """The equation order Z[x]/(f) for a monic irreducible integer polynomial."""
    poly = _parse_poly(f)
    x = sympy.Symbol("x")
    P = sympy.Poly(list(reversed(poly)), x)
    if P.degree() < 1 or not P.is_irreducible:
        raise Reducible(f"{P.as_expr()} is reducible over Q")
    n = P.degree()
    basis = [[int(i == j) for j in range(n)] for i in range(n)]
    return make_order(poly, basis, 1, dps)


# -- maximalization --------------------------------------------------------

def frobenius_power(q: int, n: int) -> int:
    k = q
    while k < n:
        k *= q
    return k


def radical_mod(o: OrderData, q: int) -> list[list[int]]:
    """Basis (mod q) of the radical of O/qO: elements whose q^k-th power vanishes."""
    e = frobenius_power(q, o.n)
    rows = []
    for i in range(o.n):
        w = tuple(int(i == j) for j in range(o.n))
        rows.append(list(o.pow(w, e, q)))
    return left_kernel_mod(rows, q)


def _dedekind_maximal(o: OrderData, q: int) -> bool:
    """Dedekind's criterion for the equation order Z[theta] at q."""
    if o.denominator != 1 or any(o.basis[i][j] != int(i == j) for i in range(o.n) for j in range(o.n)):
        return False
    x = sympy.Symbol("x")
    f = sympy.Poly(list(reversed(o.poly)), x)
    fq = sympy.Poly(list(reversed(o.poly)), x, modulus=q)
    _, facs = fq.factor_list()
    h = sympy.Poly(1, x, modulus=q)
    for g, _ in facs:
        h = h * g
    gq = fq.quo(h)
    hz = sympy.Poly([int(c) % q for c in h.all_coeffs()], x)
    gz = sympy.Poly([int(c) % q for c in gq.all_coeffs()], x)
    F = (f - hz * gz)
    Fc = [int(c) for c in F.all_coeffs()]
    assert all(c % q == 0 for c in Fc)
    Fq = sympy.Poly([c // q for c in Fc], x, modulus=q)
    common = sympy.gcd(sympy.gcd(Fq, gq), h)
    return common.degree() == 0


def _idealizer_step(o: OrderData, q: int) -> OrderData | None:
    """One radical-idealizer enlargement at q; None if O is already q-maximal."""
    n = o.n
    rad = radical_mod(o, q)
    I = hnf([list(v) for v in rad], n, q)
    # y in (I:I)*q  <=>  y * g_j in q I for all basis vectors g_j of I
    cols = []
    for i in range(n):
        w = tuple(int(i == j) for j in range(n))
        row = []
        for g in I:
            prod = o.mul(w, tuple(g))
            c = hnf_solve(I, prod)
            assert c is not None, "radical is not an ideal"
            row.extend(c)
        cols.append(row)
    ker = left_kernel_mod(cols, q)
    if not ker:
        return None
    L = hnf([list(v) for v in ker], n, q)
    # new basis elements: (1/q) sum_j L[i][j] w_j, expressed on the power basis
    B_old = [list(r) for r in o.basis]
    new_rows = [[sum(L[i][j] * B_old[j][k] for j in range(n)) for k in range(n)] for i in range(n)]
    return make_order(o.poly, new_rows, o.denominator * q, o.dps)


def maximalize(o: OrderData, q: int) -> OrderData:
    """The q-maximal over-order of o (round-2 style radical idealizer iteration)."""
    if o.discriminant % (q * q):
        return o
    if _dedekind_maximal(o, q):
        return o
    while True:
        nxt = _idealizer_step(o, q)
        if nxt is None:
            return o
        if nxt.discriminant == o.discriminant:
            return o
        o = nxt


def is_maximal_at(o: OrderData, q: int) -> bool:
    if o.discriminant % (q * q):
        return True
    if _dedekind_maximal(o, q):
        return True
    return _idealizer_step(o, q) is None


def maximal_order(f, dps: int = DEFAULT_DPS, primes: Sequence[int] | None = None) -> OrderData:
    """Maximalize the equation order of f at the given primes (default: all q with q^2 | disc)."""
    o = order_from_polynomial(f, dps)
    if primes is None:
        primes = [q for q, e in sympy.factorint(abs(o.discriminant)).items() if e >= 2]
    for q in primes:
        o = maximalize(o, q)
    return o


__all__ = [
    "Element",
    "OrderData",
    "frobenius_power",
    "is_maximal_at",
    "make_order",
    "maximal_order",
    "maximalize",
    "order_from_polynomial",
    "radical_mod",
    "rank_mod",
]
