"""Class groups, principality, units and norm equations by relation collection.

Relations are valuation vectors of elements found as short vectors of
LLL-reduced ideal lattices under randomly weighted T2 forms.  Every relation
is an exact factorization (valuations of an actual element), so floating
point only steers the search.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import sympy

from ..errors import EffortExhausted
from .ideals import (
    IdealHNF,
    PrimeIdeal,
    apply_automorphism,
    apply_automorphism_ideal,
    decompose_prime,
    prime_product,
    reduce_basis,
    small_combinations,
)
from .linalg import hnf, inverse_unimodular, lll_gram, smith_normal_form, xgcd
from .order import Element, OrderData

EFFORT_LEVELS = {
    # stable_rounds, batch size (ideals per round), max rounds, generator-search trials
    "quick": dict(stable_rounds=2, batch=8, max_rounds=60, search=40),
    "desk": dict(stable_rounds=4, batch=12, max_rounds=200, search=120),
    "thorough": dict(stable_rounds=8, batch=24, max_rounds=800, search=400),
}


def effort_config(effort) -> dict:
    if isinstance(effort, dict):
        return {**EFFORT_LEVELS["desk"], **effort}
    if effort not in EFFORT_LEVELS:
        raise ValueError(f"unknown effort level {effort!r}")
    return dict(EFFORT_LEVELS[effort])


# -- factor base -----------------------------------------------------------

@dataclass
class FactorBase:
    order: OrderData
    primes: list[PrimeIdeal]
    bound: int

    def __post_init__(self):
        self.index = {P.ideal: i for i, P in enumerate(self.primes)}
        self.by_q: dict[int, list[int]] = {}
        for i, P in enumerate(self.primes):
            self.by_q.setdefault(P.q, []).append(i)
        self.rational_primes = sorted(self.by_q)

    def __len__(self) -> int:
        return len(self.primes)

    def factor_element(self, x: Element, norm: int | None = None) -> list[int] | None:
        """Valuation vector of x over the factor base, or None if x is not smooth."""
        o = self.order
        N = abs(o.norm(x)) if norm is None else abs(norm)
        if N == 0:
            return None
        vec = [0] * len(self.primes)
        rest = N
        for q in self.rational_primes:
            if rest % q:
                continue
            k = 0
            while rest % q == 0:
                rest //= q
                k += 1
            got = 0
            for i in self.by_q[q]:
                P = self.primes[i]
                v = P.valuation(x)
                vec[i] = v
                got += v * P.f
            if got != k:
                return None
            if rest == 1:
                break
        if rest != 1:
            return None
        return vec


def primes_up_to(o: OrderData, bound: int, seed: int = 0) -> list[PrimeIdeal]:
    out = []
    for q in sympy.primerange(2, bound + 1):
        for P in decompose_prime(o, q, seed, check=False):
            if P.norm <= bound:
                out.append(P)
    out.sort(key=lambda P: (P.norm, P.q, P.ideal.rows))
    return out


# -- relation lattice -------------------------------------------------------

class RelationLattice:
    """Incremental echelon form of the relation lattice in Z^m."""

    def __init__(self, m: int):
        self.m = m
        self.rows: dict[int, list[int]] = {}
        self.count = 0

    @property
    def full_rank(self) -> bool:
        return len(self.rows) == self.m

    @property
    def determinant(self) -> int | None:
        if not self.full_rank:
            return None
        d = 1
        for c, r in self.rows.items():
            d *= r[c]
        return d

    def add(self, vec: Sequence[int]) -> bool:
        self.count += 1
        v = list(vec)
        D = self.determinant
        changed = False
        for c in range(self.m):
            if D is not None:
                v[c] %= D
            if v[c] == 0:
                continue
            r = self.rows.get(c)
            if r is None:
                if v[c] < 0:
                    v = [-x for x in v]
                self.rows[c] = v
                return True
            if v[c] % r[c] == 0:
                k = v[c] // r[c]
                v = [x - k * y for x, y in zip(v, r)]
                continue
            g, s, t = xgcd(r[c], v[c])
            a, b = r[c] // g, v[c] // g
            new = [s * x + t * y for x, y in zip(r, v)]
            v = [a * y - b * x for x, y in zip(r, v)]
            self.rows[c] = new
            changed = True
        if changed:
            self._reduce()
        return changed

    def _reduce(self) -> None:
        D = self.determinant
        if D is None:
            return
        for c, r in self.rows.items():
            self.rows[c] = [x % D if j != c else x for j, x in enumerate(r)]

    def contains(self, vec: Sequence[int]) -> bool:
        v = list(vec)
        D = self.determinant
        for c in range(self.m):
            if D is not None:
                v[c] %= D
            if v[c] == 0:
                continue
            r = self.rows.get(c)
            if r is None or v[c] % r[c]:
                return False
            k = v[c] // r[c]
            v = [x - k * y for x, y in zip(v, r)]
        return True


# -- class group structure --------------------------------------------------

@dataclass
class ClassGroupStructure:
    """Cl(O) as invariants d_1 | d_2 | ... with representative generators."""

    invariants: list[int]
    generators: list[IdealHNF]
    certified: bool
    class_number: int
    factor_base: FactorBase | None = None
    relations: list[tuple[Element, list[int]]] = field(default_factory=list)
    units: list[Element] = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    _sub: list[list[int]] | None = None
    _V: list[list[int]] | None = None
    _diag: list[int] | None = None
    _lattice: RelationLattice | None = None

    def three_part(self) -> list[int]:
        out = []
        for d in self.invariants:
            t = 1
            while d % 3 == 0:
                d //= 3
                t *= 3
            if t > 1:
                out.append(t)
        return out

    def dlog(self, exps: Sequence[int]) -> tuple[int, ...]:
        """Coordinates (mod each invariant) of the class of prod P_i^exps[i]."""
        if self._sub is None or self._V is None or self._diag is None:
            raise ValueError("structure has no discrete-log data")
        h = self.class_number
        ess = len(self._V)
        s = [0] * ess
        for e, sub in zip(exps, self._sub):
            if e:
                for k in range(ess):
                    s[k] += e * sub[k]
        s = [x % h for x in s]
        full = [sum(s[k] * self._V[k][i] for k in range(ess)) for i in range(ess)]
        return tuple(full[i] % d for i, d in enumerate(self._diag) if d > 1)

    def class_of(self, I: IdealHNF, seed: int = 0) -> tuple[int, ...]:
        return self.dlog(ideal_exponents(self.factor_base, I, seed))

    def is_trivial_class(self, I: IdealHNF) -> bool:
        return not any(self.class_of(I))

    def as_dict(self) -> dict:
        return {
            "invariants": list(self.invariants),
            "class_number": self.class_number,
            "certified": self.certified,
            "generator_norms": [int(g.norm) for g in self.generators],
            "factor_base_size": len(self.factor_base) if self.factor_base else None,
            "relations": len(self.relations),
            **self.notes,
        }


def _cofactor_exponents(fb: FactorBase, x: Element, I: IdealHNF, M: int) -> list[int] | None:
    """Exponents of J = x I^-1 (norm M) over the factor base, or None if J is not smooth."""
    vec = [0] * len(fb)
    rest = M
    for q in fb.rational_primes:
        k = 0
        while rest % q == 0:
            rest //= q
            k += 1
        if not k:
            continue
        got = 0
        for i in fb.by_q[q]:
            P = fb.primes[i]
            v = P.valuation(x) - P.ideal_valuation(I)
            if v < 0:
                return None
            vec[i] = v
            got += v * P.f
        if got != k:
            return None
    return vec if rest == 1 else None


def ideal_exponents(fb: FactorBase, I: IdealHNF, seed: int = 0, tries: int = 200) -> list[int]:
    """A vector a with [I] = [prod P_i^a_i].

    When I factors over the factor base the valuations are used directly;
    otherwise a short x in I with x I^{-1} smooth gives [I] = -[x I^{-1}].
    """
    o = fb.order
    N = int(I.norm)
    rest = N
    for q in fb.rational_primes:
        while rest % q == 0:
            rest //= q
    if rest == 1:
        vec = [0] * len(fb)
        total = 1
        for i, P in enumerate(fb.primes):
            if N % P.q == 0:
                v = P.ideal_valuation(I)
                vec[i] = v
                total *= P.norm**v
        if total == N:
            return vec
    rng = random.Random(seed)
    places = sum(o.signature)
    for t in range(tries):
        w = _random_weights(rng, places, 0.5 + t / 20)
        for x in small_combinations(reduce_basis(I, w), limit=120):
            nx = abs(o.norm(x))
            if nx == 0 or nx % N:
                continue
            J = _cofactor_exponents(fb, x, I, nx // N)
            if J is not None:
                # (x) = I J with J smooth, so [I] = -[J]
                return [-j for j in J]
    raise EffortExhausted("could not express the ideal class over the factor base")


# -- relation search ---------------------------------------------------------

@dataclass
class _Search:
    o: OrderData
    fb: FactorBase
    rng: random.Random
    perms: list[list[int]]
    auts: list
    lattice: RelationLattice
    relations: list
    units: list
    seen: set

    def record(self, x: Element, vec: list[int]) -> None:
        if not any(vec):
            self.units.append(x)
            return
        key = tuple(vec)
        if key in self.seen:
            return
        self.seen.add(key)
        self.relations.append((x, vec))
        self.lattice.add(vec)
        for perm, (_, S) in zip(self.perms, self.auts):
            img = [0] * len(vec)
            for i, v in enumerate(vec):
                if v:
                    img[perm[i]] = v
            k2 = tuple(img)
            if k2 not in self.seen:
                self.seen.add(k2)
                self.relations.append((apply_automorphism(S, x), img))
                self.lattice.add(img)

    def harvest(self, I: IdealHNF, weights, limit: int = 400) -> int:
        found = 0
        for x in small_combinations(reduce_basis(I, weights), limit=limit):
            nx = self.o.norm(x)
            if nx == 0:
                continue
            vec = self.fb.factor_element(x, nx)
            if vec is not None:
                self.record(x, vec)
                found += 1
        return found


MAX_LOG_WEIGHT = 30.0


def _random_weights(rng: random.Random, places: int, sigma: float) -> list[float]:
    sigma = min(sigma, MAX_LOG_WEIGHT / 2)
    return [math.exp(max(-MAX_LOG_WEIGHT, min(MAX_LOG_WEIGHT, rng.gauss(0, sigma)))) for _ in range(places)]


def _fb_permutations(fb: FactorBase, auts) -> list[list[int]]:
    perms = []
    for _, S in auts:
        perm = []
        for P in fb.primes:
            img = apply_automorphism_ideal(S, P.ideal)
            if img not in fb.index:
                raise ArithmeticError("factor base is not Galois stable")
            perm.append(fb.index[img])
        perms.append(perm)
    return perms


def _structure(lattice: RelationLattice) -> tuple[list[int], list[list[int]], list[list[int]], list[int]]:
    """Substitution vectors, SNF transform and diagonal for the relation lattice."""
    m = lattice.m
    h = lattice.determinant
    H = [lattice.rows[c] for c in range(m)]
    ess = [c for c in range(m) if H[c][c] > 1]
    pos = {c: k for k, c in enumerate(ess)}
    E = len(ess)
    sub: list[list[int] | None] = [None] * m
    for c in range(m - 1, -1, -1):
        if c in pos:
            v = [0] * E
            v[pos[c]] = 1
            sub[c] = v
            continue
        v = [0] * E
        row = H[c]
        for j in range(c + 1, m):
            if row[j]:
                sj = sub[j]
                for k in range(E):
                    v[k] -= row[j] * sj[k]
        sub[c] = [x % h for x in v]
    rel = []
    for c in ess:
        v = [0] * E
        row = H[c]
        for j in range(c, m):
            if row[j]:
                sj = sub[j]
                for k in range(E):
                    v[k] += row[j] * sj[k]
        rel.append([x % h for x in v])
    for k in range(E):
        rel.append([h * int(k == j) for j in range(E)])
    if E == 0:
        return [[] for _ in range(m)], [], [], []
    diag, _, V = smith_normal_form(rel)
    return sub, V, diag, ess  # type: ignore[return-value]


def class_group(
    o: OrderData,
    effort="desk",
    seed: int = 0,
    automorphisms: Sequence | None = None,
    fb_bound: int | None = None,
    verify_generation: bool = True,
) -> ClassGroupStructure:
    """Class group of a maximal order by relation collection and Smith normal form.

    ``fb_bound`` (default: the Minkowski bound) sets the factor base; when it
    is below the Minkowski bound every prime up to that bound is checked to
    be a product of factor-base classes.  ``automorphisms`` (pairs of label
    and matrix) multiply each relation by the Galois action.
    """
    cfg = effort_config(effort)
    mink = o.minkowski_bound
    bound = int(min(mink, fb_bound)) if fb_bound else int(mink)
    bound = max(bound, 2)
    rng = random.Random(seed)
    primes = primes_up_to(o, bound, seed)
    if not primes:
        # the Minkowski bound is below 2: every class is trivial
        return ClassGroupStructure([], [], True, 1, FactorBase(o, [], bound), notes={"minkowski": mink})
    fb = FactorBase(o, primes, bound)
    auts = list(automorphisms or [])
    auts = [a for a in auts if any(a[1][i][j] != int(i == j) for i in range(o.n) for j in range(o.n))]
    perms = _fb_permutations(fb, auts) if auts else []
    search = _Search(o, fb, rng, perms, auts, RelationLattice(len(fb)), [], [], set())
    places = sum(o.signature)

    # relations from the order itself and from each factor-base prime
    search.harvest(IdealHNF.unit(o), None)
    history: list[int] = []
    rounds = 0
    while True:
        rounds += 1
        for _ in range(cfg["batch"]):
            k = rng.randint(0, 2)
            picks = [rng.randrange(len(fb)) for _ in range(k)]
            I = IdealHNF.unit(o)
            for i in picks:
                I = I * fb.primes[i].ideal
            search.harvest(I, _random_weights(rng, places, 0.6))
        for i in range(len(fb)):
            if search.lattice.full_rank:
                break
            if search.lattice.rows.get(i) is None:
                search.harvest(fb.primes[i].ideal, _random_weights(rng, places, 0.6))
        det = search.lattice.determinant
        if det is not None:
            history.append(det)
            if len(history) >= cfg["stable_rounds"] and len(set(history[-cfg["stable_rounds"]:])) == 1:
                break
        if rounds >= cfg["max_rounds"]:
            if det is None:
                raise EffortExhausted("relation lattice never reached full rank")
            break
    stable = len(history) >= cfg["stable_rounds"] and len(set(history[-cfg["stable_rounds"]:])) == 1

    generation_ok = True
    checked = 0
    if verify_generation and bound < mink:
        generation_ok, checked = _verify_generation(o, fb, int(mink), rng, places, auts, cfg)

    h = search.lattice.determinant
    sub, V, diag, ess = _structure(search.lattice)
    cg = ClassGroupStructure(
        invariants=[d for d in diag if d > 1],
        generators=[],
        certified=bool(stable and generation_ok),
        class_number=h,
        factor_base=fb,
        relations=search.relations,
        units=search.units,
        notes={
            "minkowski": mink,
            "factor_base_bound": bound,
            "rounds": rounds,
            "stable_history": history[-cfg["stable_rounds"]:],
            "generation_checked_primes": checked,
        },
        _sub=sub,
        _V=V,
        _diag=diag,
        _lattice=search.lattice,
    )
    cg.generators = _pick_generators(cg, ess)
    return cg


def _verify_generation(o, fb: FactorBase, mink: int, rng, places, auts, cfg) -> tuple[bool, int]:
    """Each prime with bound < N(P) <= Minkowski is a product of factor-base classes."""
    checked = 0
    for q in sympy.primerange(2, mink + 1):
        primes = [P for P in decompose_prime(o, q, check=False) if fb.bound < P.norm <= mink]
        todo = list(primes)
        while todo:
            P = todo.pop(0)
            ok = False
            for t in range(cfg["search"]):
                w = _random_weights(rng, places, 0.3 + t / 10)
                for x in small_combinations(reduce_basis(P.ideal, w), limit=200):
                    nx = o.norm(x)
                    if nx == 0 or abs(nx) % P.norm:
                        continue
                    cof = abs(nx) // P.norm
                    if cof % P.q == 0:
                        continue
                    # the cofactor x P^-1 must be smooth over the base
                    if fb.factor_element(x, cof) is not None:
                        ok = True
                        break
                if ok:
                    break
            if not ok:
                return False, checked
            checked += 1
            if auts:
                # Galois conjugates are covered by the conjugated relation
                images = {apply_automorphism_ideal(S, P.ideal) for _, S in auts}
                todo = [Q for Q in todo if Q.ideal not in images]
    return True, checked


def _pick_generators(cg: ClassGroupStructure, ess: list[int]) -> list[IdealHNF]:
    if not cg.invariants:
        return []
    fb = cg.factor_base
    k = len(cg.invariants)
    targets = []
    for i in range(k):
        t = [0] * k
        t[i] = 1
        targets.append(tuple(t))
    found: dict[int, IdealHNF] = {}
    dl = [cg.dlog([int(j == i) for j in range(len(fb))]) for i in range(len(fb))]
    for i, v in enumerate(dl):
        for t_idx, t in enumerate(targets):
            if t_idx not in found and v == t:
                found[t_idx] = fb.primes[i].ideal
    if len(found) < k:
        for i in range(len(fb)):
            for j in range(i, len(fb)):
                s = tuple((a + b) % d for a, b, d in zip(dl[i], dl[j], cg.invariants))
                for t_idx, t in enumerate(targets):
                    if t_idx not in found and s == t:
                        found[t_idx] = fb.primes[i].ideal * fb.primes[j].ideal
            if len(found) == k:
                break
    if len(found) < k:
        # fall back to a product over the essential primes
        Vinv = inverse_unimodular(cg._V)
        diag_idx = [i for i, d in enumerate(cg._diag) if d > 1]
        for t_idx in range(k):
            if t_idx in found:
                continue
            row = Vinv[diag_idx[t_idx]]
            I = IdealHNF.unit(cg.factor_base.order)
            for c, e in zip(ess, row):
                e %= cg.class_number
                if e:
                    I = I * (fb.primes[c].ideal ** e)
            found[t_idx] = I
    return [found[i] for i in range(k)]


# -- principality -------------------------------------------------------------

def find_generator(o: OrderData, I: IdealHNF, trials: int = 120, seed: int = 0, units: Sequence[Element] = ()) -> Element | None:
    """Search for x with xO = I among short vectors under varying weights."""
    N = int(I.norm)
    if N == 1:
        return o.one()
    rng = random.Random(seed)
    places = sum(o.signature)
    for t in range(trials):
        w = None if t == 0 else _random_weights(rng, places, 0.4 + t / 8)
        for x in small_combinations(reduce_basis(I, w), limit=120):
            if abs(o.norm(x)) == N and IdealHNF.principal(o, x) == I:
                return x
    return None


def is_principal(
    o: OrderData,
    I: IdealHNF,
    class_group_data: ClassGroupStructure | None = None,
    effort="desk",
    seed: int = 0,
) -> Element | None:
    """A generator of I, or None when I is certified non-principal by the class group."""
    cfg = effort_config(effort)
    g = find_generator(o, I, trials=max(4, cfg["search"] // 8), seed=seed)
    if g is not None:
        return g
    cg = class_group_data or o.cache(("class_group", seed), lambda: class_group(o, effort, seed))
    if any(cg.class_of(I, seed)):
        return None
    g = find_generator(o, I, trials=cfg["search"], seed=seed + 1)
    if g is None:
        raise EffortExhausted("ideal is principal by the class group, but no generator was found")
    return g


# -- units --------------------------------------------------------------------

def _log_vector(o: OrderData, u: Element) -> list:
    logs = o.log_embedding(u)
    return logs[: o.unit_rank]


def _unit_product(o: OrderData, units: Sequence[Element], exps: Sequence[int]) -> Element:
    acc = o.one()
    for u, e in zip(units, exps):
        if e:
            acc = o.mul(acc, o.pow(u, e))
    return acc


def reduce_unit_basis(o: OrderData, units: Sequence[Element]) -> list[Element]:
    """A basis of the group generated by ``units`` modulo torsion, LLL-reduced by logs."""
    r = o.unit_rank
    if r == 0:
        return []
    with mpmath.workdps(o.dps):
        eps = mpmath.mpf(10) ** (-(o.dps // 3))
        basis: list[Element] = []
        limit = 10 ** (o.dps // 3)
        ordered = sorted((u for u in units if max(abs(c) for c in u) < limit), key=lambda u: max(abs(c) for c in u))
        for u in ordered:
            lv = _log_vector(o, u)
            if max(abs(v) for v in lv) < eps:
                continue
            if len(basis) < r:
                M = mpmath.matrix([_log_vector(o, b) for b in basis] + [lv])
                # rank check via Gram determinant
                G = M * M.T
                if abs(mpmath.det(G)) > eps:
                    basis.append(u)
                    continue
            basis = _merge_unit(o, basis, u, eps)
        if len(basis) < r:
            return basis
        # size reduction of the log basis
        L = [_log_vector(o, b) for b in basis]
        G = [[mpmath.fsum(a * b for a, b in zip(x, y)) for y in L] for x in L]
        scale = mpmath.mpf(2) ** 80 / max(G[i][i] for i in range(r))
        Gi = [[int(mpmath.nint(v * scale)) for v in row] for row in G]
        T = lll_gram(Gi)
        return [_unit_product(o, basis, row) for row in T]


def _merge_unit(o, basis: list[Element], u: Element, eps) -> list[Element]:
    """Enlarge the lattice spanned by ``basis`` by u (dependent or of lower rank)."""
    k = len(basis)
    L = [_log_vector(o, b) for b in basis]
    lv = _log_vector(o, u)
    # least squares coordinates of lv on the span of L
    A = mpmath.matrix(L).T
    coords = mpmath.lu_solve(A.T * A, A.T * mpmath.matrix(lv))
    fr = [Fraction(str(mpmath.nstr(coords[i], 30))).limit_denominator(10**4) for i in range(k)]
    resid = [lv[j] - mpmath.fsum(float(fr[i]) * L[i][j] for i in range(k)) for j in range(len(lv))]
    if max(abs(x) for x in resid) > mpmath.mpf(10) ** -8:
        return basis  # numerically inconsistent; skip this unit
    if all(f.denominator == 1 for f in fr):
        return basis
    D = math.lcm(*[f.denominator for f in fr])
    gens = [[D * int(i == j) for j in range(k)] for i in range(k)] + [[int(f * D) for f in fr]]
    H, T = _hnf_with_transform(gens, k)
    new_units = basis + [u]
    return [_unit_product(o, new_units, row) for row in T]


def _hnf_with_transform(gens: list[list[int]], n: int) -> tuple[list[list[int]], list[list[int]]]:
    """Rows of an HNF basis of the lattice spanned by gens, with combination coefficients."""
    m = len(gens)
    rows = [(list(g), [int(i == j) for j in range(m)]) for i, g in enumerate(gens)]
    basis = []
    for c in range(n - 1, -1, -1):
        active = [r for r in rows if r[0][c] != 0]
        rest = [r for r in rows if r[0][c] == 0]
        piv = active[0]
        for r in active[1:]:
            g, s, t = xgcd(piv[0][c], r[0][c])
            a, b = piv[0][c] // g, r[0][c] // g
            new = ([s * x + t * y for x, y in zip(piv[0], r[0])], [s * x + t * y for x, y in zip(piv[1], r[1])])
            other = ([a * y - b * x for x, y in zip(piv[0], r[0])], [a * y - b * x for x, y in zip(piv[1], r[1])])
            piv = new
            rest.append(other)
        basis.append(piv)
        rows = rest
    basis.reverse()
    return [b[0] for b in basis], [b[1] for b in basis]


@dataclass
class UnitData:
    units: list[Element]
    regulator: float
    rank: int
    torsion: int

    def as_dict(self) -> dict:
        return {"rank": self.rank, "regulator": self.regulator, "torsion": self.torsion, "units": [list(u) for u in self.units]}


def fundamental_units(o: OrderData, effort="desk", seed: int = 0, extra: Sequence[Element] = ()) -> UnitData:
    """Independent units spanning the unit group found by weighted short-vector search."""
    cfg = effort_config(effort)
    r = o.unit_rank
    torsion = _torsion_order(o)
    if r == 0:
        return UnitData([], 1.0, 0, torsion)
    rng = random.Random(seed)
    places = sum(o.signature)
    found: list[Element] = list(extra)
    by_ideal: dict[IdealHNF, Element] = {}
    basis: list[Element] = []
    one = IdealHNF.unit(o)
    for t in range(cfg["search"] * 4):
        w = _random_weights(rng, places, 0.5 + t / 6)
        for x in small_combinations(reduce_basis(one, w), limit=120):
            nx = o.norm(x)
            if abs(nx) == 1:
                found.append(x)
            elif 1 < abs(nx) < 400:
                J = IdealHNF.principal(o, x)
                y = by_ideal.get(J)
                if y is None:
                    by_ideal[J] = x
                else:
                    u = o.divides(y, x)
                    if u is not None:
                        found.append(u)
        if t % 8 == 7 or t == cfg["search"] * 4 - 1:
            basis = reduce_unit_basis(o, found)
            found = list(basis)
            if len(basis) == r and t >= cfg["search"]:
                break
    if len(basis) < r:
        raise EffortExhausted(f"found only {len(basis)} independent units of {r}")
    with mpmath.workdps(o.dps):
        R = abs(mpmath.det(mpmath.matrix([_log_vector(o, u) for u in basis])))
    for u in basis:
        assert abs(o.norm(u)) == 1
    return UnitData(basis, float(R), r, torsion)


def _torsion_order(o: OrderData) -> int:
    """Number of roots of unity; they are the elements with T2 = n, found among short vectors."""
    r1, _ = o.signature
    if r1 > 0:
        return 2
    best = 2
    one = o.one()
    for x in small_combinations(reduce_basis(IdealHNF.unit(o)), limit=2000):
        for y in (x, o.neg(x)):
            if y == one or abs(o.norm(y)) != 1:
                continue
            if o.pow(y, 3) == one:
                best = max(best, 6)
            elif o.pow(y, 4) == one and o.pow(y, 2) != one:
                best = max(best, 4)
    return best


# -- norm equations -------------------------------------------------------------

def cubic_form(p: int, x1: int, x2: int, x3: int) -> int:
    return x1**3 + p * x2**3 + p * p * x3**3 - 3 * p * x1 * x2 * x3


@dataclass
class NormEquationResult:
    p: int
    target: int
    solution: tuple[int, int, int] | None
    certificate: dict

    def as_dict(self) -> dict:
        return {"p": self.p, "target": self.target, "solution": list(self.solution) if self.solution else None, **self.certificate}


def _ideals_of_norm(o: OrderData, t: int) -> list[IdealHNF]:
    from itertools import product

    options = []
    for q, k in sympy.factorint(abs(t)).items():
        primes = decompose_prime(o, q, check=False)
        choices = []
        for exps in product(*[range(k // P.f + 1) for P in primes]):
            if sum(e * P.f for e, P in zip(exps, primes)) == k:
                choices.append(prime_product(o, list(zip(primes, exps))))
        options.append(choices)
    out = []
    for combo in product(*options):
        I = IdealHNF.unit(o)
        for J in combo:
            I = I * J
        out.append(I)
    return out


def solve_norm_equation(p: int, t: int = 3, effort="desk", seed: int = 0) -> NormEquationResult:
    """Solve x1^3 + p x2^3 + p^2 x3^3 - 3p x1 x2 x3 = t with (x1, x2, x3) in Z^3."""
    from .fields import pure_cubic_order

    o = pure_cubic_order(p)
    power_basis = o.denominator == 1 and all(o.basis[i][j] == int(i == j) for i in range(3) for j in range(3))
    if abs(t) == 1:
        sol = (t, 0, 0)
        return NormEquationResult(p, t, sol, {"method": "trivial unit"})
    ideals = _ideals_of_norm(o, t)
    cert: dict = {"ideals_of_norm": len(ideals), "ring_is_power_basis": power_basis}
    cg = None
    classes = []
    units = None
    for I in ideals:
        g = find_generator(o, I, trials=effort_config(effort)["search"] // 4, seed=seed)
        if g is None:
            if cg is None:
                cg = o.cache(("class_group", seed), lambda: class_group(o, effort, seed))
            cls = cg.class_of(I, seed)
            if any(cls):
                classes.append(list(cls))
                continue
            g = find_generator(o, I, trials=effort_config(effort)["search"], seed=seed + 7)
            if g is None:
                raise EffortExhausted("principal ideal of the target norm without a located generator")
        candidates = [g]
        if not power_basis:
            if units is None:
                units = fundamental_units(o, effort, seed)
            eps = units.units[0]
            candidates = [o.mul(g, o.pow(eps, k)) for k in range(-6, 7)]
        for y in candidates:
            pw = o.to_power(y)
            if all(c.denominator == 1 for c in pw):
                x1, x2, x3 = (int(c) for c in pw)
                N = cubic_form(p, x1, x2, x3)
                if N == -t:
                    x1, x2, x3 = -x1, -x2, -x3
                    N = t
                if N == t:
                    cert.update(method="generator of an ideal of norm t", generator=[x1, x2, x3])
                    return NormEquationResult(p, t, (x1, x2, x3), cert)
    if cg is None and not ideals:
        cert.update(method="no ideal of norm t")
        return NormEquationResult(p, t, None, cert)
    if cg is not None and len(classes) == len(ideals):
        cert.update(
            method="every ideal of norm t is non-principal",
            classes=classes,
            class_group=list(cg.invariants),
            class_group_certified=cg.certified,
        )
        return NormEquationResult(p, t, None, cert)
    raise EffortExhausted("norm equation undecided within the effort budget")


def norm_equation(p: int, t: int = 3, effort="desk", seed: int = 0) -> tuple[int, int, int] | None:
    return solve_norm_equation(p, t, effort, seed).solution


__all__ = [
    "ClassGroupStructure",
    "EFFORT_LEVELS",
    "FactorBase",
    "NormEquationResult",
    "RelationLattice",
    "UnitData",
    "class_group",
    "cubic_form",
    "find_generator",
    "fundamental_units",
    "ideal_exponents",
    "is_principal",
    "norm_equation",
    "primes_up_to",
    "reduce_unit_basis",
    "solve_norm_equation",
]
