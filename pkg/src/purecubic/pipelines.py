"""Ambiguous class number bookkeeping and the verification pipelines.

Every pipeline returns a ``Certificate``: the inputs, the facts taken as given,
the values actually computed and a verdict.  Facts that would need degree 9
or 18 arithmetic are listed in ``assumed_facts`` and never computed.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import permutations
from typing import Any, Callable, Iterable, Sequence

from sympy import isprime

from .cyclotomic import PeriodElement, cyclo_norm_element, structure_constants
from .eisenstein import OMEGA, EisensteinInt, SymbolValue, is_cube_mod_p, normalize, split_prime, unit_exponent
from .errors import EffortExhausted, InconsistentInputs, InvalidPrime, PrecisionExhausted
from .localfield import (
    LAMBDA_ADIC,
    LocalNumber,
    cube_roots,
    embed_eisenstein,
    hensel_cube_root,
    lift_period_roots,
    padic_omega,
    NotSplit,
)
from .symbols import LAMBDA_PLACE, PlaceOfK, exponent_rank_f3, hilbert_symbol, tame_symbol, wild_symbol, wild_symbol_local

DEFAULT_PRECISION = 6

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"

# Facts used by the arguments but not computed here.
UNRAMIFIED_SPLITTING = (
    "unramified-splitting: L/K and FM+/F are unramified cubic extensions, "
    "and the primes of M and K above alpha split in L"
)
CM_UNITS = "cm-units: the 3-part of E_M is generated by E_M+ and the cube roots of unity (CM extension M/M+)"
HASSE_NORM = "hasse-norm: in the unramified L/K every (S-)unit that is a local norm everywhere is a global norm"
NAKAYAMA = "nakayama: a 3-group acting on a non-trivial finite 3-group has non-trivial invariants"
CLASS_NUMBER_RELATION = "class-number-relation: h_K = (q/3) h_F^2 with q in {1, 3}"


class CaseLabel(str, Enum):
    CASE1 = "Case1"  # p = 2 mod 3
    CASE3 = "Case3"  # p = 1 mod 9
    CASE4 = "Case4"  # p = 4, 7 mod 9 and 3 is not a cube mod p
    CASE_MAIN = "CaseMain"  # p = 4, 7 mod 9 and 3 is a cube mod p

    def __str__(self) -> str:
        return self.value


def classify(p: int) -> CaseLabel:
    if not isprime(p) or p == 3:
        raise InvalidPrime(f"{p} is not a prime different from 3")
    if p % 3 == 2:
        return CaseLabel.CASE1
    if p % 9 == 1:
        return CaseLabel.CASE3
    return CaseLabel.CASE_MAIN if is_cube_mod_p(3, p) else CaseLabel.CASE4


def _require(p: int, *cases: CaseLabel) -> CaseLabel:
    case = classify(p)
    if case not in cases:
        raise InvalidPrime(f"p={p} is {case}, expected one of {[str(c) for c in cases]}")
    return case


# -- certificates -------------------------------------------------------------

@dataclass
class Certificate:
    pipeline: str
    p: int
    inputs: dict = field(default_factory=dict)
    assumed_facts: list[str] = field(default_factory=list)
    computed_values: dict = field(default_factory=dict)
    verdict: str = PASS
    failures: list[str] = field(default_factory=list)

    def check(self, ok: bool, what: str) -> bool:
        if not ok:
            self.failures.append(what)
            self.verdict = FAIL
        return ok

    def as_dict(self) -> dict:
        return _jsonable({k: getattr(self, k) for k in self.__dataclass_fields__})

    def to_json(self, **kw) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, **kw)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS


def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, SymbolValue):
        return x.exponent
    if isinstance(x, EisensteinInt):
        return [x.a, x.b]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Enum):
        return x.value
    return x


# -- Chevalley's formula ------------------------------------------------------

@dataclass(frozen=True)
class RamifiedPlaceData:
    label: str
    e: int
    f: int = 1
    in_S: bool = False

    def __post_init__(self):
        if self.e < 1 or self.f < 1:
            raise InconsistentInputs(f"place {self.label}: e and f must be positive")

    @property
    def contribution(self) -> int:
        return self.e * self.f if self.in_S else self.e


@dataclass(frozen=True)
class ChevalleyCertificate:
    base_class_order_3part: int
    degree: int
    place_data: tuple[RamifiedPlaceData, ...]
    unit_index: int
    result: int

    @property
    def numerator(self) -> int:
        return self.base_class_order_3part * _prod(pl.contribution for pl in self.place_data)

    def as_dict(self) -> dict:
        return {
            "base_class_order_3part": self.base_class_order_3part,
            "degree": self.degree,
            "place_data": [asdict(pl) for pl in self.place_data],
            "unit_index": self.unit_index,
            "result": self.result,
        }


def _prod(xs: Iterable[int]) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


def solve_chevalley_base(result: int, degree: int, place_data: Sequence[RamifiedPlaceData], unit_index: int) -> int:
    """The base class number forced by a known value of the left-hand side."""
    num = result * degree * unit_index
    contrib = _prod(pl.contribution for pl in place_data)
    if num % contrib:
        raise InconsistentInputs(f"{num} is not divisible by {contrib}")
    return num // contrib


def chevalley_order(
    base_class_order_3part: int,
    degree: int,
    place_data: Sequence[RamifiedPlaceData],
    unit_index: int,
) -> ChevalleyCertificate:
    """|Cl_{L,S}^G| = |Cl_{K,S}| prod(e or e f) / ([L:K] [E_{K,S} : E_{K,S} cap N L^x]).

    The division must be exact; anything else means the inputs contradict
    each other.
    """
    for name, v in (("base", base_class_order_3part), ("degree", degree), ("unit index", unit_index)):
        if not isinstance(v, int) or v < 1:
            raise InconsistentInputs(f"{name} must be a positive integer, got {v!r}")
    places = tuple(place_data)
    num = base_class_order_3part * _prod(pl.contribution for pl in places)
    den = degree * unit_index
    if num % den:
        raise InconsistentInputs(f"{num} is not divisible by {den}")
    return ChevalleyCertificate(base_class_order_3part, degree, places, unit_index, num // den)


# -- the rho map --------------------------------------------------------------

@dataclass(frozen=True)
class GlobalPlace:
    """A place of k = Q(w); symbols of elements of k computed globally."""

    place: PlaceOfK
    label: str = ""

    def symbol(self, u, t) -> SymbolValue:
        return hilbert_symbol(u, t, self.place)

    def name(self) -> str:
        return self.label or str(self.place)


@dataclass(frozen=True)
class MElement:
    """num / den with num in M = k M+ on the period basis and den a non-zero integer."""

    num: PeriodElement
    den: int = 1

    def __mul__(self, other: "MElement") -> "MElement":
        return MElement(self.num * other.num, self.den * other.den)

    def norm(self):
        """Norm from M down to k, as an EisensteinInt or Fraction pair."""
        n = self.num.norm()
        d = self.den**3
        n = EisensteinInt.coerce(n) if isinstance(n, int) else n
        if n.a % d or n.b % d:
            return (Fraction(n.a, d), Fraction(n.b, d))
        return EisensteinInt(n.a // d, n.b // d)


@dataclass(frozen=True)
class LambdaEmbedding:
    """One of the three embeddings of M into Q_3(w) over k, given by the images of the periods."""

    images: tuple[int, int, int]
    precision: int
    label: str = ""

    def local(self, x) -> LocalNumber:
        m = 3**self.precision
        if isinstance(x, (int, EisensteinInt)):
            return embed_eisenstein(x, LAMBDA_ADIC, self.precision)
        if isinstance(x, LocalNumber):
            return x
        den = 1
        if isinstance(x, MElement):
            x, den = x.num, x.den
        if isinstance(x, PeriodElement):
            v = EisensteinInt.coerce(0)
            for c, r in zip(x.coords, self.images):
                v = v + EisensteinInt.coerce(c) * r
            num = LocalNumber.from_residue((v.a % m, v.b % m), self.precision)
            if den == 1:
                return num
            return num / embed_eisenstein(den, LAMBDA_ADIC, self.precision)
        if isinstance(x, RationalPoly):
            return LocalNumber.from_residue((x.evaluate_mod(self.images[0], m), 0), self.precision)
        raise TypeError(f"cannot embed {type(x).__name__}")

    def symbol(self, u, t) -> SymbolValue:
        return wild_symbol_local(self.local(u), self.local(t))

    def name(self) -> str:
        return self.label or f"lambda{self.images}"


@dataclass(frozen=True)
class RationalPoly:
    """An element of M+ as a polynomial with rational coefficients in eta_0 (low to high)."""

    coeffs: tuple[Fraction, ...]

    def evaluate_mod(self, x: int, m: int) -> int:
        total = 0
        for c in reversed(self.coeffs):
            c = Fraction(c)
            if c.denominator % 3 == 0:
                raise PrecisionExhausted("coefficient denominator divisible by 3")
            total = (total * x + c.numerator * pow(c.denominator, -1, m)) % m
        return total


@dataclass
class RhoImage:
    labels: list[str]
    places: list[str]
    matrix: list[list[SymbolValue]]
    rank: int

    @property
    def order(self) -> int:
        return 3**self.rank

    def as_dict(self) -> dict:
        return {
            "units": self.labels,
            "places": self.places,
            "matrix": [[int(x) for x in row] for row in self.matrix],
            "rank": self.rank,
            "image_order": self.order,
        }


def rho_map(s_units: Sequence, kummer, places: Sequence, labels: Sequence[str] | None = None) -> RhoImage:
    """Rows (u, kummer)_v over the given places; the image order is 3^rank over F_3.

    Each place is a ``GlobalPlace`` or a ``LambdaEmbedding``; bare ``PlaceOfK``
    values are accepted too.
    """
    places = [GlobalPlace(v) if isinstance(v, PlaceOfK) else v for v in places]
    mat = [[v.symbol(u, kummer) for v in places] for u in s_units]
    rank = exponent_rank_f3(mat) if mat else 0
    names = list(labels) if labels is not None else [str(u) for u in s_units]
    return RhoImage(names, [v.name() for v in places], mat, rank)


# -- M = k(cbrt(p alpha)) and its lambda-embeddings ------------------------------

def gauss_sum(p: int) -> PeriodElement:
    """eta_0 + w eta_1 + w^2 eta_2, the cubic Gauss sum, on the period basis of M."""
    return PeriodElement(p, (EisensteinInt(1), OMEGA, OMEGA * OMEGA))


def _unit_power(u: EisensteinInt) -> int:
    """k with u = +-w^k."""
    return unit_exponent(u)[1]


def m_kummer_generator(p: int) -> tuple[EisensteinInt, int]:
    """alpha with g^3 = p alpha for the Gauss sum g, and the exponent k with alpha ~ w^k (primary alpha)."""
    g3 = gauss_sum(p) ** 3
    if not g3.is_scalar():
        raise AssertionError("the cube of the Gauss sum is not in k")
    pa = EisensteinInt.coerce(g3.scalar_value())
    if pa.a % p or pa.b % p:
        raise AssertionError("the cube of the Gauss sum is not divisible by p")
    alpha = EisensteinInt(pa.a // p, pa.b // p)
    if alpha.norm() != p:
        raise AssertionError("g^3 / p is not a prime of norm p")
    prim = normalize(alpha)
    ratio = alpha.exact_div(prim)
    return alpha, _unit_power(ratio)


def lambda_embeddings(p: int, precision: int = DEFAULT_PRECISION) -> list[LambdaEmbedding]:
    """The three embeddings of M into Q_3(w) over k, from the 3-adic period roots.

    Only orderings of the roots compatible with the multiplication of the
    periods modulo 3^precision are kept; more than three survivors means the
    precision cannot tell them apart.
    """
    roots = lift_period_roots(p, precision)
    if isinstance(roots, NotSplit):
        raise InvalidPrime(f"lambda does not split in M for p={p}")
    m = 3**precision
    c = structure_constants(p)
    good = []
    for perm in sorted(set(permutations(roots))):
        ok = all(
            (perm[i] * perm[j] - sum(c[i][j][k] * perm[k] for k in range(3))) % m == 0
            for i in range(3)
            for j in range(i, 3)
        )
        if ok:
            good.append(tuple(perm))
    if len(good) != 3:
        raise PrecisionExhausted(f"{len(good)} period orderings survive at precision 3^{precision}")
    return [LambdaEmbedding(g, precision, f"l{i}") for i, g in enumerate(good)]


def beta_element(p: int) -> MElement:
    """cbrt(p alpha) / N(1 - zeta_p), with the cube root realised by the Gauss sum."""
    gamma = cyclo_norm_element(p)
    adj = gamma.shift(1) * gamma.shift(2)  # gamma^{-1} = adj / p
    num = gauss_sum(p) * PeriodElement(p, [EisensteinInt.coerce(x) for x in adj.coords])
    return MElement(num, p)


def _m_plus_units(p: int, effort: str, seed: int) -> list[PeriodElement]:
    """Fundamental units of M+ on the period basis (an integral basis of M+)."""
    from .orders import fundamental_units, period_field_order

    o = period_field_order(p)
    data = fundamental_units(o, effort, seed)
    eta = PeriodElement.period(p, 0)
    out = []
    for u in data.units:
        acc = PeriodElement.rational(p, 0)
        for i, c in enumerate(o.to_power(u)):
            acc = acc + (eta**i) * Fraction(c)
        coords = []
        for c in acc.coords:
            c = Fraction(c)
            if c.denominator != 1:
                raise AssertionError("unit of M+ is not integral on the period basis")
            coords.append(int(c))
        out.append(PeriodElement(p, coords))
    return out


def _with_precision_retry(fn: Callable[[int], Certificate], precision: int) -> Certificate:
    try:
        return fn(precision)
    except PrecisionExhausted:
        cert = fn(2 * precision)
        cert.computed_values["precision_doubled"] = True
        return cert


# -- pipelines -------------------------------------------------------------------

def verify_A_M(p: int) -> Certificate:
    """Chevalley's formula for M/k with the unit index from the symbol (w, p alpha)."""
    _require(p, CaseLabel.CASE3, CaseLabel.CASE4, CaseLabel.CASE_MAIN)
    alpha, alpha_bar = split_prime(p)
    kummer = alpha * alpha * alpha_bar  # p alpha
    cert = Certificate("verify_A_M", p, inputs={"alpha": alpha, "kummer": "p*alpha"})
    hil = tame_symbol(OMEGA, kummer, alpha)
    cert.computed_values["symbol_w_palpha_at_alpha"] = hil
    cert.check(hil.exponent == ((p - 1) // 3) % 3, "closed form (p-1)/3 of the symbol at alpha")
    rho = rho_map([OMEGA], kummer, [PlaceOfK.of(alpha), PlaceOfK.of(alpha_bar)], labels=["w"])
    cert.computed_values["rho"] = rho.as_dict()
    places = [RamifiedPlaceData("(alpha)", 3), RamifiedPlaceData("(alpha_bar)", 3)]
    ch = chevalley_order(1, 3, places, rho.order)
    cert.computed_values["chevalley"] = ch.as_dict()
    cert.computed_values["A_M_G_order"] = ch.result
    expected = 3 if p % 9 == 1 else 1
    cert.check(ch.result == expected, f"|A_M^G| = {expected}")
    return cert


def verify_theorem2(
    p: int,
    precision: int = DEFAULT_PRECISION,
    with_units: bool = True,
    effort: str = "desk",
    seed: int = 0,
) -> Certificate:
    """Ambiguous classes of L/M with S empty and with S = {prime over alpha}."""
    _require(p, CaseLabel.CASE_MAIN)
    return _with_precision_retry(lambda n: _theorem2(p, n, with_units, effort, seed), precision)


def _theorem2(p: int, precision: int, with_units: bool, effort: str, seed: int) -> Certificate:
    cert = Certificate(
        "verify_theorem2",
        p,
        inputs={"precision": precision},
        assumed_facts=[UNRAMIFIED_SPLITTING, CM_UNITS, NAKAYAMA],
    )
    cv = cert.computed_values
    alpha, w_power = m_kummer_generator(p)
    cv["alpha_of_M"] = alpha
    a1, a2 = split_prime(p)
    cv["alpha_of_M_lies_over"] = "alpha" if normalize(alpha) == a1 else "alpha_bar"
    cert.check(normalize(alpha) in (a1, a2), "g^3/p is a split prime over p")

    embs = lambda_embeddings(p, precision)
    cv["period_images"] = [list(e.images) for e in embs]

    # (i) rho(w) is a non-zero constant row
    rho_w = rho_map([OMEGA], p, embs, labels=["w"])
    row = [int(x) for x in rho_w.matrix[0]]
    cv["rho_w"] = row
    s = row[0]
    cert.check(len(set(row)) == 1 and s != 0, "rho(w) is a non-zero constant row")
    cert.check(s == int(wild_symbol(OMEGA, p)), "rho(w) agrees with the global wild symbol (w, p)")

    # gamma_p is congruent to a rational integer mod 9 at each embedding
    gamma = cyclo_norm_element(p)
    cert.check(gamma.norm() == p, "N(gamma_p) = p")
    gam_res = []
    for e in embs:
        g_loc = e.local(gamma)
        x, y = g_loc.residue_mod9()
        gam_res.append([x, y])
        cert.check(y == 0 and g_loc.valuation == 0, "gamma_p is a rational integer mod 9")
        cert.check(e.symbol(gamma, p).is_trivial(), "(gamma_p, p) is trivial at lambda")
    cv["gamma_residues_mod9"] = gam_res

    # (ii) beta symbols: exact route through the Gauss sum
    beta = beta_element(p)
    nb = beta.norm()
    cert.check(isinstance(nb, EisensteinInt) and nb == alpha, "N_{M/k}(beta) = alpha")
    g = gauss_sum(p)
    cert.check(g.shift(-1) == g * OMEGA, "sigma^{-1}(g) = w g")
    ratio = gamma * gamma.shift(-1).inverse()
    cert.check(ratio.norm() == 1, "gamma / sigma^{-1}(gamma) is a unit of M+")
    beta_row = [int(e.symbol(beta, p)) for e in embs]
    cv["beta_symbols"] = beta_row
    cert.check(len(set(beta_row)) == 3, "beta symbols pairwise distinct")
    c0 = beta_row[0]
    coset = sorted({c0 % 3, (c0 + s) % 3, (c0 + 2 * s) % 3})
    cert.check(sorted(beta_row) == coset and s != 0, "beta symbols form the coset {c, c+s, c+2s}")
    shifts = [(beta_row[(i + 1) % 3] - beta_row[i]) % 3 for i in range(3)]
    cv["beta_symbol_steps"] = shifts
    cert.check(len(set(shifts)) == 1 and shifts[0] in (s % 3, (-s) % 3), "consecutive beta symbols differ by +-rho(w)")

    # the same values through 3-adic cube roots of p alpha (labels dropped)
    pa = embed_eisenstein(alpha * p, LAMBDA_ADIC, precision)
    roots = cube_roots(pa)
    h = hensel_cube_root(pa)
    cert.check(len(roots) == 3 and h is not None, "p alpha is a cube in Q_3(w)")
    hensel_row = sorted(int(wild_symbol_local(r, embed_eisenstein(p, LAMBDA_ADIC, precision))) for r in roots)
    cv["beta_symbols_hensel"] = hensel_row
    cert.check(hensel_row == sorted(beta_row), "Gauss-sum and Hensel routes give the same symbol set")
    g_imgs = sorted(e.local(g).residue() for e in embs)
    r_imgs = sorted(r.residue() for r in roots)
    cert.check(_same_mod(g_imgs, r_imgs, roots[0].precision), "Gauss-sum images are the 3-adic cube roots")

    # rho on E_M+ is trivial
    units_rows = []
    if with_units:
        units = _m_plus_units(p, effort, seed)
        for u in units:
            units_rows.append([int(e.symbol(u, p)) for e in embs])
        cert.check(all(x == 0 for r in units_rows for x in r), "rho(E_M+) is trivial")
        cv["units_M_plus"] = len(units)
    cv["rho_units_M_plus"] = units_rows

    # (iii) S empty: three lambda-primes with e = 3
    index_empty = 3 ** exponent_rank_f3([row] + units_rows)
    lam = [RamifiedPlaceData(f"l{i}", 3) for i in range(3)]
    ch0 = chevalley_order(1, 3, lam, index_empty)
    cv["chevalley_S_empty"] = ch0.as_dict()
    cv["A_L_G_order"] = ch0.result
    cert.check(ch0.result == 3, "|A_L^G| = 3")

    # (iv) S = {P}: beta joins the S-units, P splits in L
    index_S = 3 ** exponent_rank_f3([row, beta_row] + units_rows)
    cv["index_S"] = index_S
    cert.check(index_S == 9, "S-unit norm index = 9")
    chS = chevalley_order(1, 3, lam + [RamifiedPlaceData("P", 1, 1, in_S=True)], index_S)
    cv["chevalley_S_P"] = chS.as_dict()
    cert.check(chS.result % 3 != 0, "3 does not divide |Cl_{L,S}^G|")
    return cert


def _same_mod(xs, ys, precision: int) -> bool:
    m = 3**precision
    norm = lambda zs: sorted(tuple(c % m for c in z) if isinstance(z, tuple) else z % m for z in zs)
    return norm(xs) == norm(ys)


def verify_main(
    p: int,
    with_class_groups: bool = False,
    with_AK: bool = False,
    precision: int = DEFAULT_PRECISION,
    effort: str = "desk",
    seed: int = 0,
    theorem2: Certificate | None = None,
) -> Certificate:
    """The bounds 9 <= |A_K| <= 9 and the resulting structure of A_F and A_K."""
    _require(p, CaseLabel.CASE_MAIN)
    cert = Certificate(
        "verify_main",
        p,
        inputs={"with_class_groups": with_class_groups, "with_AK": with_AK, "precision": precision},
        assumed_facts=[UNRAMIFIED_SPLITTING, HASSE_NORM, NAKAYAMA, CLASS_NUMBER_RELATION],
    )
    cv = cert.computed_values
    t2 = theorem2 or verify_theorem2(p, precision, effort=effort, seed=seed)
    cv["theorem2_verdict"] = t2.verdict
    cert.check(t2.passed, "ambiguous class computation for L/M")
    A_L_nontrivial = t2.computed_values.get("A_L_G_order", 1) > 1
    cl_LS_coprime = t2.computed_values.get("chevalley_S_P", {}).get("result", 3) % 3 != 0

    # lower bound: |A_L^H| >= 3 for H = Gal(L/K); L/K unramified, unit index 1
    lower = None
    if A_L_nontrivial:
        lower = solve_chevalley_base(3, 3, [], 1)
        cert.check(chevalley_order(lower, 3, [], 1).result == 3, "Chevalley for L/K with S empty")
    cv["lower_bound"] = lower

    # upper bound: S = {P'}, P' splits in L and 3 does not divide |Cl_{L,S}|
    upper = None
    if cl_LS_coprime:
        split = [RamifiedPlaceData("P'", 1, 1, in_S=True)]
        cl_KS = solve_chevalley_base(1, 3, split, 1)
        cert.check(chevalley_order(cl_KS, 3, split, 1).result == 1, "Chevalley for L/K with S = {P'}")
        cv["Cl_K_S_3part"] = cl_KS
        upper = 3 * cl_KS  # [P'] has order dividing 3 since P'^3 = (alpha)
    cv["upper_bound"] = upper
    cert.check(lower == 9 and upper == 9, "9 <= |A_K| <= 9")
    AK = 9 if lower == upper == 9 else None
    cv["A_K_order"] = AK
    if AK is not None:
        qs = [q for q in (1, 3) if (3 * AK) % q == 0 and _is_square(3 * AK // q)]
        cert.check(qs == [3], "q = 3 is the only index compatible with |A_K| = 9")
        AF = _isqrt(3 * AK // 3)
        cv["A_F_order"] = AF
        cv["A_F"] = [AF]
        # A_K+ = A_F = Z/3 is a direct summand of a group of order 9
        cv["A_K"] = [3, 3]

    if with_class_groups:
        from .orders import class_group, pure_cubic_order

        t0 = time.perf_counter()
        cgF = class_group(pure_cubic_order(p), effort, seed)
        cv["class_group_F"] = cgF.as_dict()
        cv["class_group_F_seconds"] = round(time.perf_counter() - t0, 3)
        cert.check(cgF.three_part() == [3], "engine A_F = [3]")
        if with_AK:
            from .orders import closure_automorphisms, closure_order

            t0 = time.perf_counter()
            try:
                K = closure_order(p)
                autos = closure_automorphisms(p)
                cgK = class_group(K, effort, seed, automorphisms=autos, fb_bound=150)
                cv["class_group_K"] = cgK.as_dict()
                cert.check(cgK.three_part() == [3, 3], "engine A_K = [3, 3]")
                h = consistency_hK(p, cgF.class_number, _three_part(cgK.class_number))
                cv["q_index"] = h.computed_values.get("q")
            except EffortExhausted as exc:
                cv["class_group_K"] = f"effort exhausted: {exc}"
                if cert.verdict == PASS:
                    cert.verdict = INCONCLUSIVE
            cv["class_group_K_seconds"] = round(time.perf_counter() - t0, 3)
    return cert


def _is_square(n: int) -> bool:
    return n >= 0 and _isqrt(n) ** 2 == n


def _isqrt(n: int) -> int:
    from math import isqrt

    return isqrt(n)


def _three_part(n: int) -> int:
    t = 1
    while n % 3 == 0:
        n //= 3
        t *= 3
    return t


def verify_schoof_symbols(p: int) -> Certificate:
    """The two symbols behind |A_L^H| = 3 for every order-3 subgroup H, each by two routes."""
    _require(p, CaseLabel.CASE4, CaseLabel.CASE_MAIN)
    alpha, alpha_bar = split_prime(p)
    cert = Certificate("verify_schoof_symbols", p, inputs={"alpha": alpha}, assumed_facts=[UNRAMIFIED_SPLITTING, NAKAYAMA])
    cv = cert.computed_values
    f = (p - 1) // 3

    s1 = tame_symbol(OMEGA, alpha, alpha)
    s1_closed = SymbolValue(-f)  # (w, alpha)_alpha = chi_alpha(w)^(-1) = w^(-(p-1)/3)
    cv["symbol_w_alpha_at_alpha"] = s1
    cert.check(s1 == s1_closed, "(w, alpha) at alpha matches its closed form")
    cert.check(not s1.is_trivial(), "(w, alpha) at alpha is non-trivial")

    s2 = tame_symbol(OMEGA, p, alpha_bar)
    # p-adic route: the completion at alpha_bar is Q_p, w goes to a root r of x^2+x+1
    r = padic_omega(p, 1, alpha_bar)
    val = pow(r, f, p)
    e = next(k for k in range(3) if pow(r, k, p) == val)
    s2_padic = SymbolValue(-e)
    cv["symbol_w_p_over_alpha_bar"] = s2
    cert.check(s2 == s2_padic, "(w, p) over alpha_bar agrees with the Q_p computation")
    cert.check(not s2.is_trivial(), "(w, p) over alpha_bar is non-trivial")

    if classify(p) is CaseLabel.CASE_MAIN:
        k_alpha = chevalley_order(1, 3, [RamifiedPlaceData("(alpha)", 3), RamifiedPlaceData("lambda", 3)], 3)
        cv["A_k(cbrt alpha)_G"] = k_alpha.result
        over_bar = [RamifiedPlaceData(f"P{i}", 3) for i in range(3)]
        cv["A_L_H_bound_over_k(cbrt alpha)"] = chevalley_order(1, 3, over_bar, 3).result
        cv["A_L_H_orders"] = {"L/M": 3, "L/K": 3, "L/k(cbrt alpha)": 3, "L/k(cbrt alpha_bar)": 3}
        cert.check(k_alpha.result == 1, "A of k(cbrt alpha) is trivial")
    return cert


def consistency_hK(p: int, h_F: int, h_K_3part: int | None) -> Certificate:
    """q = 3 h_K / h_F^2 on 3-parts; q must be 1 or 3, and 3 when p is in the main case."""
    case = classify(p)
    cert = Certificate("consistency_hK", p, inputs={"h_F": h_F, "h_K_3part": h_K_3part}, assumed_facts=[CLASS_NUMBER_RELATION])
    if h_K_3part is None:
        cert.verdict = INCONCLUSIVE
        cert.computed_values["status"] = "incomplete"
        return cert
    aF = _three_part(h_F)
    num = 3 * _three_part(h_K_3part)
    if num % (aF * aF):
        raise InconsistentInputs(f"3 h_K / h_F^2 = {num}/{aF * aF} is not an integer")
    q = num // (aF * aF)
    if q not in (1, 3):
        raise InconsistentInputs(f"q = {q} is neither 1 nor 3")
    cert.computed_values["q"] = q
    cert.computed_values["status"] = "complete"
    if case is CaseLabel.CASE_MAIN:
        cert.check(q == 3, "q = 3")
    return cert


def verify_norm_equation_criterion(p: int, effort: str = "desk", seed: int = 0) -> Certificate:
    """x1^3 + p x2^3 + p^2 x3^3 - 3p x1 x2 x3 = 3 is solvable iff 3 is a cube mod p."""
    from .orders import cubic_form, solve_norm_equation

    _require(p, CaseLabel.CASE4, CaseLabel.CASE_MAIN)
    expected = is_cube_mod_p(3, p)
    cert = Certificate("verify_norm_equation_criterion", p, inputs={"target": 3}, assumed_facts=[])
    cv = cert.computed_values
    cv["three_is_cube"] = expected
    try:
        res = solve_norm_equation(p, 3, effort, seed)
    except EffortExhausted as exc:
        cert.verdict = INCONCLUSIVE
        cv["status"] = f"effort exhausted: {exc}"
        return cert
    cv["result"] = res.as_dict()
    if res.solution is not None:
        cert.check(cubic_form(p, *res.solution) == 3, "witness satisfies the norm equation exactly")
    cert.check((res.solution is not None) == expected, "solvable iff 3 is a cube mod p")
    return cert


__all__ = [
    "CaseLabel",
    "Certificate",
    "ChevalleyCertificate",
    "GlobalPlace",
    "LambdaEmbedding",
    "MElement",
    "RamifiedPlaceData",
    "RationalPoly",
    "RhoImage",
    "beta_element",
    "chevalley_order",
    "classify",
    "consistency_hK",
    "gauss_sum",
    "lambda_embeddings",
    "m_kummer_generator",
    "rho_map",
    "solve_chevalley_base",
    "verify_A_M",
    "verify_main",
    "verify_norm_equation_criterion",
    "verify_schoof_symbols",
    "verify_theorem2",
]
