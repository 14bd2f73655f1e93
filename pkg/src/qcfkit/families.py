"""The five q-continued-fraction families and their exact root-of-unity checks.

Families (all with integer-polynomial partial numerators/denominators):

    K  : 1 + q/1 + q^2/1 + q^3/1 + ...          (Rogers-Ramanujan, unscaled)
    S1 : 1 + q/1 + (q+q^2)/1 + q^3/1 + ...      (Ramanujan-Selberg)
    S2 : 1 + (q+q^2)/1 + q^4/1 + (q^3+q^6)/1 + ...
    S3 : 1 + (q+q^2)/1 + (q^2+q^4)/1 + ...
    GG : 1+q + q^2/(1+q^3) + q^4/(1+q^5) + ...  (Goellnitz-Gordon; conjectural)

For the four proved families, the denominator polynomials at primitive m-th
roots of unity (m in the right congruence class) satisfy exact closed forms
(Schur; Zhang), verified here as equalities in Z[q]/Phi_m(q).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from mpmath import mp

from .cf_engine import CFCoeffs
from .errors import AdmissibilityError
from .numtheory import divisors
from .polyring import CycloElem, IntPoly

PROVED = "proved"
CONJECTURAL = "conjectural"


@dataclass(frozen=True)
class ClosedForm:
    """Expected residue: 0, 1, or sign(m) * q^(exponent(m)) mod Phi_m."""

    kind: str  # "zero" | "one" | "power"
    sign: Optional[Callable[[int], int]] = None
    exponent: Optional[Callable[[int], int]] = None

    def expected(self, m: int) -> CycloElem:
        if self.kind == "zero":
            return CycloElem.zero(m)
        if self.kind == "one":
            return CycloElem.one(m)
        s, e = self.sign(m), self.exponent(m) % m
        return CycloElem(m, IntPoly.monomial(e, s))

    def row_fields(self, m: int) -> tuple[int, int]:
        if self.kind != "power":
            raise ValueError("row fields only defined for power forms")
        return self.sign(m), self.exponent(m) % m


Terms = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class FamilySpec:
    """One continued-fraction family with its congruence data and constants.

    Partial numerators/denominators are exposed both as sparse
    (exponent, coefficient) terms (a_terms/b_terms) and as IntPoly values
    (a_poly/b_poly).
    """

    name: str
    description: str
    status: str
    b0_poly: IntPoly
    a_terms: Callable[[int], Terms]
    b_terms: Callable[[int], Terms]
    j: Optional[int] = None
    d: Optional[int] = None
    n_of_m: Optional[Callable[[int], int]] = None
    c1: Optional[Fraction] = None
    c2: Optional[Fraction] = None
    table_prev: Optional[ClosedForm] = None
    table_at: Optional[ClosedForm] = None

    def a_poly(self, n: int) -> IntPoly:
        return IntPoly.from_terms(self.a_terms(n))

    def b_poly(self, n: int) -> IntPoly:
        return IntPoly.from_terms(self.b_terms(n))

    @property
    def proved(self) -> bool:
        return self.status == PROVED

    def gap_threshold(self) -> Fraction:
        """C1 / (2 (1 + C2)^2), the divergence-witness gap lower bound."""
        if self.c1 is None:
            raise AdmissibilityError(f"family {self.name} has no proved constants")
        return self.c1 / (2 * (1 + self.c2) ** 2)

    def admissible(self, m: int) -> bool:
        return self.proved and m >= 1 and m % self.d == self.j % self.d

    def require_admissible(self, m: int) -> None:
        if not self.proved:
            raise AdmissibilityError(
                f"family {self.name} is conjectural: no root-of-unity table data"
            )
        if m < 1 or m % self.d != self.j % self.d:
            raise AdmissibilityError(
                f"m={m} is not admissible for {self.name}: need m = {self.j} (mod {self.d})"
            )
        if m % 2 == 0 and self.name in ("S1", "S2", "S3"):
            raise AdmissibilityError(f"m={m} must be odd for {self.name}")

    def admissible_orders(self, m_min: int, m_max: int) -> list[int]:
        return [m for m in range(max(1, m_min), m_max + 1) if self.admissible(m)]


def _k_a(n: int) -> tuple[tuple[int, int], ...]:
    return ((n, 1),)


def _s1_a(n: int) -> tuple[tuple[int, int], ...]:
    if n % 2 == 1:
        return ((n, 1),)
    return ((n // 2, 1), (n, 1))


def _s2_a(n: int) -> tuple[tuple[int, int], ...]:
    if n % 2 == 1:
        return ((n, 1), (2 * n, 1))
    return ((2 * n, 1),)


def _s3_a(n: int) -> tuple[tuple[int, int], ...]:
    return ((n, 1), (2 * n, 1))


def _gg_a(n: int) -> tuple[tuple[int, int], ...]:
    return ((2 * n, 1),)


def _gg_b(n: int) -> tuple[tuple[int, int], ...]:
    return ((0, 1), (2 * n + 1, 1))


_UNIT_TERMS = ((0, 1),)


def _unit_b(n: int) -> tuple[tuple[int, int], ...]:
    return _UNIT_TERMS


_ONE = IntPoly.one()

FAMILIES: dict[str, FamilySpec] = {
    "K": FamilySpec(
        name="K",
        description="Rogers-Ramanujan continued fraction (without the q^(1/5) prefactor)",
        status=PROVED,
        b0_poly=_ONE,
        a_terms=_k_a,
        b_terms=_unit_b,
        j=1,
        d=5,
        n_of_m=lambda m: m - 1,
        c1=Fraction(1),
        c2=Fraction(1),
        table_prev=ClosedForm("zero"),
        table_at=ClosedForm("power", sign=lambda m: 1, exponent=lambda m: (m - 1) // 5),
    ),
    "S1": FamilySpec(
        name="S1",
        description="First Ramanujan-Selberg continued fraction",
        status=PROVED,
        b0_poly=_ONE,
        a_terms=_s1_a,
        b_terms=_unit_b,
        j=1,
        d=4,
        n_of_m=lambda m: 2 * m - 1,
        c1=Fraction(1),
        c2=Fraction(1),
        table_prev=ClosedForm("one"),
        table_at=ClosedForm(
            "power",
            sign=lambda m: (-1) ** ((m - 1) // 4),
            exponent=lambda m: (m * m - 1) // 8,
        ),
    ),
    "S2": FamilySpec(
        name="S2",
        description="Second Ramanujan-Selberg continued fraction",
        status=PROVED,
        b0_poly=_ONE,
        a_terms=_s2_a,
        b_terms=_unit_b,
        j=1,
        d=8,
        n_of_m=lambda m: 2 * m - 1,
        c1=Fraction(2),
        c2=Fraction(1),
        table_prev=ClosedForm("one"),
        table_at=ClosedForm("power", sign=lambda m: 1, exponent=lambda m: (m - 1) // 2),
    ),
    "S3": FamilySpec(
        name="S3",
        description="Third Ramanujan-Selberg continued fraction",
        status=PROVED,
        b0_poly=_ONE,
        a_terms=_s3_a,
        b_terms=_unit_b,
        j=1,
        d=6,
        n_of_m=lambda m: m - 1,
        c1=Fraction(1),
        c2=Fraction(1),
        table_prev=ClosedForm("zero"),
        table_at=ClosedForm("power", sign=lambda m: 1, exponent=lambda m: (m - 1) // 3),
    ),
    "GG": FamilySpec(
        name="GG",
        description="Goellnitz-Gordon continued fraction (root-of-unity behavior conjectural)",
        status=CONJECTURAL,
        b0_poly=_ONE + IntPoly.monomial(1),
        a_terms=_gg_a,
        b_terms=_gg_b,
    ),
}

FAMILY_NAMES = tuple(FAMILIES)


def make_family(name: str) -> FamilySpec:
    try:
        return FAMILIES[name.upper()]
    except KeyError:
        raise ValueError(
            f"unknown family {name!r}; expected one of {', '.join(FAMILY_NAMES)}"
        ) from None


def numerator_product(f: FamilySpec, n: int) -> IntPoly:
    """Exact product of the first n partial numerators a_1 ... a_n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = IntPoly.one()
    for i in range(1, n + 1):
        out = out * f.a_poly(i)
    return out


# ---------------------------------------------------------------------------
# Coefficient views in the three domains
# ---------------------------------------------------------------------------


def intpoly_coeffs(f: FamilySpec) -> CFCoeffs:
    return CFCoeffs(b0=f.b0_poly, a=f.a_poly, b=f.b_poly)


def cyclo_coeffs(f: FamilySpec, m: int) -> CFCoeffs:
    return CFCoeffs(
        b0=CycloElem(m, f.b0_poly),
        a=lambda n: CycloElem(m, f.a_poly(n)),
        b=lambda n: CycloElem(m, f.b_poly(n)),
    )


def _to_ambient(z):
    if isinstance(z, Fraction):
        return mp.mpf(z.numerator) / mp.mpf(z.denominator)
    if isinstance(z, complex):
        return mp.mpc(z)
    if isinstance(z, int):
        return mp.mpf(z)
    return mp.mpmathify(z)


def evaluate_terms(p: IntPoly, x):
    """Sparse evaluation sum of c * x^e; suits high-degree monomials."""
    acc = 0
    for e, c in p.terms():
        acc += c * x**e
    return acc


def numeric_coeffs(f: FamilySpec, z) -> CFCoeffs:
    """Coefficients evaluated at the point z, at the ambient mpmath precision.

    z must be exact (int, Fraction, complex, mpf/mpc) so re-evaluation at a
    higher precision is meaningful; the callables convert lazily.
    """

    def a(n):
        return evaluate_terms(f.a_poly(n), _to_ambient(z))

    def b(n):
        return evaluate_terms(f.b_poly(n), _to_ambient(z))

    return CFCoeffs(b0=evaluate_terms(f.b0_poly, _to_ambient(z)), a=a, b=b)


def denominator_polys(f: FamilySpec, n_max: int) -> list[IntPoly]:
    """Exact expansions Q_0, ..., Q_{n_max}."""
    out = [IntPoly.one()]
    q_prev, q_curr = IntPoly.zero(), IntPoly.one()
    for n in range(1, n_max + 1):
        q_prev, q_curr = q_curr, f.b_poly(n) * q_curr + f.a_poly(n) * q_prev
        out.append(q_curr)
    return out


def numerator_polys(f: FamilySpec, n_max: int) -> list[IntPoly]:
    """Exact expansions P_0, ..., P_{n_max}."""
    out = [f.b0_poly]
    p_prev, p_curr = IntPoly.one(), f.b0_poly
    for n in range(1, n_max + 1):
        p_prev, p_curr = p_curr, f.b_poly(n) * p_curr + f.a_poly(n) * p_prev
        out.append(p_curr)
    return out


def numerator_product_polys(f: FamilySpec, n_max: int) -> list[IntPoly]:
    """Exact expansions of a_1, a_1 a_2, ..., up to index n_max."""
    out = []
    acc = IntPoly.one()
    for n in range(1, n_max + 1):
        acc = acc * f.a_poly(n)
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# Fast exact recurrences in Z[q]/(q^m - 1)
# ---------------------------------------------------------------------------
# Phi_m divides q^m - 1, so running the recurrence with exponents folded
# mod m and reducing mod Phi_m once at the end yields the same residues as
# stepping directly in Z[q]/Phi_m, at a fraction of the cost.


def _cyclic_shift_add(dst: list[int], src: Sequence[int], exp: int, coef: int, m: int) -> None:
    k = m - exp
    if exp == 0:
        if coef == 1:
            for i, v in enumerate(src):
                dst[i] += v
        else:
            for i, v in enumerate(src):
                dst[i] += coef * v
        return
    if coef == 1:
        dst[exp:] = [x + y for x, y in zip(dst[exp:], src[:k])]
        dst[:exp] = [x + y for x, y in zip(dst[:exp], src[k:])]
    else:
        dst[exp:] = [x + coef * y for x, y in zip(dst[exp:], src[:k])]
        dst[:exp] = [x + coef * y for x, y in zip(dst[:exp], src[k:])]


def _denominators_mod_order(f: FamilySpec, m: int, n_star: int) -> tuple[list[int], list[int]]:
    """(Q_{n_star - 1}, Q_{n_star}) as coefficient vectors mod q^m - 1."""
    q_prev = [0] * m  # Q_{-1}
    q_curr = [0] * m  # Q_0
    q_curr[0] = 1
    for n in range(1, n_star + 1):
        b_n = f.b_terms(n)
        if b_n == _UNIT_TERMS:
            new = list(q_curr)
        else:
            new = [0] * m
            for e, c in b_n:
                _cyclic_shift_add(new, q_curr, e % m, c, m)
        for e, c in f.a_terms(n):
            _cyclic_shift_add(new, q_prev, e % m, c, m)
        q_prev, q_curr = q_curr, new
    return q_prev, q_curr


def _numerator_product_mod_order(f: FamilySpec, m: int, n_star: int) -> list[int]:
    """a_1 * ... * a_{n_star} as a coefficient vector mod q^m - 1."""
    acc = [0] * m
    acc[0] = 1
    for n in range(1, n_star + 1):
        out = [0] * m
        for e, c in f.a_terms(n):
            _cyclic_shift_add(out, acc, e % m, c, m)
        acc = out
    return acc


# ---------------------------------------------------------------------------
# Root-of-unity identity checks
# ---------------------------------------------------------------------------


@dataclass
class TableRow:
    """Outcome of the closed-form residue check at one order m."""

    m: int
    family: str
    n_star: int
    sign: int
    q_power_nm: int
    matches: bool
    residue_prev: CycloElem
    residue_at: CycloElem
    expected_prev: CycloElem
    expected_at: CycloElem


def table_check(f: FamilySpec, m: int) -> TableRow:
    """Run the denominator recurrence to n(m) in Z[q]/Phi_m and compare
    Q_{n(m)-1}, Q_{n(m)} with their closed forms, exactly."""
    f.require_admissible(m)
    n_star = f.n_of_m(m)
    vec_prev, vec_at = _denominators_mod_order(f, m, n_star)
    residue_prev = CycloElem(m, IntPoly(vec_prev))
    residue_at = CycloElem(m, IntPoly(vec_at))
    expected_prev = f.table_prev.expected(m)
    expected_at = f.table_at.expected(m)
    sign, exp = f.table_at.row_fields(m)
    return TableRow(
        m=m,
        family=f.name,
        n_star=n_star,
        sign=sign,
        q_power_nm=exp,
        matches=(residue_prev == expected_prev) and (residue_at == expected_at),
        residue_prev=residue_prev,
        residue_at=residue_at,
        expected_prev=expected_prev,
        expected_at=expected_at,
    )


def product_identity_check(m: int) -> bool:
    """Exact check that prod_{i=1}^{m-1} (1 + q^i) == 1 in Z[q]/Phi_m,
    for odd m >= 3."""
    if m < 3 or m % 2 == 0:
        raise ValueError(f"product identity requires odd m >= 3, got {m}")
    acc = [0] * m
    acc[0] = 1
    for i in range(1, m):
        out = list(acc)
        _cyclic_shift_add(out, acc, i, 1, m)
        acc = out
    residue = CycloElem(m, IntPoly(acc))
    return residue == CycloElem.one(m)


@dataclass
class ChiMagnitudeResult:
    """Exact normal form c * q^K of the numerator product at order m."""

    m: int
    family: str
    found: bool
    c: Optional[int]
    exponent: Optional[int]
    matches_c1: bool
    residue: CycloElem


def chi_magnitude_check(f: FamilySpec, m: int) -> ChiMagnitudeResult:
    """Verify the numerator product at n(m) reduces to c*q^K mod Phi_m with
    |c| equal to the family constant C1 (search over 0 <= K < m,
    c in {1,-1,2,-2}); this certifies the magnitude bound at every
    primitive m-th root of unity exactly."""
    f.require_admissible(m)
    n_star = f.n_of_m(m)
    vec = _numerator_product_mod_order(f, m, n_star)
    residue = CycloElem(m, IntPoly(vec))
    target = residue.rep
    cur = CycloElem.one(m)
    q1 = CycloElem.q_power(m, 1)
    for exp in range(m):
        rep = cur.rep
        for c in (1, -1, 2, -2):
            if target == IntPoly(tuple(c * v for v in rep.coeffs)):
                return ChiMagnitudeResult(
                    m=m,
                    family=f.name,
                    found=True,
                    c=c,
                    exponent=exp,
                    matches_c1=(abs(c) == f.c1),
                    residue=residue,
                )
        cur = cur * q1
    return ChiMagnitudeResult(
        m=m, family=f.name, found=False, c=None, exponent=None,
        matches_c1=False, residue=residue,
    )


def minimal_period(f: FamilySpec, m: int) -> int:
    """Smallest p with a_{n+p} = a_n and b_{n+p} = b_n in Z[q]/Phi_m for all
    n >= 1. All five families are (2m)-periodic at order m, so the minimal
    period is found among the divisors of 2m."""
    base = 2 * m
    a_res = [CycloElem(m, f.a_poly(n)) for n in range(1, 2 * base + 1)]
    b_res = [CycloElem(m, f.b_poly(n)) for n in range(1, 2 * base + 1)]
    for p in divisors(base):
        ok = all(
            a_res[n - 1] == a_res[n + p - 1] and b_res[n - 1] == b_res[n + p - 1]
            for n in range(1, base + 1)
        )
        if ok:
            return p
    raise AssertionError(f"family {f.name} is not {base}-periodic at order {m}")
