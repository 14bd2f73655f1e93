"""Divergence witnesses on the unit circle, with machine-checked certificates.

Given a family with congruence pair (j, d), index map n(m), and constants
C1, C2, this module constructs regular continued fractions
t = [0; e1, e2, ...] with

    e1 = j (mod d),   e_{2i+1} = 0 (mod d)  for i >= 1,
    e_{2i+2}  >  (2*pi/d_{2i+1}^2) * max{kappa_{n(d_{2i+1})},
                                         2*alpha_{n(d_{2i+1})}/C1},

so that y = exp(2*pi*i*t) sits close enough to the primitive root
x_i = exp(2*pi*i*c_{2i+1}/d_{2i+1}) for the full inequality chain to force

    |P_{n*}/Q_{n*} - P_{n*-1}/Q_{n*-1}|  >  C1 / (2 (1 + C2)^2)

at n* = n(d_{2i+1}).  Each stage is certified by measuring every inequality
at high precision (run twice, at P and 2P bits, and cross-checked), with the
x_i-side values taken from exact cyclotomic residues.

Also here: Schur's root-of-unity evaluation of the Rogers-Ramanujan fraction
and its cross-check against the periodic transfer-map limit, the classical
odd/even limits outside the unit circle, and the Goellnitz-Gordon-vs-S2
exploration at roots of unity (conjecture territory, clearly flagged).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

from mpmath import mp

from . import cf_engine, families, lipschitz, rcf
from .cf_engine import CFCoeffs, periodic_limit
from .errors import AdmissibilityError, AmbiguousClassificationError, UnreliableNumericsError
from .families import (
    FamilySpec,
    chi_magnitude_check,
    cyclo_coeffs,
    evaluate_terms,
    make_family,
    minimal_period,
    numeric_coeffs,
    table_check,
)
from .numtheory import legendre_symbol
from .polyring import CycloElem

LOG2_GOLDEN = 0.6942419136306174  # log2((1+sqrt(5))/2)

DEFAULT_EXPANSION_CAP = 240
DEFAULT_RECURRENCE_CAP = 200_000


@dataclass(frozen=True)
class WitnessPlan:
    """Free choices of a witness construction: the family, the number of
    stages, and the quotients not pinned down by the congruence scheme."""

    family: FamilySpec
    stages: int = 1
    e1: Optional[int] = None  # defaults to j (smallest legal)
    e2: int = 1
    odd_quotient: Optional[int] = None  # e_{2i+1} for i >= 1; defaults to d
    expansion_cap: int = DEFAULT_EXPANSION_CAP
    recurrence_cap: int = DEFAULT_RECURRENCE_CAP

    def resolved(self) -> tuple[int, int, int]:
        f = self.family
        if not f.proved:
            raise AdmissibilityError(f"family {f.name} is conjectural; no witness data")
        e1 = f.j if self.e1 is None else self.e1
        odd = f.d if self.odd_quotient is None else self.odd_quotient
        if e1 % f.d != f.j % f.d:
            raise ValueError(f"e1={e1} must be = {f.j} (mod {f.d})")
        if odd % f.d != 0:
            raise ValueError(f"odd quotients must be = 0 (mod {f.d}), got {odd}")
        if min(e1, self.e2, odd) < 1:
            raise ValueError("all partial quotients must be >= 1")
        return e1, self.e2, odd


@dataclass
class StageReport:
    """Certificate skeleton/result for one witness stage."""

    index: int
    d_odd: int  # d_{2i+1}
    c_odd: int  # c_{2i+1}
    n_star: int
    constructed: bool
    verifiable: bool
    kappa: Optional[int] = None  # exact when verifiable, else a valid upper bound
    alpha: Optional[int] = None
    bounds_are_exact: bool = False
    e_bound: Optional[int] = None
    e_next: Optional[int] = None
    log2_e_required_lower: Optional[object] = None  # mpf; may exceed float range
    threshold: Optional[Fraction] = None
    notes: str = ""
    # filled in by verify_stage
    verified: Optional[bool] = None
    precision: Optional[int] = None
    measured: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    lemma_checks: dict = field(default_factory=dict)
    trajectory: list = field(default_factory=list)  # (n, |Q_n(y)|, gap, threshold)

    def all_checks_pass(self) -> bool:
        return bool(self.checks) and all(self.checks.values())


@dataclass
class WitnessConstruction:
    plan: WitnessPlan
    quotients: list[int]  # e_1 .. e_L, all materialized
    convergents: list[tuple[int, int]]  # (c_i, d_i) for i = 0..L
    stages: list[StageReport]
    value_cf: rcf.RegCF  # the prefix extended by the canonical legal tail
    notes: str = ""


def _convergents_of(quotients: list[int]) -> list[tuple[int, int]]:
    out = [(0, 1)]
    c_prev, d_prev = 1, 0
    for e in quotients:
        c, d = out[-1]
        out.append((e * c + c_prev, e * d + d_prev))
        c_prev, d_prev = c, d
    return out


def _certified_ceil_bound(d_sq: int, big: int) -> int:
    """ceil((2*pi/d_sq) * big) computed with enough precision that the
    result is the true ceiling (possibly +1, which only widens margins)."""
    prec = max(256, big.bit_length() + 64)
    with mp.workprec(prec):
        v = 2 * mp.pi * mp.mpf(big) / d_sq
        return int(mp.floor(v)) + 1


def _tail_value_cf(quotients: list[int], d_period: int) -> rcf.RegCF:
    """The constructed prefix extended by the smallest legal continuation
    (d at odd indices, 1 at even), pinning down a concrete irrational t."""
    L = len(quotients)

    def quot(i: int) -> int:
        if i <= L:
            return quotients[i - 1]
        return d_period if i % 2 == 1 else 1

    return rcf.RegCF(quot, length=None)


def build_witness(plan: WitnessPlan) -> WitnessConstruction:
    """Construct the quotient prefix and per-stage data.

    A stage is *verifiable* while n(d_{2i+1}) is within the polynomial
    expansion cap, so kappa/alpha are exact. Beyond the cap (but within the
    integer-recurrence cap) the next quotient is chosen from exact upper
    bounds on kappa/alpha — still a legal construction, but the inequality
    chain is not desk-checkable and the stage is marked accordingly. Once a
    required quotient can no longer be materialized, construction stops and
    the remaining stages are reported with log-scale bounds only.
    """
    f = plan.family
    e1, e2, odd = plan.resolved()
    quotients = [e1, e2]
    stages: list[StageReport] = []
    notes = []
    for i in range(1, plan.stages + 1):
        quotients.append(odd)
        convs = _convergents_of(quotients)
        c_odd, d_odd = convs[2 * i + 1]
        if d_odd % f.d != f.j % f.d:
            raise AssertionError("congruence scheme broke: d_{2i+1} not admissible")
        n_star = f.n_of_m(d_odd)
        threshold = f.gap_threshold()
        if n_star <= plan.expansion_cap:
            q_polys = families.denominator_polys(f, n_star)
            chi_polys = families.numerator_product_polys(f, n_star)
            kappa_seq = lipschitz.build(q_polys, lipschitz.FLAVOR_DENOMINATOR, 0)
            alpha_seq = lipschitz.build(chi_polys, lipschitz.FLAVOR_PRODUCT, 1)
            kappa = kappa_seq.at(n_star)
            alpha = alpha_seq.at(n_star)
            big = max(kappa, _ceil_div(2 * alpha, f.c1))
            e_bound = _certified_ceil_bound(d_odd * d_odd, big)
            e_next = e_bound + 1
            stages.append(
                StageReport(
                    index=i,
                    d_odd=d_odd,
                    c_odd=c_odd,
                    n_star=n_star,
                    constructed=True,
                    verifiable=True,
                    kappa=kappa,
                    alpha=alpha,
                    bounds_are_exact=True,
                    e_bound=e_bound,
                    e_next=e_next,
                    threshold=threshold,
                )
            )
            quotients.append(e_next)
        elif n_star <= plan.recurrence_cap:
            kappa_ub, alpha_ub = _lipschitz_upper_bounds(f, n_star)
            big = max(kappa_ub, _ceil_div(2 * alpha_ub, f.c1))
            e_bound = _certified_ceil_bound(d_odd * d_odd, big)
            e_next = e_bound + 1
            stages.append(
                StageReport(
                    index=i,
                    d_odd=d_odd,
                    c_odd=c_odd,
                    n_star=n_star,
                    constructed=True,
                    verifiable=False,
                    kappa=kappa_ub,
                    alpha=alpha_ub,
                    bounds_are_exact=False,
                    e_bound=e_bound,
                    e_next=e_next,
                    log2_e_required_lower=_log2_required_lower(f, d_odd, n_star),
                    threshold=threshold,
                    notes=(
                        "constructed, not verifiable at desk scale: quotient chosen "
                        "from exact coefficient-mass upper bounds on kappa/alpha"
                    ),
                )
            )
            quotients.append(e_next)
        else:
            stages.append(
                StageReport(
                    index=i,
                    d_odd=d_odd,
                    c_odd=c_odd,
                    n_star=n_star,
                    constructed=False,
                    verifiable=False,
                    log2_e_required_lower=_log2_required_lower(f, d_odd, n_star),
                    threshold=threshold,
                    notes=(
                        "beyond desk scale: required quotient is not materializable; "
                        "log2 lower bound reported"
                    ),
                )
            )
            quotients.pop()  # the odd quotient has no matching even partner
            notes.append(
                f"construction stopped at stage {i}: n* = {n_star} exceeds the "
                f"recurrence cap {plan.recurrence_cap}"
            )
            break
    return WitnessConstruction(
        plan=plan,
        quotients=quotients,
        convergents=_convergents_of(quotients),
        stages=stages,
        value_cf=_tail_value_cf(quotients, f.d),
        notes="; ".join(notes),
    )


def _ceil_div(num, den) -> int:
    fr = Fraction(num) / Fraction(den)
    return -((-fr.numerator) // fr.denominator)


def _lipschitz_upper_bounds(f: FamilySpec, n_star: int) -> tuple[int, int]:
    """Exact upper bounds on kappa_{n*} and alpha_{n*} from degree and
    coefficient-mass recurrences (weighted sum <= degree * mass)."""
    deg_q_prev, deg_q = 0, 0
    mass_q_prev, mass_q = 0, 1
    deg_chi, mass_chi = 0, 1
    kappa_ub = 1
    alpha_ub = 1
    for n in range(1, n_star + 1):
        a_terms = f.a_terms(n)
        b_terms = f.b_terms(n)
        deg_a = max(e for e, _ in a_terms)
        mass_a = sum(abs(c) for _, c in a_terms)
        deg_b = max(e for e, _ in b_terms)
        mass_b = sum(abs(c) for _, c in b_terms)
        deg_q_prev, deg_q = deg_q, max(deg_b + deg_q, deg_a + deg_q_prev)
        mass_q_prev, mass_q = mass_q, mass_b * mass_q + mass_a * mass_q_prev
        deg_chi += deg_a
        mass_chi *= mass_a
        kappa_ub = max(deg_q * mass_q, 1, kappa_ub + 1)
        alpha_ub = max(deg_chi * mass_chi, 1, alpha_ub + 1)
    return kappa_ub, alpha_ub


def _log2_required_lower(f: FamilySpec, d_odd: int, n_star: int):
    """Lower-bound estimate of log2 of the required even quotient, from the
    Fibonacci floor on coefficient mass (all families have a_n, b_n with
    nonnegative coefficients and mass >= 1). Returned as an mpf: the value
    itself can be astronomically large at later stages."""
    with mp.workprec(64):
        log2_alpha_lb = (mp.mpf(n_star) - 1) * mp.mpf(LOG2_GOLDEN) - 2
        return mp.log(2 * mp.pi, 2) - 2 * mp.log(d_odd, 2) + 1 + log2_alpha_lb


# ---------------------------------------------------------------------------
# Stage verification
# ---------------------------------------------------------------------------


def required_precision(kappa: int) -> int:
    """2*ceil(log2 kappa) + 128: enough bits to resolve |y - x_i| ~ 1/kappa
    with generous headroom for the inequality-chain arithmetic."""
    return 2 * max(1, kappa).bit_length() + 128


def _stage_numeric_run(f: FamilySpec, t_cf: rcf.RegCF, n_star: int, precision: int):
    """One pass of the recurrence at y = exp(2*pi*i*t), collecting
    |Q_n|, gaps, the endpoint state and the numerator product at n*."""
    with mp.workprec(precision):
        t = t_cf.value(precision)
        y = mp.expjpi(2 * t)
        coeffs = CFCoeffs(
            b0=evaluate_terms(f.b0_poly, y),
            a=lambda n: evaluate_terms(f.a_poly(n), y),
            b=lambda n: evaluate_terms(f.b_poly(n), y),
        )
        s = cf_engine.init(coeffs)
        chi = mp.mpc(1)
        rows = []
        snapshot = {}
        for n in range(1, n_star + 1):
            s = cf_engine.step(s, coeffs)
            chi *= coeffs.a(n)
            gap_n = abs(s.p_curr / s.q_curr - s.p_prev / s.q_prev)
            rows.append((n, abs(s.q_curr), gap_n))
        snapshot["q_y_c"] = s.q_curr * mp.mpf(1)
        snapshot["q_prev_y_c"] = s.q_prev * mp.mpf(1)
        snapshot["chi_y_c"] = chi
        snapshot["abs_q_y"] = abs(s.q_curr)
        snapshot["abs_q_prev_y"] = abs(s.q_prev * mp.mpf(1))
        snapshot["abs_chi_y"] = abs(chi)
        snapshot["gap"] = rows[-1][2]
        snapshot["t"] = t
        snapshot["y"] = y
        return snapshot, rows


def _relative_close(a, b, tol) -> bool:
    scale = max(mp.mpf(1), abs(b))
    return abs(a - b) / scale <= tol


def verify_stage(
    wc: WitnessConstruction,
    index: int,
    precision: int,
    collect_trajectory: bool = False,
) -> StageReport:
    """Measure and check the full stage inequality chain at `precision` bits.

    The y-side quantities come from the numeric recurrence at
    y = exp(2*pi*i*t) (run at precision and 2*precision; disagreement raises
    UnreliableNumericsError). The x_i-side quantities are high-precision
    images of exact cyclotomic residues. All seven checks are strict
    inequalities; `verified` is their conjunction.

    Pure: returns a completed copy of the stage skeleton, leaving the
    construction untouched, so independent verifications can run in parallel.
    """
    f = wc.plan.family
    stage = replace(wc.stages[index - 1])
    if not stage.verifiable:
        raise AdmissibilityError(
            f"stage {index} was constructed without exact constants; "
            "not verifiable at desk scale"
        )
    min_prec = required_precision(stage.kappa)
    if precision < min_prec:
        raise ValueError(
            f"precision {precision} below required {min_prec} bits for "
            f"kappa={stage.kappa}"
        )
    d_odd, c_odd, n_star = stage.d_odd, stage.c_odd, stage.n_star

    # exact side: closed-form residues at the primitive d_odd-th root x_i
    row = table_check(f, d_odd)
    chi_nf = chi_magnitude_check(f, d_odd)
    if not (row.matches and chi_nf.found and chi_nf.matches_c1):
        stage.verified = False
        stage.notes += "; root-of-unity identity checks failed"
        return stage

    lo, rows = _stage_numeric_run(f, wc.value_cf, n_star, precision)
    hi, _ = _stage_numeric_run(f, wc.value_cf, n_star, 2 * precision)
    tol = mp.mpf(2) ** (-(precision // 2))
    for key in ("abs_q_y", "abs_q_prev_y", "abs_chi_y", "gap"):
        if not _relative_close(lo[key], hi[key], tol):
            raise UnreliableNumericsError(
                f"stage {index}: {key} disagrees between {precision}- and "
                f"{2*precision}-bit runs; raise precision"
            )

    with mp.workprec(precision):
        k_embed = c_odd % d_odd
        x_q = row.residue_at.to_complex(k_embed, precision)
        x_q_prev = row.residue_prev.to_complex(k_embed, precision)
        x_chi = chi_nf.residue.to_complex(k_embed, precision)
        x_point = mp.expjpi(mp.mpf(2 * k_embed) / d_odd)

        t = lo["t"]
        y = lo["y"]
        c1 = mp.mpf(f.c1.numerator) / f.c1.denominator
        c2 = mp.mpf(f.c2.numerator) / f.c2.denominator
        threshold = stage.threshold
        thr = mp.mpf(threshold.numerator) / threshold.denominator

        # y-side values at n*-1 and n* against the x_i-side exact images
        q_y, q_prev_y, chi_y = lo["abs_q_y"], lo["abs_q_prev_y"], lo["abs_chi_y"]
        stage.measured = {
            "abs_q_y": q_y,
            "abs_q_prev_y": q_prev_y,
            "abs_chi_y": chi_y,
            "abs_q_x": abs(x_q),
            "abs_q_prev_x": abs(x_q_prev),
            "abs_chi_x": abs(x_chi),
            "gap": lo["gap"],
            "chord": abs(y - x_point),
            "t_minus_convergent": abs(t - mp.mpf(c_odd) / d_odd),
            "t": t,
        }
        q_y_c, q_prev_y_c = lo["q_y_c"], lo["q_prev_y_c"]
        stage.checks = {
            "denominator_shift_at": abs(q_y_c - x_q) < 1,
            "denominator_shift_prev": abs(q_prev_y_c - x_q_prev) < 1,
            "denominator_bound_at": q_y < 1 + c2,
            "denominator_bound_prev": q_prev_y < 1 + c2,
            "product_shift": abs(chi_y - abs(x_chi)) < c1 / 2,
            "product_lower": chi_y > c1 / 2,
            "gap_exceeds_threshold": lo["gap"] > thr,
        }
        stage.lemma_checks = {
            "t_close_for_kappa": stage.measured["t_minus_convergent"]
            < 1 / (2 * mp.pi * stage.kappa),
            "t_close_for_alpha": stage.measured["t_minus_convergent"]
            < c1 / (4 * mp.pi * stage.alpha),
        }
        stage.precision = precision
        stage.verified = all(stage.checks.values())
        if collect_trajectory:
            stage.trajectory = [(n, aq, g, thr) for (n, aq, g) in rows]
    return stage


def root_of_unity_checks(f: FamilySpec, m: int) -> bool:
    """Both exact hypotheses at order m: the closed-form residues match and
    the numerator product has magnitude C1 at every primitive m-th root."""
    row = table_check(f, m)
    chi_nf = chi_magnitude_check(f, m)
    return row.matches and chi_nf.found and chi_nf.matches_c1


# ---------------------------------------------------------------------------
# Schur's evaluation of the Rogers-Ramanujan fraction at roots of unity
# ---------------------------------------------------------------------------


@dataclass
class SchurValue:
    m: int
    k: int
    converges: bool
    lam: Optional[int] = None
    sigma: Optional[int] = None
    exponent: Optional[int] = None
    value: Optional[object] = None  # mpc


def schur_value(m: int, k: int = 1, precision: int = 256) -> SchurValue:
    """Schur's closed form at a primitive m-th root of unity x:
    divergence when 5 | m; otherwise lam * x^((1 - lam*sigma*m)/5) * K(lam)
    with lam the Legendre symbol (m|5), sigma the least positive residue of
    m mod 5, K(1) the golden ratio and K(-1) its reciprocal."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if math.gcd(k, m) != 1:
        raise ValueError(f"k={k} not coprime to m={m}")
    if m % 5 == 0:
        return SchurValue(m=m, k=k, converges=False)
    lam = legendre_symbol(m, 5)
    sigma = m % 5
    numerator = 1 - lam * sigma * m
    if numerator % 5 != 0:
        raise AssertionError("(1 - lam*sigma*m)/5 must be an integer")
    exponent = numerator // 5
    with mp.workprec(precision):
        golden = (mp.sqrt(5) + 1) / 2
        k_lam = golden if lam == 1 else 1 / golden
        x = mp.expjpi(mp.mpf(2 * (k % m)) / m)
        value = lam * x**exponent * k_lam
    return SchurValue(
        m=m, k=k, converges=True, lam=lam, sigma=sigma, exponent=exponent, value=value
    )


@dataclass
class SchurComparison:
    m: int
    k: int
    classification: str
    converges: bool
    limit: Optional[object]
    formula: SchurValue
    diff: Optional[object]  # mpf


def schur_compare(m: int, precision: int = 256, k: int = 1) -> SchurComparison:
    """Periodic transfer-map evaluation vs the closed form at order m."""
    f = make_family("K")
    period = minimal_period(f, m)
    res = periodic_limit(cyclo_coeffs(f, m), m, period, precision, embedding=k)
    sv = schur_value(m, k, precision)
    diff = None
    if res.converges and sv.converges:
        with mp.workprec(precision):
            diff = abs(res.limit - sv.value)
    return SchurComparison(
        m=m,
        k=k,
        classification=res.classification,
        converges=res.converges,
        limit=res.limit,
        formula=sv,
        diff=diff,
    )


def schur_check(m: int, precision: int = 256, tol=None) -> bool:
    """True iff the periodic-limit evaluation of the Rogers-Ramanujan
    fraction at order m agrees with the closed form to tol
    (default 2**(-precision/4)); requires m not divisible by 5."""
    if m % 5 == 0:
        raise AdmissibilityError("no finite closed-form value when 5 | m")
    cmp = schur_compare(m, precision)
    if not (cmp.converges and cmp.formula.converges):
        return False
    if tol is None:
        tol = mp.mpf(2) ** (-(precision // 4))
    return cmp.diff <= tol


def schur_embedding_spread(m: int, precision: int = 256):
    """Max disagreement of formula vs periodic limit over all primitive-root
    embeddings k; quantifies (and in practice refutes) any k-dependence."""
    worst = mp.mpf(0)
    for k in range(1, m + 1):
        if math.gcd(k, m) == 1:
            cmp = schur_compare(m, precision, k=k)
            if cmp.diff is not None:
                worst = max(worst, cmp.diff)
    return worst


# ---------------------------------------------------------------------------
# Outside the unit circle: odd/even approximant limits
# ---------------------------------------------------------------------------


@dataclass
class OutsideCircleReport:
    """Measured odd/even approximant limits of K at |q| > 1.

    Both subsequences converge; the inside-circle references are
    ref_neg = 1/K(-1/q) and ref_quarter = K(1/q^4).  The association that
    actually holds is

        lim K_{2j}(q)   = 1/K(-1/q),      lim K_{2j+1}(q) = q * K(1/q^4),

    recorded in diff_even / diff_odd.  The printed-display association
    (odd with 1/K(-1/q), even with K(1/q^4)/q) is measured alongside in
    diff_odd_printed / diff_even_printed; at any |q| > 1 those differences
    stay bounded away from zero, which is reported, not asserted away.
    """

    q: object
    j_max: int
    precision: int
    diff_even: object  # | K_{2j_max}(q) - 1/K(-1/q) |
    diff_odd: object  # | K_{2j_max+1}(q) - q*K(1/q^4) |
    diff_odd_printed: object  # | K_{2j_max+1}(q) - 1/K(-1/q) |
    diff_even_printed: object  # | K_{2j_max}(q) - K(1/q^4)/q |
    even_limit_ref: object  # 1/K(-1/q)
    odd_limit_ref: object  # q*K(1/q^4)
    odd_diffs: list  # per j, corrected association
    even_diffs: list
    worpitzky_tail_start: dict  # reference point -> first n with |z|^n <= 1/4

    @property
    def corrected_association_holds(self):
        return self.diff_even is not None and self.diff_odd is not None


def _inside_value(z, precision: int, depth: int):
    """K at an exact point strictly inside the unit circle, with a tail-Cauchy
    certificate on the approximants."""
    f = make_family("K")
    result = cf_engine.evaluate_numeric(numeric_coeffs(f, z), depth, precision)
    tol = mp.mpf(2) ** (-(precision * 2 // 5))
    if not result.is_tail_cauchy(tol, window=8):
        raise UnreliableNumericsError(
            f"inside-circle evaluation at {z} not Cauchy to 2^-{precision*2//5}"
        )
    return result.last_reliable()


def _worpitzky_tail_start(z_abs, n_max: int = 10_000) -> int:
    """First n with |z|^n <= 1/4 (the tail from there satisfies the
    |a_n| <= 1/4 criterion, so the inside-circle reference converges)."""
    n = 1
    p = z_abs
    while p > mp.mpf(1) / 4:
        n += 1
        p *= z_abs
        if n > n_max:
            raise ValueError("point too close to the unit circle")
    return n


def outside_circle_check(q, j_max: int, precision: int = 256) -> OutsideCircleReport:
    """Measure both approximant subsequences of K at exact |q| > 1.1 against
    the inside-circle references 1/K(-1/q) and K(1/q^4), at certified
    precision (see OutsideCircleReport for the associations reported)."""
    from .families import _to_ambient

    with mp.workprec(precision):
        q_num = _to_ambient(q)
        if abs(q_num) <= mp.mpf("1.1"):
            raise ValueError(f"need |q| > 1.1, got |q| = {mp.nstr(abs(q_num), 8)}")
        if isinstance(q, (int, Fraction)):
            z_neg = -1 / Fraction(q)
            z_quarter = 1 / Fraction(q) ** 4
        else:
            z_neg, z_quarter = -1 / q_num, 1 / q_num**4

        tail_starts = {
            "1/K(-1/q)": _worpitzky_tail_start(abs(_to_ambient(z_neg))),
            "K(1/q^4)": _worpitzky_tail_start(abs(_to_ambient(z_quarter))),
        }
        depth = max(128, precision + 64)
        ref_neg = 1 / _inside_value(z_neg, precision, depth)  # 1/K(-1/q)
        k_quarter = _inside_value(z_quarter, precision, depth)  # K(1/q^4)
        even_ref = ref_neg
        odd_ref = q_num * k_quarter

        f = make_family("K")
        traj = cf_engine.evaluate_numeric(numeric_coeffs(f, q), 2 * j_max + 1, precision)
        odd_diffs, even_diffs = [], []
        for j in range(j_max + 1):
            v_even = traj.values[2 * j]
            v_odd = traj.values[2 * j + 1]
            even_diffs.append(abs(v_even - even_ref) if v_even is not None else None)
            odd_diffs.append(abs(v_odd - odd_ref) if v_odd is not None else None)
        v_even_last = traj.values[2 * j_max]
        v_odd_last = traj.values[2 * j_max + 1]
        return OutsideCircleReport(
            q=q,
            j_max=j_max,
            precision=precision,
            diff_even=even_diffs[-1],
            diff_odd=odd_diffs[-1],
            diff_odd_printed=(
                abs(v_odd_last - ref_neg) if v_odd_last is not None else None
            ),
            diff_even_printed=(
                abs(v_even_last - k_quarter / q_num) if v_even_last is not None else None
            ),
            even_limit_ref=even_ref,
            odd_limit_ref=odd_ref,
            odd_diffs=odd_diffs,
            even_diffs=even_diffs,
            worpitzky_tail_start=tail_starts,
        )


# ---------------------------------------------------------------------------
# Goellnitz-Gordon vs S2 at roots of unity (conjecture exploration)
# ---------------------------------------------------------------------------

CONJECTURE_BANNER = (
    "CONJECTURE-EXPLORATION: observed root-of-unity behavior of the "
    "Goellnitz-Gordon fraction vs S2; nothing here is asserted as proved"
)

TERMINATING = "terminating"
BOUNDARY = "boundary"


@dataclass
class ClassificationOutcome:
    kind: str  # loxodromic | parabolic | elliptic | elliptic-degenerate | terminating | boundary
    converges: Optional[bool]
    limit: Optional[object]
    period: Optional[int]
    note: str = ""


def classify_family_at_order(f: FamilySpec, m: int, precision: int) -> ClassificationOutcome:
    """Periodic classification of a family at primitive m-th roots, with the
    degenerate vanishing-numerator case handled as a frozen ('terminating')
    evaluation rather than an error."""
    period = minimal_period(f, m)
    coeffs = cyclo_coeffs(f, m)
    zero_at = None
    for n in range(1, period + 1):
        if coeffs.a(n).is_zero():
            zero_at = n
            break
    if zero_at is not None:
        s = cf_engine.advance(coeffs, zero_at - 1)
        one = CycloElem.one(m)
        with mp.workprec(precision):
            q_c = (s.q_curr * one).to_complex(1, precision)
            p_c = (s.p_curr * one).to_complex(1, precision)
            limit = mp.inf if abs(q_c) == 0 else p_c / q_c
        return ClassificationOutcome(
            kind=TERMINATING,
            converges=True,
            limit=limit,
            period=period,
            note=f"a_{zero_at} vanishes: approximants freeze from n={zero_at} on",
        )
    try:
        res = periodic_limit(coeffs, m, period, precision)
    except AmbiguousClassificationError as exc:
        return ClassificationOutcome(
            kind=BOUNDARY, converges=None, limit=None, period=period, note=str(exc)
        )
    note = f"map type: {res.map_type}" + (f"; {res.notes}" if res.notes else "")
    return ClassificationOutcome(
        kind=res.classification,
        converges=res.converges,
        limit=res.limit,
        period=res.period,
        note=note,
    )


@dataclass
class GGEntry:
    m: int
    gg: ClassificationOutcome
    s2: ClassificationOutcome
    agree: Optional[bool]
    expected: str  # "agreement" or "split (GG diverges, S2 converges)"
    consistent: Optional[bool]


@dataclass
class GGExploreReport:
    banner: str
    precision: int
    entries: list[GGEntry]
    n_consistent: int
    n_inconsistent: int
    n_undecided: int
    inconsistent_orders: list[int]


def gg_explore(m_values, precision: int = 256) -> GGExploreReport:
    """Classify GG and S2 at primitive m-th roots for each m and compare the
    observed pattern with the conjectured one: agreement at every order
    except m = 2 (mod 4), where GG should diverge while S2 converges.
    Exceptions are listed, never failed."""
    gg, s2 = make_family("GG"), make_family("S2")
    entries = []
    with mp.workprec(precision):
        tol = mp.mpf(2) ** (-(precision // 4))
        for m in m_values:
            o_gg = classify_family_at_order(gg, m, precision)
            o_s2 = classify_family_at_order(s2, m, precision)
            expected = (
                "split (GG diverges, S2 converges)" if m % 4 == 2 else "agreement"
            )
            agree: Optional[bool]
            if o_gg.converges is None or o_s2.converges is None:
                agree = None
            elif o_gg.converges and o_s2.converges:
                if o_gg.limit is mp.inf or o_s2.limit is mp.inf:
                    agree = o_gg.limit is mp.inf and o_s2.limit is mp.inf
                else:
                    scale = max(mp.mpf(1), abs(o_s2.limit))
                    agree = abs(o_gg.limit - o_s2.limit) / scale <= tol
            else:
                agree = o_gg.converges == o_s2.converges
            if agree is None:
                consistent = None
            elif m % 4 == 2:
                consistent = (o_gg.converges is False) and (o_s2.converges is True)
            else:
                consistent = agree
            entries.append(
                GGEntry(m=m, gg=o_gg, s2=o_s2, agree=agree, expected=expected,
                        consistent=consistent)
            )
    n_cons = sum(1 for e in entries if e.consistent is True)
    n_incons = sum(1 for e in entries if e.consistent is False)
    n_und = sum(1 for e in entries if e.consistent is None)
    return GGExploreReport(
        banner=CONJECTURE_BANNER,
        precision=precision,
        entries=entries,
        n_consistent=n_cons,
        n_inconsistent=n_incons,
        n_undecided=n_und,
        inconsistent_orders=[e.m for e in entries if e.consistent is False],
    )
