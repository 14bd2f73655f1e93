"""Generic continued-fraction machinery over exact and numeric domains.

A continued fraction b0 + K a_n/b_n is driven by the standard three-term
recurrence on numerators/denominators:

    P_n = b_n P_{n-1} + a_n P_{n-2},   Q_n = b_n Q_{n-1} + a_n Q_{n-2},

initialized with P_{-1} = 1, Q_{-1} = 0, P_0 = b0, Q_0 = 1 (the unique
convention for which P_n Q_{n-1} - P_{n-1} Q_n = (-1)^(n-1) prod a_i holds).
The coefficient callables may return IntPoly, CycloElem, or numbers; numeric
callables are expected to honour the ambient mpmath precision so the same
coefficients can be re-evaluated at double precision for reliability checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Optional

from mpmath import mp

from .errors import (
    AmbiguousClassificationError,
    DivisionHazard,
    ZeroPartialNumeratorError,
)
from .polyring import CycloElem, IntPoly


@dataclass(frozen=True)
class CFCoeffs:
    """Coefficients b0, a_n (n>=1), b_n (n>=1) of a continued fraction."""

    b0: Any
    a: Callable[[int], Any]
    b: Callable[[int], Any]


@dataclass
class Approximants:
    """Recurrence state (P_n, P_{n-1}, Q_n, Q_{n-1}) after n steps."""

    n: int
    p_curr: Any
    p_prev: Any
    q_curr: Any
    q_prev: Any


def init(c: CFCoeffs) -> Approximants:
    return Approximants(n=0, p_curr=c.b0, p_prev=1, q_curr=1, q_prev=0)


def step(s: Approximants, c: CFCoeffs) -> Approximants:
    n = s.n + 1
    a_n = c.a(n)
    b_n = c.b(n)
    return Approximants(
        n=n,
        p_curr=b_n * s.p_curr + a_n * s.p_prev,
        p_prev=s.p_curr,
        q_curr=b_n * s.q_curr + a_n * s.q_prev,
        q_prev=s.q_curr,
    )


def advance(c: CFCoeffs, n: int) -> Approximants:
    """State after n steps from init."""
    s = init(c)
    for _ in range(n):
        s = step(s, c)
    return s


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, IntPoly, CycloElem))


def determinant_check(s: Approximants, chi_n, tol=None) -> bool:
    """Check P_n Q_{n-1} - P_{n-1} Q_n == (-1)^(n-1) chi_n.

    Exact domains compare exactly; numeric ones within `tol`
    (default 2**(-prec/2) at the ambient precision).
    """
    lhs = s.p_curr * s.q_prev - s.p_prev * s.q_curr
    rhs = chi_n if s.n % 2 == 1 else -chi_n
    diff = lhs - rhs
    if _is_exact(lhs) and _is_exact(rhs):
        if isinstance(diff, (IntPoly, CycloElem)):
            return diff.is_zero()
        return diff == 0
    if tol is None:
        tol = mp.mpf(2) ** (-(mp.prec // 2))
    return abs(diff) <= tol


def approximant_gap(s: Approximants, precision: Optional[int] = None):
    """|P_n/Q_n - P_{n-1}/Q_{n-1}| in a numeric domain.

    Raises DivisionHazard when either denominator is below 2**(-precision/2)
    in magnitude (the gap is then unbounded/indeterminate).
    """
    prec = precision if precision is not None else mp.prec
    with mp.workprec(prec):
        hazard = mp.mpf(2) ** (-(prec // 2))
        qc, qp = abs(mp.mpmathify(s.q_curr)), abs(mp.mpmathify(s.q_prev))
        if qc < hazard or qp < hazard:
            raise DivisionHazard(
                f"|Q_n|={mp.nstr(qc, 8)}, |Q_(n-1)|={mp.nstr(qp, 8)} below hazard "
                f"threshold 2^-{prec // 2}; gap unbounded/indeterminate"
            )
        return abs(s.p_curr / s.q_curr - s.p_prev / s.q_prev)


@dataclass
class EvaluationResult:
    """Approximant trajectory with per-entry reliability flags.

    values[n] is P_n/Q_n for n = 0..n_max computed at `precision` bits
    (None where a denominator hit the division hazard); reliable[n] is False
    where the run and its double-precision re-run disagree beyond
    2**(-precision/2) relative.
    """

    precision: int
    values: list
    reliable: list
    hazards: list

    def last_reliable(self):
        for v, ok in zip(reversed(self.values), reversed(self.reliable)):
            if ok and v is not None:
                return v
        return None

    def tail_cauchy_gap(self, window: int = 10):
        """Max |v_n - v_{n-1}| over the trailing `window` reliable entries."""
        tail = [v for v, ok in zip(self.values, self.reliable) if ok and v is not None]
        tail = tail[-window:]
        if len(tail) < 2:
            return None
        return max(abs(x - y) for x, y in zip(tail[1:], tail[:-1]))

    def is_tail_cauchy(self, tol, window: int = 10) -> bool:
        gap = self.tail_cauchy_gap(window)
        return gap is not None and gap <= tol


def _run_values(c: CFCoeffs, n_max: int, precision: int):
    values, hazards = [], []
    with mp.workprec(precision):
        hazard = mp.mpf(2) ** (-(precision // 2))
        s = init(c)
        one = mp.mpf(1)
        q = s.q_curr * one
        p = s.p_curr * one
        values.append(p / q)
        hazards.append(False)
        for _ in range(n_max):
            s = step(s, c)
            q = s.q_curr * one
            if abs(q) < hazard:
                values.append(None)
                hazards.append(True)
            else:
                values.append(s.p_curr / q)
                hazards.append(False)
    return values, hazards


def evaluate_numeric(c: CFCoeffs, n_max: int, precision: int) -> EvaluationResult:
    """Approximants P_n/Q_n for n <= n_max at `precision` bits, re-run at
    2*precision; entries where the runs disagree beyond 2**(-precision/2)
    relative are flagged unreliable instead of failing.

    The coefficient callables must evaluate at the ambient mpmath precision
    (build them from exact data; see families.numeric_coeffs).
    """
    if precision < 64:
        raise ValueError(f"precision must be >= 64 bits, got {precision}")
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    lo_vals, lo_haz = _run_values(c, n_max, precision)
    hi_vals, hi_haz = _run_values(c, n_max, 2 * precision)
    tol = mp.mpf(2) ** (-(precision // 2))
    reliable = []
    for lo, hi, hz_lo, hz_hi in zip(lo_vals, hi_vals, lo_haz, hi_haz):
        if hz_lo or hz_hi or lo is None or hi is None:
            reliable.append(False)
        else:
            scale = max(mp.mpf(1), abs(hi))
            reliable.append(abs(lo - hi) / scale <= tol)
    return EvaluationResult(
        precision=precision, values=lo_vals, reliable=reliable, hazards=lo_haz
    )


# ---------------------------------------------------------------------------
# Periodic continued fractions at roots of unity
# ---------------------------------------------------------------------------

LOXODROMIC = "loxodromic"
PARABOLIC = "parabolic"
ELLIPTIC = "elliptic"


@dataclass
class PeriodicLimitResult:
    """Outcome of the periodic classification at a root of unity.

    `classification` is the convergence verdict: loxodromic/parabolic mean
    classical convergence; "elliptic" is the divergence class (oscillation
    among finitely many limit points).  `map_type` records the actual
    conjugacy type of the period transfer map, which differs from the
    verdict exactly in the degenerate loxodromic case where an approximant
    subsequence sits on the repelling fixed point.
    """

    classification: str
    converges: bool
    limit: Any  # mpc, mp.inf, or None when divergent
    tau: Any  # trace^2/det of the period transfer map, as mpc
    period: int
    embedding: int
    map_type: str = ""
    notes: str = ""


def _mat_mul(A, B):
    return (
        A[0] * B[0] + A[1] * B[2],
        A[0] * B[1] + A[1] * B[3],
        A[2] * B[0] + A[3] * B[2],
        A[2] * B[1] + A[3] * B[3],
    )


def periodic_limit(
    c: CFCoeffs,
    m: int,
    period: int,
    precision: int,
    embedding: int = 1,
) -> PeriodicLimitResult:
    """Classify and (when convergent) evaluate a periodic continued fraction
    whose coefficients are CycloElems of order m with the given period.

    The exact period transfer matrix (of the tail map s_1 o ... o s_p with
    s_n(w) = a_n/(b_n + w)) is computed in the cyclotomic ring and mapped to
    complex numbers at `precision` bits at the chosen embedding.  Convergence
    holds for parabolic maps and for loxodromic maps whose repelling fixed
    point avoids every approximant-subsequence start (an exact ring check);
    the limit is then b0 plus the attracting/unique fixed point.  Elliptic
    rotations and the degenerate loxodromic case produce oscillation among
    finitely many limit points: classical divergence, reported under the
    divergence classification "elliptic" with the true map type attached.

    Raises ZeroPartialNumeratorError if some a_n vanishes in the period and
    AmbiguousClassificationError on classification boundaries (raise the
    precision and retry).
    """
    if period < 1:
        raise ValueError("period must be >= 1")
    coeffs_a = [c.a(n) for n in range(1, period + 1)]
    coeffs_b = [c.b(n) for n in range(1, period + 1)]
    for n, a_n in enumerate(coeffs_a, start=1):
        if a_n.is_zero():
            raise ZeroPartialNumeratorError(
                f"a_{n} vanishes at order {m}; period transfer map degenerates"
            )
    # matrix of the tail map w -> a_1/(b_1 + a_2/(b_2 + ... a_p/(b_p + w))),
    # with the partial products' second columns as the subsequence starts
    # z_r = s_1 o ... o s_r (0), projectively (N01 : N11) after r factors
    zero, one = CycloElem.zero(m), CycloElem.one(m)
    N = (one, zero, zero, one)
    starts = [(zero, one)]  # z_0 = 0 = (0 : 1)
    for a_n, b_n in zip(coeffs_a[:-1], coeffs_b[:-1]):
        N = _mat_mul(N, (zero, a_n, one, b_n))
        starts.append((N[1], N[3]))
    N = _mat_mul(N, (zero, coeffs_a[-1], one, coeffs_b[-1]))
    n00, n01, n10, n11 = N
    trace = n00 + n11
    det = n00 * n11 - n01 * n10

    scalar = n01.is_zero() and n10.is_zero() and n00 == n11
    parabolic_exact = (trace * trace - 4 * det).is_zero()

    def fixed_point_starts():
        """Indices r whose subsequence start (u : v) is exactly a fixed
        point of the transfer map: (n00 u + n01 v) v == (n10 u + n11 v) u."""
        hits = []
        for r, (u, v) in enumerate(starts):
            if ((n00 * u + n01 * v) * v - (n10 * u + n11 * v) * u).is_zero():
                hits.append(r)
        return hits

    with mp.workprec(precision):
        eps = mp.mpf(2) ** (-(precision // 4))
        tr_c = trace.to_complex(embedding, precision)
        det_c = det.to_complex(embedding, precision)
        tau = tr_c * tr_c / det_c
        b0_c = c.b0.to_complex(embedding, precision)

        if scalar:
            # every period returns the approximants to their starting values:
            # finitely many accumulation points, oscillatory divergence
            return PeriodicLimitResult(
                classification=ELLIPTIC,
                converges=False,
                limit=None,
                tau=tau,
                period=period,
                embedding=embedding,
                map_type="scalar",
                notes="period transfer matrix is scalar; approximants cycle",
            )

        n00_c = n00.to_complex(embedding, precision)
        n01_c = n01.to_complex(embedding, precision)
        n10_c = n10.to_complex(embedding, precision)
        n11_c = n11.to_complex(embedding, precision)

        def settled(fixed_point):
            return mp.inf if fixed_point is mp.inf else b0_c + fixed_point

        if parabolic_exact:
            if n10.is_zero():
                fp = mp.inf if n00 == n11 else n01_c / (n11_c - n00_c)
            else:
                fp = (n00_c - n11_c) / (2 * n10_c)
            return PeriodicLimitResult(
                classification=PARABOLIC,
                converges=True,
                limit=settled(fp),
                tau=tau,
                period=period,
                embedding=embedding,
                map_type=PARABOLIC,
                notes="trace^2 = 4 det exactly in the cyclotomic ring",
            )

        if abs(tau - 4) < eps:
            raise AmbiguousClassificationError(
                f"|trace^2/det - 4| < 2^-{precision // 4} at m={m}: "
                "boundary — raise precision"
            )

        if abs(mp.im(tau)) < eps and mp.re(tau) < 4:
            elliptic = False
            if mp.re(tau) > eps:
                elliptic = True
            elif trace.is_zero():
                elliptic = True  # rotation of order 2
            elif abs(tau) < eps:
                raise AmbiguousClassificationError(
                    f"|trace^2/det| < 2^-{precision // 4} with nonzero trace "
                    f"at m={m}: boundary — raise precision"
                )
            if elliptic:
                return PeriodicLimitResult(
                    classification=ELLIPTIC,
                    converges=False,
                    limit=None,
                    tau=tau,
                    period=period,
                    embedding=embedding,
                    map_type=ELLIPTIC,
                )
            # tau real and strictly negative: eigenvalue ratio real < 0

        # loxodromic: fixed points of w -> (n00 w + n01)/(n10 w + n11)
        if n10.is_zero():
            candidates = [mp.inf, n01_c / (n11_c - n00_c)]
        else:
            disc = mp.sqrt((n00_c - n11_c) ** 2 + 4 * n01_c * n10_c)
            candidates = [
                (n00_c - n11_c + disc) / (2 * n10_c),
                (n00_c - n11_c - disc) / (2 * n10_c),
            ]

        def derivative_mag(w):
            if w is mp.inf:
                # conjugating by inversion: infinity attracts iff |n00| > |n11|
                return abs(n11_c) / abs(n00_c)
            return abs(det_c) / abs(n10_c * w + n11_c) ** 2

        attracting = min(candidates, key=derivative_mag)

        hits = fixed_point_starts()
        stuck = []
        for r in hits:
            u, v = starts[r]
            if v.is_zero():
                z_r = mp.inf
            else:
                z_r = u.to_complex(embedding, precision) / v.to_complex(embedding, precision)
            d_at = derivative_mag(z_r)
            if abs(d_at - 1) < eps:
                raise AmbiguousClassificationError(
                    f"fixed-point multiplier too close to 1 at m={m}: "
                    "boundary — raise precision"
                )
            if d_at > 1:
                stuck.append(r)
        if stuck:
            return PeriodicLimitResult(
                classification=ELLIPTIC,
                converges=False,
                limit=None,
                tau=tau,
                period=period,
                embedding=embedding,
                map_type="loxodromic-degenerate",
                notes=(
                    "approximant subsequences "
                    + ", ".join(f"n = {r} (mod {period})" for r in stuck)
                    + " sit exactly on the repelling fixed point: oscillation "
                    "among finitely many limit points"
                ),
            )
        return PeriodicLimitResult(
            classification=LOXODROMIC,
            converges=True,
            limit=settled(attracting),
            tau=tau,
            period=period,
            embedding=embedding,
            map_type=LOXODROMIC,
        )


# ---------------------------------------------------------------------------
# Worpitzky's criterion
# ---------------------------------------------------------------------------


@dataclass
class WorpitzkyReport:
    """Outcome of the |a_n| <= 1/4 test and the |w_n| < 1/2 disc check."""

    n_checked: int
    hypothesis_ok: bool
    first_violation: Optional[int]
    max_abs_a: Any
    all_in_half_disc: Optional[bool]
    max_abs_approximant: Any
    final_approximant: Any


def worpitzky_check(c: CFCoeffs, n_max: int, precision: int = 128) -> WorpitzkyReport:
    """For a continued fraction K a_n/1 (b0 = 0, all b_n = 1): verify the
    hypothesis |a_n| <= 1/4 for n <= n_max and, when it holds, that every
    approximant lies in |w| < 1/2.
    """
    with mp.workprec(precision):
        if abs(mp.mpmathify(c.b0)) != 0:
            raise ValueError("worpitzky_check requires b0 = 0")
        tol = mp.mpf(2) ** (-(precision // 2))
        first_violation = None
        max_abs_a = mp.mpf(0)
        for n in range(1, n_max + 1):
            if abs(mp.mpmathify(c.b(n)) - 1) > tol:
                raise ValueError("worpitzky_check requires all b_n = 1")
            mag = abs(mp.mpmathify(c.a(n)))
            max_abs_a = max(max_abs_a, mag)
            if mag > mp.mpf(1) / 4 and first_violation is None:
                first_violation = n
        if first_violation is not None:
            return WorpitzkyReport(
                n_checked=n_max,
                hypothesis_ok=False,
                first_violation=first_violation,
                max_abs_a=max_abs_a,
                all_in_half_disc=None,
                max_abs_approximant=None,
                final_approximant=None,
            )
        result = evaluate_numeric(c, n_max, precision)
        mags = [abs(v) for v, ok in zip(result.values[1:], result.reliable[1:]) if ok]
        max_mag = max(mags) if mags else mp.mpf(0)
        return WorpitzkyReport(
            n_checked=n_max,
            hypothesis_ok=True,
            first_violation=None,
            max_abs_a=max_abs_a,
            all_in_half_disc=bool(max_mag < mp.mpf(1) / 2 + tol),
            max_abs_approximant=max_mag,
            final_approximant=result.last_reliable(),
        )
