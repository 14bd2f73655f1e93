"""Strictly increasing integer Lipschitz constants for polynomial sequences
on the unit circle.

For a polynomial f with integer coefficients gamma_i and x, y on the unit
circle, |f(x) - f(y)| <= (sum_i i*|gamma_i|) * |x - y|.  Given a sequence of
polynomials, each constant is forced up to at least the previous one plus 1,
so the resulting sequence is strictly increasing and positive:

    delta_n = max{ sum_i i*|gamma_i|,  1,  delta_{n-1} + 1 }.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from mpmath import mp

from .polyring import IntPoly, weighted_coeff_sum

FLAVOR_DENOMINATOR = "denominator"  # constants for the Q_n
FLAVOR_NUMERATOR = "numerator"  # constants for the P_n
FLAVOR_PRODUCT = "product"  # constants for the running numerator products

_FLAVORS = (FLAVOR_DENOMINATOR, FLAVOR_NUMERATOR, FLAVOR_PRODUCT)


@dataclass(frozen=True)
class LipschitzSeq:
    """Strictly increasing positive integer constants delta_0..delta_N.

    `start_index` records the subscript of the first underlying polynomial
    (0 for P/Q sequences, 1 for running products, which begin at index 1).
    """

    flavor: str
    start_index: int
    values: tuple[int, ...]

    def at(self, n: int) -> int:
        """Constant for the polynomial with subscript n."""
        return self.values[n - self.start_index]


def build(polys: Sequence[IntPoly], flavor: str, start_index: int = 0) -> LipschitzSeq:
    """Construct the constants for polys[0], polys[1], ... in order."""
    if flavor not in _FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}")
    if not polys:
        raise ValueError("empty polynomial sequence")
    values = []
    prev = None
    for p in polys:
        w = weighted_coeff_sum(p)
        delta = max(w, 1) if prev is None else max(w, 1, prev + 1)
        values.append(delta)
        prev = delta
    return LipschitzSeq(flavor=flavor, start_index=start_index, values=tuple(values))


def random_circle_pair(rng: random.Random, precision: int):
    """Two uniform points on the unit circle at `precision` bits."""
    with mp.workprec(precision):
        u = mp.mpf(rng.getrandbits(precision)) / mp.mpf(2) ** precision
        v = mp.mpf(rng.getrandbits(precision)) / mp.mpf(2) ** precision
        return mp.expjpi(2 * u), mp.expjpi(2 * v)


def lipschitz_bound_check(
    polys: Sequence[IntPoly],
    seq: LipschitzSeq,
    trials: int,
    precision: int,
    seed: int = 0,
) -> bool:
    """Empirical check of |f_n(x) - f_n(y)| <= delta_n |x - y| + 2^(-precision/2)
    over `trials` random unit-circle pairs, for every n."""
    if len(polys) != len(seq.values):
        raise ValueError("sequence was not built from these polynomials")
    rng = random.Random(seed)
    with mp.workprec(precision):
        slack = mp.mpf(2) ** (-(precision // 2))
        for _ in range(trials):
            x, y = random_circle_pair(rng, precision)
            chord = abs(x - y)
            for p, delta in zip(polys, seq.values):
                if abs(p.evaluate(x) - p.evaluate(y)) > delta * chord + slack:
                    return False
    return True


def _sequence_values_at(f, flavor: str, n_max: int, x):
    """Values of the flavor's polynomial sequence at the point x, by the
    forward recurrence (one pass instead of n_max Horner evaluations)."""
    from .families import evaluate_terms

    if flavor == FLAVOR_PRODUCT:
        acc = 1
        out = []
        for n in range(1, n_max + 1):
            acc = acc * evaluate_terms(f.a_poly(n), x)
            out.append(acc)
        return out
    prev, curr = (1, evaluate_terms(f.b0_poly, x)) if flavor == FLAVOR_NUMERATOR else (0, 1)
    out = [curr]
    for n in range(1, n_max + 1):
        a_n = evaluate_terms(f.a_poly(n), x)
        b_n = evaluate_terms(f.b_poly(n), x)
        prev, curr = curr, b_n * curr + a_n * prev
        out.append(curr)
    return out


def family_circle_check(
    f,
    seq: LipschitzSeq,
    n_max: int,
    trials: int,
    precision: int,
    seed: int = 0,
) -> bool:
    """Same inequality as lipschitz_bound_check, against a family's P/Q/product
    sequence evaluated by recurrence at every sample pair."""
    expected_len = n_max + 1 if seq.start_index == 0 else n_max
    if len(seq.values) != expected_len:
        raise ValueError("constants do not cover indices up to n_max")
    rng = random.Random(seed)
    with mp.workprec(precision):
        slack = mp.mpf(2) ** (-(precision // 2))
        for _ in range(trials):
            x, y = random_circle_pair(rng, precision)
            chord = abs(x - y)
            vx = _sequence_values_at(f, seq.flavor, n_max, x)
            vy = _sequence_values_at(f, seq.flavor, n_max, y)
            for vxn, vyn, delta in zip(vx, vy, seq.values):
                if abs(vxn - vyn) > delta * chord + slack:
                    return False
    return True
