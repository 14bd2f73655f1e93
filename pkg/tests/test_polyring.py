"""Exact polynomial / cyclotomic ring tests against independent oracles."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from qcfkit.numtheory import divisors, euler_phi, moebius
from qcfkit.polyring import (
    CycloElem,
    IntPoly,
    _kronecker_mul,
    _schoolbook_mul,
    cyclotomic_poly,
    evaluate_at_root,
    product_of_all_cyclotomics,
    reduce,
    weighted_coeff_sum,
)

coeff_lists = st.lists(st.integers(-10**6, 10**6), min_size=0, max_size=60)


# ---------------------------------------------------------------------------
# ring arithmetic
# ---------------------------------------------------------------------------


def test_mul_expansion_example():
    assert IntPoly([1, 1]) * IntPoly([1, 0, 1]) == IntPoly([1, 1, 1, 1])


def test_add_identity_example():
    p = IntPoly([3, 0, -2, 7])
    assert p + IntPoly.zero() == p


def test_monomial_product_example():
    assert IntPoly.monomial(3) * IntPoly.monomial(5) == IntPoly.monomial(8)


def test_degree_sentinel():
    assert IntPoly.zero().degree == -1
    assert IntPoly([0, 0, 5]).degree == 2
    assert IntPoly([1, 0]).degree == 0  # normalization strips trailing zeros


@given(a=coeff_lists, b=coeff_lists, c=coeff_lists)
@settings(max_examples=120, deadline=None)
def test_ring_laws(a, b, c):
    pa, pb, pc = IntPoly(a), IntPoly(b), IntPoly(c)
    assert pa * (pb + pc) == pa * pb + pa * pc
    assert pa * pb == pb * pa
    assert (pa - pa).is_zero()
    assert pa + (-pa) == 0


@given(a=coeff_lists, b=coeff_lists)
@settings(max_examples=80, deadline=None)
def test_kronecker_matches_schoolbook(a, b):
    if not a or not b or all(v == 0 for v in a) or all(v == 0 for v in b):
        return
    assert _kronecker_mul(a, b) == _schoolbook_mul(a, b)


def test_kronecker_wide_coefficients():
    rng = random.Random(7)
    a = [rng.randrange(-(1 << 200), 1 << 200) for _ in range(150)]
    b = [rng.randrange(-(1 << 180), 1 << 180) for _ in range(97)]
    assert _kronecker_mul(a, b) == _schoolbook_mul(a, b)


def test_divmod_monic_roundtrip():
    rng = random.Random(3)
    for _ in range(50):
        num = IntPoly([rng.randrange(-50, 51) for _ in range(rng.randrange(1, 40))])
        den = IntPoly([rng.randrange(-9, 10) for _ in range(rng.randrange(1, 12))] + [1])
        quo, rem = num.divmod_monic(den)
        assert quo * den + rem == num
        assert rem.degree < den.degree


def test_divmod_requires_monic():
    with pytest.raises(ValueError):
        IntPoly([1, 1]).divmod_monic(IntPoly([1, 2]))


# ---------------------------------------------------------------------------
# cyclotomic polynomials
# ---------------------------------------------------------------------------


def _cyclotomic_moebius_oracle(m):
    """Independent construction: prod over d | m of (q^(m/d) - 1)^mu(d),
    splitting numerator and denominator and doing one exact division."""
    num, den = IntPoly.one(), IntPoly.one()
    for d in divisors(m):
        factor = IntPoly.monomial(m // d) - 1
        if moebius(d) == 1:
            num = num * factor
        elif moebius(d) == -1:
            den = den * factor
    quo, rem = num.divmod_monic(den)
    assert rem.is_zero()
    return quo


def test_cyclotomic_m1():
    assert cyclotomic_poly(1) == IntPoly([-1, 1])


def test_cyclotomic_m4():
    assert cyclotomic_poly(4) == IntPoly([1, 0, 1])


def test_cyclotomic_105_coefficient():
    oracle = _cyclotomic_moebius_oracle(105)
    assert cyclotomic_poly(105) == oracle
    assert oracle.coefficient(7) == -2


@pytest.mark.parametrize("m", [2, 3, 6, 12, 36, 100, 128, 210])
def test_cyclotomic_against_moebius_oracle(m):
    assert cyclotomic_poly(m) == _cyclotomic_moebius_oracle(m)


def test_cyclotomic_degrees_are_totients():
    for m in range(1, 80):
        assert cyclotomic_poly(m).degree == euler_phi(m)


def test_cyclotomic_product_identity_up_to_300():
    for m in range(1, 301):
        assert product_of_all_cyclotomics(m) == IntPoly.monomial(m) - 1


# ---------------------------------------------------------------------------
# reduction mod Phi_m
# ---------------------------------------------------------------------------


def test_reduce_q_power_m6():
    assert reduce(IntPoly.monomial(6), 6) == CycloElem.one(6)


def test_reduce_full_sum_m3():
    assert reduce(IntPoly([1, 1, 1]), 3).is_zero()


def _k_denominator(n):
    """Q polynomials of the Rogers-Ramanujan shape: Q_n = Q_{n-1} + q^n Q_{n-2}."""
    q_prev, q_curr = IntPoly.zero(), IntPoly.one()
    for i in range(1, n + 1):
        q_prev, q_curr = q_curr, q_curr + IntPoly.monomial(i) * q_prev
    return q_curr


def test_reduce_rr_denominator_m6():
    # forward recurrence cross-check of the closed-form residue q^((m-1)/5)
    assert reduce(_k_denominator(5), 6) == CycloElem.q_power(6, 1)


def test_reduce_is_ring_homomorphism():
    rng = random.Random(11)
    for _ in range(1000):
        m = rng.randrange(1, 101)
        a = IntPoly([rng.randrange(-20, 21) for _ in range(rng.randrange(1, 52))])
        b = IntPoly([rng.randrange(-20, 21) for _ in range(rng.randrange(1, 52))])
        assert reduce(a * b, m) == reduce(a, m) * reduce(b, m)
        assert reduce(a + b, m) == reduce(a, m) + reduce(b, m)


# ---------------------------------------------------------------------------
# numeric evaluation at primitive roots
# ---------------------------------------------------------------------------


def test_to_complex_i():
    v = reduce(IntPoly.monomial(1), 4).to_complex(1, 64)
    assert abs(v - mp.mpc(0, 1)) < mp.mpf(2) ** -30


def test_to_complex_vanishing_sum():
    v = reduce(IntPoly([1, 1, 1, 1, 1]), 5).to_complex(1, 128)
    assert abs(v) < mp.mpf(2) ** -60


def test_to_complex_rr_denominator_root():
    v = reduce(_k_denominator(5), 6).to_complex(1, 128)
    with mp.workprec(160):
        assert abs(v - mp.expjpi(mp.mpf(1) / 3)) < mp.mpf(2) ** -60


def test_to_complex_rejects_non_coprime():
    with pytest.raises(ValueError):
        reduce(IntPoly.one(), 6).to_complex(2, 128)


def test_to_complex_rejects_low_precision():
    with pytest.raises(ValueError):
        reduce(IntPoly.one(), 6).to_complex(1, 32)


def test_evaluation_consistency_vs_direct_horner():
    rng = random.Random(5)
    for _ in range(40):
        m = rng.randrange(1, 60)
        p = IntPoly([rng.randrange(-30, 31) for _ in range(rng.randrange(1, 45))])
        k = next(k for k in range(1, m + 1) if __import__("math").gcd(k, m) == 1)
        prec = 128
        via_ring = evaluate_at_root(reduce(p, m).rep, m, k, prec)
        with mp.workprec(prec):
            direct = p.evaluate(mp.expjpi(mp.mpf(2 * k) / m))
        bound = mp.mpf(2) ** (-(prec // 2)) * (1 + sum(abs(c) for c in p.coeffs))
        assert abs(via_ring - direct) <= bound


# ---------------------------------------------------------------------------
# weighted coefficient sums
# ---------------------------------------------------------------------------


def test_weighted_sum_examples():
    assert weighted_coeff_sum(IntPoly([1, 0, 1])) == 2
    assert weighted_coeff_sum(IntPoly([7])) == 0
    assert weighted_coeff_sum(IntPoly.zero()) == 0
    assert weighted_coeff_sum(IntPoly([0, 1, 0, 2])) == 1 * 1 + 3 * 2


def test_weighted_sum_is_circle_lipschitz_constant():
    rng = random.Random(17)
    prec = 256
    with mp.workprec(prec):
        tol = mp.mpf(2) ** -100
        for _ in range(25):
            p = IntPoly([rng.randrange(-9, 10) for _ in range(rng.randrange(1, 42))])
            w = weighted_coeff_sum(p)
            for _ in range(4):
                u = mp.mpf(rng.getrandbits(prec)) / mp.mpf(2) ** prec
                v = mp.mpf(rng.getrandbits(prec)) / mp.mpf(2) ** prec
                x, y = mp.expjpi(2 * u), mp.expjpi(2 * v)
                assert abs(p.evaluate(x) - p.evaluate(y)) <= w * abs(x - y) + tol
