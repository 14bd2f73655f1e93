"""Witness construction/verification, Schur evaluation, outside-circle
limits, and the Goellnitz-Gordon exploration."""

import math
from fractions import Fraction

import pytest
from mpmath import mp

import qcfkit.witness as wit
from qcfkit.errors import AdmissibilityError
from qcfkit.families import denominator_polys, make_family, numerator_product_polys
from qcfkit.lipschitz import FLAVOR_DENOMINATOR, FLAVOR_PRODUCT, build

K = make_family("K")
S1 = make_family("S1")
S2 = make_family("S2")
S3 = make_family("S3")
GG = make_family("GG")


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


def _stage1_bound_oracle(f, d_odd, n_star):
    """Independent instantiation of the even-quotient threshold."""
    q_polys = denominator_polys(f, n_star)
    chi_polys = numerator_product_polys(f, n_star)
    kappa = build(q_polys, FLAVOR_DENOMINATOR).at(n_star)
    alpha = build(chi_polys, FLAVOR_PRODUCT, start_index=1).at(n_star)
    with mp.workprec(128):
        big = max(kappa, math.ceil(2 * alpha / f.c1))
        return int(mp.floor(2 * mp.pi * big / d_odd**2)) + 1, kappa, alpha


def test_build_k_stage1_numbers():
    wc = wit.build_witness(wit.WitnessPlan(family=K, stages=1))
    st = wc.stages[0]
    assert wc.quotients[:3] == [1, 1, 5]
    assert st.d_odd == 11 and st.c_odd == 6
    assert st.n_star == 10
    assert st.alpha == 55  # chi_n = q^(n(n+1)/2): weighted sums dominate
    e_bound, kappa, alpha = _stage1_bound_oracle(K, 11, 10)
    assert st.kappa == kappa and st.alpha == alpha
    assert st.e_bound == e_bound
    assert st.e_next == st.e_bound + 1
    assert st.threshold == Fraction(1, 8)


def test_build_s3_congruence():
    wc = wit.build_witness(wit.WitnessPlan(family=S3, stages=1))
    assert wc.quotients[:3] == [1, 1, 6]
    assert wc.stages[0].d_odd == 13
    assert wc.stages[0].d_odd % 6 == 1


def test_build_rejects_conjectural_family():
    with pytest.raises(AdmissibilityError):
        wit.build_witness(wit.WitnessPlan(family=GG, stages=1))


def test_build_rejects_bad_free_choices():
    with pytest.raises(ValueError):
        wit.build_witness(wit.WitnessPlan(family=K, stages=1, e1=2))
    with pytest.raises(ValueError):
        wit.build_witness(wit.WitnessPlan(family=K, stages=1, odd_quotient=7))


def test_build_congruences_hold_along_prefix():
    wc = wit.build_witness(wit.WitnessPlan(family=S1, stages=1))
    assert wc.quotients[0] % S1.d == S1.j
    for idx in range(3, len(wc.quotients) + 1, 2):
        assert wc.quotients[idx - 1] % S1.d == 0
    for st in wc.stages:
        assert st.d_odd % S1.d == S1.j


def test_build_beyond_cap_stage2():
    # stage 2 exceeds the default expansion cap but is still constructed
    # from exact upper bounds on the constants
    wc = wit.build_witness(wit.WitnessPlan(family=K, stages=2))
    assert len(wc.stages) == 2
    st2 = wc.stages[1]
    assert st2.constructed and not st2.verifiable
    assert not st2.bounds_are_exact
    assert st2.e_next == st2.e_bound + 1
    assert st2.log2_e_required_lower is not None


@pytest.mark.parametrize("name", ["K", "S1", "S2", "S3", "GG"])
def test_upper_bounds_dominate_exact_constants(name):
    f = make_family(name)
    n = 60
    kappa_ub, alpha_ub = wit._lipschitz_upper_bounds(f, n)
    kappa_exact = build(denominator_polys(f, n), FLAVOR_DENOMINATOR).at(n)
    alpha_exact = build(numerator_product_polys(f, n), FLAVOR_PRODUCT, start_index=1).at(n)
    assert kappa_ub >= kappa_exact
    assert alpha_ub >= alpha_exact


def test_build_stops_at_unmaterializable_stage():
    plan = wit.WitnessPlan(family=K, stages=3, recurrence_cap=500)
    wc = wit.build_witness(plan)
    # stage 2 exceeds the tiny recurrence cap: reported with a log bound only
    st2 = wc.stages[-1]
    assert not st2.constructed
    assert st2.log2_e_required_lower is not None
    assert "desk scale" in st2.notes


def test_witness_value_cf_tail_is_legal():
    wc = wit.build_witness(wit.WitnessPlan(family=K, stages=1))
    cf = wc.value_cf
    L = len(wc.quotients)
    for i in range(L + 1, L + 9):
        e = cf.quotient(i)
        if i % 2 == 1:
            assert e % K.d == 0
        else:
            assert e == 1


# ---------------------------------------------------------------------------
# stage verification
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name,threshold", [("K", Fraction(1, 8)), ("S1", Fraction(1, 8)),
                                            ("S2", Fraction(1, 4)), ("S3", Fraction(1, 8))])
def test_stage1_certificates(name, threshold):
    f = make_family(name)
    wc = wit.build_witness(wit.WitnessPlan(family=f, stages=1))
    st = wit.verify_stage(wc, 1, 512)
    assert st.threshold == threshold
    assert st.verified
    assert st.all_checks_pass()
    assert set(st.checks) == {
        "denominator_shift_at",
        "denominator_shift_prev",
        "denominator_bound_at",
        "denominator_bound_prev",
        "product_shift",
        "product_lower",
        "gap_exceeds_threshold",
    }
    assert st.measured["gap"] > mp.mpf(threshold.numerator) / threshold.denominator
    assert all(st.lemma_checks.values())


def test_stage1_gap_trajectory():
    wc = wit.build_witness(wit.WitnessPlan(family=K, stages=1))
    st = wit.verify_stage(wc, 1, 512, collect_trajectory=True)
    assert len(st.trajectory) == st.n_star
    n_last, abs_q, gap, thr = st.trajectory[-1]
    assert n_last == st.n_star
    assert gap == st.measured["gap"]
    assert thr == mp.mpf(1) / 8


def test_stage_verification_requires_precision():
    wc = wit.build_witness(wit.WitnessPlan(family=K, stages=1))
    with pytest.raises(ValueError):
        wit.verify_stage(wc, 1, 64)


def test_stage_monotone_under_precision():
    wc = wit.build_witness(wit.WitnessPlan(family=K, stages=1))
    lo = wit.verify_stage(wc, 1, 256)
    hi = wit.verify_stage(wc, 1, 512)
    assert lo.verified and hi.verified
    assert lo.checks == hi.checks


def test_degenerate_coincident_points_margins():
    # with y placed exactly at x_i, the numeric recurrence lands on the exact
    # residues and every difference inequality holds with margin ~1
    from qcfkit.families import chi_magnitude_check, evaluate_terms, table_check
    from qcfkit.cf_engine import CFCoeffs, advance

    m, n_star, k = 11, 10, 6  # stage-1 geometry for K
    row = table_check(K, m)
    chi_nf = chi_magnitude_check(K, m)
    precision = 256
    with mp.workprec(precision):
        x = mp.expjpi(mp.mpf(2 * k) / m)
        coeffs = CFCoeffs(
            b0=evaluate_terms(K.b0_poly, x),
            a=lambda n: evaluate_terms(K.a_poly(n), x),
            b=lambda n: evaluate_terms(K.b_poly(n), x),
        )
        s = advance(coeffs, n_star)
        chi = mp.mpc(1)
        for n in range(1, n_star + 1):
            chi *= coeffs.a(n)
        tiny = mp.mpf(2) ** -100
        diff_at = abs(s.q_curr - row.residue_at.to_complex(k, precision))
        diff_prev = abs(s.q_prev - row.residue_prev.to_complex(k, precision))
        diff_chi = abs(abs(chi) - abs(chi_nf.residue.to_complex(k, precision)))
        assert diff_at < tiny and diff_prev < tiny and diff_chi < tiny
        # margins of the difference inequalities are 1, 1, C1/2 up to tiny
        assert 1 - diff_at > 1 - mp.mpf(2) ** -90
        assert mp.mpf(1) / 2 - diff_chi > mp.mpf(1) / 2 - mp.mpf(2) ** -90


def test_lemma6_instantiation_bounds():
    wc = wit.build_witness(wit.WitnessPlan(family=K, stages=1))
    st = wit.verify_stage(wc, 1, 512)
    err = st.measured["t_minus_convergent"]
    with mp.workprec(512):
        assert err < 1 / (2 * mp.pi * st.kappa)
        assert err < mp.mpf(1) / (4 * mp.pi * st.alpha)  # C1 = 1


def test_root_of_unity_checks():
    assert wit.root_of_unity_checks(K, 11)
    assert wit.root_of_unity_checks(S1, 13)
    with pytest.raises(AdmissibilityError):
        wit.root_of_unity_checks(K, 7)


# ---------------------------------------------------------------------------
# Schur values
# ---------------------------------------------------------------------------


def test_schur_value_m1_golden():
    sv = wit.schur_value(1, 1, 256)
    with mp.workprec(256):
        golden = (mp.sqrt(5) + 1) / 2
        assert sv.converges and abs(sv.value - golden) < mp.mpf(2) ** -200


def test_schur_value_m2():
    sv = wit.schur_value(2, 1, 256)
    assert (sv.lam, sv.sigma, sv.exponent) == (-1, 2, 1)
    with mp.workprec(256):
        golden = (mp.sqrt(5) + 1) / 2
        assert abs(sv.value - 1 / golden) < mp.mpf(2) ** -200


def test_schur_value_m5_divergence_flag():
    sv = wit.schur_value(5, 1, 128)
    assert not sv.converges and sv.value is None


def test_schur_value_rejects_bad_embedding():
    with pytest.raises(ValueError):
        wit.schur_value(6, 2, 128)


def test_schur_check_small_orders():
    for m in (1, 6, 49):
        assert wit.schur_check(m, 256)


def test_schur_check_rejects_divisible_by_5():
    with pytest.raises(AdmissibilityError):
        wit.schur_check(10, 128)


def test_schur_no_embedding_dependence():
    for m in (7, 11, 12):
        spread = wit.schur_embedding_spread(m, 192)
        assert spread < mp.mpf(2) ** -150


# ---------------------------------------------------------------------------
# outside the unit circle
# ---------------------------------------------------------------------------


def test_outside_circle_q2():
    # diffs shrink roughly by 1/|q| per j; 1e-25 needs j ~ 100 at q = 2
    rep = wit.outside_circle_check(2, 60, 256)
    assert rep.diff_even < mp.mpf("1e-15")
    assert rep.diff_odd < mp.mpf("1e-15")
    # the printed-display association stays bounded away from zero
    assert rep.diff_odd_printed > mp.mpf("0.1")
    assert rep.diff_even_printed > mp.mpf("0.1")


def test_outside_circle_margin_gate():
    with pytest.raises(ValueError):
        wit.outside_circle_check(Fraction(101, 100), 10, 128)


def test_outside_circle_diffs_decay():
    rep = wit.outside_circle_check(-3, 30, 192)
    assert rep.even_diffs[5] > rep.even_diffs[25]
    assert rep.odd_diffs[5] > rep.odd_diffs[25]


# ---------------------------------------------------------------------------
# Goellnitz-Gordon exploration
# ---------------------------------------------------------------------------


def test_gg_entry_m1_agreement():
    sweep = wit.gg_explore([1], 192)
    e = sweep.entries[0]
    assert e.gg.converges and e.s2.converges
    assert e.agree and e.consistent
    with mp.workprec(192):
        assert abs(e.gg.limit - (1 + mp.sqrt(2))) < mp.mpf(2) ** -150


def test_gg_entry_m2_split():
    sweep = wit.gg_explore([2], 192)
    e = sweep.entries[0]
    assert e.expected.startswith("split")
    assert e.gg.converges is False
    assert e.s2.converges is True and e.s2.kind == wit.TERMINATING
    assert e.consistent


def test_gg_sweep_consistent_to_24():
    sweep = wit.gg_explore(range(1, 25), 160)
    assert sweep.banner == wit.CONJECTURE_BANNER
    assert sweep.n_inconsistent == 0
    assert sweep.n_undecided == 0


def test_gg_terminating_values_match_recurrence():
    # S2 at m=2: a_1 = q + q^2 = 0 at q = -1, approximants freeze at 1
    out = wit.classify_family_at_order(S2, 2, 128)
    assert out.kind == wit.TERMINATING
    assert abs(out.limit - 1) < mp.mpf(2) ** -60
