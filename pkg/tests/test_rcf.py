"""Regular continued fractions: convergents, tail bounds, tower quotients,
and certified decimal digits."""

from fractions import Fraction

import pytest
from mpmath import mp

from qcfkit.errors import CertificationError, QuotientMaterializationError
from qcfkit.rcf import Convergent, LogScaleBound, PowerTower, RegCF, tower_number

# the printed 110-digit expansion of the tower-quotient number
PAPER_DIGITS = (
    "484848484848484848484848484848484848484848484848484848484"
    "84848484848484848484849277885083112437522992318812011"
)


def test_paper_digit_block_length():
    assert len(PAPER_DIGITS) == 110
    assert "49277885083112437522992318812011" in PAPER_DIGITS


# ---------------------------------------------------------------------------
# convergents
# ---------------------------------------------------------------------------


def test_convergents_2_16():
    cf = RegCF([2, 16])
    conv = cf.convergents(2)
    assert (conv[1].c, conv[1].d) == (1, 2)
    assert (conv[2].c, conv[2].d) == (16, 33)


def test_fibonacci_convergents():
    cf = RegCF(lambda i: 1)
    conv = cf.convergents(12)
    fib = [0, 1]
    for _ in range(14):
        fib.append(fib[-1] + fib[-2])
    # c_i/d_i = F_i / F_{i+1}
    for i in range(13):
        assert conv[i].c == fib[i]
        assert conv[i].d == fib[i + 1]


def test_convergent_determinant_identity():
    cf = RegCF([3, 7, 15, 1, 292, 1, 1, 1, 2])
    conv = cf.convergents(9)
    prev_c, prev_d = 1, 0
    for i, cv in enumerate(conv):
        assert cv.c * prev_d - prev_c * cv.d == (-1) ** (i - 1)
        prev_c, prev_d = cv.c, cv.d


def test_convergent_gcd_assertion():
    with pytest.raises(AssertionError):
        Convergent(2, 4)


def test_quotients_must_be_positive():
    with pytest.raises(ValueError):
        RegCF([2, 0, 3]).convergents(2)


# ---------------------------------------------------------------------------
# power towers
# ---------------------------------------------------------------------------


def test_tower_values_small():
    assert PowerTower(1, 1).try_int() == 2
    assert PowerTower(2, 2).try_int() == 16
    assert PowerTower(3, 3).try_int() == 2**256
    assert PowerTower(4, 4).try_int() is None


def test_tower_log2_strips_level():
    t = PowerTower(4, 4)
    lg = t.log2()
    assert isinstance(lg, PowerTower) and lg.height == 3
    assert lg.try_int() == 2**65536


def test_tower_integer_comparisons():
    t = PowerTower(3, 3)  # 2^256
    assert t > 2**255
    assert t > 2**256 - 1
    assert not (t > 2**256)
    assert t >= 2**256
    assert t < 2**256 + 1
    big = PowerTower(4, 4)
    assert big > 10**10**4
    assert PowerTower(0, 7) < 8


def test_tower_tower_comparisons():
    assert PowerTower(2, 2) < PowerTower(3, 3)
    assert PowerTower(4, 4) < PowerTower(5, 5)
    assert PowerTower(4, 4) >= PowerTower(4, 4)


def test_tower_number_quotients():
    cf = tower_number(5)
    assert cf.quotient(1) == 2
    assert cf.quotient(2) == 16
    assert cf.quotient(3) == 2**256
    assert isinstance(cf.quotient(4), PowerTower)
    conv = cf.convergents(3)
    assert conv[3].d == 33 * 2**256 + 2
    assert conv[3].c == 16 * 2**256 + 1
    with pytest.raises(QuotientMaterializationError):
        cf.convergents(4)


# ---------------------------------------------------------------------------
# tail error bounds
# ---------------------------------------------------------------------------


def test_tail_bound_2_16():
    cf = RegCF([2, 16])
    bound = cf.tail_error_bound(1)
    assert bound == Fraction(1, 4 * 16)
    true_err = abs(Fraction(1, 2) - Fraction(16, 33))
    assert true_err == Fraction(1, 66) < bound


def test_tail_bound_unit_quotient():
    cf = RegCF([5, 1, 9])
    assert cf.tail_error_bound(1) == Fraction(1, 25)


def test_tail_bound_tower_log_scale():
    cf = tower_number(5)
    bound = cf.tail_error_bound(3)
    assert isinstance(bound, LogScaleBound)
    # e_4 = 2^(2^65536): the bound is far below 10^-(10^70)
    assert bound.neg_log10_floor() > 10**70


def test_tail_bound_terminating_expansion():
    cf = RegCF([2])
    assert cf.tail_error_bound(1) == 0


def test_tail_bound_is_valid_along_prefix():
    cf = RegCF([1, 2, 3, 4, 5, 6, 7, 8])
    t = Fraction(cf.convergents(8)[8].c, cf.convergents(8)[8].d)
    for i in range(1, 8):
        conv = cf.convergents(i)[i]
        err = abs(t - Fraction(conv.c, conv.d))
        assert err < cf.tail_error_bound(i)


def test_alternating_enclosure():
    cf = RegCF([1, 2, 3, 4, 5, 6, 7, 8, 9])
    t = Fraction(cf.convergents(9)[9].c, cf.convergents(9)[9].d)
    for i in range(0, 8):
        conv = cf.convergents(i)[i]
        v = Fraction(conv.c, conv.d)
        if i % 2 == 0:
            assert v < t
        else:
            assert v > t


# ---------------------------------------------------------------------------
# values
# ---------------------------------------------------------------------------


def test_value_single_quotient():
    assert RegCF([2]).value(64) == mp.mpf("0.5")


def test_value_golden_ratio():
    v = RegCF(lambda i: 1).value(256)
    with mp.workprec(300):
        golden_inv = 2 / (mp.sqrt(5) + 1)
        assert abs(v - golden_inv) < mp.mpf(2) ** -250


def test_value_tower_number():
    v = tower_number(5).value(400)
    with mp.workprec(420):
        assert abs(v - mp.mpf(16) / 33) < mp.mpf(10) ** -75
        assert mp.nstr(v, 10) == "0.4848484848"


def test_value_certification_failure():
    # two integer quotients, then a tower too tall even for log-scale bounds
    cf = RegCF(lambda i: 2 if i <= 2 else PowerTower(9, 9), length=None)
    with pytest.raises(CertificationError):
        cf.value(128)


# ---------------------------------------------------------------------------
# decimal digits
# ---------------------------------------------------------------------------


def test_digits_half():
    assert RegCF([2]).decimal_digits(5) == "0.50000"


def test_digits_tower_matches_paper():
    cf = tower_number(5)
    assert cf.decimal_digits(110) == "0." + PAPER_DIGITS
    assert cf.decimal_digits(24) == "0.484848484848484848484848"
    assert "49277885" in cf.decimal_digits(110)


def test_digits_of_known_rational():
    # [0; 3, 7] = 7/22 = 0.3181818...
    assert RegCF([3, 7]).decimal_digits(8) == "0.31818181"


def test_digits_odd_convergent_side():
    # t = [0; 1, 1, ...] (inverse golden ratio); certify against a known value
    digits = RegCF(lambda i: 1).decimal_digits(30)
    with mp.workprec(180):
        golden_inv = 2 / (mp.sqrt(5) + 1)
        expect = mp.nstr(golden_inv, 31)
    assert digits == expect[: len(digits)]
