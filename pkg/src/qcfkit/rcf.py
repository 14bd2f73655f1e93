"""Regular continued fractions [0; e1, e2, ...] with big-integer convergents,
exact tail error bounds, and lazily represented power-tower partial quotients.

Convergents follow c_i = e_i c_{i-1} + c_{i-2}, d_i = e_i d_{i-1} + d_{i-2}
with c_{-1} = 1, c_0 = 0, d_{-1} = 0, d_0 = 1, so c_i d_{i-1} - c_{i-1} d_i
= (-1)^(i-1) and consecutive convergents are automatically coprime.

The tail bound |t - c_i/d_i| < 1/(d_i^2 e_{i+1}) stays available even when
e_{i+1} is an exponent tower too large to materialize: such bounds are
reported on a log2 scale with exact integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from mpmath import mp

from .errors import CertificationError, QuotientMaterializationError


@dataclass(frozen=True)
class PowerTower:
    """A tower of `height` twos with `top` as the topmost exponent.

    value(height, top) = top if height == 0 else 2**value(height-1, top).
    Never materialized; supports order comparisons against integers and
    exact iterated floor-log2 (each log2 strips one level of the tower).
    """

    height: int
    top: int

    def __post_init__(self):
        if self.height < 0 or self.top < 1:
            raise ValueError("need height >= 0 and top >= 1")
        if self.height == 0 and self.top < 2:
            raise ValueError("a power tower must represent an integer >= 2")

    def log2(self) -> Union[int, "PowerTower"]:
        """Exact log base 2 (the value is a power of two for height >= 1)."""
        if self.height == 0:
            raise ValueError("height-0 tower is a plain integer; no exact log2 assumed")
        if self.height == 1:
            return self.top
        return PowerTower(self.height - 1, self.top)

    def try_int(self, max_bits: int = 1 << 20) -> Optional[int]:
        """The exact integer value when it fits in max_bits bits, else None."""
        if self.height == 0:
            return self.top
        e = self.log2()
        if isinstance(e, PowerTower):
            e = e.try_int(64)
            if e is None:
                return None
        if e + 1 > max_bits:
            return None
        return 1 << e

    def _cmp_int(self, n: int) -> int:
        """-1, 0, 1 for self <, ==, > n. Exact."""
        if self.height == 0:
            return (self.top > n) - (self.top < n)
        if n < 2:
            return 1
        e = self.log2()
        bl = n.bit_length()
        if isinstance(e, PowerTower):
            c = e._cmp_int(bl - 1)
            if c == 1:
                return 1
            if c == -1:
                return -1
            return 0 if n == 1 << (bl - 1) and e._cmp_int(bl - 1) == 0 else -1
        if e >= bl:
            return 1
        if e == bl - 1:
            return 0 if n == 1 << e else -1
        return -1

    def __lt__(self, other):
        if isinstance(other, int):
            return self._cmp_int(other) < 0
        if isinstance(other, PowerTower):
            return _tower_cmp(self, other) < 0
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, int):
            return self._cmp_int(other) <= 0
        if isinstance(other, PowerTower):
            return _tower_cmp(self, other) <= 0
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, int):
            return self._cmp_int(other) > 0
        if isinstance(other, PowerTower):
            return _tower_cmp(self, other) > 0
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, int):
            return self._cmp_int(other) >= 0
        if isinstance(other, PowerTower):
            return _tower_cmp(self, other) >= 0
        return NotImplemented

    def __repr__(self):
        return f"PowerTower(height={self.height}, top={self.top})"


def _tower_cmp(a: PowerTower, b: PowerTower) -> int:
    av, bv = a.try_int(4096), b.try_int(4096)
    if av is not None and bv is not None:
        return (av > bv) - (av < bv)
    if av is not None:
        return -1
    if bv is not None:
        return 1
    la = a.log2() if a.height else a.top
    lb = b.log2() if b.height else b.top
    if isinstance(la, int) and isinstance(lb, int):
        return (la > lb) - (la < lb)
    if isinstance(la, int):
        return -_tower_cmp(lb, PowerTower(0, max(la, 2)))
    if isinstance(lb, int):
        return _tower_cmp(la, PowerTower(0, max(lb, 2)))
    return _tower_cmp(la, lb)


Quotient = Union[int, PowerTower]


@dataclass(frozen=True)
class Convergent:
    """A convergent c/d of a regular continued fraction; gcd(c, d) = 1."""

    c: int
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("denominator must be positive")
        if math.gcd(self.c, self.d) != 1:
            raise AssertionError("recurrence should yield coprime convergents")

    def as_fraction(self) -> Fraction:
        return Fraction(self.c, self.d)


@dataclass(frozen=True)
class LogScaleBound:
    """An upper bound of the form 2**(-neg_log2) with exact integer exponent."""

    neg_log2: int

    def neg_log10_floor(self) -> int:
        # log10(2) > 30102999/10^8; exact integer lower bound on -log10(bound)
        return self.neg_log2 * 30102999 // 10**8

    def certifies(self, eps_neg_log2: int) -> bool:
        """True when the bound is at most 2**(-eps_neg_log2)."""
        return self.neg_log2 >= eps_neg_log2


class RegCF:
    """[0; e1, e2, ...] with quotients supplied as a sequence or a callable
    i -> e_i (1-indexed); callables describe infinite expansions."""

    def __init__(
        self,
        quotients: Union[Sequence[Quotient], Callable[[int], Quotient]],
        length: Optional[int] = None,
    ):
        if callable(quotients):
            self._source = quotients
            self.length = length
        else:
            qs = list(quotients)
            self._source = lambda i: qs[i - 1]
            self.length = len(qs) if length is None else length
        self._quotient_cache: dict[int, Quotient] = {}
        self._convergents: list[Convergent] = [Convergent(0, 1)]  # index 0
        self._prev = (1, 0)  # (c_{-1}, d_{-1})

    def quotient(self, i: int) -> Quotient:
        """e_i (1-indexed)."""
        if i < 1:
            raise IndexError("quotient indices start at 1")
        if self.length is not None and i > self.length:
            raise IndexError(f"quotient index {i} beyond length {self.length}")
        if i not in self._quotient_cache:
            e = self._source(i)
            if isinstance(e, int) and e < 1:
                raise ValueError(f"partial quotient e_{i} = {e} must be >= 1")
            self._quotient_cache[i] = e
        return self._quotient_cache[i]

    def convergents(self, k: int) -> list[Convergent]:
        """Exact convergents c_i/d_i for i = 0..k.

        Raises QuotientMaterializationError when a required quotient is an
        exponent tower (bounds remain available via tail_error_bound).
        """
        while len(self._convergents) <= k:
            i = len(self._convergents)
            e = self.quotient(i)
            if isinstance(e, PowerTower):
                v = e.try_int(4096)
                if v is None:
                    raise QuotientMaterializationError(
                        f"quotient e_{i} is a power tower too large to materialize"
                    )
                e = v
            c_prev2, d_prev2 = self._prev
            last = self._convergents[-1]
            c_i = e * last.c + c_prev2
            d_i = e * last.d + d_prev2
            self._prev = (last.c, last.d)
            self._convergents.append(Convergent(c_i, d_i))
        return self._convergents[: k + 1]

    def materializable_depth(self, cap: int = 10_000) -> int:
        """Largest i <= cap (and <= length) with integer quotients e_1..e_i."""
        i = 0
        while i < cap:
            if self.length is not None and i + 1 > self.length:
                break
            try:
                e = self.quotient(i + 1)
            except IndexError:
                break
            if isinstance(e, PowerTower) and e.try_int(4096) is None:
                break
            i += 1
        return i

    def tail_error_bound(self, i: int) -> Union[Fraction, LogScaleBound]:
        """Upper bound on |t - c_i/d_i|: exactly 1/(d_i^2 e_{i+1}).

        Returns a Fraction when e_{i+1} is an integer, otherwise an exact
        log2-scale bound 2**(-L) with L = 2*floor(log2 d_i) + floor(log2 e_{i+1}).
        """
        d_i = self.convergents(i)[i].d
        if self.length is not None and i + 1 > self.length:
            return Fraction(0)  # expansion terminates at i: convergent is exact
        e_next = self.quotient(i + 1)
        if isinstance(e_next, PowerTower):
            as_int = e_next.try_int(4096)
            if as_int is not None:
                return Fraction(1, d_i * d_i * as_int)
            lg = e_next.log2()
            if isinstance(lg, PowerTower):
                lg_int = lg.try_int()
                if lg_int is None:
                    raise CertificationError(
                        "tail quotient tower too tall even for a log2-scale bound"
                    )
                lg = lg_int
            return LogScaleBound(neg_log2=2 * (d_i.bit_length() - 1) + lg)
        return Fraction(1, d_i * d_i * e_next)

    def _certified_depth(self, neg_log2_target: int) -> int:
        """Smallest materializable i whose tail bound is <= 2**(-target)."""
        depth = self.materializable_depth()
        for i in range(1, depth + 1):
            bound = self.tail_error_bound(i)
            if isinstance(bound, LogScaleBound):
                if bound.certifies(neg_log2_target):
                    return i
            elif bound == 0 or (
                bound.denominator.bit_length() - bound.numerator.bit_length()
                > neg_log2_target
            ):
                return i
        raise CertificationError(
            f"cannot certify error below 2^-{neg_log2_target} from "
            f"{depth} materializable quotients"
        )

    def value(self, precision: int):
        """The value in (0, 1) as an mpf at `precision` bits, certified by the
        tail bound (exact when the expansion is finite)."""
        if self.length is not None:
            k = self.materializable_depth()
            if k == self.length:
                conv = self.convergents(k)[k]
                with mp.workprec(precision + 16):
                    return mp.mpf(conv.c) / mp.mpf(conv.d)
        i = self._certified_depth(precision + 8)
        conv = self.convergents(i)[i]
        with mp.workprec(precision + 16):
            return mp.mpf(conv.c) / mp.mpf(conv.d)

    def decimal_digits(self, n_digits: int) -> str:
        """Digit-exact truncated decimal expansion "0.d1d2...", certified.

        Uses the deepest certified convergent c/d together with the side
        information (even convergents lie below the value, odd ones above)
        and exact integer comparisons against the tail bound to guarantee
        floor(t * 10^n) == the reported digit block.
        """
        target = (n_digits + 3) * 4  # > (n_digits+2) decimal digits, in bits
        exact = self.length is not None and self.materializable_depth() >= self.length
        i = self.length if exact else self._certified_depth(target)
        conv = self.convergents(i)[i]
        bound = self.tail_error_bound(i)
        digits_int, rem = divmod(conv.c * 10**n_digits, conv.d)
        if not (exact or bound == 0):
            # certify X/d > bound * 10^n by exact integer comparison
            if isinstance(bound, LogScaleBound):
                rhs_bits = (10**n_digits * conv.d).bit_length()

                def clears(x: int) -> bool:
                    return x > 0 and (x.bit_length() - 1 + bound.neg_log2) >= rhs_bits

            else:
                err_scaled = bound * 10**n_digits

                def clears(x: int) -> bool:
                    return x > 0 and Fraction(x, conv.d) > err_scaled

            if i % 2 == 0:
                # t in (c/d, c/d + bound): must not reach the next integer
                if not clears(conv.d - rem):
                    raise CertificationError("digit boundary too close to certify")
            else:
                # t in (c/d - bound, c/d): must not drop below the floor
                if rem == 0:
                    if not clears(conv.d):  # bound * 10^n < 1
                        raise CertificationError("digit boundary too close to certify")
                    digits_int -= 1
                elif not clears(rem):
                    raise CertificationError("digit boundary too close to certify")
        return "0." + str(digits_int).rjust(n_digits, "0")


def tower_number(levels: int) -> RegCF:
    """[0; e1, e2, ...] where e_i is a tower of i twos topped with an i:
    e1 = 2, e2 = 2^(2^2) = 16, e3 = 2^(2^(2^3)) = 2^256, e4 onward as
    PowerTower values."""
    if levels < 1:
        raise ValueError("levels must be >= 1")

    def quot(i: int) -> Quotient:
        t = PowerTower(i, i)
        v = t.try_int(4096)
        return v if v is not None else t

    return RegCF(quot, length=levels)
