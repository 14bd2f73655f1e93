"""Exact arithmetic for integer polynomials and cyclotomic quotient rings.

An ``IntPoly`` is a dense, immutable integer-coefficient polynomial in q.
A ``CycloElem`` is a residue in Z[q]/Phi_m(q); equality of two CycloElems
certifies equality of the underlying polynomials at *every* primitive m-th
root of unity simultaneously, which is the exactness backbone of the whole
toolkit.

Multiplication of large polynomials goes through Kronecker substitution
(pack coefficients into one big integer, multiply, unpack), so products of
degree ~10^4 polynomials with wide coefficients stay fast in pure Python.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterable, Sequence

from mpmath import mp

from .numtheory import divisors, euler_phi, is_coprime

try:  # GMP-backed integers make huge Kronecker products ~100x faster
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover
    def _mpz(x):
        return x

_SPARSE_TERM_CUTOFF = 4
_SCHOOLBOOK_CUTOFF = 48


def _normalized(coeffs: Iterable[int]) -> tuple[int, ...]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _schoolbook_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, av in enumerate(a):
        if av:
            for j, bv in enumerate(b):
                if bv:
                    out[i + j] += av * bv
    return out


def _sparse_mul(dense: Sequence[int], terms: Sequence[tuple[int, int]], out_len: int) -> list[int]:
    out = [0] * out_len
    for exp, c in terms:
        if c == 1:
            for i, v in enumerate(dense):
                if v:
                    out[exp + i] += v
        elif c == -1:
            for i, v in enumerate(dense):
                if v:
                    out[exp + i] -= v
        else:
            for i, v in enumerate(dense):
                if v:
                    out[exp + i] += c * v
    return out


def _offset_int(n_chunks: int, width_bytes: int) -> int:
    # sum of half * 2**(i*width) for i < n_chunks, built bytewise
    half_bytes = (1 << (width_bytes * 8 - 1)).to_bytes(width_bytes, "little")
    return int.from_bytes(half_bytes * n_chunks, "little")


def _pack_signed(coeffs: Sequence[int], width_bytes: int) -> int:
    width_bits = width_bytes * 8
    half = 1 << (width_bits - 1)
    buf = bytearray(width_bytes * len(coeffs))
    for i, c in enumerate(coeffs):
        buf[i * width_bytes : (i + 1) * width_bytes] = (c + half).to_bytes(width_bytes, "little")
    return int.from_bytes(bytes(buf), "little") - _offset_int(len(coeffs), width_bytes)


def _unpack_signed(value: int, width_bytes: int, n_out: int) -> list[int]:
    width_bits = width_bytes * 8
    half = 1 << (width_bits - 1)
    shifted = value + _offset_int(n_out, width_bytes)
    raw = shifted.to_bytes(width_bytes * n_out, "little")
    return [
        int.from_bytes(raw[i * width_bytes : (i + 1) * width_bytes], "little") - half
        for i in range(n_out)
    ]


def _kronecker_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    # any product coefficient is bounded by min(len)*max|a|*max|b|; one extra
    # bit keeps the signed chunks carry-free
    bound = min(len(a), len(b)) * max(abs(c) for c in a) * max(abs(c) for c in b)
    width_bits = bound.bit_length() + 2
    width_bytes = (width_bits + 7) // 8
    prod = int(_mpz(_pack_signed(a, width_bytes)) * _mpz(_pack_signed(b, width_bytes)))
    return _unpack_signed(prod, width_bytes, len(a) + len(b) - 1)


class IntPoly:
    """Dense integer-coefficient polynomial in q, immutable and normalized."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        object.__setattr__(self, "coeffs", _normalized(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("IntPoly is immutable")

    @classmethod
    def monomial(cls, exp: int, coef: int = 1) -> "IntPoly":
        if exp < 0:
            raise ValueError("monomial exponent must be >= 0")
        return cls([0] * exp + [coef])

    @classmethod
    def from_terms(cls, pairs: Iterable[tuple[int, int]]) -> "IntPoly":
        """Build from sparse (exponent, coefficient) pairs."""
        pairs = list(pairs)
        if not pairs:
            return cls(())
        out = [0] * (max(e for e, _ in pairs) + 1)
        for e, c in pairs:
            out[e] += c
        return cls(out)

    @classmethod
    def zero(cls) -> "IntPoly":
        return cls(())

    @classmethod
    def one(cls) -> "IntPoly":
        return cls((1,))

    @property
    def degree(self) -> int:
        """Degree; -1 is the sentinel for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def terms(self) -> list[tuple[int, int]]:
        """Nonzero (exponent, coefficient) pairs, ascending exponent."""
        return [(i, c) for i, c in enumerate(self.coeffs) if c]

    def coefficient(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def shifted(self, k: int) -> "IntPoly":
        """Multiplication by q**k."""
        if self.is_zero():
            return self
        return IntPoly((0,) * k + self.coeffs)

    def _coerce(self, other):
        if isinstance(other, IntPoly):
            return other
        if isinstance(other, int):
            return IntPoly((other,))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] += v
        return IntPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPoly(())
        out_len = len(a) + len(b) - 1
        terms_a = [(i, c) for i, c in enumerate(a) if c]
        terms_b = [(i, c) for i, c in enumerate(b) if c]
        if len(terms_b) <= _SPARSE_TERM_CUTOFF and len(terms_b) <= len(terms_a):
            return IntPoly(_sparse_mul(a, terms_b, out_len))
        if len(terms_a) <= _SPARSE_TERM_CUTOFF:
            return IntPoly(_sparse_mul(b, terms_a, out_len))
        if min(len(a), len(b)) <= _SCHOOLBOOK_CUTOFF:
            return IntPoly(_schoolbook_mul(a, b))
        return IntPoly(_kronecker_mul(a, b))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = IntPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def evaluate(self, x):
        """Horner evaluation; exact for int/Fraction x, rounded for mpf/mpc."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def divmod_monic(self, divisor: "IntPoly") -> tuple["IntPoly", "IntPoly"]:
        """Exact division with remainder by a monic divisor."""
        if divisor.is_zero() or divisor.coeffs[-1] != 1:
            raise ValueError("divisor must be monic")
        dd = divisor.degree
        if dd == 0:
            return self, IntPoly(())
        rem = list(self.coeffs)
        if len(rem) <= dd:
            return IntPoly(()), self
        quo = [0] * (len(rem) - dd)
        dterms = [(j, dc) for j, dc in enumerate(divisor.coeffs[:-1]) if dc]
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i]
            if c:
                quo[i - dd] = c
                base = i - dd
                for j, dc in dterms:
                    rem[base + j] -= c * dc
                rem[i] = 0
        return IntPoly(quo), IntPoly(rem)

    def __floordiv__(self, other: "IntPoly"):
        return self.divmod_monic(other)[0]

    def __mod__(self, other: "IntPoly"):
        return self.divmod_monic(other)[1]

    def __repr__(self):
        if self.is_zero():
            return "IntPoly(0)"
        parts = []
        for i, c in self.terms():
            if i == 0:
                parts.append(f"{c}")
            else:
                mon = "q" if i == 1 else f"q^{i}"
                if c == 1:
                    parts.append(mon)
                elif c == -1:
                    parts.append(f"-{mon}")
                else:
                    parts.append(f"{c}*{mon}")
        return "IntPoly(" + " + ".join(parts).replace("+ -", "- ") + ")"


def poly_add(a: IntPoly, b: IntPoly) -> IntPoly:
    return a + b


def poly_mul(a: IntPoly, b: IntPoly) -> IntPoly:
    return a * b


def poly_neg(a: IntPoly) -> IntPoly:
    return -a


def weighted_coeff_sum(p: IntPoly) -> int:
    """Sum of i*|coefficient of q^i| over i >= 1.

    A Lipschitz constant for p on the unit circle: |p(x) - p(y)| never
    exceeds this value times |x - y| when |x| = |y| = 1.
    """
    return sum(i * abs(c) for i, c in enumerate(p.coeffs) if i and c)


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> IntPoly:
    """The m-th cyclotomic polynomial, by exact division of q^m - 1."""
    if m < 1:
        raise ValueError(f"cyclotomic order must be >= 1, got {m}")
    if m == 1:
        return IntPoly((-1, 1))
    num = IntPoly.monomial(m) - 1
    den = IntPoly.one()
    for d in divisors(m):
        if d < m:
            den = den * cyclotomic_poly(d)
    quo, rem = num.divmod_monic(den)
    if not rem.is_zero():
        raise AssertionError(f"cyclotomic division left a remainder at m={m}")
    if quo.degree != euler_phi(m):
        raise AssertionError(f"cyclotomic degree mismatch at m={m}")
    return quo


def _fold_cyclic(coeffs: Sequence[int], m: int) -> list[int]:
    out = [0] * m
    for i, c in enumerate(coeffs):
        if c:
            out[i % m] += c
    return out


class CycloElem:
    """Residue in Z[q]/Phi_m(q): the value of a polynomial at all primitive
    m-th roots of unity at once."""

    __slots__ = ("m", "rep")

    def __init__(self, m: int, rep: IntPoly, _reduced: bool = False):
        if m < 1:
            raise ValueError(f"order must be >= 1, got {m}")
        if not _reduced:
            rep = _reduce_poly(rep, m)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "rep", rep)

    def __setattr__(self, name, value):
        raise AttributeError("CycloElem is immutable")

    @classmethod
    def zero(cls, m: int) -> "CycloElem":
        return cls(m, IntPoly.zero(), _reduced=True)

    @classmethod
    def one(cls, m: int) -> "CycloElem":
        return cls(m, _reduce_poly(IntPoly.one(), m), _reduced=True)

    @classmethod
    def q_power(cls, m: int, exp: int) -> "CycloElem":
        return cls(m, IntPoly.monomial(exp % m))

    def _coerce(self, other):
        if isinstance(other, CycloElem):
            if other.m != self.m:
                raise ValueError(f"mixed cyclotomic orders {self.m} and {other.m}")
            return other
        if isinstance(other, int):
            return CycloElem(self.m, IntPoly((other,)))
        if isinstance(other, IntPoly):
            return CycloElem(self.m, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycloElem(self.m, self.rep + other.rep)

    __radd__ = __add__

    def __neg__(self):
        return CycloElem(self.m, -self.rep, _reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycloElem(self.m, self.rep - other.rep)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycloElem(self.m, self.rep * other.rep)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.rep == other.rep

    def __hash__(self):
        return hash((self.m, self.rep))

    def is_zero(self) -> bool:
        return self.rep.is_zero()

    def to_complex(self, k: int = 1, precision: int = 64):
        """Evaluate at exp(2*pi*i*k/m), gcd(k, m) = 1, at `precision` bits.

        Heuristic error bound: 2**(-precision/2) * (1 + sum |coefficients|).
        """
        return evaluate_at_root(self.rep, self.m, k, precision)

    def __repr__(self):
        return f"CycloElem(m={self.m}, rep={self.rep!r})"


def _reduce_poly(p: IntPoly, m: int) -> IntPoly:
    phi_m = cyclotomic_poly(m)
    if p.degree >= m:
        p = IntPoly(_fold_cyclic(p.coeffs, m))
    if p.degree < phi_m.degree:
        return p
    return p % phi_m


def reduce(p: IntPoly, m: int) -> CycloElem:
    """Reduce p modulo Phi_m(q). Ring homomorphism Z[q] -> Z[q]/Phi_m."""
    return CycloElem(m, p)


def evaluate_at_root(p: IntPoly, m: int, k: int, precision: int):
    """Horner evaluation of p at the primitive root exp(2*pi*i*k/m)."""
    if precision < 64:
        raise ValueError(f"precision must be >= 64 bits, got {precision}")
    if not is_coprime(k, m):
        raise ValueError(f"k={k} is not coprime to m={m}; not a primitive root")
    with mp.workprec(precision):
        root = mp.expjpi(mp.mpf(2 * (k % m)) / m)
        return p.evaluate(root)


def product_of_all_cyclotomics(m: int) -> IntPoly:
    """Product of Phi_d over all divisors d of m (equals q^m - 1)."""
    out = IntPoly.one()
    for d in divisors(m):
        out = out * cyclotomic_poly(d)
    return out


def _gcd_int(a: int, b: int) -> int:
    return math.gcd(a, b)
