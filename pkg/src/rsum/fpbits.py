"""Bit-level access to IEEE-754 single and double values.

Values of either format travel through the API as Python floats (single
values are exactly representable doubles); bulk data uses numpy arrays of
the matching dtype.  All masks operate on the full 32/64-bit pattern so the
results do not depend on machine endianness.
"""

from __future__ import annotations

import enum
import math
import struct
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "FormatSpec",
    "FloatView",
    "FloatClass",
    "ExponentRangeError",
    "SINGLE",
    "DOUBLE",
    "get_format",
    "to_bits",
    "from_bits",
    "decompose",
    "extract_exponent",
    "set_exponent",
    "mul_pow2",
    "classify",
    "unbiased_exponent",
    "ulp",
    "round_rational",
    "round_to_format",
]


class ExponentRangeError(ValueError):
    """A biased exponent fell outside ``[0, max_biased_exponent]``."""


@dataclass(frozen=True)
class FormatSpec:
    """Layout constants of a binary interchange format."""

    name: str
    exponent_bits: int
    mantissa_bits: int

    @property
    def total_bits(self) -> int:
        return 1 + self.exponent_bits + self.mantissa_bits

    @property
    def bias(self) -> int:
        return (1 << (self.exponent_bits - 1)) - 1

    @property
    def max_biased_exponent(self) -> int:
        return (1 << self.exponent_bits) - 1

    @property
    def min_exponent(self) -> int:
        """Smallest unbiased exponent of a normal number."""
        return 1 - self.bias

    @property
    def max_exponent(self) -> int:
        return self.max_biased_exponent - 1 - self.bias

    @property
    def precision(self) -> int:
        """Significand digits including the hidden bit."""
        return self.mantissa_bits + 1

    @property
    def sign_mask(self) -> int:
        return 1 << (self.total_bits - 1)

    @property
    def exponent_mask(self) -> int:
        return self.max_biased_exponent << self.mantissa_bits

    @property
    def mantissa_mask(self) -> int:
        return (1 << self.mantissa_bits) - 1

    @property
    def dtype(self) -> np.dtype:
        return np.dtype(np.float32 if self.total_bits == 32 else np.float64)

    @property
    def uint_dtype(self) -> np.dtype:
        return np.dtype(np.uint32 if self.total_bits == 32 else np.uint64)

    # Constants of the classic 16-bit-word formulation (top word of the value).

    @property
    def mask16(self) -> int:
        """Exponent mask within the most significant 16-bit word."""
        return self.exponent_mask >> (self.total_bits - 16)

    @property
    def shift16(self) -> int:
        """Right shift that brings the exponent down from the top 16-bit word."""
        return self.mantissa_bits - (self.total_bits - 16)

    @property
    def mask16_low(self) -> int:
        """Post-shift mask keeping only the exponent field."""
        return self.max_biased_exponent

    @property
    def mask16_clear(self) -> int:
        """Complement of :attr:`mask16`: sign and leading mantissa bits."""
        return ~self.mask16 & 0xFFFF

    @property
    def smallest_subnormal(self) -> float:
        return math.ldexp(1.0, self.min_exponent - self.mantissa_bits)

    @property
    def largest_finite(self) -> float:
        return from_bits(self.exponent_mask - (1 << self.mantissa_bits) + self.mantissa_mask, self)


SINGLE = FormatSpec("single", 8, 23)
DOUBLE = FormatSpec("double", 11, 52)

_FORMATS = {"single": SINGLE, "double": DOUBLE, "float32": SINGLE, "float64": DOUBLE}


def get_format(fmt: FormatSpec | str | np.dtype | type) -> FormatSpec:
    if isinstance(fmt, FormatSpec):
        return fmt
    if isinstance(fmt, str) and fmt in _FORMATS:
        return _FORMATS[fmt]
    try:
        dt = np.dtype(fmt)
    except TypeError:
        dt = None
    if dt == np.float32:
        return SINGLE
    if dt == np.float64:
        return DOUBLE
    raise ValueError(f"unsupported float format: {fmt!r}")


class FloatClass(enum.Enum):
    ZERO = "zero"
    SUBNORMAL = "subnormal"
    NORMAL = "normal"
    INFINITE = "infinite"
    NAN = "nan"


def to_bits(x: float, fmt: FormatSpec = DOUBLE) -> int:
    """Raw bit pattern of ``x`` in ``fmt``; single values are rounded once."""
    if fmt.total_bits == 64:
        return struct.unpack("<Q", struct.pack("<d", x))[0]
    with np.errstate(over="ignore"):
        return int(np.float32(x).view(np.uint32))


def from_bits(bits: int, fmt: FormatSpec = DOUBLE) -> float:
    if fmt.total_bits == 64:
        return struct.unpack("<d", struct.pack("<Q", bits))[0]
    return float(np.uint32(bits).view(np.float32))


@dataclass(frozen=True)
class FloatView:
    """A float seen both as a number and as its three bit fields."""

    sign: int
    biased_exponent: int
    mantissa: int
    fmt: FormatSpec = DOUBLE

    @classmethod
    def from_bits(cls, bits: int, fmt: FormatSpec = DOUBLE) -> FloatView:
        return cls(
            bits >> (fmt.total_bits - 1),
            (bits & fmt.exponent_mask) >> fmt.mantissa_bits,
            bits & fmt.mantissa_mask,
            fmt,
        )

    @classmethod
    def from_value(cls, x: float, fmt: FormatSpec = DOUBLE) -> FloatView:
        return cls.from_bits(to_bits(x, fmt), fmt)

    @property
    def bits(self) -> int:
        f = self.fmt
        return (self.sign << (f.total_bits - 1)) | (self.biased_exponent << f.mantissa_bits) | self.mantissa

    @property
    def value(self) -> float:
        return from_bits(self.bits, self.fmt)

    @property
    def float_class(self) -> FloatClass:
        return _classify_fields(self.biased_exponent, self.mantissa, self.fmt)


def decompose(x: float, fmt: FormatSpec = DOUBLE) -> FloatView:
    return FloatView.from_value(x, fmt)


def _classify_fields(biased_exponent: int, mantissa: int, fmt: FormatSpec) -> FloatClass:
    if biased_exponent == 0:
        return FloatClass.ZERO if mantissa == 0 else FloatClass.SUBNORMAL
    if biased_exponent == fmt.max_biased_exponent:
        return FloatClass.INFINITE if mantissa == 0 else FloatClass.NAN
    return FloatClass.NORMAL


def classify(x: float, fmt: FormatSpec = DOUBLE) -> FloatClass:
    b = to_bits(x, fmt)
    return _classify_fields((b & fmt.exponent_mask) >> fmt.mantissa_bits, b & fmt.mantissa_mask, fmt)


def extract_exponent(x: float, fmt: FormatSpec = DOUBLE) -> int:
    """Raw biased exponent field of ``x``.  Total: specials included."""
    return (to_bits(x, fmt) & fmt.exponent_mask) >> fmt.mantissa_bits


def set_exponent(x: float, new_exp: int, fmt: FormatSpec = DOUBLE) -> float:
    """Overwrite the exponent field of ``x``, keeping sign and mantissa bits.

    Raises :class:`ExponentRangeError` when ``new_exp`` does not fit the
    field; the caller owns overflow/underflow handling.
    """
    if not 0 <= new_exp <= fmt.max_biased_exponent:
        raise ExponentRangeError(
            f"biased exponent {new_exp} outside [0, {fmt.max_biased_exponent}] for {fmt.name}"
        )
    b = to_bits(x, fmt)
    return from_bits((b & ~fmt.exponent_mask) | (new_exp << fmt.mantissa_bits), fmt)


def mul_pow2(x: float, k: int, fmt: FormatSpec = DOUBLE) -> float:
    """``x * 2**k`` rounded once to ``fmt``.

    Normal inputs whose scaled exponent stays in the normal range take the
    exponent-field path; everything else (subnormal results, overflow,
    zeros, specials) goes through an exactly rounded scaling.
    """
    b = to_bits(x, fmt)
    e = (b & fmt.exponent_mask) >> fmt.mantissa_bits
    if 0 < e < fmt.max_biased_exponent and 0 < e + k < fmt.max_biased_exponent:
        return from_bits((b & ~fmt.exponent_mask) | ((e + k) << fmt.mantissa_bits), fmt)
    if e == fmt.max_biased_exponent or x == 0.0:
        return x
    if fmt.total_bits == 64:
        try:
            return math.ldexp(x, k)
        except OverflowError:
            return math.copysign(math.inf, x)
    # Single: clamped k keeps the double intermediate exact; clamping cannot
    # change the single result, which is already 0 or inf at the bounds.
    k = max(-400, min(400, k))
    with np.errstate(over="ignore"):
        return float(np.float32(math.ldexp(x, k)))


def unbiased_exponent(x: float, fmt: FormatSpec = DOUBLE) -> int:
    """``E`` with ``2**E <= |x| < 2**(E+1)``; subnormals included.  ``x`` finite, nonzero."""
    if x == 0.0 or not math.isfinite(x):
        raise ValueError(f"exponent undefined for {x!r}")
    return math.frexp(x)[1] - 1


def ulp(x: float, fmt: FormatSpec = DOUBLE) -> float:
    """Spacing of ``fmt`` numbers at the magnitude of ``x``."""
    if not math.isfinite(x):
        return math.nan
    if x == 0.0:
        return fmt.smallest_subnormal
    e = max(unbiased_exponent(x), fmt.min_exponent)
    return math.ldexp(1.0, e - fmt.mantissa_bits)


def round_rational(value: Fraction | int, fmt: FormatSpec = DOUBLE) -> float:
    """Round an exact rational to ``fmt``, nearest-even, with gradual underflow.

    Overflow returns a signed infinity.
    """
    q = Fraction(value)
    if q == 0:
        return 0.0
    neg = q < 0
    num, den = abs(q.numerator), q.denominator
    p = fmt.precision
    # 2**e <= num/den < 2**(e+1)
    e = num.bit_length() - den.bit_length()
    if (num << max(0, -e)) < (den << max(0, e)):
        e -= 1
    e = max(e, fmt.min_exponent)
    shift = p - 1 - e  # scale so the integer part has p bits (fewer when subnormal)
    if shift >= 0:
        m, rem = divmod(num << shift, den)
        rem2, den2 = 2 * rem, den
    else:
        m, rem = divmod(num, den << -shift)
        rem2, den2 = 2 * rem, den << -shift
    if rem2 > den2 or (rem2 == den2 and m & 1):
        m += 1
    if m.bit_length() > p:  # rounded up into the next binade
        m >>= 1
        e += 1
        shift -= 1
    if e > fmt.max_exponent:
        return -math.inf if neg else math.inf
    r = math.ldexp(float(m), -shift)
    return -r if neg else r


def round_to_format(x: float, fmt: FormatSpec) -> float:
    """Round a double to ``fmt`` (identity for double)."""
    if fmt.total_bits == 64:
        return float(x)
    with np.errstate(over="ignore"):
        return float(np.float32(x))
