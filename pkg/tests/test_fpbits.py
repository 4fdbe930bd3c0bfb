import math
import struct
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rsum.fpbits import (
    DOUBLE,
    SINGLE,
    ExponentRangeError,
    FloatClass,
    FloatView,
    classify,
    decompose,
    extract_exponent,
    from_bits,
    get_format,
    mul_pow2,
    round_rational,
    set_exponent,
    to_bits,
    ulp,
)

finite_doubles = st.floats(allow_nan=False, allow_infinity=False)
finite_singles = st.floats(allow_nan=False, allow_infinity=False, width=32)


class TestFormatSpec:
    @pytest.mark.parametrize("fmt, ebits, mbits, bias, emax", [
        (SINGLE, 8, 23, 127, 255),
        (DOUBLE, 11, 52, 1023, 2047),
    ])
    def test_ieee_rows(self, fmt, ebits, mbits, bias, emax):
        assert (fmt.exponent_bits, fmt.mantissa_bits) == (ebits, mbits)
        assert fmt.bias == bias == 2 ** (ebits - 1) - 1
        assert fmt.max_biased_exponent == emax == 2**ebits - 1

    def test_top_word_constants(self):
        # exponent mask and shift seen through the top 16 bits of the value
        assert SINGLE.mask16 == 0x7F80 and SINGLE.shift16 == 7
        assert DOUBLE.mask16 == 0x7FF0 and DOUBLE.shift16 == 4
        assert SINGLE.mask16_clear == 0x807F
        assert DOUBLE.mask16_clear == 0x800F
        for fmt in (SINGLE, DOUBLE):
            top = to_bits(3.0, fmt) >> (fmt.total_bits - 16)
            assert (top & fmt.mask16) >> fmt.shift16 == extract_exponent(3.0, fmt)

    def test_limits(self):
        assert DOUBLE.largest_finite == np.finfo(np.float64).max
        assert SINGLE.largest_finite == float(np.finfo(np.float32).max)
        assert DOUBLE.smallest_subnormal == 5e-324
        assert SINGLE.smallest_subnormal == float(np.float32(1e-45))

    def test_get_format(self):
        assert get_format("single") is SINGLE
        assert get_format(np.float64) is DOUBLE
        with pytest.raises(ValueError):
            get_format("half")


class TestFields:
    def test_extract_exponent_examples(self):
        assert extract_exponent(1.0) == 1023
        assert extract_exponent(2.0) == 1024
        assert extract_exponent(0.0) == 0
        assert extract_exponent(math.inf) == 2047
        assert extract_exponent(1.0, SINGLE) == 127

    def test_set_exponent_examples(self):
        assert set_exponent(1.5, 1024) == 3.0
        assert set_exponent(6.25, 1022) == 6.25 * 2.0 ** (1022 - 1025)
        assert set_exponent(-1.5, 1024) == -3.0

    @pytest.mark.parametrize("e", [-1, 2048])
    def test_set_exponent_out_of_range(self, e):
        with pytest.raises(ExponentRangeError):
            set_exponent(1.0, e)

    @given(finite_doubles)
    def test_set_own_exponent_is_identity(self, x):
        assert to_bits(set_exponent(x, extract_exponent(x))) == to_bits(x)

    @given(finite_doubles, st.integers(0, 2047))
    def test_extract_after_set(self, x, e):
        assert extract_exponent(set_exponent(x, e)) == e

    @pytest.mark.parametrize("x, cls", [
        (math.inf, FloatClass.INFINITE),
        (-math.inf, FloatClass.INFINITE),
        (math.nan, FloatClass.NAN),
        (5e-324, FloatClass.SUBNORMAL),
        (1.0, FloatClass.NORMAL),
        (-0.0, FloatClass.ZERO),
    ])
    def test_classify(self, x, cls):
        assert classify(x) is cls

    @given(st.integers(0, 2**64 - 1))
    def test_double_bits_round_trip(self, bits):
        v = FloatView.from_bits(bits)
        assert v.bits == bits
        assert to_bits(v.value) == bits  # NaN payloads included

    @given(st.integers(0, 2**32 - 1))
    def test_single_bits_round_trip(self, bits):
        assert to_bits(from_bits(bits, SINGLE), SINGLE) == bits

    def test_decompose(self):
        v = decompose(-3.0)
        assert (v.sign, v.biased_exponent, v.mantissa) == (1, 1024, 1 << 51)
        assert struct.unpack("<Q", struct.pack("<d", -3.0))[0] == v.bits


class TestMulPow2:
    def test_examples(self):
        assert mul_pow2(3.0, 1) == 6.0
        assert mul_pow2(3.0, -1) == 1.5
        assert math.isnan(mul_pow2(math.nan, 3))
        assert mul_pow2(-0.0, 5) == 0.0 and math.copysign(1, mul_pow2(-0.0, 5)) < 0

    @given(finite_doubles.filter(lambda x: x != 0 and 1 < extract_exponent(x) < 2046))
    def test_double_and_halve_match_arithmetic(self, x):
        assert to_bits(mul_pow2(x, 1)) == to_bits(x * 2.0)
        assert to_bits(mul_pow2(x, -1)) == to_bits(x / 2.0)

    @given(finite_doubles, st.integers(-2100, 2100))
    def test_matches_exact_rounding(self, x, k):
        expected = round_rational(Fraction(x) * Fraction(2) ** k)
        assert to_bits(mul_pow2(x, k)) == to_bits(math.copysign(expected, x) if expected == 0 else expected)

    @given(finite_singles, st.integers(-300, 300))
    def test_single_matches_numpy(self, x, k):
        with np.errstate(over="ignore", under="ignore"):
            ref = float(np.float32(np.ldexp(np.float64(x), k)))
        assert to_bits(mul_pow2(x, k, SINGLE), SINGLE) == to_bits(ref, SINGLE)


class TestRounding:
    @given(finite_doubles, finite_doubles)
    def test_round_rational_is_correct_rounding(self, a, b):
        s = Fraction(a) + Fraction(b)
        r = round_rational(s)
        if math.isinf(a + b):
            assert math.isinf(r)
        else:
            assert r == a + b  # hardware addition is correctly rounded

    def test_round_rational_single(self):
        assert round_rational(Fraction(1, 10), SINGLE) == float(np.float32(0.1))
        assert round_rational(Fraction(1, 2**150), SINGLE) == 0.0  # ties to even zero
        assert round_rational(Fraction(3, 2**150), SINGLE) == 2.0**-148  # 1.5 units -> even

    def test_ulp(self):
        assert ulp(1.0) == 2.0**-52
        assert ulp(1.0, SINGLE) == 2.0**-23
        assert ulp(0.0) == 5e-324
        assert ulp(5e-324) == 5e-324
