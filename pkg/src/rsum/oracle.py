"""Exact summation reference.

:class:`Superaccumulator` holds the sum of any number of finite doubles
exactly, as a fixed-point integer in units of 2**-1074 split over signed
32-bit limbs.  Carries are resolved lazily by the kernels.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from rsum import _backend
from rsum.fpbits import DOUBLE, FormatSpec, round_rational

__all__ = [
    "Superaccumulator",
    "ExactSum",
    "NonFiniteInputError",
    "exact_sum",
    "exact_sign",
    "exact_value",
    "relative_error",
]

NLIMBS = 68
LIMB_BITS = 32
SCALE_BITS = 1074  # one unit of the accumulator is 2**-1074


class NonFiniteInputError(ValueError):
    pass


class ExactSum(NamedTuple):
    rounded: float
    exact_is_zero: bool


def _as_f64(values) -> np.ndarray:
    a = np.asarray(values)
    if a.dtype != np.float64:
        a = a.astype(np.float64)  # float32 widens exactly
    a = np.ascontiguousarray(a.reshape(-1))
    if not np.isfinite(a).all():
        bad = a[~np.isfinite(a)][0]
        raise NonFiniteInputError(f"exact summation needs finite terms, got {bad!r}")
    return a


class Superaccumulator:
    """Exact running sum of finite doubles."""

    def __init__(self, values=None, *, backend: str | None = None):
        self._k = _backend.get_backend(backend)
        self.limbs = np.zeros(NLIMBS, dtype=np.int64)
        self.count = 0
        if values is not None:
            self.extend(values)

    def add(self, x: float) -> None:
        self.extend([x])

    def extend(self, values) -> None:
        a = _as_f64(values)
        if a.size:
            self._k.superacc_add(a, self.limbs)
            self.count += a.size

    def merge(self, other: Superaccumulator) -> None:
        """Exact in-place merge (limb-wise add, then carry)."""
        self.limbs += other.limbs
        self._k.superacc_normalize(self.limbs)
        self.count += other.count

    def copy(self) -> Superaccumulator:
        new = Superaccumulator.__new__(Superaccumulator)
        new._k = self._k
        new.limbs = self.limbs.copy()
        new.count = self.count
        return new

    def scaled_int(self) -> int:
        """The exact sum times 2**1074."""
        v = 0
        for limb in reversed(self.limbs.tolist()):
            v = (v << LIMB_BITS) + limb
        return v

    def to_fraction(self) -> Fraction:
        return Fraction(self.scaled_int(), 1 << SCALE_BITS)

    def sign(self) -> int:
        v = self.scaled_int()
        return (v > 0) - (v < 0)

    def is_zero(self) -> bool:
        return not self.limbs.any()

    def round(self, fmt: FormatSpec = DOUBLE) -> float:
        """Round-to-nearest-even of the exact sum in ``fmt``."""
        v = self.scaled_int()
        if fmt.total_bits == 64:
            try:
                return v / (1 << SCALE_BITS)  # int true division rounds correctly
            except OverflowError:
                return math.inf if v > 0 else -math.inf
        return round_rational(Fraction(v, 1 << SCALE_BITS), fmt)

    def state(self) -> tuple[int, ...]:
        return tuple(self.limbs.tolist())


def exact_sum(values) -> ExactSum:
    acc = Superaccumulator(values)
    return ExactSum(acc.round(), acc.is_zero())


def exact_value(values) -> Fraction:
    return Superaccumulator(values).to_fraction()


def exact_sign(values) -> int:
    return Superaccumulator(values).sign()


def relative_error(approx: float, values) -> float:
    """``|approx - S| / |S|`` for the exact sum ``S``, rounded to double."""
    exact = exact_value(values)
    if math.isnan(approx):
        return math.nan
    if math.isinf(approx):
        return math.inf
    diff = abs(Fraction(approx) - exact)
    if exact == 0:
        return 0.0 if diff == 0 else math.inf
    return round_rational(diff / abs(exact), DOUBLE)
