"""Sign of a floating-point sum.

:func:`essa_sign` is exact.  Positive terms and the magnitudes of negative
terms go into two lists; the leading (largest) entries of the two lists are
repeatedly replaced by differences that are exact in floating point, until
one side provably dominates.

:func:`hash_sign` is the fast, inexact alternative: the sign of the
bucket-table sum.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

import numpy as np

from rsum.accumulators import bucket_sum_recursive
from rsum.fpbits import DOUBLE, FormatSpec, unbiased_exponent

__all__ = ["PartitionedInput", "SignResult", "essa_sign", "hash_sign", "partition"]


@dataclass
class PartitionedInput:
    """Positive terms and negated negative terms, both sorted descending."""

    a_list: list[float]
    b_list: list[float]


@dataclass(frozen=True)
class SignResult:
    sign: int
    exact: bool
    iterations: int


def partition(values) -> PartitionedInput:
    vals = np.asarray(values, dtype=np.float64).reshape(-1)
    if not np.isfinite(vals).all():
        raise ValueError("sign of sum needs finite terms")
    pos = np.sort(vals[vals > 0])[::-1]
    neg = np.sort(-vals[vals < 0])[::-1]
    return PartitionedInput(pos.tolist(), neg.tolist())


def _dominates(x: float, count: int, e: int) -> bool:
    """``x >= count * 2**(e+1)``; compared in scaled form so nothing overflows."""
    # x * 2**-(e+1) only loses bits below 2**-1022, far under any count >= 1
    try:
        return math.ldexp(x, -(e + 1)) >= count
    except OverflowError:  # beyond 2**1024, so certainly >= count
        return True


def essa_sign(values, *, max_iterations: int | None = None) -> SignResult:
    """Exact sign of ``sum(values)`` for finite doubles.

    Every step-3 difference is exact: equal-binade subtraction is exact, and
    ``a_1 - 2**(F1+1)`` is only formed when the dominance test failed, which
    keeps ``2**(F1+1)`` within ``log2(n)`` binades of ``a_1``.
    """
    part = partition(values)
    # ascending storage: the leading (largest) summand is at the end
    a = part.a_list[::-1]
    b = part.b_list[::-1]
    n = len(a) + len(b)
    if max_iterations is None:
        max_iterations = 4 * (n + 1) * 2200
    it = 0
    while True:
        k, l = len(a), len(b)
        if k == 0 and l == 0:
            return SignResult(0, True, it)
        if l == 0:
            return SignResult(1, True, it)
        if k == 0:
            return SignResult(-1, True, it)
        a1, b1 = a[-1], b[-1]
        e1 = unbiased_exponent(a1)
        f1 = unbiased_exponent(b1)
        # sum(b) < l * 2**(F1+1), sum(a) < k * 2**(E1+1)
        if _dominates(a1, l, f1):
            return SignResult(1, True, it)
        if _dominates(b1, k, e1):
            return SignResult(-1, True, it)
        it += 1
        if it > max_iterations:
            raise RuntimeError(f"ESSA did not terminate within {max_iterations} rounds")
        a.pop()
        b.pop()
        a_new: tuple[float, ...]
        b_new: tuple[float, ...]
        if e1 == f1:
            a_new, b_new = ((a1 - b1,), ()) if a1 >= b1 else ((), (b1 - a1,))
        elif e1 > f1:
            u = math.ldexp(1.0, f1 + 1)
            a_new, b_new = (a1 - u, u - b1), ()
        else:
            v = math.ldexp(1.0, e1 + 1)
            a_new, b_new = (), (b1 - v, v - a1)
        for x in a_new:
            if x != 0.0:
                bisect.insort(a, x)
        for x in b_new:
            if x != 0.0:
                bisect.insort(b, x)


def hash_sign(values, fmt: FormatSpec = DOUBLE) -> SignResult:
    s = bucket_sum_recursive(values, fmt).sum
    if math.isnan(s):
        raise ValueError("sum is NaN; sign undefined")
    return SignResult((s > 0) - (s < 0), False, 0)
