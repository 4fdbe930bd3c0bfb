"""Summation algorithms.

* :func:`naive_sum` - left-to-right accumulation.
* :func:`compensated_sum` - running sum plus a carried rounding-error term.
* :func:`bucket_sum_recursive` - one partial sum per binary exponent; an
  insertion whose result leaves its bucket is re-inserted at the new
  exponent until it settles.
* :func:`bucket_sum_nonrecursive` - one add per term into the bucket of the
  term's exponent, optionally followed by a single relocation of the
  updated bucket and a final correction sweep.

All routines accept any 1-D sequence, convert it once to the format's
dtype, and return a :class:`SumReport`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from rsum import _backend
from rsum.fpbits import DOUBLE, FormatSpec, get_format
from rsum.oracle import Superaccumulator, exact_value

__all__ = [
    "MAX_RECURSION_LEVEL",
    "RecursionLimitError",
    "BucketTable",
    "SumFlags",
    "SumReport",
    "ConditionMeasure",
    "naive_sum",
    "compensated_sum",
    "bucket_sum_recursive",
    "bucket_sum_nonrecursive",
    "fold_table",
    "merge_tables",
    "condition_measure",
]

MAX_RECURSION_LEVEL = 1000


class RecursionLimitError(RuntimeError):
    """A carry chain in the recursive bucket insert exceeded the level cap."""


def _as_array(values, fmt: FormatSpec) -> np.ndarray:
    a = np.asarray(values)
    if a.dtype != fmt.dtype:
        with np.errstate(over="ignore"):
            a = a.astype(fmt.dtype)
    return np.ascontiguousarray(a.reshape(-1))


@dataclass
class SumFlags:
    overflow: bool = False
    saw_nan: bool = False


@dataclass
class SumReport:
    sum: float
    algorithm: str
    n_terms: int
    error_estimate: float | None = None
    level_histogram: np.ndarray | None = None
    flags: SumFlags = field(default_factory=SumFlags)
    table: BucketTable | None = field(default=None, repr=False)

    @property
    def max_recursion_level(self) -> int | None:
        if self.level_histogram is None:
            return None
        nz = np.flatnonzero(self.level_histogram)
        return int(nz[-1]) if nz.size else 0


def _flags_for(a: np.ndarray, result: float) -> SumFlags:
    saw_nan = bool(np.isnan(a).any())
    overflow = bool(np.isinf(a).any()) or math.isinf(result)
    return SumFlags(overflow=overflow, saw_nan=saw_nan)


@dataclass
class BucketTable:
    """Per-exponent partial sums plus the recursion-level histogram.

    ``slots[e]`` holds the running sum of everything routed to biased
    exponent ``e``; slot 0 collects zeros and subnormals.
    """

    fmt: FormatSpec
    slots: np.ndarray
    level_histogram: np.ndarray
    overflow_flag: bool = False
    saw_nan: bool = False
    max_level: int = MAX_RECURSION_LEVEL

    @classmethod
    def empty(cls, fmt: FormatSpec | str = DOUBLE, max_level: int = MAX_RECURSION_LEVEL) -> BucketTable:
        fmt = get_format(fmt)
        return cls(
            fmt=fmt,
            slots=np.zeros(fmt.max_biased_exponent + 1, dtype=fmt.dtype),
            level_histogram=np.zeros(max_level + 1, dtype=np.int64),
            max_level=max_level,
        )

    def copy(self) -> BucketTable:
        return BucketTable(
            self.fmt,
            self.slots.copy(),
            self.level_histogram.copy(),
            self.overflow_flag,
            self.saw_nan,
            self.max_level,
        )

    def _note(self, a: np.ndarray) -> None:
        if np.isnan(a).any():
            self.saw_nan = True
        if np.isinf(a).any():
            self.overflow_flag = True

    def add_recursive(self, values, *, backend: str | None = None) -> int:
        """Insert terms with the recursive ADD.  Returns the deepest level reached."""
        a = _as_array(values, self.fmt)
        self._note(a)
        k = _backend.get_backend(backend)
        with np.errstate(over="ignore", invalid="ignore"):
            deepest = k.bucket_add_recursive(a, self.slots, self.level_histogram, self.max_level)
        if deepest < 0:
            raise RecursionLimitError(f"carry chain deeper than {self.max_level} levels")
        if math.isinf(self.slots[-1]):
            self.overflow_flag = True
        return deepest

    def add_nonrecursive(self, values, *, correct: bool = False, backend: str | None = None) -> None:
        a = _as_array(values, self.fmt)
        self._note(a)
        k = _backend.get_backend(backend)
        with np.errstate(over="ignore", invalid="ignore"):
            k.bucket_add_nonrecursive(a, self.slots, correct)

    def correction_sweep(self, *, backend: str | None = None) -> int:
        """Move every misplaced partial sum once, ascending.  Returns the number moved."""
        with np.errstate(over="ignore", invalid="ignore"):
            return _backend.get_backend(backend).correction_sweep(self.slots)

    def misplaced(self) -> list[int]:
        """Indices of nonzero normal slots whose value's exponent differs from the index."""
        bad = []
        nbits = self.fmt.mantissa_bits
        for idx in np.flatnonzero(self.slots):
            if idx == 0 or idx == self.fmt.max_biased_exponent:
                continue
            bits = int(self.slots[idx:idx + 1].view(self.fmt.uint_dtype)[0])
            if (bits >> nbits) & self.fmt.max_biased_exponent != idx:
                bad.append(int(idx))
        return bad

    def fold(self) -> float:
        return fold_table(self)

    def nonzero(self) -> dict[int, float]:
        return {int(i): float(self.slots[i]) for i in np.flatnonzero(self.slots)}


def fold_table(t: BucketTable, *, backend: str | None = None) -> float:
    """Sum the slots from the smallest exponent upward with compensated accumulation.

    Sets ``t.overflow_flag`` when the result is infinite.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        s = float(_backend.get_backend(backend).fold_slots(t.slots))
    if math.isinf(s):
        t.overflow_flag = True
    return s


def merge_tables(t1: BucketTable, t2: BucketTable, *, backend: str | None = None) -> BucketTable:
    """New table equal to ``t1`` with ``t2``'s slots re-inserted via the recursive ADD."""
    if t1.fmt != t2.fmt:
        raise ValueError(f"cannot merge {t1.fmt.name} table with {t2.fmt.name} table")
    out = t1.copy()
    out.max_level = max(t1.max_level, t2.max_level)
    if len(out.level_histogram) < out.max_level + 1:
        out.level_histogram = np.pad(out.level_histogram, (0, out.max_level + 1 - len(out.level_histogram)))
    nz = t2.slots[np.flatnonzero(t2.slots)]
    if nz.size:
        scratch = np.zeros_like(out.level_histogram)
        k = _backend.get_backend(backend)
        with np.errstate(over="ignore", invalid="ignore"):
            if k.bucket_add_recursive(nz, out.slots, scratch, out.max_level) < 0:
                raise RecursionLimitError(f"carry chain deeper than {out.max_level} levels")
    out.level_histogram[: len(t2.level_histogram)] += t2.level_histogram
    out.overflow_flag = t1.overflow_flag or t2.overflow_flag or bool(math.isinf(out.slots[-1]))
    out.saw_nan = t1.saw_nan or t2.saw_nan
    return out


def naive_sum(a, fmt: FormatSpec | str = DOUBLE, *, backend: str | None = None) -> SumReport:
    fmt = get_format(fmt)
    arr = _as_array(a, fmt)
    with np.errstate(over="ignore", invalid="ignore"):
        s = float(_backend.get_backend(backend).naive_sum(arr))
    return SumReport(s, "naive", arr.size, flags=_flags_for(arr, s))


def compensated_sum(a, fmt: FormatSpec | str = DOUBLE, *, backend: str | None = None) -> SumReport:
    """Running sum with the rounding error of each step fed into the next term."""
    fmt = get_format(fmt)
    arr = _as_array(a, fmt)
    with np.errstate(over="ignore", invalid="ignore"):
        s, err = _backend.get_backend(backend).compensated_sum(arr)
    s = float(s)
    return SumReport(s, "compensated", arr.size, error_estimate=float(err), flags=_flags_for(arr, s))


def bucket_sum_recursive(a, fmt: FormatSpec | str = DOUBLE, *, max_level: int = MAX_RECURSION_LEVEL,
                         backend: str | None = None) -> SumReport:
    fmt = get_format(fmt)
    arr = _as_array(a, fmt)
    table = BucketTable.empty(fmt, max_level)
    table.add_recursive(arr, backend=backend)
    s = fold_table(table, backend=backend)
    return SumReport(
        s,
        "bucket-recursive",
        arr.size,
        level_histogram=table.level_histogram.copy(),
        flags=SumFlags(overflow=table.overflow_flag or math.isinf(s), saw_nan=table.saw_nan),
        table=table,
    )


def bucket_sum_nonrecursive(a, fmt: FormatSpec | str = DOUBLE, correct: bool = True, *,
                            backend: str | None = None) -> SumReport:
    fmt = get_format(fmt)
    arr = _as_array(a, fmt)
    table = BucketTable.empty(fmt)
    table.add_nonrecursive(arr, correct=correct, backend=backend)
    if correct:
        table.correction_sweep(backend=backend)
    s = fold_table(table, backend=backend)
    return SumReport(
        s,
        "bucket-nonrec-corrected" if correct else "bucket-nonrec",
        arr.size,
        flags=SumFlags(overflow=table.overflow_flag or math.isinf(s), saw_nan=table.saw_nan),
        table=table,
    )


@dataclass(frozen=True)
class ConditionMeasure:
    sum_abs: float
    abs_sum: float
    ratio: float


def condition_measure(a) -> ConditionMeasure:
    """``sum(|a_i|) / |sum(a_i)|`` with both sums taken exactly."""
    arr = _as_array(a, DOUBLE)
    total_abs = Superaccumulator(np.abs(arr))
    total = exact_value(arr)
    sum_abs = total_abs.round()
    abs_sum = float(abs(total)) if total else 0.0
    if total == 0:
        ratio = math.inf
    else:
        ratio = float(total_abs.to_fraction() / abs(total))
    return ConditionMeasure(sum_abs, abs_sum, ratio)

