"""Reproducible floating-point summation.

Bucket-table accumulators indexed by exponent, compensated and naive
baselines, an exact superaccumulator oracle, and exact sign-of-sum.
"""

from rsum._backend import BACKEND, available_backends
from rsum.accumulators import (
    BucketTable,
    RecursionLimitError,
    SumReport,
    bucket_sum_nonrecursive,
    bucket_sum_recursive,
    compensated_sum,
    condition_measure,
    merge_tables,
    naive_sum,
)
from rsum.fpbits import DOUBLE, SINGLE, FormatSpec, get_format
from rsum.oracle import Superaccumulator, exact_sign, exact_sum, relative_error
from rsum.signsum import essa_sign, hash_sign

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DOUBLE",
    "SINGLE",
    "BucketTable",
    "FormatSpec",
    "RecursionLimitError",
    "SumReport",
    "Superaccumulator",
    "available_backends",
    "bucket_sum_nonrecursive",
    "bucket_sum_recursive",
    "compensated_sum",
    "condition_measure",
    "essa_sign",
    "exact_sign",
    "exact_sum",
    "get_format",
    "hash_sign",
    "merge_tables",
    "naive_sum",
    "relative_error",
]
