"""Kernel backend selection.

The compiled extension is used when importable; ``RSUM_PURE_PYTHON=1``
forces the pure-Python twin.  Both expose the same functions and produce
bit-identical results.
"""

import os
from types import ModuleType

from rsum import _kernels_py

try:
    from rsum._ext import kernels as _kernels_ext
except ImportError:  # not built
    _kernels_ext = None

KERNEL_NAMES = (
    "naive_sum",
    "compensated_sum",
    "bucket_add_recursive",
    "bucket_add_nonrecursive",
    "correction_sweep",
    "fold_slots",
    "superacc_add",
    "superacc_normalize",
)


def available_backends() -> list[str]:
    names = ["python"]
    if _kernels_ext is not None:
        names.insert(0, "cython")
    return names


def get_backend(name: str | None = None) -> ModuleType:
    """Kernel module by name (``"cython"`` or ``"python"``); ``None`` means the active one."""
    if name is None:
        return kernels
    if name == "python":
        return _kernels_py
    if name == "cython":
        if _kernels_ext is None:
            raise ImportError("compiled kernels are not built; reinstall with Cython available")
        return _kernels_ext
    raise ValueError(f"unknown backend {name!r}")


if _kernels_ext is not None and os.environ.get("RSUM_PURE_PYTHON", "") in ("", "0"):
    kernels = _kernels_ext
    BACKEND = "cython"
else:
    kernels = _kernels_py
    BACKEND = "python"
