"""Compiled kernels (Cython).  Import through :mod:`rsum._backend`."""
