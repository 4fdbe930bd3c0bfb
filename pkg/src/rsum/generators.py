"""Test series with known sums, Rump's polynomial, and ill-conditioned sets.

Series terms are computed exactly (rationals) or in extended precision and
rounded once to the target format, so a series' summation error is not
mixed up with term-generation error.  Expected values come back as
``mpmath.mpf`` at :data:`EXPECTED_DPS` digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import mpmath
import numpy as np

from rsum.fpbits import DOUBLE, FormatSpec, get_format, round_rational

__all__ = [
    "EXPECTED_DPS",
    "SERIES_NAMES",
    "SeriesSpec",
    "IllCondSpec",
    "make_series",
    "rump_eval",
    "rump_exact",
    "make_ill_conditioned",
]

EXPECTED_DPS = 50


@dataclass(frozen=True)
class SeriesSpec:
    """A named series: ``n`` terms in ``precision`` plus its exact value."""

    name: str
    n: int
    precision: FormatSpec
    reverse: bool = False
    printed_value: str | None = None  # historically printed naive single-precision result
    _terms: Callable[[int, FormatSpec], np.ndarray] = field(repr=False, default=None)
    _expected: Callable[[int], mpmath.mpf] = field(repr=False, default=None)

    def terms(self) -> np.ndarray:
        t = self._terms(self.n, self.precision)
        return np.ascontiguousarray(t[::-1]) if self.reverse else t

    def term(self, i: int) -> float:
        """The ``i``-th term of the forward series (1-based)."""
        if not 1 <= i <= self.n:
            raise IndexError(i)
        return float(self._terms(i, self.precision)[i - 1])

    def expected(self) -> mpmath.mpf:
        with mpmath.workdps(EXPECTED_DPS):
            return +self._expected(self.n)


def _idx(n: int) -> np.ndarray:
    return np.arange(1, n + 1, dtype=np.int64)


def _cast(values: np.ndarray, fmt: FormatSpec) -> np.ndarray:
    # float64 -> float32 after a single correctly rounded +,-,*,/ is still
    # correctly rounded: 53 >= 2*24 + 2.
    return np.ascontiguousarray(values.astype(fmt.dtype))


def _const(q: Fraction):
    def terms(n, fmt):
        return np.full(n, round_rational(q, fmt), dtype=fmt.dtype)
    return terms


def _harmonic(n, fmt):
    return _cast(1.0 / _idx(n).astype(np.float64), fmt)


def _arithmetic(n, fmt):
    return _cast(_idx(n).astype(np.float64), fmt)


def _exact_ints(ints, fmt):
    return np.array([round_rational(k, fmt) for k in ints], dtype=fmt.dtype)


def _cubes(n, fmt):
    if n <= 2_097_151:  # i**3 fits int64; int -> float conversion rounds once
        return np.ascontiguousarray((_idx(n) ** 3).astype(fmt.dtype))
    return _exact_ints((i**3 for i in range(1, n + 1)), fmt)


def _exp_series(n, fmt):
    out = np.zeros(n, dtype=fmt.dtype)
    fact = 1
    for i in range(1, n + 1):
        if i > 1:
            fact *= i - 1
        v = round_rational(Fraction(1, fact), fmt)
        if v == 0.0:
            break
        out[i - 1] = v
    return out


def _log_telescoping(n, fmt):
    i = _idx(n).astype(np.longdouble)
    return np.ascontiguousarray(np.log1p(1.0 / (i + 1)).astype(fmt.dtype))


def _telescoping_reciprocal(n, fmt):
    if n >= 2**26:
        raise ValueError("telescoping-reciprocal needs n < 2**26 for exact denominators")
    i = _idx(n).astype(np.float64)
    return _cast(1.0 / (i * (i + 1)), fmt)


def _riemann_quadratic(n, fmt):
    i = _idx(n).astype(np.longdouble)
    nn = np.longdouble(n)
    return np.ascontiguousarray((3 * (nn + i) ** 2 / (nn * nn * nn)).astype(fmt.dtype))


def _odd_reciprocal(n, fmt):
    if n >= 2**25:
        raise ValueError("odd-reciprocal needs n < 2**25 for exact denominators")
    i = _idx(n).astype(np.float64)
    return _cast(1.0 / ((2 * i - 1) * (2 * i + 1)), fmt)


def _rosenbrock_point(n: int, seed: int | None) -> np.ndarray:
    if seed is None:
        return np.ones(2 * n)
    return np.random.default_rng(seed).uniform(-2.0, 2.0, 2 * n)


def _rosenbrock(seed):
    def terms(n, fmt):
        x = _rosenbrock_point(n, seed).astype(np.longdouble)
        odd, even = x[0::2], x[1::2]
        return np.ascontiguousarray((100 * (even - odd * odd) ** 2 + (1 - odd) ** 2).astype(fmt.dtype))

    def expected(n):
        x = [Fraction(v) for v in _rosenbrock_point(n, seed).tolist()]
        total = sum(100 * (x[2 * j + 1] - x[2 * j] ** 2) ** 2 + (1 - x[2 * j]) ** 2 for j in range(n))
        return mpmath.mpf(total.numerator) / total.denominator

    return terms, expected


def _frac(q: Fraction) -> mpmath.mpf:
    return mpmath.mpf(q.numerator) / q.denominator


_SERIES = {
    "const-1e-3": (_const(Fraction(1, 1000)), lambda n: _frac(Fraction(n, 1000))),
    "const-1e-4": (_const(Fraction(1, 10000)), lambda n: _frac(Fraction(n, 10000))),
    "harmonic": (_harmonic, lambda n: mpmath.harmonic(n)),
    "harmonic-reverse": (_harmonic, lambda n: mpmath.harmonic(n)),
    "arithmetic": (_arithmetic, lambda n: mpmath.mpf(n * (n + 1) // 2)),
    "cubes": (_cubes, lambda n: mpmath.mpf(n * n * (n + 1) * (n + 1) // 4)),
    "exp-series": (_exp_series, lambda n: mpmath.e),
    "log-telescoping": (_log_telescoping, lambda n: mpmath.log(n + 2) - mpmath.log(2)),
    "telescoping-reciprocal": (_telescoping_reciprocal, lambda n: 1 - _frac(Fraction(1, n + 1))),
    "riemann-quadratic": (
        _riemann_quadratic,
        lambda n: _frac(7 + Fraction(9, 2 * n) + Fraction(1, 2 * n * n)),
    ),
    "rosenbrock": None,
    "odd-reciprocal": (_odd_reciprocal, lambda n: _frac(Fraction(n, 2 * n + 1))),
}

SERIES_NAMES = tuple(_SERIES)

# Naive single-precision results as they were historically printed.
_PRINTED = {
    ("const-1e-3", 1000): "0.999990701675415",
    ("const-1e-4", 10000): "1.000053524971008",
    ("harmonic", 1_000_000): "14.357357",
    ("harmonic-reverse", 1_000_000): "14.392651",
}


def make_series(name: str, n: int, precision: FormatSpec | str = DOUBLE, *,
                reverse: bool = False, seed: int | None = None) -> SeriesSpec:
    """Build a named series.

    ``harmonic-reverse`` is the harmonic series summed from the smallest
    term; ``reverse=True`` reverses any series.  ``seed`` only affects
    ``rosenbrock``: ``None`` evaluates at the all-ones minimum, otherwise at
    a seeded uniform point in ``[-2, 2)``.
    """
    if name not in _SERIES:
        raise ValueError(f"unknown series {name!r}; choose from {', '.join(SERIES_NAMES)}")
    if n < 1:
        raise ValueError("n must be >= 1")
    fmt = get_format(precision)
    if name == "rosenbrock":
        terms, expected = _rosenbrock(seed)
    else:
        terms, expected = _SERIES[name]
    rev = reverse ^ (name == "harmonic-reverse")
    printed = _PRINTED.get((name, n)) if fmt.name == "single" and not reverse else None
    return SeriesSpec(name, n, fmt, rev, printed, terms, expected)


# -- Rump's polynomial ------------------------------------------------------

def rump_exact(x, y) -> Fraction:
    x, y = Fraction(x), Fraction(y)
    if y == 0:
        raise ValueError("rump polynomial undefined for y = 0")
    return (Fraction(1335, 4) * y**6 + x**2 * (11 * x**2 * y**2 - y**6 - 121 * y**4 - 2)
            + Fraction(11, 2) * y**8 + x / (2 * y))


def rump_eval(x: float, y: float, precision: FormatSpec | str | None = DOUBLE) -> float:
    """Rump's polynomial at ``(x, y)``.

    ``precision=None`` (or ``"exact"``) evaluates in rationals and rounds the
    result to double.  Otherwise every operation is rounded to the format,
    with ``x**2`` distributed over the bracket, each power a single rounded
    ``pow``, and the monomials added left to right::

        333.75*y**6 + 11*x**4*y**2 - x**2*y**6 - 121*x**2*y**4 - 2*x**2 + 5.5*y**8 + x/(2*y)
    """
    if precision is None or precision == "exact":
        return round_rational(rump_exact(x, y), DOUBLE)
    if y == 0:
        raise ValueError("rump polynomial undefined for y = 0")
    fmt = get_format(precision)
    T = fmt.dtype.type
    X, Y = T(x), T(y)
    with np.errstate(over="ignore", invalid="ignore"):
        x2, x4 = X ** 2, X ** 4
        y2, y4, y6, y8 = Y ** 2, Y ** 4, Y ** 6, Y ** 8
        r = T(333.75) * y6
        r = r + T(11) * x4 * y2
        r = r - x2 * y6
        r = r - T(121) * x2 * y4
        r = r - T(2) * x2
        r = r + T(5.5) * y8
        r = r + X / (T(2) * Y)
    return float(r)


# -- ill-conditioned sets ---------------------------------------------------

@dataclass(frozen=True)
class IllCondSpec:
    n: int
    target_ratio: float
    seed: int = 0
    exponent_spread: int = 40


def _random_magnitudes(rng, count, spread):
    return np.ldexp(rng.uniform(1.0, 2.0, count), rng.integers(-spread, spread + 1, count))


def _cancelling_group(rng, spread, size):
    x = float(_random_magnitudes(rng, 1, spread)[0])
    if size == 2:
        return [x, -x]
    y = x * rng.uniform(0.5, 1.0)  # y in [x/2, x]: x - y is exact
    return [x, -y, -(x - y)]


def make_ill_conditioned(spec: IllCondSpec) -> np.ndarray:
    """Deterministic set whose ``sum|a| / |sum a|`` is within 10x of the target.

    Built from exactly cancelling groups (``x, -x`` or ``x, -y, -(x-y)``)
    plus one or two residual terms carrying the whole sum.
    """
    n, t = spec.n, spec.target_ratio
    rng = np.random.default_rng(spec.seed)
    if n < 1 or not t >= 1:
        raise ValueError("need n >= 1 and target_ratio >= 1")
    if t == 1:
        return _random_magnitudes(rng, n, spec.exponent_spread)
    if math.isinf(t):
        if n % 2 or n < 2:
            raise ValueError(f"an exactly cancelling set needs an even n >= 2, got {n}")
        out = []
        while len(out) < n:
            out += _cancelling_group(rng, spec.exponent_spread, 3 if n - len(out) in (3, 5) else 2)
        return _finish(rng, out)
    if n == 1:
        raise ValueError("a single term always has ratio 1")
    if n == 2:
        a = float(_random_magnitudes(rng, 1, spec.exponent_spread)[0])
        b = a * ((t - 1) / (t + 1))
        if b == a:
            raise ValueError(f"ratio {t:g} not reachable with two doubles")
        return _finish(rng, [a, -b])

    n_res = 2 if n >= 4 else 1
    groups: list[float] = []
    while len(groups) < n - n_res:
        left = n - n_res - len(groups)
        size = 2 if left in (2, 4) else 3 if left == 3 else int(rng.choice([2, 3]))
        groups += _cancelling_group(rng, spec.exponent_spread, size)
    pair_abs = math.fsum(abs(v) for v in groups)
    total = pair_abs / (t - 1)
    if n_res == 1:
        residual = [total]
    else:
        u = rng.uniform(0.0, 0.5)
        residual = [total * (1 + u), -(total * u)]
    if total == 0.0 or not math.isfinite(total):
        raise ValueError(f"ratio {t:g} not reachable at this exponent spread")
    return _finish(rng, groups + residual)


def _finish(rng, values) -> np.ndarray:
    out = np.array(values, dtype=np.float64)
    if rng.random() < 0.5:
        out = -out
    rng.shuffle(out)
    return out
