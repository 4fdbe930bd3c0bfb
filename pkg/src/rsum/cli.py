"""``rsum`` command line: run summation/sign algorithms against the oracle.

Subcommands::

    rsum sum     --algo naive --series const-1e-3 --n 1000 --precision single
    rsum sign    --algo essa --file cases.f64
    rsum compare --algo naive --algo compensated --series harmonic --n 1000000
    rsum gen     --series harmonic --n 1000 --out harmonic.f64

Exit codes: 0 success (NaN-poisoned results included, flagged in the row),
1 algorithm failure, 2 usage error or unreadable input.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import statistics
import sys
import time
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from rsum import accumulators as acc
from rsum import generators, oracle, reports, signsum
from rsum.datasets import DatasetError, read_dataset, write_dataset
from rsum.fpbits import get_format

SUM_ALGOS = ("naive", "compensated", "bucket-recursive", "bucket-nonrec", "bucket-nonrec-corrected", "oracle")
SIGN_ALGOS = ("essa-sign", "hash-sign", "oracle-sign")
ALGO_ALIASES = {"essa": "essa-sign", "hash": "hash-sign"}
ORDERS = ("forward", "reverse", "shuffled")
DEFAULT_SEED = 0


class UsageError(Exception):
    pass


def default_seed() -> int:
    env = os.environ.get("RSUM_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"RSUM_SEED must be an integer, got {env!r}") from None


@dataclass(frozen=True)
class RunConfig:
    algorithm: str
    series: str | None = None
    n: int | None = None
    file: str | None = None
    precision: str = "double"
    order: str = "forward"
    seed: int = DEFAULT_SEED
    repeat: int = 1

    @property
    def source(self) -> tuple:
        return (self.series, self.n, self.file, self.precision)

    @property
    def source_label(self) -> str:
        return self.series if self.series else f"file:{Path(self.file).name}"


def load_source(cfg: RunConfig) -> np.ndarray:
    """Input terms in the run's precision, forward order."""
    fmt = get_format(cfg.precision)
    if cfg.file:
        data = read_dataset(cfg.file)
        if fmt.name == "single":
            with np.errstate(over="ignore"):
                data = data.astype(np.float32)
        return np.ascontiguousarray(data)
    if not cfg.series or cfg.n is None:
        raise UsageError("give --series NAME --n N, or --file PATH")
    try:
        return generators.make_series(cfg.series, cfg.n, fmt).terms()
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def apply_order(a: np.ndarray, order: str, seed: int) -> np.ndarray:
    if order == "forward":
        return a
    if order == "reverse":
        return np.ascontiguousarray(a[::-1])
    if order == "shuffled":
        return np.ascontiguousarray(np.random.default_rng(seed).permutation(a))
    raise UsageError(f"unknown order {order!r}")


def _run_algorithm(algo: str, a: np.ndarray, fmt):
    """-> (result, histogram or None, flags)"""
    if algo == "naive":
        r = acc.naive_sum(a, fmt)
    elif algo == "compensated":
        r = acc.compensated_sum(a, fmt)
    elif algo == "bucket-recursive":
        r = acc.bucket_sum_recursive(a, fmt)
    elif algo == "bucket-nonrec":
        r = acc.bucket_sum_nonrecursive(a, fmt, correct=False)
    elif algo == "bucket-nonrec-corrected":
        r = acc.bucket_sum_nonrecursive(a, fmt, correct=True)
    elif algo == "oracle":
        if not np.isfinite(a).all():
            return math.nan, None, ["saw_nan"] if np.isnan(a).any() else ["overflow"]
        return oracle.Superaccumulator(a).round(), None, []
    elif algo == "essa-sign":
        return float(signsum.essa_sign(a).sign), None, []
    elif algo == "hash-sign":
        return float(signsum.hash_sign(a, fmt).sign), None, []
    elif algo == "oracle-sign":
        return float(oracle.exact_sign(a)), None, []
    else:
        raise UsageError(f"unknown algorithm {algo!r}")
    flags = [name for name in ("overflow", "saw_nan") if getattr(r.flags, name)]
    hist = None
    if r.level_histogram is not None:
        hist = r.level_histogram[: r.max_recursion_level + 1].tolist()
    return r.sum, hist, flags


def run_on(cfg: RunConfig, base: np.ndarray) -> reports.ReportRow:
    fmt = get_format(cfg.precision)
    a = apply_order(base, cfg.order, cfg.seed)
    times = []
    for _ in range(max(1, cfg.repeat)):
        t0 = time.perf_counter_ns()
        result, hist, flags = _run_algorithm(cfg.algorithm, a, fmt)
        times.append(time.perf_counter_ns() - t0)
    finite = bool(np.isfinite(a).all())
    if cfg.algorithm.endswith("-sign"):
        if not finite:
            raise UsageError("sign algorithms need finite input")
        exact = float(oracle.exact_sign(a))
        rel = oracle.relative_error(result, [exact])
    elif finite:
        exact = oracle.Superaccumulator(a).round(fmt)
        rel = oracle.relative_error(result, a)
    else:
        exact, rel = math.nan, math.nan
    return reports.ReportRow(
        algorithm=cfg.algorithm,
        series=cfg.source_label,
        n=int(a.size),
        precision=get_format(cfg.precision).name,
        order=cfg.order,
        result=float(result),
        oracle_result=exact,
        relative_error=rel,
        wall_time_ns=int(statistics.median(times)),
        max_recursion_level=None if hist is None else len(hist) - 1,
        histogram=hist,
        flags=flags,
    )


def run(cfg: RunConfig) -> reports.ReportRow:
    return run_on(cfg, load_source(cfg))


def compare(configs: list[RunConfig]) -> tuple[list[reports.ReportRow], dict]:
    """Run every config on the same input; all configs must share one source."""
    if not configs:
        raise UsageError("nothing to compare")
    sources = {c.source for c in configs}
    if len(sources) > 1:
        raise UsageError(f"configs use different sources: {sorted(map(str, sources))}")
    base = load_source(configs[0])
    rows = [run_on(c, base) for c in configs]
    return rows, reports.summarize(rows)


# -- argument parsing ---------------------------------------------------------

def _algo(name: str) -> str:
    return ALGO_ALIASES.get(name, name)


def _add_source_args(p: argparse.ArgumentParser) -> None:
    src = p.add_argument_group("input")
    src.add_argument("--series", choices=generators.SERIES_NAMES)
    src.add_argument("--n", type=int, help="number of terms for --series")
    src.add_argument("--file", help="dataset file (text or RSUMF64 binary)")
    src.add_argument("--precision", choices=("single", "double"), default="double")


def _add_output_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--repeat", type=int, default=1, help="timing repeats; the median is reported")
    p.add_argument("--seed", type=int, default=None, help="shuffle seed (default: $RSUM_SEED or 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rsum", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sum", help="sum one input with one algorithm")
    p.add_argument("--algo", required=True, choices=SUM_ALGOS)
    p.add_argument("--order", choices=ORDERS, default="forward")
    _add_source_args(p)
    _add_output_args(p)

    p = sub.add_parser("sign", help="sign of the sum of one input")
    p.add_argument("--algo", required=True, type=_algo, choices=SIGN_ALGOS)
    p.add_argument("--order", choices=ORDERS, default="forward")
    _add_source_args(p)
    _add_output_args(p)

    p = sub.add_parser("compare", help="several algorithms/orders on identical input")
    p.add_argument("--algo", action="append", type=_algo, choices=SUM_ALGOS + SIGN_ALGOS,
                   help="repeatable")
    p.add_argument("--order", action="append", choices=ORDERS, help="repeatable")
    p.add_argument("--config", help="JSON list of run configs instead of --algo/--order")
    _add_source_args(p)
    _add_output_args(p)

    p = sub.add_parser("gen", help="write a series or ill-conditioned set to a dataset file")
    p.add_argument("--series", choices=generators.SERIES_NAMES)
    p.add_argument("--ill-conditioned", action="store_true")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ratio", type=float, default=1e12, help="target condition ratio")
    p.add_argument("--precision", choices=("single", "double"), default="double")
    p.add_argument("--order", choices=ORDERS, default="forward")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--hex", action="store_true", help="hex floats in text output")
    p.add_argument("--out", required=True)
    return parser


def _configs_from_args(args, seed: int) -> list[RunConfig]:
    base = RunConfig(
        algorithm="",
        series=args.series,
        n=args.n,
        file=args.file,
        precision=args.precision,
        seed=seed,
        repeat=args.repeat,
    )
    if args.command != "compare":
        return [replace(base, algorithm=args.algo, order=args.order)]
    if args.config:
        try:
            items = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as exc:
            raise DatasetError(f"cannot read config {args.config}: {exc}") from exc
        configs = []
        for item in items:
            item = dict(item)
            item.setdefault("seed", seed)
            item["algorithm"] = _algo(item["algorithm"])
            configs.append(RunConfig(**item))
        return configs
    if not args.algo:
        raise UsageError("compare needs --algo (repeatable) or --config")
    orders = args.order or ["forward"]
    return [replace(base, algorithm=a, order=o) for a in args.algo for o in orders]


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _gen(args, seed: int) -> None:
    if args.ill_conditioned:
        values = generators.make_ill_conditioned(generators.IllCondSpec(args.n, args.ratio, seed))
    elif args.series:
        values = generators.make_series(args.series, args.n, args.precision).terms()
        values = apply_order(values, args.order, seed)
    else:
        raise UsageError("gen needs --series or --ill-conditioned")
    write_dataset(args.out, values, hex_floats=args.hex)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        seed = args.seed if args.seed is not None else default_seed()
        if args.command == "gen":
            _gen(args, seed)
            return 0
        configs = _configs_from_args(args, seed)
        if args.command == "compare":
            rows, summary = compare(configs)
        else:
            rows, summary = [run(configs[0])], None
        _emit(reports.dump(rows, args.format, summary), args.out)
        return 0
    except (UsageError, ValueError, TypeError) as exc:
        # DatasetError, unknown series/format, malformed config entries
        print(f"rsum: error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        # recursion limit or ESSA iteration cap
        print(f"rsum: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
