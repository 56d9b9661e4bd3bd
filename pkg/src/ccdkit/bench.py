"""Benchmark harness: run solvers over labeled sets, count mistakes, time queries.

A method's verdict on a query is a single collision boolean.  Compared
against ground truth this yields, per method, false positive and false
negative counts plus a per-query runtime histogram.  Conservative
methods (the inclusion solver and the interval baseline) may produce
false positives by design but must never produce a false negative on a
decided query; the CLI turns such an FN into a nonzero exit status.

Timing uses a monotonic nanosecond clock around each query call.  A
short warm-up pass (excluded from every statistic) runs first so JIT
compilation and allocator effects do not land in the first bins.
Filter resolution for the inclusion solver is precomputed outside the
timed region; the timed call only looks the filters up, mirroring a
simulator that derives scene-wide bounds once per step.  The interval
baseline has no minimum-separation mode and always runs at d = 0.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .baselines import UnivariateVerdict, irf_solve, univariate_solve
from .core import SolverConfig
from .inclusion import compute_filters, compute_gamma
from .solver import solve, warm_up

__all__ = [
    "METHOD_NAMES",
    "BenchReport",
    "MethodStats",
    "emit_report",
    "format_report",
    "load_report",
    "run_benchmark",
]

METHOD_NAMES = ("ours", "irf", "univariate")

# 24 log-spaced runtime bins from 0.1 us to 100 s; out-of-range times clamp
_HIST_EDGES_US = tuple(float(x) for x in np.logspace(-1.0, 5.0, 25))


@dataclass(frozen=True)
class MethodStats:
    """Aggregated outcome of one method over one dataset."""

    name: str
    avg_time_us: float
    fp_count: int
    fn_count: int
    correct_count: int
    undecided_count: int
    early_count: int
    histogram: tuple
    verdicts: tuple

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "avg_time_us": self.avg_time_us,
            "fp_count": self.fp_count,
            "fn_count": self.fn_count,
            "correct_count": self.correct_count,
            "undecided_count": self.undecided_count,
            "early_count": self.early_count,
            "histogram": list(self.histogram),
            "verdicts": [int(v) for v in self.verdicts],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MethodStats":
        return cls(
            name=d["name"],
            avg_time_us=d["avg_time_us"],
            fp_count=d["fp_count"],
            fn_count=d["fn_count"],
            correct_count=d["correct_count"],
            undecided_count=d["undecided_count"],
            early_count=d["early_count"],
            histogram=tuple(d["histogram"]),
            verdicts=tuple(bool(v) for v in d["verdicts"]),
        )


@dataclass(frozen=True)
class BenchReport:
    """Per-method stats plus the configuration echo that produced them."""

    methods: tuple
    size: int
    delta: float
    max_checks: int
    separation: float
    t_max: float
    seed: int | None
    degenerate_as: str
    histogram_edges_us: tuple = _HIST_EDGES_US

    def method(self, name: str) -> MethodStats:
        for m in self.methods:
            if m.name == name:
                return m
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "methods": [m.to_dict() for m in self.methods],
            "size": self.size,
            "delta": self.delta,
            "max_checks": self.max_checks,
            "separation": self.separation,
            "t_max": self.t_max,
            "seed": self.seed,
            "degenerate_as": self.degenerate_as,
            "histogram_edges_us": list(self.histogram_edges_us),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BenchReport":
        return cls(
            methods=tuple(MethodStats.from_dict(m) for m in d["methods"]),
            size=d["size"],
            delta=d["delta"],
            max_checks=d["max_checks"],
            separation=d["separation"],
            t_max=d["t_max"],
            seed=d["seed"],
            degenerate_as=d["degenerate_as"],
            histogram_edges_us=tuple(d["histogram_edges_us"]),
        )


def _normalize_methods(methods) -> tuple:
    chosen = []
    for m in methods:
        name = str(m).strip().lower()
        if name not in METHOD_NAMES:
            raise ValueError(f"unknown method {m!r}; expected one of {METHOD_NAMES}")
        if name not in chosen:
            chosen.append(name)
    if not chosen:
        raise ValueError("no methods selected")
    return tuple(sorted(chosen, key=METHOD_NAMES.index))


def _ours_runner(queries, cfg: SolverConfig):
    # resolve filters once per query outside the timed region
    configs = []
    for lq in queries:
        gamma = compute_gamma(lq.query.all_coordinates())
        eps = compute_filters(lq.query.kind, gamma, cfg.separation)
        configs.append(SolverConfig(
            delta=cfg.delta, max_checks=cfg.max_checks,
            separation=cfg.separation, t_max=cfg.t_max, filters=eps))

    def run(i):
        r = solve(queries[i].query, configs[i])
        return r.colliding, r.early_terminated

    return run


def _irf_runner(queries, cfg: SolverConfig):
    def run(i):
        r = irf_solve(queries[i].query, delta=cfg.delta,
                      max_checks=cfg.max_checks, t_max=cfg.t_max)
        return r.colliding, r.early_terminated

    return run


def _univariate_runner(queries, cfg: SolverConfig, degenerate_as: str):
    hit = degenerate_as == "collision"

    def run(i):
        r = univariate_solve(queries[i].query)
        if r.verdict is UnivariateVerdict.COLLISION:
            return True, False
        if r.verdict is UnivariateVerdict.DEGENERATE:
            return hit, False
        return False, False

    return run


def run_benchmark(dataset, methods, cfg: SolverConfig | None = None, *,
                  seed: int | None = None,
                  degenerate_as: str = "no_collision") -> BenchReport:
    """Run each selected method over every query and aggregate.

    ``methods`` is any iterable drawn from {"ours", "irf", "univariate"}.
    ``degenerate_as`` decides how a degenerate univariate verdict (the
    vanishing cubic) is scored: "no_collision" (default) exhibits that
    formulation's miss on coplanar motion, "collision" patches it
    conservatively.  ``seed`` is echoed into the report for provenance
    of generated datasets.  Undecided-truth queries count toward
    ``undecided_count`` only, never FP/FN.
    """
    cfg = cfg or SolverConfig()
    if degenerate_as not in ("collision", "no_collision"):
        raise ValueError("degenerate_as must be 'collision' or 'no_collision'")
    names = _normalize_methods(methods)
    queries = list(dataset)
    n = len(queries)

    stats = []
    for name in names:
        if name == "ours":
            runner = _ours_runner(queries, cfg)
            if n:
                warm_up()
        elif name == "irf":
            runner = _irf_runner(queries, cfg)
        else:
            runner = _univariate_runner(queries, cfg, degenerate_as)
        if n:
            runner(0)  # warm-up, excluded from stats

        times = np.empty(n)
        verdicts = []
        early = 0
        fp = fn = correct = undecided = 0
        for i, lq in enumerate(queries):
            t0 = time.perf_counter_ns()
            verdict, was_early = runner(i)
            times[i] = (time.perf_counter_ns() - t0) * 1e-3
            verdicts.append(verdict)
            early += was_early
            if lq.truth is None:
                undecided += 1
            elif verdict and not lq.truth:
                fp += 1
            elif lq.truth and not verdict:
                fn += 1
            else:
                correct += 1
        if n:
            clipped = np.clip(times, _HIST_EDGES_US[0], _HIST_EDGES_US[-1])
            hist, _ = np.histogram(clipped, bins=np.asarray(_HIST_EDGES_US))
            avg = float(times.mean())
        else:
            hist = np.zeros(len(_HIST_EDGES_US) - 1, dtype=int)
            avg = 0.0
        stats.append(MethodStats(
            name=name, avg_time_us=avg, fp_count=fp, fn_count=fn,
            correct_count=correct, undecided_count=undecided,
            early_count=int(early), histogram=tuple(int(h) for h in hist),
            verdicts=tuple(verdicts)))

    return BenchReport(
        methods=tuple(stats), size=n, delta=cfg.delta,
        max_checks=cfg.max_checks, separation=cfg.separation,
        t_max=cfg.t_max, seed=seed, degenerate_as=degenerate_as)


_CSV_FIELDS = ("name", "avg_time_us", "fp_count", "fn_count",
               "correct_count", "undecided_count", "early_count")


def format_report(report: BenchReport, format: str) -> str:
    """Render a report as pretty JSON or a flat per-method CSV."""
    if format == "json":
        return json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"
    if format == "csv":
        lines = [",".join(_CSV_FIELDS)]
        for m in report.methods:
            d = m.to_dict()
            lines.append(",".join(str(d[f]) for f in _CSV_FIELDS))
        return "\n".join(lines) + "\n"
    raise ValueError("format must be 'json' or 'csv'")


def emit_report(report: BenchReport, format: str, path) -> None:
    """Write a report in the given format."""
    Path(path).write_text(format_report(report, format), encoding="ascii")


def load_report(path) -> BenchReport:
    """Inverse of the JSON emit_report."""
    return BenchReport.from_dict(json.loads(Path(path).read_text(encoding="ascii")))
