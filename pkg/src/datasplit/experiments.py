"""Fixture instances, the random instance generator and the benchmark harness."""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded, RowOutOfRange
from .exact import SolveLimits, optimal_cover
from .family import Instance
from .greedy import greedy_cover, heuristic_cover

MEDICAL_ATTRIBUTES = (
    "ZIP code",
    "birth date",
    "gender",
    "ethnicity",
    "weight",
    "diagnosis",
    "procedure",
    "medication",
    "charges",
    "hospital ID",
)

_MEDICAL_ROWS = {
    1: (6, ["023", "012", "014", "123"], ["125", "135", "025", "4"]),
    2: (6, ["023", "012", "014"], ["125", "135", "025", "4"]),
    3: (10, ["045", "123", "89"], ["124", "458", "09", "238"]),
    4: (10, ["13", "168", "34", "79", "036"], ["023", "012", "36", "46", "78", "07", "9"]),
    5: (10, ["02", "168", "34", "79", "03"], ["01", "128", "35", "46", "78", "04", "23", "9"]),
}

# known optimal sizes of the five medical rows
MEDICAL_OPTIMAL = {1: 3, 2: 2, 3: 2, 4: 3, 5: 2}


def _compact(sets: Sequence[str]) -> list[list[int]]:
    return [[int(c) for c in s] for s in sets]


def medical_instance(row: int) -> Instance:
    """One of the five medical-record splitting problems, numbered 1 to 5.

    Sets are written compactly ("023" is {0, 2, 3}).  Rows 1 and 2 only use the
    first six attributes; rows 3 to 5 use all ten.
    """
    if row not in _MEDICAL_ROWS:
        raise RowOutOfRange(f"medical row must be 1..5, got {row}")
    n, forbidden, required = _MEDICAL_ROWS[row]
    return Instance.from_sets(n, _compact(forbidden), _compact(required), MEDICAL_ATTRIBUTES[:n])


def example2_instance() -> Instance:
    """The four-attribute toy problem F = {{1,2,3}}, A = {{1,4},{2,4},{3}}.

    Attributes 1..4 are stored as indices 0..3 and keep their labels as names.
    """
    return Instance.from_sets(4, [[0, 1, 2]], [[0, 3], [1, 3], [2]], ["1", "2", "3", "4"])


# -- random instances ------------------------------------------------------------


@dataclass(frozen=True)
class GenParams:
    n: int
    rho: float
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")
        if self.n < 2:
            raise ValueError(f"n must be at least 2, got {self.n}")


def trial_rng(seed: int, trial: int | None = None) -> np.random.Generator:
    """Independent stream for a (master seed, trial index) pair."""
    entropy = [seed & (2**64 - 1)] if trial is None else [seed & (2**64 - 1), trial]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def gen_random_instance(params: GenParams, trial: int | None = None) -> Instance:
    """Random graph instance: each edge of K_n is kept with probability rho and
    sent to F or A by a fair coin; uncovered vertices become singletons of A;
    both families are then shuffled.
    """
    rng = trial_rng(params.seed, trial)
    n = params.n
    edges = [(1 << i) | (1 << j) for i, j in combinations(range(n), 2)]
    kept = rng.random(len(edges)) < params.rho
    to_forbidden = rng.random(len(edges)) < 0.5
    forbidden = [e for e, k, f in zip(edges, kept, to_forbidden) if k and f]
    required = [e for e, k, f in zip(edges, kept, to_forbidden) if k and not f]
    covered = 0
    for e in required:
        covered |= e
    required += [1 << i for i in range(n) if not covered >> i & 1]
    forbidden = [forbidden[i] for i in rng.permutation(len(forbidden))]
    required = [required[i] for i in rng.permutation(len(required))]
    return Instance(n, tuple(forbidden), tuple(required))


# -- benchmark -------------------------------------------------------------------


@dataclass(frozen=True)
class BenchRow:
    n: int
    rho: float
    trials: int
    mean_time_greedy: float
    mean_time_heuristic: float
    mean_pct_reduction: float
    mean_pct_over_optimal: float | None
    exact_skipped: int
    mean_size_greedy: float = 0.0
    mean_size_heuristic: float = 0.0
    mean_size_optimal: float | None = None

    CSV_HEADER = (
        "n",
        "rho",
        "trials",
        "mean_t_greedy_s",
        "mean_t_heur_s",
        "mean_pct_reduction",
        "mean_pct_over_opt",
        "exact_skipped",
    )

    def csv_fields(self, timings: bool = True) -> list[str]:
        def f(x):
            return "" if x is None else repr(float(x))

        return [
            str(self.n),
            repr(float(self.rho)),
            str(self.trials),
            f(self.mean_time_greedy) if timings else "",
            f(self.mean_time_heuristic) if timings else "",
            f(self.mean_pct_reduction),
            f(self.mean_pct_over_optimal),
            str(self.exact_skipped),
        ]


def rows_to_csv(rows: Sequence[BenchRow], timings: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BenchRow.CSV_HEADER)
    for r in rows:
        w.writerow(r.csv_fields(timings))
    return buf.getvalue()


def _cpu(fn, *args):
    start = time.process_time()
    out = fn(*args)
    return out, time.process_time() - start


def run_trial(params: GenParams, trial: int, methods: Sequence[str], limits: SolveLimits) -> dict:
    """Sizes and CPU times for one generated instance."""
    inst = gen_random_instance(params, trial)
    rec: dict = {"trial": trial}
    if "greedy" in methods:
        (cov, _), rec["t_greedy"] = _cpu(greedy_cover, inst)
        rec["greedy"] = len(cov)
    if "heuristic" in methods:
        (cov, _), rec["t_heur"] = _cpu(heuristic_cover, inst)
        rec["heuristic"] = len(cov)
    if "exact" in methods:
        try:
            rec["exact"] = optimal_cover(inst, limits).optimal_size
        except BudgetExceeded:
            rec["exact"] = None
    return rec


def _run_chunk(args):
    params, trials, methods, limits = args
    return [run_trial(params, t, methods, limits) for t in trials]


def _mean(values):
    values = list(values)
    return math.fsum(values) / len(values) if values else None


def bench(
    params: GenParams,
    trials: int,
    methods: Sequence[str] = ("greedy", "heuristic", "exact"),
    limits: SolveLimits = SolveLimits(max_nodes=200_000),
    jobs: int = 1,
) -> BenchRow:
    """Average sizes, CPU times and percentage gaps over ``trials`` random instances.

    Trial ``t`` always sees the same instance for a given master seed, whatever
    ``jobs`` is, so size statistics are reproducible.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    if jobs > 1:
        chunks = [range(i, trials, jobs) for i in range(jobs)]
        with ProcessPoolExecutor(jobs) as pool:
            parts = pool.map(_run_chunk, [(params, c, tuple(methods), limits) for c in chunks])
            recs = [r for part in parts for r in part]
    else:
        recs = _run_chunk((params, range(trials), tuple(methods), limits))
    recs.sort(key=lambda r: r["trial"])

    reduction = [
        100.0 * (r["greedy"] - r["heuristic"]) / r["greedy"]
        for r in recs
        if "greedy" in r and "heuristic" in r
    ]
    solved = [r for r in recs if r.get("exact") is not None and "heuristic" in r]
    over = [100.0 * (r["heuristic"] - r["exact"]) / r["exact"] for r in solved]
    skipped = sum(1 for r in recs if "exact" in r and r["exact"] is None)
    return BenchRow(
        n=params.n,
        rho=params.rho,
        trials=trials,
        mean_time_greedy=_mean(r["t_greedy"] for r in recs if "t_greedy" in r) or 0.0,
        mean_time_heuristic=_mean(r["t_heur"] for r in recs if "t_heur" in r) or 0.0,
        mean_pct_reduction=_mean(reduction) if reduction else 0.0,
        mean_pct_over_optimal=_mean(over),
        exact_skipped=skipped,
        mean_size_greedy=_mean(r["greedy"] for r in recs if "greedy" in r) or 0.0,
        mean_size_heuristic=_mean(r["heuristic"] for r in recs if "heuristic" in r) or 0.0,
        mean_size_optimal=_mean(r["exact"] for r in solved),
    )
