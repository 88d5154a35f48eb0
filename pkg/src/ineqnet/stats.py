"""Statistical kernels: Gini, Mann-Whitney upper-tail test, bootstrap
confidence intervals, Pearson correlation, chi-square independence.

Every seeded operation is a pure function of (inputs, seed, stream key):
independent RNG substreams are derived from the seed plus a caller-supplied
key, so parallel scheduling cannot change results.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Optional, Sequence

import numpy as np
from scipy.stats import chi2 as _chi2_dist

from .errors import ConfigError, DegenerateMarginError, DegenerateSeriesError

#: Identifier of the Gini estimator variant, echoed in report metadata.
GINI_ESTIMATOR = "mean-absolute-difference, uncorrected, O(n log n) sorted-rank form"

#: Largest per-side sample size handled by the exact Mann-Whitney path.
EXACT_MAX_N = 10


# ---------------------------------------------------------------------------
# RNG substreams


def substream(seed: int, *keys) -> np.random.Generator:
    """Deterministic generator for (seed, key...) independent of call order.

    Keys are hashed so that adding unrelated streams (e.g. a new occupation)
    never perturbs existing ones.
    """
    material = "\x1f".join(str(k) for k in keys).encode("utf-8")
    digest = hashlib.sha256(material).digest()
    words = [int.from_bytes(digest[i : i + 4], "little") for i in range(0, 16, 4)]
    return np.random.default_rng(np.random.SeedSequence([int(seed) & 0xFFFFFFFF, *words]))


# ---------------------------------------------------------------------------
# Result types


@dataclass(frozen=True)
class TestResult:
    """Outcome of the Mann-Whitney upper-tail test.

    u_statistic counts wins of the first sample over the second, with
    half-wins for ties; reject is true iff p_value <= alpha.
    """

    u_statistic: float
    p_value: float
    method: str  # "exact" | "normal_approx"
    reject: bool
    alpha: float


@dataclass(frozen=True)
class Interval:
    lower: float
    upper: float
    level: float

    def __post_init__(self) -> None:
        if self.lower > self.upper:
            raise ValueError("interval lower bound exceeds upper bound")


@dataclass(frozen=True)
class ContingencyTable:
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.row_labels) < 2 or len(self.col_labels) < 2:
            raise ValueError("contingency table needs at least 2 rows and 2 columns")
        for row in self.counts:
            if len(row) != len(self.col_labels):
                raise ValueError("ragged contingency table")
            if any(c < 0 for c in row):
                raise ValueError("negative count in contingency table")
        if len(self.counts) != len(self.row_labels):
            raise ValueError("row count mismatch")


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    dof: int
    p_value: float
    reject: bool
    alpha: float
    low_expected_count: bool  # any expected cell < 5 (warning, not an error)


# ---------------------------------------------------------------------------
# Gini coefficient


def gini(incomes: Sequence[float], allow_negative: bool = False) -> float:
    """Gini coefficient in [0, 1 - 1/n] for nonnegative incomes.

    Equals sum_ij |x_i - x_j| / (2 n^2 mu), computed via the sorted-rank
    identity. All-zero input returns 0 by convention. Negative values are
    rejected unless allow_negative (in which case the result is unclamped).
    """
    x = np.asarray(incomes, dtype=np.float64)
    if x.size == 0:
        raise ValueError("gini requires a non-empty sample")
    if not allow_negative and np.any(x < 0):
        raise ValueError("negative income passed to gini without allow_negative")
    mu = float(x.mean())
    if mu == 0.0:
        return 0.0
    xs = np.sort(x)
    n = x.size
    ranks = np.arange(1, n + 1, dtype=np.float64)
    return float(np.sum((2.0 * ranks - n - 1.0) * xs) / (n * n * mu))


# ---------------------------------------------------------------------------
# Mann-Whitney upper-tail test


def _u2_statistic(a: np.ndarray, b: np.ndarray) -> int:
    """Twice the wins-count U(a over b), as an exact integer."""
    b_sorted = np.sort(b)
    lt = np.searchsorted(b_sorted, a, side="left")
    le = np.searchsorted(b_sorted, a, side="right")
    greater = int(lt.sum())
    equal = int((le - lt).sum())
    return 2 * greater + equal


@lru_cache(maxsize=8192)
def _exact_u2_distribution(group_counts: tuple[int, ...], n_a: int):
    """Null distribution of 2U over all labelings, conditional on ties.

    group_counts are the multiplicities of the distinct values of the
    combined sample in increasing value order. Returns (ways, total) where
    ways[u2] counts labelings with that doubled U statistic; total is
    C(n, n_a). Exact integer arithmetic throughout.
    """
    n = sum(group_counts)
    n_b = n - n_a
    max_u2 = 2 * n_a * n_b
    # states: a_used -> {u2: ways}
    states: dict[int, dict[int, int]] = {0: {0: 1}}
    processed = 0
    for c in group_counts:
        new_states: dict[int, dict[int, int]] = {}
        for a_used, umap in states.items():
            b_before = processed - a_used
            hi = min(c, n_a - a_used)
            for a_take in range(hi + 1):
                b_take = c - a_take
                weight = comb(c, a_take)
                du = 2 * a_take * b_before + a_take * b_take
                target = new_states.setdefault(a_used + a_take, {})
                for u2, ways in umap.items():
                    key = u2 + du
                    target[key] = target.get(key, 0) + ways * weight
        states = new_states
        processed += c
    ways_map = states.get(n_a, {})
    ways = [0] * (max_u2 + 1)
    for u2, w in ways_map.items():
        ways[u2] = w
    return tuple(ways), comb(n, n_a)


def _exact_upper_p(a: np.ndarray, b: np.ndarray, u2_obs: int) -> float:
    combined = np.concatenate([a, b])
    _, counts = np.unique(combined, return_counts=True)
    ways, total = _exact_u2_distribution(tuple(int(c) for c in counts), a.size)
    tail = sum(ways[u2_obs:])
    return tail / total


def _tie_corrected_sigma(combined: np.ndarray, n_a: int, n_b: int) -> float:
    n = n_a + n_b
    _, counts = np.unique(combined, return_counts=True)
    tie_term = float(np.sum(counts.astype(np.float64) ** 3 - counts))
    var = n_a * n_b / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    return math.sqrt(max(var, 0.0))


def mann_whitney_upper(
    sample_a: Sequence[float], sample_b: Sequence[float], alpha: float = 0.05
) -> TestResult:
    """Upper-tail Mann-Whitney test of H0: incomes of a <= incomes of b.

    The U statistic counts pairs where a beats b, with half-wins for ties.
    For n_a, n_b <= 10 the p-value is exact (enumeration conditional on the
    observed tie pattern); larger samples use the normal approximation with
    tie-corrected variance and continuity correction.
    """
    a = np.asarray(sample_a, dtype=np.float64)
    b = np.asarray(sample_b, dtype=np.float64)
    if a.size == 0 or b.size == 0:
        raise ValueError("mann_whitney_upper requires non-empty samples")
    u2 = _u2_statistic(a, b)
    u = u2 / 2.0
    if a.size <= EXACT_MAX_N and b.size <= EXACT_MAX_N:
        p = _exact_upper_p(a, b, u2)
        method = "exact"
    else:
        sigma = _tie_corrected_sigma(np.concatenate([a, b]), a.size, b.size)
        if sigma == 0.0:
            # all values tied: U is pinned at n_a*n_b/2, no evidence at all
            p = 1.0
        else:
            z = (u - a.size * b.size / 2.0 - 0.5) / sigma
            p = 0.5 * math.erfc(z / math.sqrt(2.0))
        method = "normal_approx"
    p = min(max(p, 0.0), 1.0)
    return TestResult(
        u_statistic=u, p_value=p, method=method, reject=p <= alpha, alpha=alpha
    )


# ---------------------------------------------------------------------------
# Bootstrap confidence intervals (percentile method)


def bootstrap_mean_resamples(
    sample: Sequence[float],
    iters: int = 1000,
    seed: int = 0,
    stream_key: tuple = (),
) -> np.ndarray:
    """Resampled means of the sample, one per bootstrap iteration."""
    if iters < 100:
        raise ConfigError("bootstrap iters must be >= 100")
    x = np.asarray(sample, dtype=np.float64)
    if x.size == 0:
        raise ValueError("bootstrap requires a non-empty sample")
    rng = substream(seed, "bootstrap_mean", *stream_key)
    idx = rng.integers(0, x.size, size=(iters, x.size))
    return x[idx].mean(axis=1)


def percentile_interval(draws: np.ndarray, level: float) -> Interval:
    if not 0.0 < level < 1.0:
        raise ConfigError("confidence level must lie in (0, 1)")
    tail = (1.0 - level) / 2.0
    lo, hi = np.quantile(draws, [tail, 1.0 - tail])
    return Interval(lower=float(lo), upper=float(hi), level=level)


def bootstrap_mean_ci(
    sample: Sequence[float],
    iters: int = 1000,
    level: float = 0.95,
    seed: int = 0,
    stream_key: tuple = (),
) -> Interval:
    """Percentile bootstrap CI for the mean; deterministic for a fixed seed."""
    means = bootstrap_mean_resamples(sample, iters=iters, seed=seed, stream_key=stream_key)
    return percentile_interval(means, level)


def bootstrap_mean_diff_ci(
    sample_a: Sequence[float],
    sample_b: Sequence[float],
    iters: int = 1000,
    level: float = 0.95,
    seed: int = 0,
    stream_key: tuple = (),
) -> Interval:
    """Percentile bootstrap CI for mean(a) - mean(b).

    Both samples are resampled independently each iteration, from
    substreams keyed per side.
    """
    means_a = bootstrap_mean_resamples(
        sample_a, iters=iters, seed=seed, stream_key=(*stream_key, "a")
    )
    means_b = bootstrap_mean_resamples(
        sample_b, iters=iters, seed=seed, stream_key=(*stream_key, "b")
    )
    return percentile_interval(means_a - means_b, level)


# ---------------------------------------------------------------------------
# Pearson correlation


def pearson_r(xs: Sequence[float], ys: Sequence[float]) -> float:
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.size != y.size:
        raise ValueError("pearson_r requires equal-length series")
    if x.size < 2:
        raise ValueError("pearson_r requires at least 2 points")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = float(np.sqrt(np.sum(dx * dx)))
    sy = float(np.sqrt(np.sum(dy * dy)))
    if sx == 0.0 or sy == 0.0:
        raise DegenerateSeriesError("degenerate_series: zero variance")
    r = float(np.sum(dx * dy) / (sx * sy))
    return min(max(r, -1.0), 1.0)


# ---------------------------------------------------------------------------
# Chi-square independence test


def chi_square_independence(
    table: ContingencyTable, alpha: float = 0.05
) -> ChiSquareResult:
    counts = np.asarray(table.counts, dtype=np.float64)
    row_sums = counts.sum(axis=1)
    col_sums = counts.sum(axis=0)
    if np.any(row_sums == 0) or np.any(col_sums == 0):
        raise DegenerateMarginError("degenerate_margin: zero row or column sum")
    total = counts.sum()
    expected = np.outer(row_sums, col_sums) / total
    statistic = float(np.sum((counts - expected) ** 2 / expected))
    dof = (counts.shape[0] - 1) * (counts.shape[1] - 1)
    p = float(_chi2_dist.sf(statistic, dof))
    return ChiSquareResult(
        statistic=statistic,
        dof=dof,
        p_value=p,
        reject=p <= alpha,
        alpha=alpha,
        low_expected_count=bool(np.any(expected < 5)),
    )
