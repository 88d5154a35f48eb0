"""Per-region income domination networks via dominant-distribution ordering.

Occupation p dominates occupation q when the upper-tail Mann-Whitney test
rejects "income of p <= income of q" and the reverse test does not reject.
Network density is edge count over C(k, 2) unordered occupation pairs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from math import comb
from typing import Optional, Sequence

import numpy as np

from .ingest import RegionSample
from .stats import (
    Interval,
    TestResult,
    bootstrap_mean_resamples,
    mann_whitney_upper,
    percentile_interval,
)
from .taxonomy import Occupation


class Dominance(Enum):
    P_DOMINATES_Q = "p_dominates_q"
    Q_DOMINATES_P = "q_dominates_p"
    NO_DOMINANCE = "no_dominance"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class PairDecision:
    decision: Dominance
    test_pq: Optional[TestResult] = None
    test_qp: Optional[TestResult] = None
    warning: Optional[str] = None


@dataclass(frozen=True)
class DominanceEdge:
    dominant: Occupation
    dominated: Occupation
    p_value: float
    mean_diff_ci: Interval

    def __post_init__(self) -> None:
        if self.dominant == self.dominated:
            raise ValueError("self-dominance edge")


@dataclass(frozen=True)
class NetworkParams:
    alpha: float = 0.05
    min_samples: int = 5
    bootstrap_iters: int = 1000
    confidence_level: float = 0.95
    seed: int = 0


@dataclass(frozen=True)
class DominationNetwork:
    region_id: str
    nodes: tuple[Occupation, ...]
    edges: tuple[DominanceEdge, ...]
    density: float
    occupation_cis: dict[Occupation, Interval]
    occupation_means: dict[Occupation, float]
    warnings: tuple[str, ...] = field(default=())


def infer_dominance_pair(
    sample_p: Sequence[float],
    sample_q: Sequence[float],
    alpha: float = 0.05,
    min_samples: int = 5,
) -> PairDecision:
    """Decide the domination direction between two income samples.

    Samples below min_samples are Undetermined. Both one-sided tests are
    run; exactly one rejection yields that direction, zero yields no
    dominance, and the pathological two-rejection case (possible only
    through heavy ties) yields no dominance with a diagnostic warning.
    """
    if len(sample_p) < min_samples or len(sample_q) < min_samples:
        return PairDecision(decision=Dominance.UNDETERMINED)
    test_pq = mann_whitney_upper(sample_p, sample_q, alpha=alpha)
    test_qp = mann_whitney_upper(sample_q, sample_p, alpha=alpha)
    if test_pq.reject and not test_qp.reject:
        decision = Dominance.P_DOMINATES_Q
        warning = None
    elif test_qp.reject and not test_pq.reject:
        decision = Dominance.Q_DOMINATES_P
        warning = None
    elif test_pq.reject and test_qp.reject:
        decision = Dominance.NO_DOMINANCE
        warning = "both directions rejected; treating pair as non-dominant"
    else:
        decision = Dominance.NO_DOMINANCE
        warning = None
    return PairDecision(decision=decision, test_pq=test_pq, test_qp=test_qp,
                        warning=warning)


def build_domination_network(
    region: RegionSample, params: NetworkParams = NetworkParams()
) -> DominationNetwork:
    """Infer the full domination network of one region.

    Nodes are the occupations with at least min_samples records. Each node
    carries a bootstrap mean CI; each edge carries the bootstrap CI of
    mean(dominant) - mean(dominated). Bootstrap substreams are keyed by
    (region_id, occupation), so adding an occupation never perturbs the
    intervals of the others.
    """
    warnings: list[str] = []
    nodes = tuple(
        sorted(
            (o for o, xs in region.samples.items() if len(xs) >= params.min_samples),
            key=lambda o: o.value,
        )
    )
    if len(nodes) < 2:
        warnings.append(
            f"region {region.region_id}: fewer than 2 occupations with "
            f">= {params.min_samples} records; empty network"
        )

    occupation_cis: dict[Occupation, Interval] = {}
    occupation_means: dict[Occupation, float] = {}
    resampled: dict[Occupation, np.ndarray] = {}
    for occ in nodes:
        xs = region.samples[occ]
        means = bootstrap_mean_resamples(
            xs,
            iters=params.bootstrap_iters,
            seed=params.seed,
            stream_key=(region.region_id, occ.value),
        )
        resampled[occ] = means
        occupation_cis[occ] = percentile_interval(means, params.confidence_level)
        occupation_means[occ] = float(np.mean(xs))

    edges: list[DominanceEdge] = []
    for p, q in combinations(nodes, 2):
        decision = infer_dominance_pair(
            region.samples[p],
            region.samples[q],
            alpha=params.alpha,
            min_samples=params.min_samples,
        )
        if decision.warning:
            warnings.append(
                f"region {region.region_id}: pair ({p.value}, {q.value}): "
                f"{decision.warning}"
            )
        if decision.decision is Dominance.P_DOMINATES_Q:
            dominant, dominated, p_value = p, q, decision.test_pq.p_value
        elif decision.decision is Dominance.Q_DOMINATES_P:
            dominant, dominated, p_value = q, p, decision.test_qp.p_value
        else:
            continue
        ci = percentile_interval(
            resampled[dominant] - resampled[dominated], params.confidence_level
        )
        edges.append(
            DominanceEdge(
                dominant=dominant,
                dominated=dominated,
                p_value=p_value,
                mean_diff_ci=ci,
            )
        )

    edge_tuple = tuple(
        sorted(edges, key=lambda e: (e.dominant.value, e.dominated.value))
    )
    return DominationNetwork(
        region_id=region.region_id,
        nodes=nodes,
        edges=edge_tuple,
        density=_density(len(nodes), len(edge_tuple)),
        occupation_cis=occupation_cis,
        occupation_means=occupation_means,
        warnings=tuple(warnings),
    )


def _density(node_count: int, edge_count: int) -> float:
    if node_count < 2:
        return 0.0
    return edge_count / comb(node_count, 2)


def network_density(network: DominationNetwork) -> float:
    """Edge count over unordered node pairs; 0 for fewer than 2 nodes."""
    return _density(len(network.nodes), len(network.edges))


def income_ordering(
    network: DominationNetwork,
) -> list[tuple[Occupation, Interval]]:
    """Occupations sorted by descending sample mean income, with mean CIs.

    Ties break lexicographically by occupation code.
    """
    ordered = sorted(
        network.occupation_cis,
        key=lambda o: (-network.occupation_means[o], o.value),
    )
    return [(o, network.occupation_cis[o]) for o in ordered]
