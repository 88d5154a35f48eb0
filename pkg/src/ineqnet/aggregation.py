"""Aggregate per-region domination networks into cohort support networks.

Each region's network becomes a transaction of (dominant, dominated)
occupation pairs. A pair's support is the fraction of transactions that
contain it, kept as an exact rational internally. The support network for a
cohort keeps the pairs whose support strictly exceeds the threshold
(default 0.5: a pair present in exactly half the regions is excluded).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .dominance import DominationNetwork
from .taxonomy import Occupation

#: Cohort labels: the three agricultural classes plus the all-regions pool.
COHORTS = ("All", "AG", "mixAG", "nonAG")

Pair = tuple[Occupation, Occupation]


@dataclass(frozen=True)
class Transaction:
    region_id: str
    edge_set: frozenset[Pair]

    def __post_init__(self) -> None:
        for dom, ded in self.edge_set:
            if (ded, dom) in self.edge_set:
                raise ValueError(
                    f"transaction {self.region_id}: both ({dom.value},{ded.value}) "
                    "and its reverse present"
                )


@dataclass(frozen=True)
class SupportEdge:
    pair: Pair
    support: float


@dataclass(frozen=True)
class SupportNetwork:
    cohort: str
    edges: tuple[SupportEdge, ...]
    transaction_count: int


def to_transaction(network: DominationNetwork) -> Transaction:
    """Project a domination network onto its (dominant, dominated) pairs."""
    return Transaction(
        region_id=network.region_id,
        edge_set=frozenset((e.dominant, e.dominated) for e in network.edges),
    )


def support_fraction(pair: Pair, transactions: Sequence[Transaction]) -> Fraction:
    if not transactions:
        raise ValueError("support requires at least one transaction")
    hits = sum(1 for t in transactions if pair in t.edge_set)
    return Fraction(hits, len(transactions))


def support(pair: Pair, transactions: Sequence[Transaction]) -> float:
    """Fraction of transactions containing the pair."""
    return float(support_fraction(pair, transactions))


def build_support_network(
    transactions: Sequence[Transaction],
    cohort: str = "All",
    threshold: float = 0.5,
) -> SupportNetwork:
    """Keep the pairs whose support strictly exceeds the threshold.

    The comparison is exact: supports are rationals, so support == threshold
    is reliably excluded.
    """
    if not transactions:
        raise ValueError("build_support_network requires at least one transaction")
    counts: dict[Pair, int] = {}
    for t in transactions:
        for pair in t.edge_set:
            counts[pair] = counts.get(pair, 0) + 1
    n = len(transactions)
    edges = [
        SupportEdge(pair=pair, support=float(Fraction(c, n)))
        for pair, c in counts.items()
        if Fraction(c, n) > Fraction(threshold)
    ]
    edges.sort(key=lambda e: (e.pair[0].value, e.pair[1].value))
    return SupportNetwork(cohort=cohort, edges=tuple(edges), transaction_count=n)
