"""Region classification and cohort-level statistics.

Regions are classed as agricultural (AG), non-agricultural (nonAG) or mixed
(mixAG) by head-of-household shares against a threshold (default 0.66,
strict "over"). Quadrants cross low/high Gini with low/high network density
at the cohort medians; a value exactly at the median lands on the Low side.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateMarginError, DegenerateSeriesError
from .ingest import RegionSample
from .stats import ChiSquareResult, ContingencyTable, chi_square_independence, pearson_r


class AgClass(str, Enum):
    AG = "AG"
    MIX_AG = "mixAG"
    NON_AG = "nonAG"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


class Quadrant(str, Enum):
    LGLN = "LGLN"
    LGHN = "LGHN"
    HGLN = "HGLN"
    HGHN = "HGHN"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


#: Effect-size boundaries for |r|: below the first is small, etc.
EFFECT_SIZE_BOUNDS = ((0.2, "small"), (0.5, "medium"), (0.8, "large"))


@dataclass(frozen=True)
class RegionProfile:
    region_id: str
    gini: float
    density: float
    mean_income: float
    ag_class: AgClass
    quadrant: Optional[Quadrant] = None
    head_count: int = 0


@dataclass(frozen=True)
class CohortAnalysis:
    correlations: dict[str, Optional[float]]
    effect_size_labels: dict[str, str]
    quadrant_shares: dict[str, dict[str, float]]
    chi_square_joint: Optional[ChiSquareResult]
    chi_square_gini_level: Optional[ChiSquareResult]
    chi_square_density_level: Optional[ChiSquareResult]
    warnings: tuple[str, ...] = field(default=())


def agricultural_class(region: RegionSample, threshold: float = 0.66) -> AgClass:
    """Class a region by the share of heads in agricultural occupations.

    AG when the agricultural share strictly exceeds the threshold, nonAG
    when the non-agricultural share does; otherwise mixAG.
    """
    total = region.head_count
    if total == 0:
        raise ValueError("agricultural_class requires a non-empty region")
    ag_heads = sum(
        len(xs) for occ, xs in region.samples.items() if occ.is_agricultural
    )
    ag_share = ag_heads / total
    if ag_share > threshold:
        return AgClass.AG
    if 1.0 - ag_share > threshold:
        return AgClass.NON_AG
    return AgClass.MIX_AG


def median_split(profiles: Sequence[RegionProfile]) -> list[RegionProfile]:
    """Assign quadrants against the medians of Gini and density.

    High means strictly above the median; a region exactly at the median is
    Low. Medians for an even count are the midpoint of the two central
    values.
    """
    if not profiles:
        raise ValueError("median_split requires at least one profile")
    gini_median = float(np.median([p.gini for p in profiles]))
    density_median = float(np.median([p.density for p in profiles]))
    out = []
    for p in profiles:
        g = "H" if p.gini > gini_median else "L"
        d = "H" if p.density > density_median else "L"
        out.append(replace(p, quadrant=Quadrant(f"{g}G{d}N")))
    return out


def effect_size_label(r: float) -> str:
    for bound, label in EFFECT_SIZE_BOUNDS:
        if abs(r) < bound:
            return label
    return "very_large"


def _quadrant_shares(profiles: Sequence[RegionProfile]) -> dict[str, float]:
    n = len(profiles)
    shares = {}
    for quad in Quadrant:
        count = sum(1 for p in profiles if p.quadrant is quad)
        shares[quad.value] = 100.0 * count / n
    return shares


def cohort_analysis(profiles: Sequence[RegionProfile]) -> CohortAnalysis:
    """Correlations, quadrant shares and independence tests over regions.

    A degenerate (zero-variance) series leaves its correlation undefined
    rather than fabricated; degenerate contingency margins surface as
    warnings with the affected test omitted.
    """
    if len(profiles) < 3:
        raise ValueError("cohort_analysis requires at least 3 profiles")
    if any(p.quadrant is None for p in profiles):
        raise ValueError("profiles must carry quadrants; run median_split first")

    warnings: list[str] = []
    ginis = [p.gini for p in profiles]
    densities = [p.density for p in profiles]
    incomes = [p.mean_income for p in profiles]

    correlations: dict[str, Optional[float]] = {}
    for name, xs, ys in (
        ("density_gini", densities, ginis),
        ("gini_income", ginis, incomes),
        ("density_income", densities, incomes),
    ):
        try:
            correlations[name] = pearson_r(xs, ys)
        except DegenerateSeriesError:
            correlations[name] = None
            warnings.append(f"correlation {name} undefined: zero-variance series")

    labels = {
        name: effect_size_label(r)
        for name, r in correlations.items()
        if r is not None
    }

    shares = {"All": _quadrant_shares(profiles)}
    for ag in AgClass:
        cohort = [p for p in profiles if p.ag_class is ag]
        if cohort:
            shares[ag.value] = _quadrant_shares(cohort)

    ag_rows = tuple(a.value for a in AgClass)

    def table(col_labels: tuple[str, ...], col_of) -> ContingencyTable:
        counts = tuple(
            tuple(
                sum(
                    1
                    for p in profiles
                    if p.ag_class.value == ag and col_of(p) == col
                )
                for col in col_labels
            )
            for ag in ag_rows
        )
        return ContingencyTable(row_labels=ag_rows, col_labels=col_labels, counts=counts)

    def run_test(name: str, col_labels, col_of) -> Optional[ChiSquareResult]:
        try:
            result = chi_square_independence(table(col_labels, col_of))
        except DegenerateMarginError:
            warnings.append(f"chi-square {name} skipped: degenerate_margin")
            return None
        if result.low_expected_count:
            warnings.append(f"chi-square {name}: expected cell count below 5")
        return result

    quad_cols = tuple(q.value for q in Quadrant)
    chi_joint = run_test("ag_class x quadrant", quad_cols, lambda p: p.quadrant.value)
    chi_gini = run_test(
        "ag_class x gini level", ("LG", "HG"), lambda p: p.quadrant.value[:2]
    )
    chi_density = run_test(
        "ag_class x density level", ("LN", "HN"), lambda p: p.quadrant.value[2:]
    )

    return CohortAnalysis(
        correlations=correlations,
        effect_size_labels=labels,
        quadrant_shares=shares,
        chi_square_joint=chi_joint,
        chi_square_gini_level=chi_gini,
        chi_square_density_level=chi_density,
        warnings=tuple(warnings),
    )
