"""Pipeline orchestration and report emission.

Runs ingest -> per-region dominance -> classification -> aggregation ->
cohort analysis and writes a machine-readable output tree:

    summary.json           full run summary (deterministic)
    timings.json           stage wall times (the one non-deterministic file)
    profiles.csv           one row per region
    warnings.txt           every diagnostic, one per line
    networks/<region>.dot  per-region domination network (DOT)
    networks/<region>.json per-region network, machine-readable
    support/<cohort>.dot   aggregated support networks
    plotdata/*.csv         histogram / scatter / CI chart inputs

Everything except timings.json is a pure function of (input bytes, config);
worker count never changes any output byte.
"""
from __future__ import annotations

import json
import re
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
from joblib import Parallel, delayed

from . import __version__
from .aggregation import (
    COHORTS,
    SupportNetwork,
    Transaction,
    build_support_network,
    to_transaction,
)
from .classify import (
    AgClass,
    CohortAnalysis,
    RegionProfile,
    agricultural_class,
    cohort_analysis,
    median_split,
)
from .dominance import DominationNetwork, NetworkParams, build_domination_network, income_ordering
from .errors import ConfigError, NoAcceptedRecordsError
from .ingest import (
    RegionSample,
    ValidationReport,
    group_by_region,
    load_alias_map,
    parse_household_file,
)
from .stats import GINI_ESTIMATOR, Interval, gini
from .taxonomy import Occupation


@dataclass(frozen=True)
class PipelineConfig:
    input_path: str
    output_dir: str
    alias_path: Optional[str] = None
    alpha: float = 0.05
    bootstrap_iters: int = 1000
    confidence_level: float = 0.95
    support_threshold: float = 0.5
    ag_threshold: float = 0.66
    min_samples: int = 5
    seed: int = 0
    exclude: tuple[str, ...] = ()
    allow_negative_income: bool = False
    histogram_bins: int = 20
    count_empty_networks: bool = True

    def validate(self) -> None:
        for name in ("alpha", "confidence_level", "support_threshold", "ag_threshold"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ConfigError(f"{name} must lie in (0, 1), got {value}")
        if self.bootstrap_iters < 100:
            raise ConfigError("bootstrap_iters must be >= 100")
        if self.min_samples < 1:
            raise ConfigError("min_samples must be >= 1")
        if self.histogram_bins < 1:
            raise ConfigError("histogram_bins must be >= 1")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["exclude"] = list(self.exclude)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        data = dict(data)
        if "exclude" in data:
            data["exclude"] = tuple(data["exclude"])
        return cls(**data)

    def network_params(self) -> NetworkParams:
        return NetworkParams(
            alpha=self.alpha,
            min_samples=self.min_samples,
            bootstrap_iters=self.bootstrap_iters,
            confidence_level=self.confidence_level,
            seed=self.seed,
        )


@dataclass(frozen=True)
class RunSummary:
    config: PipelineConfig
    validation: ValidationReport
    profiles: tuple[RegionProfile, ...]
    networks: dict[str, DominationNetwork]
    support_networks: dict[str, SupportNetwork]
    cohort: Optional[CohortAnalysis]
    warnings: tuple[str, ...]
    timings: dict[str, float] = field(default_factory=dict)
    version: str = __version__
    gini_estimator: str = GINI_ESTIMATOR


def _process_region(
    region: RegionSample, params: NetworkParams, ag_threshold: float,
    allow_negative: bool,
) -> tuple[DominationNetwork, float, float, AgClass]:
    network = build_domination_network(region, params)
    incomes = region.all_incomes()
    region_gini = gini(incomes, allow_negative=allow_negative)
    mean_income = float(np.mean(incomes))
    ag = agricultural_class(region, threshold=ag_threshold)
    return network, region_gini, mean_income, ag


def run_pipeline(config: PipelineConfig, workers: int = 1) -> RunSummary:
    """Execute the full pipeline and write the output tree.

    Deterministic for a fixed config regardless of the worker count;
    timings.json is the only file whose bytes vary between runs.
    """
    config.validate()
    timings: dict[str, float] = {}
    warnings: list[str] = []

    t0 = time.perf_counter()
    alias_map = None
    if config.alias_path:
        with open(config.alias_path, "r", encoding="utf-8", newline="") as fh:
            alias_map = load_alias_map(fh)
    records, validation = parse_household_file(
        config.input_path,
        alias_map=alias_map,
        allow_negative_income=config.allow_negative_income,
    )
    if validation.accepted == 0:
        raise NoAcceptedRecordsError(
            f"no accepted records in {config.input_path}: "
            f"{validation.rejection_reasons}"
        )
    regions = group_by_region(records)
    excluded = set(config.exclude)
    if excluded:
        regions = [r for r in regions if r.region_id not in excluded]
        if not regions:
            raise NoAcceptedRecordsError("exclusion list removed every region")
    timings["ingest_s"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    params = config.network_params()
    if workers > 1:
        results = Parallel(n_jobs=workers)(
            delayed(_process_region)(
                r, params, config.ag_threshold, config.allow_negative_income
            )
            for r in regions
        )
    else:
        results = [
            _process_region(r, params, config.ag_threshold, config.allow_negative_income)
            for r in regions
        ]
    timings["regions_s"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    networks: dict[str, DominationNetwork] = {}
    drafts: list[RegionProfile] = []
    ag_by_region: dict[str, AgClass] = {}
    for region, (network, region_gini, mean_income, ag) in zip(regions, results):
        networks[region.region_id] = network
        warnings.extend(network.warnings)
        ag_by_region[region.region_id] = ag
        drafts.append(
            RegionProfile(
                region_id=region.region_id,
                gini=region_gini,
                density=network.density,
                mean_income=mean_income,
                ag_class=ag,
                head_count=region.head_count,
            )
        )
    profiles = tuple(median_split(drafts))

    transactions = [to_transaction(networks[p.region_id]) for p in profiles]
    if not config.count_empty_networks:
        kept = [t for t in transactions if t.edge_set]
        dropped = len(transactions) - len(kept)
        if dropped:
            warnings.append(
                f"{dropped} region(s) with empty networks excluded from support counts"
            )
        transactions = kept

    support_networks: dict[str, SupportNetwork] = {}
    for cohort in COHORTS:
        if cohort == "All":
            cohort_txns = transactions
        else:
            cohort_txns = [
                t for t in transactions
                if ag_by_region.get(t.region_id, None) is not None
                and ag_by_region[t.region_id].value == cohort
            ]
        if not cohort_txns:
            warnings.append(f"cohort {cohort} is empty; no support network emitted")
            continue
        support_networks[cohort] = build_support_network(
            cohort_txns, cohort=cohort, threshold=config.support_threshold
        )

    cohort_stats: Optional[CohortAnalysis] = None
    if len(profiles) >= 3:
        cohort_stats = cohort_analysis(profiles)
        warnings.extend(cohort_stats.warnings)
    else:
        warnings.append("fewer than 3 regions; cohort analysis skipped")
    timings["analysis_s"] = time.perf_counter() - t0

    summary = RunSummary(
        config=config,
        validation=validation,
        profiles=profiles,
        networks=networks,
        support_networks=support_networks,
        cohort=cohort_stats,
        warnings=tuple(warnings),
        timings=timings,
    )

    t0 = time.perf_counter()
    write_outputs(summary, Path(config.output_dir))
    timings["emit_s"] = time.perf_counter() - t0
    _write_json(Path(config.output_dir) / "timings.json", timings)
    return summary


# ---------------------------------------------------------------------------
# Serialization helpers


def _safe_name(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]", "_", name)


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _interval_dict(ci: Interval) -> dict:
    return {"lower": ci.lower, "upper": ci.upper, "level": ci.level}


def _chi_dict(result) -> Optional[dict]:
    if result is None:
        return None
    return {
        "statistic": result.statistic,
        "dof": result.dof,
        "p_value": result.p_value,
        "reject": result.reject,
        "alpha": result.alpha,
        "low_expected_count": result.low_expected_count,
    }


def network_to_dict(network: DominationNetwork) -> dict:
    return {
        "region_id": network.region_id,
        "nodes": [o.value for o in network.nodes],
        "edges": [
            {
                "dominant": e.dominant.value,
                "dominated": e.dominated.value,
                "p_value": e.p_value,
                "mean_diff_ci": _interval_dict(e.mean_diff_ci),
            }
            for e in network.edges
        ],
        "density": network.density,
        "occupation_means": {
            o.value: m for o, m in sorted(
                network.occupation_means.items(), key=lambda kv: kv[0].value
            )
        },
        "occupation_cis": {
            o.value: _interval_dict(ci) for o, ci in sorted(
                network.occupation_cis.items(), key=lambda kv: kv[0].value
            )
        },
        "warnings": list(network.warnings),
    }


def network_from_dict(data: dict) -> DominationNetwork:
    from .dominance import DominanceEdge  # local to avoid cycle at import time

    def interval(d: dict) -> Interval:
        return Interval(lower=d["lower"], upper=d["upper"], level=d["level"])

    return DominationNetwork(
        region_id=data["region_id"],
        nodes=tuple(Occupation(n) for n in data["nodes"]),
        edges=tuple(
            DominanceEdge(
                dominant=Occupation(e["dominant"]),
                dominated=Occupation(e["dominated"]),
                p_value=e["p_value"],
                mean_diff_ci=interval(e["mean_diff_ci"]),
            )
            for e in data["edges"]
        ),
        density=data["density"],
        occupation_cis={
            Occupation(k): interval(v) for k, v in data["occupation_cis"].items()
        },
        occupation_means={
            Occupation(k): v for k, v in data["occupation_means"].items()
        },
        warnings=tuple(data.get("warnings", ())),
    )


def emit_network_dot(network: Union[DominationNetwork, SupportNetwork]) -> str:
    """Render a network as DOT with deterministic lexicographic ordering.

    Domination edges carry a `p` attribute; support edges carry `support`.
    """
    lines = []
    if isinstance(network, SupportNetwork):
        name = f"support_{network.cohort}"
        nodes = sorted(
            {n.value for e in network.edges for n in e.pair}
        )
        edges = [
            (e.pair[0].value, e.pair[1].value, "support", e.support)
            for e in network.edges
        ]
    else:
        name = network.region_id
        nodes = [o.value for o in network.nodes]
        edges = [
            (e.dominant.value, e.dominated.value, "p", e.p_value)
            for e in network.edges
        ]
    lines.append(f'digraph "{_safe_name(name)}" {{')
    for node in nodes:
        lines.append(f'  "{node}";')
    for src, dst, attr, value in sorted(edges):
        lines.append(f'  "{src}" -> "{dst}" [{attr}="{value!r}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _histogram_csv(values: Sequence[float], bins: int) -> str:
    counts, edges = np.histogram(np.asarray(values, dtype=np.float64), bins=bins)
    lines = ["bin_left,bin_right,count"]
    for i, c in enumerate(counts):
        lines.append(f"{edges[i]!r},{edges[i + 1]!r},{int(c)}")
    return "\n".join(lines) + "\n"


def emit_plot_data(summary: RunSummary, output_dir: Union[str, Path]) -> None:
    """Write the CSV inputs for histogram, scatter and CI charts."""
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    profiles = summary.profiles
    bins = summary.config.histogram_bins

    (out / "hist_gini.csv").write_text(
        _histogram_csv([p.gini for p in profiles], bins), encoding="utf-8"
    )
    (out / "hist_density.csv").write_text(
        _histogram_csv([p.density for p in profiles], bins), encoding="utf-8"
    )
    (out / "hist_income.csv").write_text(
        _histogram_csv([p.mean_income for p in profiles], bins), encoding="utf-8"
    )

    scatter = ["region_id,gini,density,ag_class"]
    for p in profiles:
        scatter.append(f"{p.region_id},{p.gini!r},{p.density!r},{p.ag_class.value}")
    (out / "scatter_density_gini.csv").write_text(
        "\n".join(scatter) + "\n", encoding="utf-8"
    )

    for region_id in sorted(summary.networks):
        network = summary.networks[region_id]
        safe = _safe_name(region_id)
        occ_lines = ["occupation,mean,lower,upper"]
        for occ, ci in income_ordering(network):
            mean = network.occupation_means[occ]
            occ_lines.append(f"{occ.value},{mean!r},{ci.lower!r},{ci.upper!r}")
        (out / f"ci_occupations_{safe}.csv").write_text(
            "\n".join(occ_lines) + "\n", encoding="utf-8"
        )

        pair_lines = ["pair,mean_diff,lower,upper"]
        for e in network.edges:
            diff = network.occupation_means[e.dominant] - network.occupation_means[e.dominated]
            pair_lines.append(
                f"{e.dominant.value}>{e.dominated.value},"
                f"{diff!r},{e.mean_diff_ci.lower!r},{e.mean_diff_ci.upper!r}"
            )
        (out / f"ci_pairs_{safe}.csv").write_text(
            "\n".join(pair_lines) + "\n", encoding="utf-8"
        )


def summary_to_dict(summary: RunSummary) -> dict:
    cohort = summary.cohort
    return {
        "version": summary.version,
        "gini_estimator": summary.gini_estimator,
        "config": summary.config.to_dict(),
        "validation": {
            "total_rows": summary.validation.total_rows,
            "accepted": summary.validation.accepted,
            "rejected": summary.validation.rejected,
            "rejection_reasons": dict(sorted(summary.validation.rejection_reasons.items())),
        },
        "regions": [
            {
                "region_id": p.region_id,
                "gini": p.gini,
                "density": p.density,
                "mean_income": p.mean_income,
                "head_count": p.head_count,
                "ag_class": p.ag_class.value,
                "quadrant": p.quadrant.value if p.quadrant else None,
                "node_count": len(summary.networks[p.region_id].nodes),
                "edge_count": len(summary.networks[p.region_id].edges),
            }
            for p in summary.profiles
        ],
        "support_networks": {
            cohort_name: {
                "transaction_count": net.transaction_count,
                "edge_count": len(net.edges),
            }
            for cohort_name, net in sorted(summary.support_networks.items())
        },
        "cohort_analysis": None
        if cohort is None
        else {
            "correlations": cohort.correlations,
            "effect_size_labels": cohort.effect_size_labels,
            "quadrant_shares": cohort.quadrant_shares,
            "chi_square_joint": _chi_dict(cohort.chi_square_joint),
            "chi_square_gini_level": _chi_dict(cohort.chi_square_gini_level),
            "chi_square_density_level": _chi_dict(cohort.chi_square_density_level),
        },
        "warnings": list(summary.warnings),
    }


def write_outputs(summary: RunSummary, output_dir: Path) -> None:
    output_dir.mkdir(parents=True, exist_ok=True)
    _write_json(output_dir / "summary.json", summary_to_dict(summary))

    profile_lines = ["region_id,gini,density,mean_income,head_count,ag_class,quadrant"]
    for p in summary.profiles:
        profile_lines.append(
            f"{p.region_id},{p.gini!r},{p.density!r},{p.mean_income!r},"
            f"{p.head_count},{p.ag_class.value},{p.quadrant.value}"
        )
    (output_dir / "profiles.csv").write_text(
        "\n".join(profile_lines) + "\n", encoding="utf-8"
    )

    (output_dir / "warnings.txt").write_text(
        "".join(w + "\n" for w in summary.warnings), encoding="utf-8"
    )

    networks_dir = output_dir / "networks"
    networks_dir.mkdir(exist_ok=True)
    for region_id in sorted(summary.networks):
        network = summary.networks[region_id]
        safe = _safe_name(region_id)
        (networks_dir / f"{safe}.dot").write_text(
            emit_network_dot(network), encoding="utf-8"
        )
        _write_json(networks_dir / f"{safe}.json", network_to_dict(network))

    support_dir = output_dir / "support"
    support_dir.mkdir(exist_ok=True)
    for cohort_name in sorted(summary.support_networks):
        (support_dir / f"{_safe_name(cohort_name)}.dot").write_text(
            emit_network_dot(summary.support_networks[cohort_name]), encoding="utf-8"
        )

    emit_plot_data(summary, output_dir / "plotdata")
