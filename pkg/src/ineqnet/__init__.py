"""Income inequality analytics: Gini coefficients plus occupational income
domination networks, cohort support aggregation, and reporting."""

__version__ = "0.1.0"

from .taxonomy import Occupation, AGRICULTURAL_OCCUPATIONS  # noqa: E402
from .ingest import (  # noqa: E402
    HouseholdRecord,
    RegionSample,
    ValidationReport,
    group_by_region,
    normalize_occupation,
    parse_household_csv,
)
from .stats import (  # noqa: E402
    ContingencyTable,
    Interval,
    TestResult,
    bootstrap_mean_ci,
    bootstrap_mean_diff_ci,
    chi_square_independence,
    gini,
    mann_whitney_upper,
    pearson_r,
)
from .dominance import (  # noqa: E402
    Dominance,
    DominanceEdge,
    DominationNetwork,
    NetworkParams,
    build_domination_network,
    income_ordering,
    infer_dominance_pair,
    network_density,
)
from .aggregation import (  # noqa: E402
    SupportNetwork,
    Transaction,
    build_support_network,
    support,
    to_transaction,
)
from .classify import (  # noqa: E402
    AgClass,
    CohortAnalysis,
    Quadrant,
    RegionProfile,
    agricultural_class,
    cohort_analysis,
    median_split,
)
from .report import (  # noqa: E402
    PipelineConfig,
    RunSummary,
    emit_network_dot,
    emit_plot_data,
    run_pipeline,
)

__all__ = [
    "Occupation",
    "AGRICULTURAL_OCCUPATIONS",
    "HouseholdRecord",
    "RegionSample",
    "ValidationReport",
    "group_by_region",
    "normalize_occupation",
    "parse_household_csv",
    "ContingencyTable",
    "Interval",
    "TestResult",
    "bootstrap_mean_ci",
    "bootstrap_mean_diff_ci",
    "chi_square_independence",
    "gini",
    "mann_whitney_upper",
    "pearson_r",
    "Dominance",
    "DominanceEdge",
    "DominationNetwork",
    "NetworkParams",
    "build_domination_network",
    "income_ordering",
    "infer_dominance_pair",
    "network_density",
    "SupportNetwork",
    "Transaction",
    "build_support_network",
    "support",
    "to_transaction",
    "AgClass",
    "CohortAnalysis",
    "Quadrant",
    "RegionProfile",
    "agricultural_class",
    "cohort_analysis",
    "median_split",
    "PipelineConfig",
    "RunSummary",
    "emit_network_dot",
    "emit_plot_data",
    "run_pipeline",
]
