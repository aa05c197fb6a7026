"""Cost-aware evaluation of binary classifiers under precision and capacity limits.

The core objects are ROC curves (:mod:`pvoros.roc_core`), the feasible region
cut out of ROC space by a minimum precision and a maximum alert capacity
(:mod:`pvoros.feasible_region`), the partial area of lesser classifiers
(:mod:`pvoros.partial_area`) and its average over a cost range, the partial
VOROS (:mod:`pvoros.voros`).  :mod:`pvoros.selection` ranks candidate models
and :mod:`pvoros.cli` exposes everything on the command line.
"""

from .estimators import ModelSelector, PartialVOROSThreshold, partial_voros_score
from .exceptions import (
    AssumptionError,
    ConfigError,
    DataError,
    DegenerateRegionError,
    InfeasiblePointError,
    NoFeasiblePointWarning,
    PvorosError,
)
from .feasible_region import (
    Constraints,
    FeasibleRegion,
    RegionCase,
    classify_region,
    is_feasible,
    never_alarm_t_bound,
    region_polygon,
    unconstrained_region,
)
from .partial_area import PolygonCase, clip_area_oracle, lesser_vertices, partial_area
from .roc_core import (
    DatasetProfile,
    HullCurve,
    RocCurve,
    RocPoint,
    build_roc_curve,
    cost,
    iso_line,
    t_from_cost_ratio,
    upper_hull,
)
from .selection import CandidateSet, Strategy, expected_test_cost, select_model, win_heatmap
from .voros import (
    CostSpec,
    ThresholdPolicy,
    constant_policy,
    feasible_hull,
    optimal_t_ranges,
    partial_voros,
    threshold_policy,
    voros_unconstrained,
)

__version__ = "0.1.0"

__all__ = [
    "AssumptionError",
    "CandidateSet",
    "ConfigError",
    "Constraints",
    "CostSpec",
    "DataError",
    "DatasetProfile",
    "DegenerateRegionError",
    "FeasibleRegion",
    "HullCurve",
    "InfeasiblePointError",
    "ModelSelector",
    "NoFeasiblePointWarning",
    "PartialVOROSThreshold",
    "PolygonCase",
    "PvorosError",
    "RegionCase",
    "RocCurve",
    "RocPoint",
    "Strategy",
    "ThresholdPolicy",
    "build_roc_curve",
    "classify_region",
    "clip_area_oracle",
    "constant_policy",
    "cost",
    "expected_test_cost",
    "feasible_hull",
    "is_feasible",
    "iso_line",
    "lesser_vertices",
    "never_alarm_t_bound",
    "optimal_t_ranges",
    "partial_area",
    "partial_voros",
    "partial_voros_score",
    "region_polygon",
    "select_model",
    "t_from_cost_ratio",
    "threshold_policy",
    "unconstrained_region",
    "upper_hull",
    "voros_unconstrained",
    "win_heatmap",
]
