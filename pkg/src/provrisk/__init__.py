"""Integral risk scoring for outsourcing provider selection.

Two tiers of expert input feed the engine: market-wide panel surveys that
set per-factor weights, and customer-side 1-5 scores for each candidate
provider.  The library turns those into a single risk number per provider
plus a per-factor weight/relevance/contribution breakdown, with a
file-backed workspace, a CLI and an HTTP API on top.
"""

from .core import (
    DEFAULT_SUM_TOLERANCE,
    FACTOR_CATEGORIES,
    SCALE_MAX,
    SCORE_MAX,
    SCORE_MIN,
    FactorDistribution,
    PocketScale,
    ProviderAssessment,
    RiskFactor,
    RiskReport,
    ValidationVerdict,
    WeightProfile,
    build_report,
    check_catalog,
    factor_contributions,
    integral_risk,
    mean_factor_score,
    normalize_weights,
    rank_providers,
    relevance_coefficients,
    renormalize_distribution,
    validate_distribution,
)
from .errors import (
    DegenerateInputError,
    DomainError,
    EmptyInputError,
    EngineError,
    IntegrityError,
    ParseError,
    SchemaVersionError,
    StrictPolicyError,
    StructuralError,
    UndefinedCorrelationError,
)
from .panels import (
    DEFAULT_CONSISTENCY_THRESHOLD,
    PANELS,
    ConsistencyVerdict,
    FactorDiagnostic,
    PanelSurvey,
    average_panels,
    build_weight_profile,
    panel_consistency,
    survey_mean_scores,
)
from .store import Workspace, init_workspace, load_workspace

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CONSISTENCY_THRESHOLD",
    "DEFAULT_SUM_TOLERANCE",
    "FACTOR_CATEGORIES",
    "PANELS",
    "SCALE_MAX",
    "SCORE_MAX",
    "SCORE_MIN",
    "ConsistencyVerdict",
    "DegenerateInputError",
    "DomainError",
    "EmptyInputError",
    "EngineError",
    "FactorDiagnostic",
    "FactorDistribution",
    "IntegrityError",
    "PanelSurvey",
    "ParseError",
    "PocketScale",
    "ProviderAssessment",
    "RiskFactor",
    "RiskReport",
    "SchemaVersionError",
    "StrictPolicyError",
    "StructuralError",
    "UndefinedCorrelationError",
    "ValidationVerdict",
    "WeightProfile",
    "Workspace",
    "average_panels",
    "build_report",
    "build_weight_profile",
    "check_catalog",
    "factor_contributions",
    "init_workspace",
    "integral_risk",
    "load_workspace",
    "mean_factor_score",
    "normalize_weights",
    "panel_consistency",
    "rank_providers",
    "relevance_coefficients",
    "renormalize_distribution",
    "survey_mean_scores",
    "validate_distribution",
]
