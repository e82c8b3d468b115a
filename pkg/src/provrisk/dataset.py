"""Bundled expert-survey snapshot: 9 risk factors, one scored provider.

This is the dataset the demo workspace and the golden tests run on. It was
hand-transcribed from a printed survey summary and carries that table's
warts on purpose:

* most fraction rows under-sum badly (totals 0.35..0.83), so they fail
  validation at the default tolerance; only the last two rows are clean;
* the recorded mean-score column cannot be reproduced from the recorded
  fractions for those under-summing rows. The recorded means are treated
  as authoritative for all downstream scoring;
* the integral risk recorded alongside the table, 0.71, is infeasible:
  with weights summing to 1 and scores at least 1 the integral risk can
  never drop below 1. It is kept here only as a flagged discrepancy;
  recomputation from the recorded means and scores gives 1.72.

The recorded two-decimal weight/relevance/contribution columns are the
golden targets the engine must reproduce within presentation rounding.
"""

from __future__ import annotations

from pathlib import Path

from .core import (
    FactorDistribution,
    PocketScale,
    ProviderAssessment,
    RiskFactor,
    WeightProfile,
    normalize_weights,
)

SCALE_BORDERS = (1.0, 3.0, 5.0, 7.5, 10.0)

# (id, display name); categories were not recorded with the snapshot, so
# the catalog ships uncategorized.
FACTOR_NAMES = (
    ("experience", "Experience"),
    ("image", "Image"),
    ("production-scale", "The scale of production"),
    ("execution-term", "The term of execution"),
    ("financial-condition", "Financial condition"),
    ("service-price", "The price of the service"),
    ("financing-source", "The source of financing"),
    ("national-identity", "National identity"),
    ("advertising-activity", "Advertising activity"),
)

FACTOR_IDS = tuple(fid for fid, _ in FACTOR_NAMES)

# Averaged respondent fractions per pocket, as recorded.
SURVEY_FRACTIONS = {
    "experience": (0.01, 0.02, 0.07, 0.07, 0.18),
    "image": (0.09, 0.02, 0.31, 0.22, 0.13),
    "production-scale": (0.24, 0.09, 0.15, 0.12, 0.11),
    "execution-term": (0.30, 0.03, 0.11, 0.16, 0.12),
    "financial-condition": (0.11, 0.07, 0.14, 0.21, 0.15),
    "service-price": (0.24, 0.10, 0.18, 0.20, 0.11),
    "financing-source": (0.05, 0.12, 0.16, 0.24, 0.12),
    "national-identity": (0.64, 0.17, 0.09, 0.05, 0.05),
    "advertising-activity": (0.93, 0.02, 0.03, 0.01, 0.03),
}

# Recorded mean scores; authoritative for scoring (see module docstring).
RECORDED_MEAN_SCORES = {
    "experience": 9.22,
    "image": 7.03,
    "production-scale": 5.98,
    "execution-term": 6.17,
    "financial-condition": 7.99,
    "service-price": 5.71,
    "financing-source": 6.33,
    "national-identity": 2.50,
    "advertising-activity": 1.35,
}

# Discrete 1-5 exposure scores for the one provider in the snapshot.
DEMO_PROVIDER_ID = "vendor-a"
PROVIDER_SCORES = {
    "experience": 1,
    "image": 1,
    "production-scale": 3,
    "execution-term": 1,
    "financial-condition": 2,
    "service-price": 3,
    "financing-source": 2,
    "national-identity": 1,
    "advertising-activity": 1,
}

# Two-decimal columns recorded with the snapshot; golden targets.
RECORDED_WEIGHTS = {
    "experience": 0.18,
    "image": 0.13,
    "production-scale": 0.11,
    "execution-term": 0.12,
    "financial-condition": 0.15,
    "service-price": 0.11,
    "financing-source": 0.12,
    "national-identity": 0.05,
    "advertising-activity": 0.03,
}
RECORDED_RELEVANCE = {
    "experience": 0.07,
    "image": 0.07,
    "production-scale": 0.20,
    "execution-term": 0.07,
    "financial-condition": 0.13,
    "service-price": 0.20,
    "financing-source": 0.13,
    "national-identity": 0.07,
    "advertising-activity": 0.07,
}
RECORDED_CONTRIBUTIONS = {
    "experience": 0.10,
    "image": 0.08,
    "production-scale": 0.20,
    "execution-term": 0.07,
    "financial-condition": 0.18,
    "service-price": 0.19,
    "financing-source": 0.14,
    "national-identity": 0.03,
    "advertising-activity": 0.02,
}

# Recorded alongside the snapshot but below the feasible [1, 5] range;
# kept as a flagged discrepancy, never used as a target.
RECORDED_INTEGRAL_RISK = 0.71

# Recorded mean score of the factor rows whose fractions do sum to 1;
# the recomputed values differ slightly (2.475 vs 2.50) because the
# recorded fractions are rounded to two decimals.
CLEAN_FACTOR_IDS = ("national-identity", "advertising-activity")


def demo_scale() -> PocketScale:
    return PocketScale(SCALE_BORDERS)


def demo_catalog() -> tuple[RiskFactor, ...]:
    return tuple(RiskFactor(id=fid, name=name) for fid, name in FACTOR_NAMES)


def demo_distributions() -> tuple[FactorDistribution, ...]:
    return tuple(
        FactorDistribution(factor_id=fid, fractions=SURVEY_FRACTIONS[fid]) for fid in FACTOR_IDS
    )


def demo_weight_profile() -> WeightProfile:
    """Weights normalized from the recorded (authoritative) mean scores."""
    return normalize_weights(RECORDED_MEAN_SCORES)


def demo_assessment() -> ProviderAssessment:
    return ProviderAssessment(provider_id=DEMO_PROVIDER_ID, scores=dict(PROVIDER_SCORES))


def write_demo_workspace(root: str | Path):
    """Materialize the snapshot as a ready-to-use workspace.

    Both panel survey files receive the same fraction matrix: the snapshot
    only preserves the panel average, not the two separate panel matrices.
    The shipped weight profile is built from the recorded mean scores, not
    recomputed from the (partly inconsistent) fractions.
    """
    from . import store

    workspace = store.init_workspace(root, demo_scale(), demo_catalog())
    for panel in ("customer", "provider"):
        from .panels import PanelSurvey

        workspace.save_survey(PanelSurvey(panel=panel, distributions=demo_distributions()))
    workspace.save_weights(demo_weight_profile())
    workspace.save_assessment(demo_assessment())
    return workspace
