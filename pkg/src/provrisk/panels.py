"""Two-panel survey handling: consistency checks and panel merging.

Factor weights come from two independently surveyed panels (customers and
providers). Before their fraction matrices are averaged into the single
matrix the scoring core consumes, the per-factor mean scores of the two
panels are correlated; a high correlation justifies treating the opinions
as consistent. An inconsistent pair is surfaced as a verdict, never a hard
failure: policy belongs to the caller.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from datetime import datetime
from typing import Literal, Sequence

from . import core
from .core import (
    DEFAULT_SUM_TOLERANCE,
    FactorDistribution,
    PocketScale,
    WeightProfile,
)
from .errors import (
    DomainError,
    StrictPolicyError,
    StructuralError,
    UndefinedCorrelationError,
)

PANELS = ("customer", "provider")

DEFAULT_CONSISTENCY_THRESHOLD = 0.9

ValidationPolicy = Literal["strict", "renormalize"]


@dataclass(frozen=True)
class PanelSurvey:
    """One panel's fraction distributions, one row per catalog factor."""

    panel: str
    distributions: tuple[FactorDistribution, ...]
    captured_at: datetime | None = None

    def __post_init__(self):
        if self.panel not in PANELS:
            raise DomainError(f"unknown panel {self.panel!r}; expected one of {PANELS}")
        distributions = tuple(self.distributions)
        object.__setattr__(self, "distributions", distributions)
        if not distributions:
            raise StructuralError(f"{self.panel} survey has no distributions")
        seen: set[str] = set()
        for dist in distributions:
            if dist.factor_id in seen:
                raise StructuralError(
                    f"{self.panel} survey has two rows for factor {dist.factor_id!r}"
                )
            seen.add(dist.factor_id)
        lengths = {len(d.fractions) for d in distributions}
        if len(lengths) != 1:
            raise StructuralError(
                f"{self.panel} survey rows disagree on pocket count: {sorted(lengths)}"
            )

    @property
    def factor_ids(self) -> tuple[str, ...]:
        return tuple(d.factor_id for d in self.distributions)


@dataclass(frozen=True)
class ConsistencyVerdict:
    """Pearson correlation of two panels' mean scores against a threshold."""

    correlation: float
    threshold: float

    @property
    def consistent(self) -> bool:
        return self.correlation >= self.threshold


def panel_consistency(
    x: Sequence[float],
    y: Sequence[float],
    threshold: float = DEFAULT_CONSISTENCY_THRESHOLD,
) -> ConsistencyVerdict:
    """Correlate two per-factor mean-score vectors.

    Uses the Pearson product-moment coefficient; a constant vector has no
    defined correlation and is rejected.
    """
    if len(x) != len(y):
        raise StructuralError(f"mean-score vectors differ in length: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise StructuralError(f"need at least 2 factors to correlate, got {len(x)}")
    for label, vec in (("first", x), ("second", y)):
        if min(vec) == max(vec):
            raise UndefinedCorrelationError(
                f"{label} mean-score vector is constant; correlation undefined"
            )
    try:
        correlation = statistics.correlation(x, y)
    except (statistics.StatisticsError, ZeroDivisionError) as exc:
        # a vector can pass the constant check yet have zero variance in
        # float arithmetic (values differing below the underflow threshold)
        raise UndefinedCorrelationError(f"correlation undefined: {exc}") from exc
    return ConsistencyVerdict(correlation=correlation, threshold=threshold)


def survey_mean_scores(survey: PanelSurvey, scale: PocketScale) -> tuple[float, ...]:
    """Per-factor mean scores of one panel, in survey row order."""
    return tuple(core.mean_factor_score(d, scale) for d in survey.distributions)


def average_panels(a: PanelSurvey, b: PanelSurvey) -> tuple[FactorDistribution, ...]:
    """Merge two panels by elementwise arithmetic mean of their fractions.

    Rows are aligned by factor id (b may list factors in a different order);
    the merged rows come back in a's order. Averaging commutes with the mean
    score: the mean score of a merged row equals the mean of the two panel
    scores.
    """
    core.ensure_factor_cover(a.factor_ids, b.factor_ids, "panel merge")
    n_a = len(a.distributions[0].fractions)
    n_b = len(b.distributions[0].fractions)
    if n_a != n_b:
        raise StructuralError(f"panels disagree on pocket count: {n_a} vs {n_b}")
    by_id = {d.factor_id: d for d in b.distributions}
    merged = []
    for dist in a.distributions:
        other = by_id[dist.factor_id]
        merged.append(
            FactorDistribution(
                factor_id=dist.factor_id,
                fractions=tuple(
                    (qa + qb) / 2.0 for qa, qb in zip(dist.fractions, other.fractions)
                ),
            )
        )
    return tuple(merged)


@dataclass(frozen=True)
class FactorDiagnostic:
    """One factor whose fraction row failed validation."""

    factor_id: str
    total: float
    renormalized: bool


def build_weight_profile(
    distributions: Sequence[FactorDistribution],
    scale: PocketScale,
    policy: ValidationPolicy = "strict",
    tolerance: float = DEFAULT_SUM_TOLERANCE,
) -> tuple[WeightProfile, list[FactorDiagnostic]]:
    """Validate merged distributions and derive the weight profile.

    Every row whose fractions do not sum to 1 within the tolerance is
    reported in the diagnostics. Under ``strict`` any such row rejects the
    whole build; under ``renormalize`` the row is rescaled to sum 1 and the
    build proceeds. Renormalization never happens silently: it is always
    visible in the diagnostics.
    """
    if policy not in ("strict", "renormalize"):
        raise DomainError(f"unknown validation policy {policy!r}")
    diagnostics: list[FactorDiagnostic] = []
    usable: list[FactorDistribution] = []
    for dist in distributions:
        verdict = core.validate_distribution(dist, scale, tolerance)
        if verdict.ok:
            usable.append(dist)
        else:
            diagnostics.append(
                FactorDiagnostic(
                    factor_id=dist.factor_id,
                    total=verdict.total,
                    renormalized=policy == "renormalize",
                )
            )
            if policy == "renormalize":
                usable.append(core.renormalize_distribution(dist))
    if policy == "strict" and diagnostics:
        bad = [d.factor_id for d in diagnostics]
        raise StrictPolicyError(
            f"strict policy rejected {len(bad)} invalid distribution(s): {bad}",
            diagnostics,
        )
    mean_scores = {d.factor_id: core.mean_factor_score(d, scale) for d in usable}
    return core.normalize_weights(mean_scores), diagnostics
