"""Pure scoring math for provider risk assessment.

The pipeline runs in four steps, all deterministic and side-effect free:

1. survey fractions per score pocket -> mean factor score (expected score
   of the factor under the pocket distribution),
2. mean scores -> normalized factor weights (sum to 1, usable as
   probabilities),
3. weights x discrete provider scores -> integral provider risk,
4. weights x scores -> per-factor relevance and contribution breakdowns.

Every value type is frozen after construction and safe to share across
threads. Summations use ``math.fsum`` so results are exactly invariant
under factor reordering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal, Mapping, Sequence

from .errors import (
    DegenerateInputError,
    DomainError,
    EmptyInputError,
    StructuralError,
)

# Upper edge of the 0-10 survey evaluation scale.
SCALE_MAX = 10.0

# Discrete provider assessment scale.
SCORE_MIN = 1
SCORE_MAX = 5

# Normalized vectors (weights, relevance, contributions) must sum to 1
# within this bound.
NORMALIZATION_TOL = 1e-9

# Default bound on how far a fraction row may drift from summing to 1.
DEFAULT_SUM_TOLERANCE = 0.02

# Absolute slack added to the tolerance comparison in validate_distribution.
# Decimal fractions such as 0.93 + 0.02 + ... are not exactly representable
# in binary, so a row whose printed sum sits exactly on the tolerance edge
# can land a few ulps past it; the slack is far below any survey resolution
# and cannot flip a genuinely invalid row.
SUM_COMPARISON_SLACK = 1e-12

FACTOR_CATEGORIES = frozenset(
    {
        "external-economic",
        "external-administrative",
        "external-provider",
        "internal-information",
        "internal-personal",
        "internal-financial",
        "uncategorized",
    }
)

RankDirection = Literal["min-risk", "max-score"]


@dataclass(frozen=True)
class PocketScale:
    """Right borders of the score pockets that bucket 0-10 survey answers.

    Borders must be strictly increasing, lie in (0, SCALE_MAX], and end at
    SCALE_MAX so the pockets cover the whole evaluation scale.
    """

    borders: tuple[float, ...]

    def __post_init__(self):
        borders = tuple(float(b) for b in self.borders)
        object.__setattr__(self, "borders", borders)
        if len(borders) < 2:
            raise StructuralError(f"scale needs at least 2 pockets, got {len(borders)}")
        for prev, cur in zip(borders, borders[1:]):
            if not cur > prev:
                raise DomainError(f"pocket borders must be strictly increasing, got {borders}")
        if borders[0] <= 0 or borders[-1] > SCALE_MAX:
            raise DomainError(f"pocket borders must lie in (0, {SCALE_MAX}], got {borders}")
        if borders[-1] != SCALE_MAX:
            raise DomainError(
                f"last pocket border must equal the scale maximum {SCALE_MAX}, got {borders[-1]}"
            )

    @property
    def n(self) -> int:
        return len(self.borders)


@dataclass(frozen=True)
class RiskFactor:
    """One entry of the factor catalog."""

    id: str
    name: str
    category: str = "uncategorized"

    def __post_init__(self):
        if not self.id:
            raise DomainError("factor id must be non-empty")
        if self.category not in FACTOR_CATEGORIES:
            raise DomainError(
                f"unknown category {self.category!r} for factor {self.id!r}; "
                f"expected one of {sorted(FACTOR_CATEGORIES)}"
            )


def check_catalog(factors: Iterable[RiskFactor]) -> tuple[RiskFactor, ...]:
    """Return the catalog as a tuple, rejecting duplicate factor ids."""
    catalog = tuple(factors)
    seen: set[str] = set()
    for factor in catalog:
        if factor.id in seen:
            raise StructuralError(f"duplicate factor id {factor.id!r} in catalog")
        seen.add(factor.id)
    return catalog


@dataclass(frozen=True)
class FactorDistribution:
    """Respondent fractions per pocket for one risk factor.

    Each fraction must lie in [0, 1]. Whether the row sums close enough to 1
    is a policy question answered by :func:`validate_distribution`, not a
    construction invariant: real survey exports are routinely off.
    """

    factor_id: str
    fractions: tuple[float, ...]

    def __post_init__(self):
        if not self.factor_id:
            raise DomainError("factor id must be non-empty")
        fractions = tuple(float(q) for q in self.fractions)
        object.__setattr__(self, "fractions", fractions)
        if not fractions:
            raise StructuralError(f"distribution for {self.factor_id!r} has no fractions")
        for q in fractions:
            if not 0.0 <= q <= 1.0:
                raise DomainError(
                    f"fraction {q!r} for factor {self.factor_id!r} outside [0, 1]"
                )


@dataclass(frozen=True)
class ValidationVerdict:
    """Outcome of checking that a fraction row sums to 1 within tolerance."""

    factor_id: str
    ok: bool
    total: float
    tolerance: float

    @property
    def deviation(self) -> float:
        return self.total - 1.0


def validate_distribution(
    dist: FactorDistribution,
    scale: PocketScale,
    tolerance: float = DEFAULT_SUM_TOLERANCE,
) -> ValidationVerdict:
    """Check a distribution row against the scale length and the sum-to-1 rule.

    A length mismatch is a structural defect and raises; a bad sum is an
    expected data condition and comes back as a failing verdict carrying the
    actual total.
    """
    if tolerance < 0:
        raise DomainError(f"tolerance must be >= 0, got {tolerance}")
    if len(dist.fractions) != scale.n:
        raise StructuralError(
            f"distribution for {dist.factor_id!r} has {len(dist.fractions)} fractions, "
            f"scale has {scale.n} pockets"
        )
    total = math.fsum(dist.fractions)
    ok = abs(total - 1.0) <= tolerance + SUM_COMPARISON_SLACK
    return ValidationVerdict(factor_id=dist.factor_id, ok=ok, total=total, tolerance=tolerance)


def renormalize_distribution(dist: FactorDistribution) -> FactorDistribution:
    """Rescale a fraction row so it sums to 1 (within 1e-12).

    Idempotent on already-valid rows; rejects all-zero rows, which carry no
    distribution to rescale.
    """
    total = math.fsum(dist.fractions)
    if total <= 0.0:
        raise DegenerateInputError(
            f"cannot renormalize all-zero distribution for factor {dist.factor_id!r}"
        )
    return FactorDistribution(
        factor_id=dist.factor_id,
        fractions=tuple(q / total for q in dist.fractions),
    )


def mean_factor_score(dist: FactorDistribution, scale: PocketScale) -> float:
    """Expected score of a factor: sum of pocket border times fraction."""
    if len(dist.fractions) != scale.n:
        raise StructuralError(
            f"distribution for {dist.factor_id!r} has {len(dist.fractions)} fractions, "
            f"scale has {scale.n} pockets"
        )
    return math.fsum(border * q for border, q in zip(scale.borders, dist.fractions))


@dataclass(frozen=True)
class WeightProfile:
    """Per-factor mean risk scores and their normalized weights.

    ``weights`` sums to 1 (within 1e-9) whenever any mean score is positive,
    so downstream code can treat the weights as probabilities.
    """

    factor_ids: tuple[str, ...]
    mean_scores: tuple[float, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "factor_ids", tuple(self.factor_ids))
        object.__setattr__(self, "mean_scores", tuple(float(c) for c in self.mean_scores))
        object.__setattr__(self, "weights", tuple(float(a) for a in self.weights))
        if not self.factor_ids:
            raise EmptyInputError("weight profile needs at least one factor")
        if not (len(self.factor_ids) == len(self.mean_scores) == len(self.weights)):
            raise StructuralError(
                f"profile field lengths disagree: {len(self.factor_ids)} ids, "
                f"{len(self.mean_scores)} mean scores, {len(self.weights)} weights"
            )
        if len(set(self.factor_ids)) != len(self.factor_ids):
            raise StructuralError("duplicate factor ids in weight profile")
        for c in self.mean_scores:
            if c < 0:
                raise DomainError(f"mean score {c!r} must be >= 0")
        for a in self.weights:
            if a < 0:
                raise DomainError(f"weight {a!r} must be >= 0")
        if any(c > 0 for c in self.mean_scores):
            total = math.fsum(self.weights)
            if abs(total - 1.0) > NORMALIZATION_TOL:
                raise DomainError(f"weights must sum to 1 within {NORMALIZATION_TOL}, got {total!r}")

    @property
    def m(self) -> int:
        return len(self.factor_ids)

    def mean_score_of(self, factor_id: str) -> float:
        return self.mean_scores[self.factor_ids.index(factor_id)]

    def weight_of(self, factor_id: str) -> float:
        return self.weights[self.factor_ids.index(factor_id)]


def normalize_weights(
    mean_scores: Mapping[str, float] | Sequence[float],
    factor_ids: Sequence[str] | None = None,
) -> WeightProfile:
    """Turn mean factor scores into weights by dividing each by the total.

    Accepts either a factor-id mapping or a bare sequence; for a sequence
    without explicit ids, positional ids ``f1..fm`` are generated. Scaling
    every score by the same positive constant leaves the weights unchanged.
    """
    if isinstance(mean_scores, Mapping):
        if factor_ids is not None:
            raise StructuralError("pass factor ids either in the mapping or separately, not both")
        ids = tuple(mean_scores.keys())
        scores = tuple(float(mean_scores[i]) for i in ids)
    else:
        scores = tuple(float(c) for c in mean_scores)
        if factor_ids is None:
            ids = tuple(f"f{i + 1}" for i in range(len(scores)))
        else:
            ids = tuple(factor_ids)
            if len(ids) != len(scores):
                raise StructuralError(
                    f"{len(ids)} factor ids for {len(scores)} mean scores"
                )
    if not scores:
        raise EmptyInputError("cannot normalize an empty score vector")
    for c in scores:
        if c < 0:
            raise DomainError(f"mean score {c!r} must be >= 0")
    total = math.fsum(scores)
    if total <= 0.0:
        raise DegenerateInputError("all mean scores are zero; weights are undefined")
    weights = tuple(c / total for c in scores)
    return WeightProfile(factor_ids=ids, mean_scores=scores, weights=weights)


@dataclass(frozen=True)
class ProviderAssessment:
    """Discrete 1-5 expert scores for one provider, keyed by factor id."""

    provider_id: str
    scores: dict[str, int]

    def __post_init__(self):
        if not self.provider_id:
            raise DomainError("provider id must be non-empty")
        if not self.scores:
            raise EmptyInputError(f"assessment for {self.provider_id!r} has no scores")
        for factor_id, score in self.scores.items():
            if isinstance(score, bool) or not isinstance(score, int):
                raise DomainError(
                    f"score for factor {factor_id!r} must be an integer in "
                    f"{SCORE_MIN}..{SCORE_MAX}, got {score!r}"
                )
            if not SCORE_MIN <= score <= SCORE_MAX:
                raise DomainError(
                    f"score {score} for factor {factor_id!r} outside the discrete "
                    f"{SCORE_MIN}..{SCORE_MAX} scale"
                )


def ensure_factor_cover(expected_ids: Iterable[str], actual_ids: Iterable[str], context: str):
    """Raise a structural error naming missing/extra factor ids, if any."""
    expected = set(expected_ids)
    actual = set(actual_ids)
    missing = sorted(expected - actual)
    extra = sorted(actual - expected)
    if missing or extra:
        parts = []
        if missing:
            parts.append(f"missing {missing}")
        if extra:
            parts.append(f"extra {extra}")
        raise StructuralError(f"{context}: factor sets differ ({'; '.join(parts)})")


def integral_risk(profile: WeightProfile, assessment: ProviderAssessment) -> float:
    """Weighted sum of provider scores; lies in [min score, max score]."""
    ensure_factor_cover(
        profile.factor_ids, assessment.scores, f"assessment {assessment.provider_id!r}"
    )
    return math.fsum(
        weight * assessment.scores[factor_id]
        for factor_id, weight in zip(profile.factor_ids, profile.weights)
    )


def relevance_coefficients(assessment: ProviderAssessment) -> dict[str, float]:
    """Provider scores normalized to sum to 1, in score order."""
    total = sum(assessment.scores.values())
    return {factor_id: score / total for factor_id, score in assessment.scores.items()}


def factor_contributions(
    profile: WeightProfile, assessment: ProviderAssessment
) -> dict[str, float]:
    """Share of the provider's risk attributable to each factor.

    Computed as weight times score, normalized across factors so the shares
    sum to 1. Normalizing relevance instead of raw scores gives the
    identical result, since relevance only rescales every product by the
    same constant.
    """
    ensure_factor_cover(
        profile.factor_ids, assessment.scores, f"assessment {assessment.provider_id!r}"
    )
    products = tuple(
        weight * assessment.scores[factor_id]
        for factor_id, weight in zip(profile.factor_ids, profile.weights)
    )
    total = math.fsum(products)
    if total <= 0.0:
        raise DegenerateInputError("all weight-score products are zero; contributions undefined")
    return {
        factor_id: product / total
        for factor_id, product in zip(profile.factor_ids, products)
    }


@dataclass(frozen=True)
class RiskReport:
    """Integral risk plus per-factor weight/relevance/contribution vectors."""

    provider_id: str
    risk: float
    factor_ids: tuple[str, ...]
    weights: tuple[float, ...]
    relevance: tuple[float, ...]
    contributions: tuple[float, ...]

    def __post_init__(self):
        lengths = {
            len(self.factor_ids),
            len(self.weights),
            len(self.relevance),
            len(self.contributions),
        }
        if len(lengths) != 1:
            raise StructuralError("report vectors must all have one length per factor")
        # the weights sum to 1 only within NORMALIZATION_TOL, so the risk
        # bound inherits the same slack (all-1 scores can land an ulp under 1)
        if not SCORE_MIN - NORMALIZATION_TOL <= self.risk <= SCORE_MAX + NORMALIZATION_TOL:
            raise DomainError(
                f"integral risk {self.risk!r} outside [{SCORE_MIN}, {SCORE_MAX}]"
            )
        for label, vec in (("relevance", self.relevance), ("contributions", self.contributions)):
            total = math.fsum(vec)
            if abs(total - 1.0) > NORMALIZATION_TOL:
                raise DomainError(f"{label} must sum to 1 within {NORMALIZATION_TOL}, got {total!r}")


def build_report(profile: WeightProfile, assessment: ProviderAssessment) -> RiskReport:
    """Assemble the full per-provider report in profile factor order."""
    risk = integral_risk(profile, assessment)
    relevance = relevance_coefficients(assessment)
    contributions = factor_contributions(profile, assessment)
    return RiskReport(
        provider_id=assessment.provider_id,
        risk=risk,
        factor_ids=profile.factor_ids,
        weights=profile.weights,
        relevance=tuple(relevance[f] for f in profile.factor_ids),
        contributions=tuple(contributions[f] for f in profile.factor_ids),
    )


def rank_providers(
    profile: WeightProfile,
    assessments: Sequence[ProviderAssessment],
    direction: RankDirection = "min-risk",
) -> list[tuple[str, float]]:
    """Order providers by integral risk.

    Default direction puts the lowest risk first (scores encode exposure, so
    lower is better); ``max-score`` flips the order. Ties break by provider
    id ascending in both directions, so the ranking is deterministic.
    """
    if direction not in ("min-risk", "max-score"):
        raise DomainError(f"unknown ranking direction {direction!r}")
    if not assessments:
        raise EmptyInputError("no assessments to rank")
    seen: set[str] = set()
    scored: list[tuple[str, float]] = []
    for assessment in assessments:
        if assessment.provider_id in seen:
            raise StructuralError(f"duplicate provider id {assessment.provider_id!r}")
        seen.add(assessment.provider_id)
        scored.append((assessment.provider_id, integral_risk(profile, assessment)))
    if direction == "min-risk":
        scored.sort(key=lambda item: (item[1], item[0]))
    else:
        scored.sort(key=lambda item: (-item[1], item[0]))
    return scored
