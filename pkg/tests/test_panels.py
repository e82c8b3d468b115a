"""Panel merging, consistency checking and the survey-to-weights build."""

import pytest

from provrisk import dataset
from provrisk.core import FactorDistribution, PocketScale, mean_factor_score
from provrisk.errors import (
    StrictPolicyError,
    StructuralError,
    UndefinedCorrelationError,
)
from provrisk.panels import (
    PanelSurvey,
    average_panels,
    build_weight_profile,
    panel_consistency,
    survey_mean_scores,
)

SCALE = PocketScale((1.0, 3.0, 5.0, 7.5, 10.0))


def survey(panel, rows):
    return PanelSurvey(
        panel=panel,
        distributions=tuple(FactorDistribution(fid, q) for fid, q in rows),
    )


class TestPanelSurvey:
    def test_unknown_panel_rejected(self):
        from provrisk.errors import DomainError

        with pytest.raises(DomainError):
            survey("auditors", [("a", (1.0, 0.0, 0.0, 0.0, 0.0))])

    def test_duplicate_factor_rejected(self):
        rows = [("a", (1.0, 0.0, 0.0, 0.0, 0.0)), ("a", (0.0, 1.0, 0.0, 0.0, 0.0))]
        with pytest.raises(StructuralError):
            survey("customer", rows)

    def test_ragged_rows_rejected(self):
        rows = [("a", (1.0, 0.0, 0.0, 0.0, 0.0)), ("b", (0.5, 0.5))]
        with pytest.raises(StructuralError):
            survey("customer", rows)


class TestPanelConsistency:
    def test_identical_vectors_fully_consistent(self):
        verdict = panel_consistency((1.0, 2.0, 3.0), (1.0, 2.0, 3.0))
        assert verdict.correlation == pytest.approx(1.0, abs=1e-12)
        assert verdict.consistent

    def test_opposed_vectors_inconsistent(self):
        verdict = panel_consistency((1.0, 2.0, 3.0), (9.0, 8.0, 7.0))
        assert verdict.correlation == pytest.approx(-1.0, abs=1e-12)
        assert not verdict.consistent

    def test_hand_computed_case(self):
        verdict = panel_consistency((1.0, 2.0, 3.0), (1.0, 2.0, 4.0))
        assert verdict.correlation == pytest.approx(0.982, abs=1e-3)

    def test_constant_vector_undefined(self):
        with pytest.raises(UndefinedCorrelationError):
            panel_consistency((2.0, 2.0, 2.0), (1.0, 2.0, 3.0))

    def test_length_mismatch_structural(self):
        with pytest.raises(StructuralError):
            panel_consistency((1.0, 2.0), (1.0, 2.0, 3.0))

    def test_too_short_structural(self):
        with pytest.raises(StructuralError):
            panel_consistency((1.0,), (2.0,))

    def test_threshold_boundary_is_consistent(self):
        verdict = panel_consistency((1.0, 2.0, 3.0), (1.0, 2.0, 3.0), threshold=1.0)
        assert verdict.consistent


class TestAveragePanels:
    def test_identical_surveys_average_to_themselves(self):
        s = survey("customer", [("a", (0.2, 0.3, 0.5, 0.0, 0.0))])
        t = survey("provider", [("a", (0.2, 0.3, 0.5, 0.0, 0.0))])
        merged = average_panels(s, t)
        assert merged[0].fractions == pytest.approx((0.2, 0.3, 0.5, 0.0, 0.0))

    def test_opposite_point_masses_average_to_split(self):
        s = survey("customer", [("a", (1.0, 0.0, 0.0, 0.0, 0.0))])
        t = survey("provider", [("a", (0.0, 0.0, 0.0, 0.0, 1.0))])
        merged = average_panels(s, t)
        assert merged[0].fractions == pytest.approx((0.5, 0.0, 0.0, 0.0, 0.5))

    def test_factor_order_follows_first_survey(self):
        s = survey(
            "customer",
            [("a", (1.0, 0.0, 0.0, 0.0, 0.0)), ("b", (0.0, 1.0, 0.0, 0.0, 0.0))],
        )
        t = survey(
            "provider",
            [("b", (0.0, 1.0, 0.0, 0.0, 0.0)), ("a", (1.0, 0.0, 0.0, 0.0, 0.0))],
        )
        merged = average_panels(s, t)
        assert tuple(d.factor_id for d in merged) == ("a", "b")

    def test_mean_score_commutes_with_averaging(self):
        # score-of-average equals average-of-scores, per linearity
        qa = (0.1, 0.2, 0.3, 0.2, 0.2)
        qb = (0.4, 0.1, 0.1, 0.2, 0.2)
        s = survey("customer", [("a", qa)])
        t = survey("provider", [("a", qb)])
        merged = average_panels(s, t)
        ca = mean_factor_score(FactorDistribution("a", qa), SCALE)
        cb = mean_factor_score(FactorDistribution("a", qb), SCALE)
        c_avg = mean_factor_score(merged[0], SCALE)
        assert c_avg == pytest.approx((ca + cb) / 2, abs=1e-12)

    def test_mismatched_factor_sets_rejected(self):
        s = survey("customer", [("a", (1.0, 0.0, 0.0, 0.0, 0.0))])
        t = survey("provider", [("b", (1.0, 0.0, 0.0, 0.0, 0.0))])
        with pytest.raises(StructuralError):
            average_panels(s, t)


class TestSurveyMeanScores:
    def test_matches_per_row_computation(self):
        s = survey(
            "customer",
            [(fid, dataset.SURVEY_FRACTIONS[fid]) for fid in dataset.FACTOR_IDS],
        )
        scores = survey_mean_scores(s, SCALE)
        assert scores[-2] == pytest.approx(2.475, abs=1e-12)
        assert scores[-1] == pytest.approx(1.515, abs=1e-12)


class TestBuildWeightProfile:
    def full_rows(self):
        return tuple(
            FactorDistribution(fid, dataset.SURVEY_FRACTIONS[fid])
            for fid in dataset.FACTOR_IDS
        )

    def test_strict_rejects_exactly_the_seven_dirty_rows(self):
        with pytest.raises(StrictPolicyError) as err:
            build_weight_profile(self.full_rows(), SCALE, policy="strict")
        flagged = {d.factor_id for d in err.value.diagnostics}
        assert flagged == set(dataset.FACTOR_IDS) - set(dataset.CLEAN_FACTOR_IDS)

    def test_renormalize_flags_same_rows_but_proceeds(self):
        profile, diagnostics = build_weight_profile(
            self.full_rows(), SCALE, policy="renormalize"
        )
        assert {d.factor_id for d in diagnostics} == set(dataset.FACTOR_IDS) - set(
            dataset.CLEAN_FACTOR_IDS
        )
        assert all(d.renormalized for d in diagnostics)
        assert profile.m == 9

    def test_clean_subset_passes_strict(self):
        rows = tuple(
            FactorDistribution(fid, dataset.SURVEY_FRACTIONS[fid])
            for fid in dataset.CLEAN_FACTOR_IDS
        )
        profile, diagnostics = build_weight_profile(rows, SCALE, policy="strict")
        assert diagnostics == []
        # exact two-factor normalization of 2.475 and 1.515
        assert profile.weight_of("national-identity") == pytest.approx(
            2.475 / 3.99, abs=1e-12
        )
        assert profile.weight_of("advertising-activity") == pytest.approx(
            1.515 / 3.99, abs=1e-12
        )

    def test_single_valid_factor_gets_full_weight(self):
        rows = (FactorDistribution("only", (0.5, 0.5, 0.0, 0.0, 0.0)),)
        profile, _ = build_weight_profile(rows, SCALE, policy="strict")
        assert profile.weights == (1.0,)

    def test_renormalize_is_idempotent(self):
        profile, diagnostics = build_weight_profile(
            self.full_rows(), SCALE, policy="renormalize"
        )
        from provrisk.core import renormalize_distribution

        flagged = {d.factor_id for d in diagnostics}
        cleaned = tuple(
            renormalize_distribution(dist) if dist.factor_id in flagged else dist
            for dist in self.full_rows()
        )
        again, again_diags = build_weight_profile(cleaned, SCALE, policy="renormalize")
        assert again_diags == []
        for got, want in zip(again.weights, profile.weights):
            assert got == pytest.approx(want, abs=1e-12)

    def test_unknown_policy_rejected(self):
        from provrisk.errors import DomainError

        with pytest.raises(DomainError):
            build_weight_profile(self.full_rows(), SCALE, policy="ignore")
