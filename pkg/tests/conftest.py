import pytest

from provrisk import dataset
from provrisk.core import (
    FactorDistribution,
    PocketScale,
    ProviderAssessment,
    RiskFactor,
    WeightProfile,
    normalize_weights,
)
from provrisk.panels import PanelSurvey
from provrisk.store import init_workspace


@pytest.fixture
def demo_workspace(tmp_path):
    """The bundled nine-factor snapshot, fully materialized on disk."""
    root = tmp_path / "demo"
    return dataset.write_demo_workspace(root)


@pytest.fixture
def demo_root(demo_workspace):
    return str(demo_workspace.root)


@pytest.fixture
def two_factor_workspace(tmp_path):
    """Only the two snapshot rows whose fractions genuinely sum to 1."""
    root = tmp_path / "two"
    scale = dataset.demo_scale()
    catalog = tuple(
        RiskFactor(id=fid, name=name)
        for fid, name in dataset.FACTOR_NAMES
        if fid in dataset.CLEAN_FACTOR_IDS
    )
    workspace = init_workspace(root, scale, catalog)
    dists = tuple(
        FactorDistribution(fid, dataset.SURVEY_FRACTIONS[fid]) for fid in dataset.CLEAN_FACTOR_IDS
    )
    for panel in ("customer", "provider"):
        workspace.save_survey(PanelSurvey(panel=panel, distributions=dists))
    return workspace


@pytest.fixture
def single_factor_workspace(tmp_path):
    root = tmp_path / "single"
    scale = PocketScale((5.0, 10.0))
    workspace = init_workspace(root, scale, (RiskFactor(id="only", name="Only factor"),))
    dist = FactorDistribution("only", (0.4, 0.6))
    for panel in ("customer", "provider"):
        workspace.save_survey(PanelSurvey(panel=panel, distributions=(dist,)))
    workspace.save_weights(normalize_weights({"only": 8.0}))
    workspace.save_assessment(ProviderAssessment("solo", {"only": 3}))
    return workspace


def make_profile(weights_by_id: dict[str, float]) -> WeightProfile:
    """Profile straight from target weights (mean scores chosen to match)."""
    return normalize_weights(weights_by_id)
