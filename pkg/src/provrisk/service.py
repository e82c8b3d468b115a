"""HTTP JSON API over a single workspace.

Thin shell around the store and the scoring core: every request body is
converted to domain objects whose constructors enforce the invariants, so
the handlers themselves carry no validation logic.  Mutations serialize
through one process-wide lock; reads hit the committed files directly.

Status mapping: invariant violations 400, unknown ids 404, stale writes
and broken references 409, strict-policy survey rejections 422.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import core, reporting, store
from .core import (
    FactorDistribution,
    ProviderAssessment,
    RankDirection,
    StructuralError,
    validate_distribution,
)
from .errors import (
    EngineError,
    IntegrityError,
    ParseError,
    SchemaVersionError,
    StrictPolicyError,
    UndefinedCorrelationError,
)
from .panels import (
    PANELS,
    DEFAULT_CONSISTENCY_THRESHOLD,
    PanelSurvey,
    average_panels,
    build_weight_profile,
    panel_consistency,
    survey_mean_scores,
)


class SurveyRowBody(BaseModel):
    factor_id: str
    fractions: list[float]


class SurveyBody(BaseModel):
    rows: list[SurveyRowBody]
    expected_version: int | None = None


class WeightsBody(BaseModel):
    policy: str = "strict"
    tolerance: float = core.DEFAULT_SUM_TOLERANCE
    consistency_threshold: float = DEFAULT_CONSISTENCY_THRESHOLD


class AssessmentBody(BaseModel):
    scores: dict[str, int]
    expected_revision: int | None = None


class WhatifBody(BaseModel):
    provider_id: str
    overrides: dict[str, int] = Field(default_factory=dict)


def _status_for(exc: EngineError) -> int:
    if isinstance(exc, StrictPolicyError):
        return 422
    if isinstance(exc, IntegrityError):
        return 409
    if isinstance(exc, (ParseError, SchemaVersionError)):
        return 500
    return 400


def create_app(workspace_root, ui_dir=None) -> FastAPI:
    workspace = store.load_workspace(workspace_root)
    write_lock = threading.Lock()
    app = FastAPI(title="provrisk", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(EngineError)
    async def engine_error(request: Request, exc: EngineError):
        body = {"detail": str(exc)}
        if isinstance(exc, StrictPolicyError):
            body["diagnostics"] = [
                {"factor_id": d.factor_id, "total": d.total} for d in exc.diagnostics
            ]
        return JSONResponse(status_code=_status_for(exc), content=body)

    def _names():
        return reporting.factor_names(workspace.load_catalog())

    def _profile_payload(profile: core.WeightProfile, version: int) -> dict:
        return {
            "version": version,
            "c": dict(zip(profile.factor_ids, profile.mean_scores)),
            "alpha": dict(zip(profile.factor_ids, profile.weights)),
        }

    @app.get("/api/scale")
    def get_scale():
        return {"borders": list(workspace.load_scale().borders)}

    @app.get("/api/factors")
    def get_factors():
        return {
            "version": workspace.catalog_version,
            "factors": [
                {"id": f.id, "name": f.name, "category": f.category}
                for f in workspace.load_catalog()
            ],
        }

    @app.put("/api/surveys/{panel}")
    def put_survey(panel: str, body: SurveyBody):
        if panel not in PANELS:
            raise HTTPException(404, f"unknown panel {panel!r}; expected one of {PANELS}")
        with write_lock:
            if (
                body.expected_version is not None
                and body.expected_version != workspace.survey_version(panel)
            ):
                raise HTTPException(
                    409,
                    f"{panel} survey is at v{workspace.survey_version(panel)}, "
                    f"client expected v{body.expected_version}",
                )
            distributions = tuple(
                FactorDistribution(row.factor_id, tuple(row.fractions)) for row in body.rows
            )
            survey = PanelSurvey(panel, distributions)
            version = workspace.save_survey(survey)
            scale = workspace.load_scale()
        verdicts = [validate_distribution(d, scale) for d in distributions]
        return {
            "panel": panel,
            "version": version,
            "validation": [
                {"factor_id": v.factor_id, "ok": v.ok, "total": v.total} for v in verdicts
            ],
        }

    @app.post("/api/weights")
    def post_weights(body: WeightsBody):
        with write_lock:
            scale = workspace.load_scale()
            try:
                customer = workspace.load_survey("customer")
                provider = workspace.load_survey("provider")
            except FileNotFoundError as exc:
                raise HTTPException(409, f"cannot build weights: {exc}")
            try:
                verdict = panel_consistency(
                    survey_mean_scores(customer, scale),
                    survey_mean_scores(provider, scale),
                    threshold=body.consistency_threshold,
                )
            except UndefinedCorrelationError:
                # advisory check; a constant panel leaves it undefined
                verdict = None
            merged = average_panels(customer, provider)
            profile, diagnostics = build_weight_profile(
                merged, scale, policy=body.policy, tolerance=body.tolerance
            )
            version = workspace.save_weights(profile)
        payload = _profile_payload(profile, version)
        payload["consistency"] = {
            "correlation": verdict.correlation if verdict else None,
            "threshold": body.consistency_threshold,
            "consistent": verdict.consistent if verdict else None,
        }
        payload["diagnostics"] = [
            {"factor_id": d.factor_id, "total": d.total, "renormalized": d.renormalized}
            for d in diagnostics
        ]
        return payload

    @app.get("/api/weights")
    def get_weights():
        if not workspace.has_weights():
            raise HTTPException(404, "no weight profile saved yet")
        profile, version = workspace.load_weights()
        return _profile_payload(profile, version)

    @app.put("/api/providers/{provider_id}/assessment")
    def put_assessment(provider_id: str, body: AssessmentBody):
        with write_lock:
            if (
                body.expected_revision is not None
                and body.expected_revision != workspace.assessment_revision
            ):
                raise HTTPException(
                    409,
                    f"assessments are at revision {workspace.assessment_revision}, "
                    f"client expected {body.expected_revision}",
                )
            assessment = ProviderAssessment(provider_id, dict(body.scores))
            revision = workspace.save_assessment(assessment)
            profile, _ = workspace.load_weights()
        report = core.build_report(profile, assessment)
        return {
            "provider_id": provider_id,
            "revision": revision,
            "report": reporting.report_payload(report, _names()),
        }

    @app.get("/api/providers")
    def get_providers():
        if not workspace.has_weights():
            return {"revision": 0, "providers": []}
        profile, _ = workspace.load_weights()
        assessments = workspace.load_assessments()
        names = _names()
        return {
            "revision": workspace.assessment_revision,
            "providers": [
                reporting.report_payload(core.build_report(profile, assessments[pid]), names)
                for pid in sorted(assessments)
            ],
        }

    @app.get("/api/rank")
    def get_rank(direction: str = "min"):
        if direction not in ("min", "max"):
            raise HTTPException(400, f"direction must be 'min' or 'max', got {direction!r}")
        rank_direction: RankDirection = "min-risk" if direction == "min" else "max-score"
        if not workspace.has_weights():
            return {"direction": direction, "ranking": []}
        profile, _ = workspace.load_weights()
        assessments = workspace.load_assessments()
        if not assessments:
            return {"direction": direction, "ranking": []}
        ranked = core.rank_providers(profile, list(assessments.values()), rank_direction)
        reports = [core.build_report(profile, assessments[pid]) for pid, _ in ranked]
        return reporting.ranking_payload(reports, _names(), direction)

    @app.post("/api/whatif")
    def post_whatif(body: WhatifBody):
        assessments = workspace.load_assessments()
        if body.provider_id not in assessments:
            raise HTTPException(404, f"unknown provider {body.provider_id!r}")
        base = assessments[body.provider_id]
        scores = dict(base.scores)
        for fid, score in body.overrides.items():
            if fid not in scores:
                raise StructuralError(f"override names unknown factor {fid!r}")
            scores[fid] = score
        trial = ProviderAssessment(base.provider_id, scores)
        profile, _ = workspace.load_weights()
        report = core.build_report(profile, trial)
        return reporting.report_payload(report, _names())

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
