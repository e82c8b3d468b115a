"""File-backed workspace persistence.

A workspace is a directory of plain-text files sized for desk-scale data
(a handful of factors, up to a few hundred providers):

* ``workspace.json``   schema version plus catalog/survey version counters
* ``scale.json``       pocket borders
* ``factors.json``     factor catalog, file order is canonical
* ``survey_<panel>.csv``  fraction rows, header ``factor_id,q1..qn``
* ``weights.json``     weight profile with its own version counter
* ``assessments.csv``  provider scores, header ``provider_id,factor_id,b``
* ``assessment_log.jsonl``  append-only revision log; every entry references
  the weight-profile version it was scored against

Weight profiles change rarely (external panel surveys), assessments change
all the time, which is why only assessments get an append-only revision
log. All writes go through write-then-atomic-replace, so a reader never
observes a half-written file. Single writer, many readers.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable

from . import core
from .core import (
    FactorDistribution,
    PocketScale,
    ProviderAssessment,
    RiskFactor,
    WeightProfile,
)
from .errors import IntegrityError, ParseError, SchemaVersionError, StructuralError
from .panels import PANELS, PanelSurvey

SCHEMA_VERSION = 1

META_FILE = "workspace.json"
SCALE_FILE = "scale.json"
FACTORS_FILE = "factors.json"
WEIGHTS_FILE = "weights.json"
ASSESSMENTS_FILE = "assessments.csv"
LOG_FILE = "assessment_log.jsonl"


def _survey_file(panel: str) -> str:
    return f"survey_{panel}.csv"


def _atomic_write(path: Path, data: str):
    """Write via a temp file in the same directory, then atomically swap."""
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(data)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_json(path: Path):
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc


def _dump_json(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


@dataclass(frozen=True)
class RevisionEntry:
    """One append-only log record for a saved assessment."""

    timestamp: datetime
    provider_id: str
    weights_version: int


class Workspace:
    """Handle on one workspace directory. Does no I/O until asked."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def _path(self, name: str) -> Path:
        return self.root / name

    # -- metadata and version counters ------------------------------------

    def _read_meta(self) -> dict:
        meta = _read_json(self._path(META_FILE))
        version = meta.get("schema_version")
        if version != SCHEMA_VERSION:
            raise SchemaVersionError(
                f"{self._path(META_FILE)}: schema version {version!r}, "
                f"this build understands {SCHEMA_VERSION}"
            )
        return meta

    def _write_meta(self, meta: dict):
        _atomic_write(self._path(META_FILE), _dump_json(meta))

    @property
    def catalog_version(self) -> int:
        return self._read_meta()["catalog_version"]

    def survey_version(self, panel: str) -> int:
        return self._read_meta()["survey_versions"].get(panel, 0)

    # -- scale ------------------------------------------------------------

    def load_scale(self) -> PocketScale:
        payload = _read_json(self._path(SCALE_FILE))
        if not isinstance(payload, dict) or "borders" not in payload:
            raise ParseError(f"{self._path(SCALE_FILE)}: expected an object with 'borders'")
        return PocketScale(tuple(payload["borders"]))

    def save_scale(self, scale: PocketScale):
        _atomic_write(self._path(SCALE_FILE), _dump_json({"borders": list(scale.borders)}))

    # -- factor catalog ---------------------------------------------------

    def load_catalog(self) -> tuple[RiskFactor, ...]:
        payload = _read_json(self._path(FACTORS_FILE))
        if not isinstance(payload, list):
            raise ParseError(f"{self._path(FACTORS_FILE)}: expected a list of factors")
        factors = []
        for i, entry in enumerate(payload):
            try:
                factors.append(
                    RiskFactor(
                        id=entry["id"],
                        name=entry["name"],
                        category=entry.get("category", "uncategorized"),
                    )
                )
            except (KeyError, TypeError) as exc:
                raise ParseError(
                    f"{self._path(FACTORS_FILE)}: entry {i}: missing field {exc}"
                ) from exc
        return core.check_catalog(factors)

    def save_catalog(self, factors: Iterable[RiskFactor]) -> int:
        catalog = core.check_catalog(factors)
        _atomic_write(
            self._path(FACTORS_FILE),
            _dump_json(
                [{"id": f.id, "name": f.name, "category": f.category} for f in catalog]
            ),
        )
        meta = self._read_meta()
        meta["catalog_version"] += 1
        self._write_meta(meta)
        return meta["catalog_version"]

    # -- panel surveys ----------------------------------------------------

    def load_survey(self, panel: str) -> PanelSurvey:
        if panel not in PANELS:
            raise StructuralError(f"unknown panel {panel!r}; expected one of {PANELS}")
        path = self._path(_survey_file(panel))
        scale = self.load_scale()
        catalog = self.load_catalog()
        expected_header = ["factor_id"] + [f"q{i + 1}" for i in range(scale.n)]
        rows: dict[str, FactorDistribution] = {}
        with open(path, encoding="utf-8", newline="") as handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            if header != expected_header:
                raise ParseError(
                    f"{path}:1: bad header {header!r}, expected {expected_header!r}"
                )
            for line_no, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != scale.n + 1:
                    raise ParseError(
                        f"{path}:{line_no}: expected {scale.n} fractions, found {len(row) - 1}"
                    )
                factor_id = row[0]
                try:
                    fractions = tuple(float(cell) for cell in row[1:])
                except ValueError as exc:
                    raise ParseError(f"{path}:{line_no}: non-numeric fraction: {exc}") from exc
                if factor_id in rows:
                    raise ParseError(f"{path}:{line_no}: duplicate row for factor {factor_id!r}")
                rows[factor_id] = FactorDistribution(factor_id=factor_id, fractions=fractions)
        catalog_ids = [f.id for f in catalog]
        missing = [fid for fid in catalog_ids if fid not in rows]
        extra = [fid for fid in rows if fid not in set(catalog_ids)]
        if missing or extra:
            raise IntegrityError(
                f"{path}: survey does not match the catalog "
                f"(missing {missing}, unknown {extra})"
            )
        captured_at = datetime.fromtimestamp(path.stat().st_mtime, tz=timezone.utc)
        return PanelSurvey(
            panel=panel,
            distributions=tuple(rows[fid] for fid in catalog_ids),
            captured_at=captured_at,
        )

    def save_survey(self, survey: PanelSurvey) -> int:
        scale = self.load_scale()
        catalog = self.load_catalog()
        core.ensure_factor_cover(
            [f.id for f in catalog], survey.factor_ids, f"{survey.panel} survey"
        )
        if len(survey.distributions[0].fractions) != scale.n:
            raise StructuralError(
                f"{survey.panel} survey rows have {len(survey.distributions[0].fractions)} "
                f"fractions, scale has {scale.n} pockets"
            )
        by_id = {d.factor_id: d for d in survey.distributions}
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["factor_id"] + [f"q{i + 1}" for i in range(scale.n)])
        for factor in catalog:
            dist = by_id[factor.id]
            writer.writerow([factor.id] + [repr(q) for q in dist.fractions])
        _atomic_write(self._path(_survey_file(survey.panel)), buffer.getvalue())
        meta = self._read_meta()
        meta["survey_versions"][survey.panel] = meta["survey_versions"].get(survey.panel, 0) + 1
        self._write_meta(meta)
        return meta["survey_versions"][survey.panel]

    # -- weight profile ---------------------------------------------------

    def has_weights(self) -> bool:
        return self._path(WEIGHTS_FILE).exists()

    def weights_version(self) -> int:
        if not self.has_weights():
            return 0
        return _read_json(self._path(WEIGHTS_FILE))["version"]

    def load_weights(self) -> tuple[WeightProfile, int]:
        path = self._path(WEIGHTS_FILE)
        payload = _read_json(path)
        for field in ("version", "c", "alpha"):
            if field not in payload:
                raise ParseError(f"{path}: missing field {field!r}")
        ids = tuple(payload["c"].keys())
        if tuple(payload["alpha"].keys()) != ids:
            raise ParseError(f"{path}: 'c' and 'alpha' list different factors")
        profile = WeightProfile(
            factor_ids=ids,
            mean_scores=tuple(payload["c"][fid] for fid in ids),
            weights=tuple(payload["alpha"][fid] for fid in ids),
        )
        return profile, payload["version"]

    def save_weights(self, profile: WeightProfile) -> int:
        version = self.weights_version() + 1
        payload = {
            "version": version,
            "c": {fid: c for fid, c in zip(profile.factor_ids, profile.mean_scores)},
            "alpha": {fid: a for fid, a in zip(profile.factor_ids, profile.weights)},
        }
        _atomic_write(self._path(WEIGHTS_FILE), _dump_json(payload))
        return version

    # -- provider assessments ---------------------------------------------

    def load_assessments(self) -> dict[str, ProviderAssessment]:
        path = self._path(ASSESSMENTS_FILE)
        if not path.exists():
            return {}
        catalog_ids = [f.id for f in self.load_catalog()]
        known = set(catalog_ids)
        scores: dict[str, dict[str, int]] = {}
        with open(path, encoding="utf-8", newline="") as handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            if header != ["provider_id", "factor_id", "b"]:
                raise ParseError(
                    f"{path}:1: bad header {header!r}, expected ['provider_id', 'factor_id', 'b']"
                )
            for line_no, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != 3:
                    raise ParseError(f"{path}:{line_no}: expected 3 columns, found {len(row)}")
                provider_id, factor_id, raw = row
                try:
                    score = int(raw)
                except ValueError as exc:
                    raise ParseError(f"{path}:{line_no}: score {raw!r} is not an integer") from exc
                if not core.SCORE_MIN <= score <= core.SCORE_MAX:
                    raise ParseError(
                        f"{path}:{line_no}: score {score} outside "
                        f"{core.SCORE_MIN}..{core.SCORE_MAX}"
                    )
                if factor_id not in known:
                    raise IntegrityError(
                        f"{path}:{line_no}: unknown factor {factor_id!r}"
                    )
                per_provider = scores.setdefault(provider_id, {})
                if factor_id in per_provider:
                    raise ParseError(
                        f"{path}:{line_no}: duplicate score for {provider_id!r}/{factor_id!r}"
                    )
                per_provider[factor_id] = score
        assessments: dict[str, ProviderAssessment] = {}
        for provider_id, per_provider in scores.items():
            missing = [fid for fid in catalog_ids if fid not in per_provider]
            if missing:
                raise IntegrityError(
                    f"{path}: provider {provider_id!r} has no score for {missing}"
                )
            ordered = {fid: per_provider[fid] for fid in catalog_ids}
            assessments[provider_id] = ProviderAssessment(provider_id=provider_id, scores=ordered)
        return assessments

    def save_assessment(self, assessment: ProviderAssessment) -> int:
        """Upsert one provider's scores and append a revision log entry."""
        catalog_ids = [f.id for f in self.load_catalog()]
        core.ensure_factor_cover(
            catalog_ids, assessment.scores, f"assessment {assessment.provider_id!r}"
        )
        weights_version = self.weights_version()
        if weights_version == 0:
            raise IntegrityError(
                "no weight profile saved yet; assessments must reference a profile version"
            )
        current = self.load_assessments()
        current[assessment.provider_id] = assessment
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["provider_id", "factor_id", "b"])
        for provider_id in sorted(current):
            for fid in catalog_ids:
                writer.writerow([provider_id, fid, current[provider_id].scores[fid]])
        _atomic_write(self._path(ASSESSMENTS_FILE), buffer.getvalue())
        entries = self._read_log_lines()
        entries.append(
            {
                "timestamp": datetime.now(timezone.utc).isoformat(),
                "provider_id": assessment.provider_id,
                "weights_version": weights_version,
            }
        )
        _atomic_write(
            self._path(LOG_FILE),
            "".join(json.dumps(e) + "\n" for e in entries),
        )
        return len(entries)

    def _read_log_lines(self) -> list[dict]:
        path = self._path(LOG_FILE)
        if not path.exists():
            return []
        entries = []
        with open(path, encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                try:
                    entries.append(json.loads(line))
                except json.JSONDecodeError as exc:
                    raise ParseError(f"{path}:{line_no}: invalid JSON: {exc}") from exc
        return entries

    def revisions(self) -> list[RevisionEntry]:
        entries = []
        for i, raw in enumerate(self._read_log_lines(), start=1):
            try:
                entries.append(
                    RevisionEntry(
                        timestamp=datetime.fromisoformat(raw["timestamp"]),
                        provider_id=raw["provider_id"],
                        weights_version=raw["weights_version"],
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"{self._path(LOG_FILE)}:{i}: bad entry: {exc}") from exc
        return entries

    @property
    def assessment_revision(self) -> int:
        return len(self._read_log_lines())

    # -- integrity ---------------------------------------------------------

    def verify_integrity(self):
        """Check cross-entity references; raises IntegrityError on breakage."""
        current = self.weights_version()
        for entry in self.revisions():
            if not 1 <= entry.weights_version <= current:
                raise IntegrityError(
                    f"assessment revision for {entry.provider_id!r} references weight "
                    f"profile v{entry.weights_version}, but the workspace "
                    f"{'has none' if current == 0 else f'only has v{current}'}"
                )
        if self._path(ASSESSMENTS_FILE).exists() and current == 0:
            raise IntegrityError("assessments exist but no weight profile is saved")


def init_workspace(
    root: str | Path, scale: PocketScale, catalog: Iterable[RiskFactor]
) -> Workspace:
    """Create a fresh workspace directory with a scale and factor catalog."""
    workspace = Workspace(root)
    workspace.root.mkdir(parents=True, exist_ok=True)
    if workspace._path(META_FILE).exists():
        raise IntegrityError(f"{workspace.root} already contains a workspace")
    workspace._write_meta(
        {
            "schema_version": SCHEMA_VERSION,
            "catalog_version": 0,
            "survey_versions": {panel: 0 for panel in PANELS},
        }
    )
    workspace.save_scale(scale)
    workspace.save_catalog(catalog)
    return workspace


def load_workspace(root: str | Path) -> Workspace:
    """Open an existing workspace, checking schema and referential integrity."""
    workspace = Workspace(root)
    meta_path = workspace._path(META_FILE)
    if not meta_path.exists():
        raise FileNotFoundError(f"{root} is not a workspace (no {META_FILE})")
    workspace._read_meta()
    workspace.verify_integrity()
    return workspace
