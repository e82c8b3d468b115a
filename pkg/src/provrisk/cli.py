"""Batch front door: workspace setup, weight builds, scoring and reports.

Exit codes: 0 success, 2 rejected input (strict-policy failure, broken
references, values out of domain), 3 file-level trouble (missing or
unparseable workspace files).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import core, dataset, panels, reporting, store
from .errors import (
    EngineError,
    ParseError,
    SchemaVersionError,
    StrictPolicyError,
    UndefinedCorrelationError,
)

WORKSPACE_ENV = "RISK_WORKSPACE"

EXIT_OK = 0
EXIT_REJECTED = 2
EXIT_IO = 3


def _add_workspace_flag(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--workspace",
        default=os.environ.get(WORKSPACE_ENV),
        help=f"workspace directory (default: ${WORKSPACE_ENV})",
    )


def _require_workspace(args) -> store.Workspace:
    if not args.workspace:
        raise FileNotFoundError(f"no workspace given: pass --workspace or set ${WORKSPACE_ENV}")
    return store.load_workspace(args.workspace)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="provrisk",
        description="Integral risk scoring for outsourcing provider selection",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_init = sub.add_parser("init", help="create a workspace")
    _add_workspace_flag(p_init)
    p_init.add_argument(
        "--demo",
        action="store_true",
        help="seed with the bundled survey snapshot (9 factors, one provider)",
    )

    p_weights = sub.add_parser(
        "weights", help="merge panel surveys and rebuild the weight profile"
    )
    _add_workspace_flag(p_weights)
    p_weights.add_argument(
        "--policy",
        choices=("strict", "renormalize"),
        default="strict",
        help="what to do with fraction rows that do not sum to 1 (default strict)",
    )
    p_weights.add_argument(
        "--tolerance",
        type=float,
        default=core.DEFAULT_SUM_TOLERANCE,
        help="allowed |sum - 1| per fraction row (default %(default)s)",
    )
    p_weights.add_argument(
        "--consistency-threshold",
        type=float,
        default=panels.DEFAULT_CONSISTENCY_THRESHOLD,
        help="panel correlation below this is flagged inconsistent (default %(default)s)",
    )

    p_score = sub.add_parser("score", help="rank providers by integral risk")
    _add_workspace_flag(p_score)
    target = p_score.add_mutually_exclusive_group()
    target.add_argument("--provider", help="score a single provider")
    target.add_argument("--all", action="store_true", help="score every provider (default)")
    p_score.add_argument("--direction", choices=("min", "max"), default="min")
    p_score.add_argument("--format", choices=("table", "json", "csv"), default="table")

    p_report = sub.add_parser(
        "report", help="per-factor weight/relevance/contribution breakdown"
    )
    _add_workspace_flag(p_report)
    p_report.add_argument("--provider", required=True)
    p_report.add_argument("--out", help="output path (default: stdout)")
    p_report.add_argument("--format", choices=("csv", "svg"), default="csv")

    p_serve = sub.add_parser("serve", help="run the HTTP JSON API")
    _add_workspace_flag(p_serve)
    p_serve.add_argument("--port", type=int, default=8080)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--ui", help="directory with the built dashboard to serve at /")

    return parser


def _direction(flag: str) -> core.RankDirection:
    return "min-risk" if flag == "min" else "max-score"


def cmd_init(args) -> int:
    if not args.workspace:
        raise FileNotFoundError(f"no workspace given: pass --workspace or set ${WORKSPACE_ENV}")
    if args.demo:
        dataset.write_demo_workspace(args.workspace)
    else:
        store.init_workspace(args.workspace, dataset.demo_scale(), dataset.demo_catalog())
    print(f"initialized workspace at {args.workspace}")
    return EXIT_OK


def cmd_weights(args) -> int:
    workspace = _require_workspace(args)
    scale = workspace.load_scale()
    customer = workspace.load_survey("customer")
    provider = workspace.load_survey("provider")

    try:
        verdict = panels.panel_consistency(
            panels.survey_mean_scores(customer, scale),
            panels.survey_mean_scores(provider, scale),
            threshold=args.consistency_threshold,
        )
    except UndefinedCorrelationError as exc:
        # advisory only: a constant panel makes the correlation undefined,
        # but the panels can still be averaged
        print(f"panel consistency: undefined ({exc})")
    else:
        state = "consistent" if verdict.consistent else "INCONSISTENT"
        print(
            f"panel consistency: correlation {verdict.correlation:.3f} "
            f"(threshold {verdict.threshold:.3f}) -> {state}"
        )

    merged = panels.average_panels(customer, provider)
    try:
        profile, diagnostics = panels.build_weight_profile(
            merged, scale, policy=args.policy, tolerance=args.tolerance
        )
    except StrictPolicyError as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        for diag in exc.diagnostics:
            print(f"  invalid {diag.factor_id}: fractions sum {diag.total:.2f}", file=sys.stderr)
        return EXIT_REJECTED
    for diag in diagnostics:
        action = "renormalized" if diag.renormalized else "flagged"
        print(f"{action} {diag.factor_id}: fractions sum {diag.total:.2f}")
    version = workspace.save_weights(profile)
    print(f"wrote weight profile v{version} ({profile.m} factors)")
    return EXIT_OK


def _load_reports(workspace: store.Workspace, direction: core.RankDirection):
    profile, _ = workspace.load_weights()
    assessments = workspace.load_assessments()
    if not assessments:
        raise core.EmptyInputError("workspace has no provider assessments")
    ranked = core.rank_providers(profile, list(assessments.values()), direction)
    return [core.build_report(profile, assessments[pid]) for pid, _ in ranked]


def cmd_score(args) -> int:
    workspace = _require_workspace(args)
    names = reporting.factor_names(workspace.load_catalog())
    direction = _direction(args.direction)
    if args.provider:
        profile, _ = workspace.load_weights()
        assessments = workspace.load_assessments()
        if args.provider not in assessments:
            raise core.StructuralError(f"unknown provider {args.provider!r}")
        reports = [core.build_report(profile, assessments[args.provider])]
    else:
        reports = _load_reports(workspace, direction)
    if args.format == "json":
        payload = reporting.ranking_payload(reports, names, args.direction)
        print(json.dumps(payload, indent=2))
    elif args.format == "csv":
        print(reporting.ranking_csv(reports), end="")
    else:
        print(reporting.ranking_table(reports), end="")
    return EXIT_OK


def cmd_report(args) -> int:
    workspace = _require_workspace(args)
    names = reporting.factor_names(workspace.load_catalog())
    profile, _ = workspace.load_weights()
    assessments = workspace.load_assessments()
    if args.provider not in assessments:
        raise store.IntegrityError(f"no assessment for provider {args.provider!r}")
    report = core.build_report(profile, assessments[args.provider])
    if args.format == "svg":
        rendered = reporting.breakdown_svg(report, names)
    else:
        rendered = reporting.breakdown_csv(report, names)
    if args.out:
        Path(args.out).write_text(rendered, encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        print(rendered, end="")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    if not args.workspace:
        raise FileNotFoundError(f"no workspace given: pass --workspace or set ${WORKSPACE_ENV}")
    app = create_app(args.workspace, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "init": cmd_init,
        "weights": cmd_weights,
        "score": cmd_score,
        "report": cmd_report,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except (FileNotFoundError, OSError, ParseError, SchemaVersionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REJECTED


if __name__ == "__main__":
    sys.exit(main())
