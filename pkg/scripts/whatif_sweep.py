"""Sensitivity sweep: vary one factor's score across 1..5 and watch r move.

Usage: python scripts/whatif_sweep.py <workspace> <provider> [factor]

Without a factor argument, sweeps every factor, one line per (factor,
score) pair. The slope of r over b equals the factor's weight, so the
output doubles as a quick check of which factors matter.
"""

import sys

from provrisk.core import ProviderAssessment, build_report
from provrisk.store import load_workspace


def main() -> int:
    if len(sys.argv) < 3:
        print(__doc__.strip(), file=sys.stderr)
        return 1
    workspace = load_workspace(sys.argv[1])
    provider_id = sys.argv[2]
    profile, _ = workspace.load_weights()
    assessments = workspace.load_assessments()
    if provider_id not in assessments:
        print(f"no assessment for {provider_id!r}", file=sys.stderr)
        return 1
    base = assessments[provider_id]
    factors = [sys.argv[3]] if len(sys.argv) > 3 else list(profile.factor_ids)

    baseline = build_report(profile, base).risk
    print(f"baseline r = {baseline:.4f}")
    print("factor,score,r,delta")
    for fid in factors:
        if fid not in base.scores:
            print(f"unknown factor {fid!r}", file=sys.stderr)
            return 1
        for b in range(1, 6):
            scores = dict(base.scores)
            scores[fid] = b
            r = build_report(profile, ProviderAssessment(provider_id, scores)).risk
            marker = " *" if b == base.scores[fid] else ""
            print(f"{fid},{b},{r:.4f},{r - baseline:+.4f}{marker}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
