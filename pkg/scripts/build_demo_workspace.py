"""Materialize the bundled snapshot into a workspace directory.

Usage: python scripts/build_demo_workspace.py [path]

Defaults to ./demo-workspace. The result is immediately usable by the
CLI and the HTTP service: both panel surveys, the weight profile built
from the recorded mean scores, and one assessed provider.
"""

import sys
from pathlib import Path

from provrisk import dataset


def main() -> int:
    root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo-workspace")
    if root.exists():
        print(f"refusing to touch existing path {root}", file=sys.stderr)
        return 1
    workspace = dataset.write_demo_workspace(root)
    print(f"workspace ready at {workspace.root}")
    print(f"  factors:   {len(workspace.load_catalog())}")
    print(f"  providers: {sorted(workspace.load_assessments())}")
    print(f"try: provrisk score --workspace {workspace.root}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
