"""Console entry point: run the model matrix and write JSON/CSV outputs."""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .measure import DEFAULT_TARGETS, run_model_matrix


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="model-matrix",
        description=(
            "Measure token counts and CPU latencies of small causal language "
            "models over a fixed raw/compact string pair."
        ),
    )
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument(
        "--models",
        help="comma-separated subset of the default model list "
        f"({', '.join(t.name for t in DEFAULT_TARGETS)})",
    )
    args = parser.parse_args(argv)

    targets = list(DEFAULT_TARGETS)
    if args.models:
        by_name = {t.name: t for t in DEFAULT_TARGETS}
        names = [n.strip() for n in args.models.split(",") if n.strip()]
        unknown = [n for n in names if n not in by_name]
        if unknown:
            print(f"model-matrix: unknown models: {', '.join(unknown)}", file=sys.stderr)
            return 2
        targets = [by_name[n] for n in names]

    try:
        results = run_model_matrix(targets, args.out)
    except OSError as exc:
        print(f"model-matrix: {exc}", file=sys.stderr)
        return 1
    # Rows can fail individually; succeed only if something was measured.
    return 0 if results else 1


if __name__ == "__main__":
    sys.exit(main())
