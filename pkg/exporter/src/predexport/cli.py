"""Command-line entry point for the prediction-log exporter.

Exit codes: 0 on success, 1 on unusable inputs, 2 on internal errors.
"""
from __future__ import annotations

import argparse
import logging
import sys

from .export import ExportError, export_predictions


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="predexport",
        description=(
            "Run image-classification checkpoints over a labeled validation "
            "folder and write prediction-log and annotation files"
        ),
    )
    parser.add_argument(
        "--checkpoints-glob", required=True,
        help="glob matching checkpoint files named <run>_s<strength>_seed<seed>.pt",
    )
    parser.add_argument(
        "--data", required=True,
        help="validation image folder (one subdirectory per class)",
    )
    parser.add_argument(
        "--real-labels",
        help="optional JSON file mapping sample ids to multi-label lists",
    )
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--batch-size", type=int, default=64)
    parser.add_argument("--workers", type=int, default=0)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        exported = export_predictions(
            checkpoints_glob=args.checkpoints_glob,
            data_dir=args.data,
            out_dir=args.out,
            real_labels=args.real_labels,
            batch_size=args.batch_size,
            workers=args.workers,
        )
    except ExportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - surfaced as a clean exit code
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 2
    print(f"exported {len(exported)} checkpoint(s) to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
