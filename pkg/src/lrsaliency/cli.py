"""Command line entry point: ``detect``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .errors import InvalidInputError
from .pipeline import PipelineConfig, load_config, run_dataset


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="detect",
        description="Coarse-to-fine salient object detection over a directory of images.")
    parser.add_argument("--input", required=True, help="directory of input images")
    parser.add_argument("--output", required=True, help="directory for saliency maps and reports")
    parser.add_argument("--gt", help="directory of ground-truth masks (enables metrics)")
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--stage", choices=["coarse", "refined"],
                        help="stop after the coarse map or run refinement (default refined)")
    parser.add_argument("--workers", type=int, help="parallel image workers (default 1)")
    parser.add_argument("--trace", action="store_true",
                        help="dump per-iteration solver traces as CSV")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config) if args.config else PipelineConfig()
        overrides = {"input_dir": args.input, "output_dir": args.output}
        if args.gt:
            overrides["gt_dir"] = args.gt
        if args.stage:
            overrides["stage"] = args.stage
        if args.workers:
            overrides["worker_count"] = args.workers
        if args.trace:
            overrides["trace"] = True
        config = replace(config, **overrides)
        report, records = run_dataset(config)
    except (InvalidInputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    succeeded = sum(1 for r in records if r.ok)
    failed = len(records) - succeeded
    print(f"processed {succeeded}/{len(records)} images ({failed} failed)")
    if report is not None:
        print(f"mean WF={report.wf:.4f} OR={report.or_score:.4f} "
              f"AUC={report.auc:.4f} MAE={report.mae:.4f}")
    if succeeded == 0:
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
