"""Command-line pipeline tying the analysis modules together.

Exit codes: 0 on success, 1 on input/validation errors, 2 on internal
errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import formats, render
from .errors import AugbiasError
from .metrics import (
    MULTILABEL,
    ORIGINAL,
    compute_all,
    confusion_rates,
)
from .policy import baseline_remove_augmentation, build_policy
from .simulate import (
    canonical_scenario,
    config_from_dict,
    config_to_dict,
    intervention_experiment,
    sweep,
)
from .taxonomy import CategoryThresholds, ReportConfig, confusion_report


def _mode(value: str) -> str:
    return {"original": ORIGINAL, "real": MULTILABEL}[value]


def _load_inputs(args):
    log = formats.parse_prediction_log(args.log, lax=getattr(args, "lax", False))
    ann = formats.parse_annotations(
        args.original,
        getattr(args, "multilabel", None),
        getattr(args, "counts", None),
    )
    return log, ann


def _input_digests(args, names):
    return {
        name: getattr(args, name)
        for name in names
        if getattr(args, name, None) is not None
    }


def cmd_evaluate(args):
    log, ann = _load_inputs(args)
    curves = compute_all(log, ann)
    manifest = formats.build_manifest(
        "evaluate", _input_digests(args, ["log", "original", "multilabel", "counts"])
    )
    formats.write_document(formats.metric_curves_to_document(curves, manifest), args.output)


def cmd_confusions(args):
    log, ann = _load_inputs(args)
    conf = confusion_rates(log, ann)
    manifest = formats.build_manifest(
        "confusions", _input_digests(args, ["log", "original"])
    )
    formats.write_document(
        formats.confusions_to_document(conf, manifest, min_delta_cr=args.min_delta_cr),
        args.output,
    )


def cmd_categorize(args):
    conf = formats.confusions_from_document(
        formats.read_document(args.confusions, kind="confusions")
    )
    curves = formats.metric_curves_from_document(
        formats.read_document(args.metrics, kind="metrics")
    )
    ann = formats.parse_annotations(args.original, args.multilabel)
    tree = formats.parse_taxonomy(args.taxonomy) if args.taxonomy else None
    table = formats.parse_embeddings(args.embeddings) if args.embeddings else None
    config = ReportConfig(
        mode=_mode(args.mode),
        top_n=args.top_n,
        min_drop=args.min_drop if args.top_n is None else None,
        min_delta_cr=args.min_delta_cr,
        exclude_subtree=args.exclude_subtree,
        thresholds=CategoryThresholds(
            c=args.t_cooccur, iou=args.t_iou, tree=args.t_tree, embed=args.t_embed
        ),
    )
    report = confusion_report(conf, curves, ann, tree, table, config)
    manifest = formats.build_manifest(
        "categorize",
        _input_digests(args, ["confusions", "metrics", "original", "multilabel",
                              "taxonomy", "embeddings"]),
    )
    formats.write_document(formats.report_to_document(report, manifest), args.output)


def cmd_policy(args):
    curves = formats.metric_curves_from_document(
        formats.read_document(args.metrics, kind="metrics")
    )
    mode = _mode(args.mode)
    if args.baseline == "remove":
        from .metrics import affected_classes

        affected = affected_classes(curves, mode, top_n=args.m)
        policy = baseline_remove_augmentation(affected, strongest=curves.strongest)
    else:
        policy = build_policy(curves, args.m, mode)
    manifest = formats.build_manifest("policy", _input_digests(args, ["metrics"]))
    formats.write_document(formats.policy_to_document(policy, manifest), args.output)


def _load_sim_config(args):
    if args.config is None:
        return canonical_scenario()
    data = json.loads(Path(args.config).read_text(encoding="utf-8"))
    return config_from_dict(data)


def cmd_simulate(args):
    config = _load_sim_config(args)
    log, ann = sweep(config)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    formats.write_prediction_log(log, out / "predictions.jsonl")
    formats.write_annotations(
        ann, out / "original.jsonl", out / "multilabel.jsonl", out / "counts.tsv"
    )
    manifest = formats.build_manifest(
        "simulate", config_hash=formats.hash_config(config_to_dict(config))
    )
    formats.write_document(
        {"kind": "run_manifest", "format_version": formats.FORMAT_VERSION,
         "manifest": manifest},
        out / "manifest.json",
    )


def cmd_intervene(args):
    config = _load_sim_config(args)
    result = intervention_experiment(config, m=args.m, affected_top_n=args.top_n)
    manifest = formats.build_manifest(
        "intervene", config_hash=formats.hash_config(config_to_dict(config))
    )
    doc = {
        "kind": "comparison",
        "format_version": formats.FORMAT_VERSION,
        "manifest": manifest,
        "affected_classes": list(result.affected_classes),
        "rows": [
            {
                "policy_name": r.policy_name,
                "overall": r.overall, "overall_sem": r.overall_sem,
                "affected": r.affected, "affected_sem": r.affected_sem,
                "remaining": r.remaining, "remaining_sem": r.remaining_sem,
            }
            for r in result.rows
        ],
    }
    formats.write_document(doc, args.output)


def cmd_report(args):
    doc = formats.read_document(args.input)
    markdown = render.render_markdown(doc)
    if args.output == "-":
        sys.stdout.write(markdown)
    else:
        Path(args.output).write_text(markdown, encoding="utf-8")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="augbias",
        description="Class-level bias analysis for data augmentation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", help="compute per-class metrics from a log")
    p.add_argument("--log", required=True)
    p.add_argument("--original", required=True)
    p.add_argument("--multilabel")
    p.add_argument("--counts")
    p.add_argument("--lax", action="store_true", help="ignore unknown log fields")
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("confusions", help="compute confusion-rate growth")
    p.add_argument("--log", required=True)
    p.add_argument("--original", required=True)
    p.add_argument("--lax", action="store_true")
    p.add_argument("--min-delta-cr", type=float, default=0.025)
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=cmd_confusions)

    p = sub.add_parser("categorize", help="categorize confused class pairs")
    p.add_argument("--confusions", required=True)
    p.add_argument("--metrics", required=True)
    p.add_argument("--original", required=True)
    p.add_argument("--multilabel", required=True)
    p.add_argument("--taxonomy")
    p.add_argument("--embeddings")
    p.add_argument("--mode", choices=["original", "real"], default="original")
    p.add_argument("--top-n", type=int)
    p.add_argument("--min-drop", type=float, default=0.05)
    p.add_argument("--min-delta-cr", type=float, default=0.025)
    p.add_argument("--exclude-subtree")
    p.add_argument("--t-cooccur", type=float, default=CategoryThresholds.c)
    p.add_argument("--t-iou", type=float, default=CategoryThresholds.iou)
    p.add_argument("--t-tree", type=float, default=CategoryThresholds.tree)
    p.add_argument("--t-embed", type=float, default=CategoryThresholds.embed)
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=cmd_categorize)

    p = sub.add_parser("policy", help="build a class-conditional policy")
    p.add_argument("--metrics", required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--mode", choices=["original", "real"], default="original")
    p.add_argument("--baseline", choices=["remove"])
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=cmd_policy)

    p = sub.add_parser("simulate", help="run the simulator sweep")
    p.add_argument("--config", help="JSON simulator config (default: canonical scenario)")
    p.add_argument("--output", "-o", required=True, help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("intervene", help="run the policy intervention comparison")
    p.add_argument("--config")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--top-n", type=int, default=1)
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=cmd_intervene)

    p = sub.add_parser("report", help="render a pipeline document as markdown")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except AugbiasError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError) as exc:
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
