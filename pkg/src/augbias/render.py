"""Markdown rendering of the JSON documents emitted by the pipeline."""
from __future__ import annotations

from .errors import FormatError


def _table(header, rows):
    lines = ["| " + " | ".join(header) + " |",
             "| " + " | ".join("---" for _ in header) + " |"]
    for row in rows:
        lines.append("| " + " | ".join(str(c) for c in row) + " |")
    return "\n".join(lines)


def _num(value, digits=4):
    if value is None:
        return "--"
    return f"{value:.{digits}f}"


def _render_metrics(doc):
    strengths = doc["strengths"]
    out = ["# Per-class metrics", ""]
    for mode, per_class in sorted(doc["accuracy"].items()):
        out.append(f"## Accuracy ({mode})")
        rows = [
            [cls] + [_num(per_class[cls][format(s, 'g')]["mean"]) for s in strengths]
            for cls in sorted(per_class)
        ]
        out.append(_table(["class"] + [f"s={s:g}%" for s in strengths], rows))
        out.append("")
    for name, field in [("False positives", "fp"), ("False negatives", "fn")]:
        for mode, per_class in sorted(doc[field].items()):
            out.append(f"## {name} ({mode})")
            rows = [
                [cls] + [_num(per_class[cls][format(s, 'g')]["mean"], 2) for s in strengths]
                for cls in sorted(per_class)
            ]
            out.append(_table(["class"] + [f"s={s:g}%" for s in strengths], rows))
            out.append("")
    return "\n".join(out)


def _render_confusions(doc):
    out = ["# Confusion growth", ""]
    rows = [
        [p["from"], p["to"], _num(p["delta_cr"]), _num(p["delta_cr_star"])]
        for p in doc["pairs"]
    ]
    out.append(_table(["from", "to", "delta CR", "delta CR*"], rows))
    out.append("")
    return "\n".join(out)


def _render_report(doc):
    out = ["# Confusion report", "", "## Category distribution", ""]
    rows = [
        [cat, _num(frac, 3)]
        for cat, frac in sorted(doc["category_distribution"].items())
    ]
    out.append(_table(["category", "fraction"], rows))
    out.append("")
    for entry in doc["entries"]:
        out.append(f"## {entry['class']} (accuracy drop {_num(entry['delta_acc'])})")
        out.append("")
        if not entry["partners"]:
            out.append("No confused partners above the cutoff.")
            out.append("")
            continue
        rows = [
            [
                p["partner"], _num(p["delta_cr"]), _num(p["delta_cr_star"]),
                _num(p["c_kl"], 2), _num(p["iou"], 2),
                _num(p["tree_sim"], 2), _num(p["embed_sim"], 2),
                p["category"] or "--",
            ]
            for p in entry["partners"]
        ]
        out.append(
            _table(
                ["partner", "delta CR", "delta CR*", "C_kl", "IoU",
                 "tree sim", "embed sim", "category"],
                rows,
            )
        )
        out.append("")
    return "\n".join(out)


def _render_policy(doc):
    out = ["# Augmentation policy", "",
           f"Default strength: {doc['default_strength']:g}%", ""]
    if doc["overrides"]:
        rows = [
            [cls, "no augmentation" if s is None else f"{s:g}%"]
            for cls, s in sorted(doc["overrides"].items())
        ]
        out.append(_table(["class", "strength"], rows))
    else:
        out.append("No per-class overrides.")
    out.append("")
    return "\n".join(out)


def _render_comparison(doc):
    out = ["# Intervention comparison", "",
           f"Affected classes: {', '.join(doc['affected_classes'])}", ""]
    rows = [
        [
            r["policy_name"],
            f"{_num(r['overall'])} ± {_num(r['overall_sem'])}",
            f"{_num(r['affected'])} ± {_num(r['affected_sem'])}",
            f"{_num(r['remaining'])} ± {_num(r['remaining_sem'])}",
        ]
        for r in doc["rows"]
    ]
    out.append(_table(["policy", "overall", "affected", "remaining"], rows))
    out.append("")
    return "\n".join(out)


_RENDERERS = {
    "metrics": _render_metrics,
    "confusions": _render_confusions,
    "report": _render_report,
    "policy": _render_policy,
    "comparison": _render_comparison,
}


def render_markdown(doc: dict) -> str:
    kind = doc.get("kind")
    try:
        renderer = _RENDERERS[kind]
    except KeyError:
        raise FormatError(f"cannot render document kind {kind!r}") from None
    return renderer(doc)
