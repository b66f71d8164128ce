"""File formats: JSON Lines logs and annotations, TSV taxonomy/embedding
tables, and the JSON documents emitted by the pipeline.

Logs and annotations are JSON Lines (one record per line, streamable).
Emitted documents carry a ``kind`` tag, a format version, and a run
manifest; serialization is deterministic (sorted keys) so identical inputs
produce byte-identical outputs up to the manifest timestamp.
"""
from __future__ import annotations

import datetime
import hashlib
import json
from pathlib import Path

from . import __version__
from .errors import FormatError, InputConsistencyError
from .metrics import (
    ConfusionCurves,
    CurvePoint,
    MetricCurves,
)
from .policy import AugPolicy
from .records import AnnotationSet, PredictionLog, PredictionRecord
from .taxonomy import ConfusionReport, ClassEntry, PartnerEntry, PairScores, EmbeddingTable, TaxonomyTree

FORMAT_VERSION = 1

_LOG_FIELDS = {"run", "s", "seed", "sample", "pred"}


def _iter_jsonl(path):
    path = Path(path)
    if not path.exists():
        raise FormatError("file not found", path=path)
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"invalid JSON: {exc}", path=path, line=lineno) from None
            if not isinstance(obj, dict):
                raise FormatError("record is not an object", path=path, line=lineno)
            if lineno == 1 and set(obj) == {"format_version"}:
                continue  # optional header line
            yield lineno, obj


def _require(obj, key, types, path, lineno):
    if key not in obj:
        raise FormatError(f"missing field {key!r}", path=path, line=lineno)
    value = obj[key]
    if not isinstance(value, types):
        raise FormatError(
            f"field {key!r} has wrong type {type(value).__name__}", path=path, line=lineno
        )
    return value


def parse_prediction_log(path, lax: bool = False) -> PredictionLog:
    """Parse a JSONL prediction log; strict by default (unknown fields and
    duplicate (strength, seed, sample) triples are errors)."""
    records = []
    seen = set()
    for lineno, obj in _iter_jsonl(path):
        if not lax:
            unknown = set(obj) - _LOG_FIELDS
            if unknown:
                raise FormatError(
                    f"unknown fields {sorted(unknown)}", path=path, line=lineno
                )
        run = _require(obj, "run", str, path, lineno)
        strength = _require(obj, "s", (int, float), path, lineno)
        seed = _require(obj, "seed", int, path, lineno)
        sample = _require(obj, "sample", str, path, lineno)
        pred = _require(obj, "pred", str, path, lineno)
        key = (float(strength), seed, sample)
        if key in seen:
            raise FormatError(
                f"duplicate prediction for s={strength} seed={seed} sample={sample!r}",
                path=path,
                line=lineno,
            )
        seen.add(key)
        records.append(
            PredictionRecord(run=run, strength=float(strength), seed=seed,
                             sample=sample, pred=pred)
        )
    return PredictionLog(records)


def write_prediction_log(log: PredictionLog, path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write(json.dumps({"format_version": FORMAT_VERSION}) + "\n")
        for rec in log.records:
            fh.write(
                json.dumps(
                    {"run": rec.run, "s": rec.strength, "seed": rec.seed,
                     "sample": rec.sample, "pred": rec.pred},
                    sort_keys=True,
                )
                + "\n"
            )


def parse_annotations(path_original, path_multilabel=None, path_counts=None) -> AnnotationSet:
    """Parse original-label JSONL, optional multi-label JSONL, and optional
    per-class train-count TSV into an annotation set."""
    original = {}
    for lineno, obj in _iter_jsonl(path_original):
        sample = _require(obj, "sample", str, path_original, lineno)
        label = _require(obj, "label", str, path_original, lineno)
        if sample in original:
            raise FormatError(f"duplicate sample {sample!r}", path=path_original, line=lineno)
        original[sample] = label
    multilabel = None
    if path_multilabel is not None:
        multilabel = {}
        for lineno, obj in _iter_jsonl(path_multilabel):
            sample = _require(obj, "sample", str, path_multilabel, lineno)
            labels = _require(obj, "labels", list, path_multilabel, lineno)
            if not all(isinstance(l, str) for l in labels):
                raise FormatError("labels must be strings", path=path_multilabel, line=lineno)
            if sample not in original:
                raise FormatError(
                    f"sample {sample!r} not in original labels",
                    path=path_multilabel,
                    line=lineno,
                )
            multilabel[sample] = frozenset(labels)
    counts = None
    if path_counts is not None:
        counts = {}
        for lineno, parts in _iter_tsv(path_counts, 2):
            cls, count = parts
            try:
                counts[cls] = int(count)
            except ValueError:
                raise FormatError(f"bad count {count!r}", path=path_counts, line=lineno) from None
    return AnnotationSet(original=original, multilabel=multilabel, train_counts=counts)


def write_annotations(ann: AnnotationSet, path_original, path_multilabel=None,
                      path_counts=None) -> None:
    with Path(path_original).open("w", encoding="utf-8") as fh:
        for sample in sorted(ann.original):
            fh.write(json.dumps({"label": ann.original[sample], "sample": sample},
                                sort_keys=True) + "\n")
    if path_multilabel is not None:
        if ann.multilabel is None:
            raise InputConsistencyError("annotation set has no multi-label map")
        with Path(path_multilabel).open("w", encoding="utf-8") as fh:
            for sample in sorted(ann.multilabel):
                fh.write(
                    json.dumps({"labels": sorted(ann.multilabel[sample]), "sample": sample},
                               sort_keys=True) + "\n")
    if path_counts is not None:
        if ann.train_counts is None:
            raise InputConsistencyError("annotation set has no train counts")
        with Path(path_counts).open("w", encoding="utf-8") as fh:
            for cls in sorted(ann.train_counts):
                fh.write(f"{cls}\t{ann.train_counts[cls]}\n")


def _iter_tsv(path, n_fields):
    path = Path(path)
    if not path.exists():
        raise FormatError("file not found", path=path)
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != n_fields:
                raise FormatError(
                    f"expected {n_fields} tab-separated fields, got {len(parts)}",
                    path=path,
                    line=lineno,
                )
            yield lineno, parts


def parse_taxonomy(path) -> TaxonomyTree:
    """TSV of child<TAB>parent rows; the root is the single row with an
    empty parent field."""
    parents = {}
    root = None
    for lineno, (child, parent) in _iter_tsv(path, 2):
        if parent == "":
            if root is not None:
                raise FormatError("multiple root declarations", path=path, line=lineno)
            root = child
            continue
        if child in parents:
            raise FormatError(f"duplicate child {child!r}", path=path, line=lineno)
        parents[child] = parent
    if root is None:
        raise FormatError("no root declared (row with empty parent)", path=path)
    return TaxonomyTree(parents, root)


def write_taxonomy(tree: TaxonomyTree, path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write(f"{tree.root}\t\n")
        for child in sorted(tree.parents):
            fh.write(f"{child}\t{tree.parents[child]}\n")


def parse_embeddings(path) -> EmbeddingTable:
    """TSV of token<TAB>comma-separated floats."""
    vectors = {}
    for lineno, (token, raw) in _iter_tsv(path, 2):
        try:
            vec = tuple(float(x) for x in raw.split(","))
        except ValueError:
            raise FormatError("bad vector component", path=path, line=lineno) from None
        if token in vectors:
            raise FormatError(f"duplicate token {token!r}", path=path, line=lineno)
        vectors[token] = vec
    return EmbeddingTable(vectors)


# ---------------------------------------------------------------------------
# JSON documents


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def build_manifest(command: str, inputs=None, config_hash: str | None = None) -> dict:
    manifest = {
        "toolkit_version": __version__,
        "command": command,
        "inputs": {
            str(name): sha256_file(path) for name, path in (inputs or {}).items()
        },
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    if config_hash is not None:
        manifest["config_hash"] = config_hash
    return manifest


def hash_config(data: dict) -> str:
    return hashlib.sha256(
        json.dumps(data, sort_keys=True).encode("utf-8")
    ).hexdigest()


def write_document(doc: dict, path) -> None:
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def read_document(path, kind: str | None = None) -> dict:
    path = Path(path)
    if not path.exists():
        raise FormatError("file not found", path=path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}", path=path) from None
    if kind is not None and doc.get("kind") != kind:
        raise FormatError(
            f"expected document kind {kind!r}, found {doc.get('kind')!r}", path=path
        )
    return doc


def _fmt_strength(s: float) -> str:
    return format(s, "g")


def _point_to_dict(point: CurvePoint) -> dict:
    return {"mean": point.mean, "sem": point.sem, "per_seed": list(point.per_seed)}


def _point_from_dict(data: dict) -> CurvePoint:
    return CurvePoint(
        mean=float(data["mean"]), sem=float(data["sem"]),
        per_seed=tuple(float(v) for v in data["per_seed"]),
    )


def _curves_to_dict(curves) -> dict:
    return {
        mode: {
            cls: {_fmt_strength(s): _point_to_dict(p) for s, p in points.items()}
            for cls, points in per_class.items()
        }
        for mode, per_class in curves.items()
    }


def _curves_from_dict(data, strengths) -> dict:
    by_key = {_fmt_strength(s): s for s in strengths}
    return {
        mode: {
            cls: {by_key[k]: _point_from_dict(p) for k, p in points.items()}
            for cls, points in per_class.items()
        }
        for mode, per_class in data.items()
    }


def metric_curves_to_document(curves: MetricCurves, manifest: dict) -> dict:
    return {
        "kind": "metrics",
        "format_version": FORMAT_VERSION,
        "manifest": manifest,
        "strengths": list(curves.strengths),
        "accuracy": _curves_to_dict(curves.acc),
        "fp": _curves_to_dict(curves.fp),
        "fn": _curves_to_dict(curves.fn),
    }


def metric_curves_from_document(doc: dict) -> MetricCurves:
    strengths = tuple(float(s) for s in doc["strengths"])
    curves = MetricCurves(strengths=strengths)
    curves.acc.update(_curves_from_dict(doc["accuracy"], strengths))
    curves.fp.update(_curves_from_dict(doc["fp"], strengths))
    curves.fn.update(_curves_from_dict(doc["fn"], strengths))
    return curves


def confusions_to_document(conf: ConfusionCurves, manifest: dict,
                           min_delta_cr: float = 0.0) -> dict:
    pairs = []
    for k, l in conf.pairs():
        d_cr = conf.delta_cr(k, l)
        d_star = conf.delta_cr_star(k, l)
        if d_cr < min_delta_cr and d_star < min_delta_cr:
            continue
        pairs.append(
            {
                "from": k,
                "to": l,
                "cr": {_fmt_strength(s): _point_to_dict(p)
                       for s, p in conf.curve(k, l).items()},
                "delta_cr": d_cr,
                "delta_cr_star": d_star,
            }
        )
    return {
        "kind": "confusions",
        "format_version": FORMAT_VERSION,
        "manifest": manifest,
        "strengths": list(conf.strengths),
        "classes": list(conf.classes),
        "min_delta_cr": min_delta_cr,
        "pairs": pairs,
    }


def confusions_from_document(doc: dict) -> ConfusionCurves:
    strengths = tuple(float(s) for s in doc["strengths"])
    by_key = {_fmt_strength(s): s for s in strengths}
    rates = {}
    for pair in doc["pairs"]:
        rates[(pair["from"], pair["to"])] = {
            by_key[k]: _point_from_dict(p) for k, p in pair["cr"].items()
        }
    return ConfusionCurves(strengths, tuple(doc["classes"]), rates)


def policy_to_document(policy: AugPolicy, manifest: dict) -> dict:
    doc = policy.to_dict()
    doc.update({"kind": "policy", "format_version": FORMAT_VERSION, "manifest": manifest})
    return doc


def policy_from_document(doc: dict) -> AugPolicy:
    return AugPolicy.from_dict(doc)


def report_to_document(report: ConfusionReport, manifest: dict) -> dict:
    entries = []
    for entry in report.entries:
        partners = []
        for p in entry.partners:
            partners.append(
                {
                    "partner": p.partner,
                    "delta_cr": p.delta_cr,
                    "delta_cr_star": p.delta_cr_star,
                    "c_kl": p.scores.c_kl,
                    "iou": p.scores.iou,
                    "tree_sim": p.scores.tree_sim,
                    "embed_sim": p.scores.embed_sim,
                    "category": p.category,
                }
            )
        entries.append(
            {"class": entry.class_id, "delta_acc": entry.delta_acc, "partners": partners}
        )
    return {
        "kind": "report",
        "format_version": FORMAT_VERSION,
        "manifest": manifest,
        "entries": entries,
        "category_distribution": report.category_distribution,
    }


def report_from_document(doc: dict) -> ConfusionReport:
    entries = []
    for e in doc["entries"]:
        partners = tuple(
            PartnerEntry(
                partner=p["partner"],
                delta_cr=float(p["delta_cr"]),
                delta_cr_star=float(p["delta_cr_star"]),
                scores=PairScores(
                    c_kl=p["c_kl"], iou=p["iou"],
                    tree_sim=p["tree_sim"], embed_sim=p["embed_sim"],
                ),
                category=p["category"],
            )
            for p in e["partners"]
        )
        entries.append(
            ClassEntry(class_id=e["class"], delta_acc=float(e["delta_acc"]),
                       partners=partners)
        )
    return ConfusionReport(
        entries=tuple(entries),
        category_distribution=dict(doc["category_distribution"]),
    )
