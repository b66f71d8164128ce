import json

import pytest

from augbias import formats
from augbias.errors import FormatError, InputConsistencyError
from augbias.metrics import compute_all, confusion_rates
from augbias.policy import AugPolicy
from augbias.records import AnnotationSet
from augbias.simulate import canonical_scenario, sweep
from augbias.taxonomy import ReportConfig, confusion_report

from .conftest import to_annotations, to_log


def test_prediction_log_round_trip(tmp_path):
    log = to_log([(8.0, 0, "a0", "a"), (8.0, 0, "b0", "b"), (100.0, 1, "a0", "a")])
    path = tmp_path / "log.jsonl"
    formats.write_prediction_log(log, path)
    lines = path.read_text().splitlines()
    assert json.loads(lines[0]) == {"format_version": 1}
    parsed = formats.parse_prediction_log(path)
    assert parsed.records == log.records


def test_prediction_log_strict_rejects_unknown_fields(tmp_path):
    path = tmp_path / "log.jsonl"
    path.write_text(
        '{"run": "r", "s": 8, "seed": 0, "sample": "x", "pred": "a", "extra": 1}\n'
    )
    with pytest.raises(FormatError) as err:
        formats.parse_prediction_log(path)
    assert "extra" in str(err.value) and ":1:" in str(err.value)
    # lax mode tolerates the unknown field
    log = formats.parse_prediction_log(path, lax=True)
    assert len(log) == 1


def test_prediction_log_reports_line_numbers(tmp_path):
    path = tmp_path / "log.jsonl"
    path.write_text(
        '{"run": "r", "s": 8, "seed": 0, "sample": "x", "pred": "a"}\n'
        "not json\n"
    )
    with pytest.raises(FormatError) as err:
        formats.parse_prediction_log(path)
    assert ":2:" in str(err.value)


def test_prediction_log_rejects_duplicates_and_bad_strength(tmp_path):
    path = tmp_path / "log.jsonl"
    rec = '{"run": "r", "s": 8, "seed": 0, "sample": "x", "pred": "a"}\n'
    path.write_text(rec + rec)
    with pytest.raises(FormatError):
        formats.parse_prediction_log(path)
    path.write_text('{"run": "r", "s": 0, "seed": 0, "sample": "x", "pred": "a"}\n')
    with pytest.raises(InputConsistencyError):
        formats.parse_prediction_log(path)


def test_missing_file_is_format_error(tmp_path):
    with pytest.raises(FormatError):
        formats.parse_prediction_log(tmp_path / "absent.jsonl")
    with pytest.raises(FormatError):
        formats.read_document(tmp_path / "absent.json")


def test_annotations_round_trip(tmp_path):
    ann = AnnotationSet(
        original={"x0": "a", "x1": "b"},
        multilabel={"x0": frozenset({"a", "b"}), "x1": frozenset()},
        train_counts={"a": 100, "b": 1300},
    )
    p_orig = tmp_path / "orig.jsonl"
    p_ml = tmp_path / "ml.jsonl"
    p_counts = tmp_path / "counts.tsv"
    formats.write_annotations(ann, p_orig, p_ml, p_counts)
    parsed = formats.parse_annotations(p_orig, p_ml, p_counts)
    assert parsed.original == ann.original
    assert parsed.multilabel == ann.multilabel
    assert parsed.train_counts == ann.train_counts


def test_annotations_multilabel_must_reference_known_samples(tmp_path):
    p_orig = tmp_path / "orig.jsonl"
    p_ml = tmp_path / "ml.jsonl"
    p_orig.write_text('{"sample": "x0", "label": "a"}\n')
    p_ml.write_text('{"sample": "ghost", "labels": ["a"]}\n')
    with pytest.raises(FormatError):
        formats.parse_annotations(p_orig, p_ml)


def test_taxonomy_round_trip_and_root_rules(tmp_path):
    path = tmp_path / "tree.tsv"
    path.write_text("# child <tab> parent; empty parent marks the root\nroot\t\na\troot\nb\ta\n")
    tree = formats.parse_taxonomy(path)
    assert tree.root == "root" and tree.depth("b") == 3
    out = tmp_path / "tree2.tsv"
    formats.write_taxonomy(tree, out)
    assert formats.parse_taxonomy(out).parents == tree.parents

    path.write_text("a\troot\n")
    with pytest.raises(FormatError):
        formats.parse_taxonomy(path)  # no root row
    path.write_text("root\t\nother\t\n")
    with pytest.raises(FormatError):
        formats.parse_taxonomy(path)  # two roots


def test_embeddings_parse(tmp_path):
    path = tmp_path / "vec.tsv"
    path.write_text("cat\t1.0,0.0\ndog\t0.5,0.5\n")
    table = formats.parse_embeddings(path)
    assert table.class_vector("cat") == (1.0, 0.0)
    path.write_text("cat\t1.0,oops\n")
    with pytest.raises(FormatError):
        formats.parse_embeddings(path)


def _small_outputs():
    log = to_log([
        (8.0, 0, "a0", "b"), (8.0, 0, "a1", "a"), (8.0, 0, "b0", "b"),
        (100.0, 0, "a0", "a"), (100.0, 0, "a1", "a"), (100.0, 0, "b0", "b"),
        (8.0, 1, "a0", "a"), (8.0, 1, "a1", "a"), (8.0, 1, "b0", "b"),
        (100.0, 1, "a0", "a"), (100.0, 1, "a1", "a"), (100.0, 1, "b0", "b"),
    ])
    ann = to_annotations(
        {"a0": "a", "a1": "a", "b0": "b"},
        {"a0": frozenset({"a"}), "a1": frozenset({"a"}), "b0": frozenset({"b"})},
    )
    return log, ann


def test_metric_curves_document_round_trip(tmp_path):
    log, ann = _small_outputs()
    curves = compute_all(log, ann)
    doc = formats.metric_curves_to_document(curves, manifest={})
    path = tmp_path / "metrics.json"
    formats.write_document(doc, path)
    loaded = formats.metric_curves_from_document(formats.read_document(path, "metrics"))
    assert loaded.strengths == curves.strengths
    assert loaded.acc == curves.acc
    assert loaded.fp == curves.fp and loaded.fn == curves.fn


def test_read_document_checks_kind(tmp_path):
    path = tmp_path / "doc.json"
    formats.write_document({"kind": "policy"}, path)
    with pytest.raises(FormatError):
        formats.read_document(path, kind="metrics")


def test_confusions_document_round_trip_and_filter(tmp_path):
    log, ann = _small_outputs()
    conf = confusion_rates(log, ann)
    doc = formats.confusions_to_document(conf, manifest={}, min_delta_cr=0.0)
    assert [p["from"] for p in doc["pairs"]] == ["a"]
    loaded = formats.confusions_from_document(doc)
    assert loaded.curve("a", "b")[8.0].per_seed == conf.curve("a", "b")[8.0].per_seed
    # above-threshold filter drops the pair entirely
    filtered = formats.confusions_to_document(conf, manifest={}, min_delta_cr=0.9)
    assert filtered["pairs"] == []


def test_policy_document_round_trip():
    policy = AugPolicy(default_strength=8.0, overrides={"a": 40.0, "b": None},
                       provenance={"method": "fp_fn_tradeoff", "m": 2})
    doc = formats.policy_to_document(policy, manifest={})
    assert doc["kind"] == "policy"
    assert formats.policy_from_document(doc) == policy


def test_report_document_round_trip():
    log, ann = _small_outputs()
    curves = compute_all(log, ann)
    conf = confusion_rates(log, ann)
    report = confusion_report(
        conf, curves, ann, None, None,
        ReportConfig(top_n=1, min_drop=None, min_delta_cr=0.0),
    )
    doc = formats.report_to_document(report, manifest={})
    loaded = formats.report_from_document(doc)
    assert loaded.entries == report.entries
    assert loaded.category_distribution == report.category_distribution


def test_manifest_contents(tmp_path):
    path = tmp_path / "input.txt"
    path.write_text("payload")
    manifest = formats.build_manifest("evaluate", {"log": path}, config_hash="ff")
    assert manifest["command"] == "evaluate"
    assert manifest["inputs"]["log"] == formats.sha256_file(path)
    assert manifest["config_hash"] == "ff"
    assert "timestamp" in manifest and "toolkit_version" in manifest


def test_documents_byte_identical_up_to_timestamp(tmp_path):
    log, ann = _small_outputs()
    paths = []
    for i in range(2):
        curves = compute_all(log, ann)
        doc = formats.metric_curves_to_document(
            curves, formats.build_manifest("evaluate")
        )
        p = tmp_path / f"m{i}.json"
        formats.write_document(doc, p)
        paths.append(p)
    docs = [json.loads(p.read_text()) for p in paths]
    for d in docs:
        d["manifest"].pop("timestamp")
    assert json.dumps(docs[0], sort_keys=True) == json.dumps(docs[1], sort_keys=True)


def test_simulator_output_round_trips_through_files(tmp_path):
    config = canonical_scenario()
    config = config.__class__(**{**config.__dict__, "seeds": 1, "grid": (8.0, 100.0)})
    log, ann = sweep(config)
    p_log = tmp_path / "log.jsonl"
    p_orig = tmp_path / "orig.jsonl"
    p_ml = tmp_path / "ml.jsonl"
    p_counts = tmp_path / "counts.tsv"
    formats.write_prediction_log(log, p_log)
    formats.write_annotations(ann, p_orig, p_ml, p_counts)
    log2 = formats.parse_prediction_log(p_log)
    ann2 = formats.parse_annotations(p_orig, p_ml, p_counts)
    assert compute_all(log2, ann2).acc == compute_all(log, ann).acc
