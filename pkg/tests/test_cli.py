import json

import pytest

from augbias.cli import main


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    """Run the full CLI pipeline once on a downsized simulator config."""
    root = tmp_path_factory.mktemp("pipeline")
    config = {
        "classes": [
            {"name": "whole", "composition": [[0, 0], [1, 8], [3, 12]],
             "train_count": 60, "val_count": 30},
            {"name": "part", "composition": [[1, 8]],
             "train_count": 60, "val_count": 30,
             "co_occur": [{"label": "whole", "placements": [[0, 0]], "prob": 0.3}]},
            {"name": "distractor", "composition": [[2, 4]],
             "train_count": 60, "val_count": 30},
        ],
        "grid": [8.0, 40.0, 100.0],
        "seeds": 2,
        "trainer": {"epochs": 10},
    }
    cfg = root / "config.json"
    cfg.write_text(json.dumps(config))
    sim = root / "sim"
    assert main(["simulate", "--config", str(cfg), "-o", str(sim)]) == 0
    assert main([
        "evaluate",
        "--log", str(sim / "predictions.jsonl"),
        "--original", str(sim / "original.jsonl"),
        "--multilabel", str(sim / "multilabel.jsonl"),
        "--counts", str(sim / "counts.tsv"),
        "-o", str(root / "metrics.json"),
    ]) == 0
    assert main([
        "confusions",
        "--log", str(sim / "predictions.jsonl"),
        "--original", str(sim / "original.jsonl"),
        "--min-delta-cr", "0",
        "-o", str(root / "confusions.json"),
    ]) == 0
    (root / "tree.tsv").write_text(
        "entity\t\nobject\tentity\nwhole\tobject\npart\tobject\ndistractor\tentity\n"
    )
    (root / "vec.tsv").write_text(
        "whole\t1.0,0.2\npart\t0.9,0.3\ndistractor\t-0.5,1.0\n"
    )
    assert main([
        "categorize",
        "--confusions", str(root / "confusions.json"),
        "--metrics", str(root / "metrics.json"),
        "--original", str(sim / "original.jsonl"),
        "--multilabel", str(sim / "multilabel.jsonl"),
        "--taxonomy", str(root / "tree.tsv"),
        "--embeddings", str(root / "vec.tsv"),
        "--top-n", "1", "--min-delta-cr", "0",
        "-o", str(root / "report.json"),
    ]) == 0
    assert main([
        "policy", "--metrics", str(root / "metrics.json"), "--m", "1",
        "-o", str(root / "policy.json"),
    ]) == 0
    return root, sim


def test_simulate_writes_log_and_annotations(pipeline):
    root, sim = pipeline
    for name in ("predictions.jsonl", "original.jsonl", "multilabel.jsonl",
                 "counts.tsv", "manifest.json"):
        assert (sim / name).exists()
    manifest = json.loads((sim / "manifest.json").read_text())
    assert "config_hash" in manifest["manifest"]


def test_evaluate_document(pipeline):
    root, _ = pipeline
    doc = json.loads((root / "metrics.json").read_text())
    assert doc["kind"] == "metrics"
    assert doc["strengths"] == [8.0, 40.0, 100.0]
    assert set(doc["accuracy"]) == {"original", "multilabel"}
    assert set(doc["accuracy"]["original"]) == {"whole", "part", "distractor"}


def test_confusions_document(pipeline):
    root, _ = pipeline
    doc = json.loads((root / "confusions.json").read_text())
    assert doc["kind"] == "confusions"
    pairs = {(p["from"], p["to"]) for p in doc["pairs"]}
    assert ("part", "whole") in pairs


def test_report_document(pipeline):
    root, _ = pipeline
    doc = json.loads((root / "report.json").read_text())
    assert doc["kind"] == "report"
    assert len(doc["entries"]) == 1
    entry = doc["entries"][0]
    assert entry["class"] == "part"
    partners = {p["partner"]: p for p in entry["partners"]}
    assert partners["whole"]["category"] is not None


def test_policy_document(pipeline):
    root, _ = pipeline
    doc = json.loads((root / "policy.json").read_text())
    assert doc["kind"] == "policy"
    assert doc["default_strength"] == 8.0
    assert doc["provenance"]["method"] == "fp_fn_tradeoff"


def test_policy_remove_baseline(pipeline, tmp_path):
    root, _ = pipeline
    out = tmp_path / "baseline.json"
    assert main([
        "policy", "--metrics", str(root / "metrics.json"), "--m", "1",
        "--baseline", "remove", "-o", str(out),
    ]) == 0
    doc = json.loads(out.read_text())
    assert doc["provenance"]["method"] == "remove_augmentation"
    assert list(doc["overrides"].values()) == [None]


def test_report_rendering(pipeline, tmp_path, capsys):
    root, _ = pipeline
    for name in ("metrics", "confusions", "report", "policy"):
        out = tmp_path / f"{name}.md"
        assert main(["report", "-i", str(root / f"{name}.json"),
                     "-o", str(out)]) == 0
        assert out.read_text().startswith("#")
    assert main(["report", "-i", str(root / "policy.json")]) == 0
    assert capsys.readouterr().out.startswith("#")


def test_intervene_command(tmp_path):
    config = {
        "classes": [
            {"name": "a", "composition": [[0, 2]], "train_count": 30, "val_count": 10},
            {"name": "b", "composition": [[1, 10]], "train_count": 30, "val_count": 10},
        ],
        "grid": [10.0, 100.0],
        "seeds": 2,
        "trainer": {"epochs": 5},
    }
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps(config))
    out = tmp_path / "comparison.json"
    assert main(["intervene", "--config", str(cfg), "--m", "1",
                 "--top-n", "1", "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["kind"] == "comparison"
    assert {r["policy_name"] for r in doc["rows"]} == {
        "uniform_strongest", "remove_augmentation", "fp_fn_policy"
    }
    md = tmp_path / "comparison.md"
    assert main(["report", "-i", str(out), "-o", str(md)]) == 0
    assert "uniform_strongest" in md.read_text()


def test_validation_errors_exit_1(tmp_path, capsys):
    missing = tmp_path / "absent.jsonl"
    code = main([
        "evaluate", "--log", str(missing), "--original", str(missing),
        "-o", str(tmp_path / "out.json"),
    ])
    assert code == 1
    assert "error:" in capsys.readouterr().err

    bad = tmp_path / "bad.jsonl"
    bad.write_text("not json\n")
    code = main([
        "evaluate", "--log", str(bad), "--original", str(bad),
        "-o", str(tmp_path / "out.json"),
    ])
    assert code == 1


def test_internal_errors_exit_2(tmp_path, capsys):
    # A structurally valid JSON document of the wrong shape trips an
    # internal KeyError rather than a validation error.
    doc = tmp_path / "doc.json"
    doc.write_text('{"kind": "metrics"}')
    code = main(["policy", "--metrics", str(doc), "-o", str(tmp_path / "p.json")])
    assert code == 2
    assert "internal error" in capsys.readouterr().err
