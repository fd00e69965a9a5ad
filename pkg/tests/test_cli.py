import json

import pytest

from qasynth.cli import main

from .conftest import DATA_DIR


@pytest.fixture()
def pipeline(tmp_path):
    """Run ingest -> annotate -> index on the mini corpus."""
    store = tmp_path / "store.jsonl"
    annotated = tmp_path / "annotated.jsonl"
    index = tmp_path / "index.jsonl"
    assert main(["ingest", "--corpus", str(DATA_DIR / "mini_corpus.jsonl"),
                 "--out", str(store)]) == 0
    assert main(["annotate", "--store", str(store), "--heuristic",
                 "--gazetteer", str(DATA_DIR / "gazetteer.json"),
                 "--out", str(annotated)]) == 0
    assert main(["index", "--store", str(annotated), "--out", str(index)]) == 0
    return tmp_path, annotated, index


def test_generate_best_config(pipeline):
    tmp_path, annotated, index = pipeline
    train = tmp_path / "train.json"
    val = tmp_path / "val.json"
    rc = main(["generate", "--store", str(annotated), "--index", str(index),
               "--variant", "wh-b-a", "--mode", "both",
               "--use-retrieved", "true", "--size", "50", "--val-size", "5",
               "--seed", "3", "--out-train", str(train), "--out-val", str(val)])
    assert rc == 0
    data = json.loads(train.read_text())
    assert data["version"] == "1.1"
    n = sum(len(p["qas"]) for a in data["data"] for p in a["paragraphs"])
    assert n == 45
    nval = sum(len(p["qas"])
               for a in json.loads(val.read_text())["data"]
               for p in a["paragraphs"])
    assert nval == 5


def test_unknown_variant_is_usage_error(pipeline, capsys):
    tmp_path, annotated, index = pipeline
    rc = main(["generate", "--store", str(annotated), "--index", str(index),
               "--variant", "nonsense", "--out-train", str(tmp_path / "x.json")])
    assert rc == 1
    err = capsys.readouterr().err
    assert "cloze" in err and "wh-b-a" in err  # allowed list shown


def test_missing_required_flag_is_usage_error():
    assert main(["ingest", "--corpus", "x.jsonl"]) == 1


def test_data_error_exit_code(tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text("not json\n")
    assert main(["ingest", "--corpus", str(bad),
                 "--out", str(tmp_path / "out.jsonl")]) == 2


def test_annotate_needs_source(pipeline):
    tmp_path, annotated, _ = pipeline
    assert main(["annotate", "--store", str(annotated),
                 "--out", str(tmp_path / "y.jsonl")]) == 1


def test_evaluate_round_trip(pipeline, tmp_path, capsys):
    _, annotated, index = pipeline
    train = tmp_path / "train.json"
    assert main(["generate", "--store", str(annotated), "--index", str(index),
                 "--variant", "cloze", "--use-retrieved", "false",
                 "--size", "20", "--val-size", "0", "--seed", "1",
                 "--out-train", str(train)]) == 0
    data = json.loads(train.read_text())
    preds = {qa["id"]: qa["answers"][0]["text"]
             for a in data["data"] for p in a["paragraphs"] for qa in p["qas"]}
    pred_file = tmp_path / "preds.json"
    pred_file.write_text(json.dumps(preds))
    report = tmp_path / "report.json"
    assert main(["evaluate", "--gold", str(train), "--pred", str(pred_file),
                 "--report", str(report)]) == 0
    out = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert out["exact_match"] == 100.0 and out["f1"] == 100.0
    assert json.loads(report.read_text()) == out


def test_evaluate_mismatched_qids_warn_exit_zero(pipeline, tmp_path, capsys):
    _, annotated, index = pipeline
    train = tmp_path / "train.json"
    assert main(["generate", "--store", str(annotated), "--index", str(index),
                 "--variant", "cloze", "--use-retrieved", "false",
                 "--size", "5", "--val-size", "0", "--seed", "1",
                 "--out-train", str(train)]) == 0
    pred_file = tmp_path / "preds.json"
    pred_file.write_text(json.dumps({"unrelated": "x"}))
    assert main(["evaluate", "--gold", str(train), "--pred", str(pred_file)]) == 0
    out = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert out["exact_match"] == 0.0


def test_config_file_with_flag_override(pipeline, tmp_path):
    _, annotated, index = pipeline
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"variant": "cloze", "use_retrieved": False,
                                  "target_size": 10, "validation_size": 0,
                                  "seed": 4}))
    out1 = tmp_path / "t1.json"
    assert main(["generate", "--store", str(annotated), "--index", str(index),
                 "--config", str(config), "--out-train", str(out1)]) == 0
    # flag overrides the config's target_size
    out2 = tmp_path / "t2.json"
    assert main(["generate", "--store", str(annotated), "--index", str(index),
                 "--config", str(config), "--size", "3",
                 "--out-train", str(out2)]) == 0

    def count(path):
        d = json.loads(path.read_text())
        return sum(len(p["qas"]) for a in d["data"] for p in a["paragraphs"])

    assert count(out1) == 10
    assert count(out2) == 3


def test_ner_subset_command(tmp_path, capsys):
    gold = {"version": "1.1", "data": [{"title": "t", "paragraphs": [{
        "context": "Alan Turing lived in London.",
        "qas": [
            {"id": "a", "question": "who?",
             "answers": [{"text": "Alan Turing", "answer_start": 0}]},
            {"id": "b", "question": "what?",
             "answers": [{"text": "lived in", "answer_start": 12}]},
        ]}]}]}
    gold_file = tmp_path / "gold.json"
    gold_file.write_text(json.dumps(gold))
    ann_file = tmp_path / "ann.jsonl"
    ann_file.write_text(json.dumps(
        {"context_id": "t#0",
         "entities": [{"surface": "Alan Turing", "start": 0, "end": 11,
                       "label": "PERSON"}]}) + "\n")
    out = tmp_path / "subset.json"
    assert main(["ner-subset", "--gold", str(gold_file),
                 "--annotations", str(ann_file), "--out", str(out)]) == 0
    subset = json.loads(out.read_text())
    kept = [qa["id"] for a in subset["data"] for p in a["paragraphs"]
            for qa in p["qas"]]
    assert kept == ["a"]


def test_stats_command(pipeline, tmp_path, capsys):
    _, annotated, index = pipeline
    train = tmp_path / "train.json"
    assert main(["generate", "--store", str(annotated), "--index", str(index),
                 "--variant", "cloze", "--use-retrieved", "false",
                 "--size", "8", "--val-size", "0", "--seed", "1",
                 "--out-train", str(train)]) == 0
    assert main(["stats", "--train", str(train)]) == 0
    out = capsys.readouterr().out
    assert "questions: 8" in out
    assert "cloze" in out
