import json
import subprocess
import sys

import pytest

from tempomine import cli
from tempomine.evaluation import eval_instance_to_json_dict
from tempomine.sequences import Vocabulary, read_records_binary, read_records_jsonl
from tempomine.srl_ingest import sentence_to_json_dict
from tempomine.synthetic import generate_corpus, planted_eval_instances


def run(argv):
    return cli.main(list(argv))


def non_comment_lines(path):
    with open(path, encoding="utf-8") as f:
        return [line for line in f if not line.startswith("#")]


def header_lines(path):
    with open(path, encoding="utf-8") as f:
        return [line.rstrip("\n") for line in f if line.startswith("#")]


@pytest.fixture(scope="session")
def pipeline(tmp_path_factory):
    """A small CLI pipeline: corpus -> tuples -> dataset -> model."""
    root = tmp_path_factory.mktemp("pipeline")
    corpus = root / "corpus.jsonl"
    sentences = generate_corpus(150, seed=21)
    with open(corpus, "w") as f:
        for s in sentences:
            f.write(json.dumps(sentence_to_json_dict(s), sort_keys=True) + "\n")

    tuples = root / "tuples.jsonl"
    assert run(["extract", "--input", str(corpus), "--output", str(tuples)]) == 0

    dataset = root / "ds.jsonl"
    vocab_path = root / "ds.jsonl.vocab.tsv"
    assert run(["build-dataset", "--input", str(tuples),
                "--output", str(dataset), "--seed", "21"]) == 0

    model = root / "model.ckpt"
    assert run(["train", "--input", str(dataset), "--vocab", str(vocab_path),
                "--output", str(model), "--seed", "21",
                "--d-model", "32", "--n-layers", "1", "--n-heads", "2",
                "--ff-dim", "64", "--epochs", "4", "--batch-size", "16",
                "--learning-rate", "0.003"]) == 0

    instances = root / "eval.jsonl"
    with open(instances, "w") as f:
        for inst in planted_eval_instances(sentences[:40]):
            f.write(json.dumps(eval_instance_to_json_dict(inst)) + "\n")

    return {
        "root": root,
        "corpus": corpus,
        "tuples": tuples,
        "dataset": dataset,
        "vocab": vocab_path,
        "model": model,
        "instances": instances,
    }


# ----------------------------------------------------------------- extract

def test_extract_matches_golden_bytes(tmp_path, fixture_corpus_path,
                                      golden_tuples_path, capsys):
    out = tmp_path / "tuples.jsonl"
    assert run(["extract", "--input", fixture_corpus_path,
                "--output", str(out)]) == 0
    msg = capsys.readouterr().out
    assert "extracted 33 tuples from 33 sentences" in msg
    with open(golden_tuples_path, "rb") as f:
        golden = f.read()
    assert out.read_bytes() == golden


def test_extract_rerun_identical(tmp_path, fixture_corpus_path):
    a = tmp_path / "a.jsonl"
    b = tmp_path / "b.jsonl"
    assert run(["extract", "--input", fixture_corpus_path, "--output", str(a)]) == 0
    assert run(["extract", "--input", fixture_corpus_path, "--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_extract_workers_preserve_order(tmp_path, fixture_corpus_path):
    a = tmp_path / "w1.jsonl"
    b = tmp_path / "w2.jsonl"
    assert run(["extract", "--input", fixture_corpus_path, "--output", str(a)]) == 0
    try:
        code = run(["extract", "--input", fixture_corpus_path,
                    "--output", str(b), "--workers", "2"])
    except OSError:
        pytest.skip("process pool unavailable in this environment")
    assert code == 0
    # config echoes differ (workers knob); the mined content must not
    assert non_comment_lines(a) == non_comment_lines(b)


def test_extract_skips_malformed_by_default(tmp_path, capsys):
    corpus = tmp_path / "c.jsonl"
    good = {"doc_id": "d", "sent_index": 0,
            "tokens": ["They", "met", "at", "noon"],
            "frames": [{"verb_index": 1,
                        "args": [{"role": "ARGM-TMP", "span": [2, 4]}]}]}
    corpus.write_text(json.dumps(good) + "\n{broken\n")
    out = tmp_path / "t.jsonl"
    assert run(["extract", "--input", str(corpus), "--output", str(out)]) == 0
    assert "1 records skipped" in capsys.readouterr().out


def test_extract_strict_schema_exit_4(tmp_path, capsys):
    corpus = tmp_path / "c.jsonl"
    corpus.write_text('{"doc_id": 5}\n')
    out = tmp_path / "t.jsonl"
    assert run(["extract", "--input", str(corpus), "--output", str(out),
                "--strict"]) == 4
    err = capsys.readouterr().err
    assert err.startswith("ERROR code=4 ")


def test_missing_input_exit_3(tmp_path, capsys):
    out = tmp_path / "t.jsonl"
    assert run(["extract", "--input", str(tmp_path / "absent.jsonl"),
                "--output", str(out)]) == 3
    assert capsys.readouterr().err.startswith("ERROR code=3 ")


def test_unknown_flag_exit_2(capsys):
    with pytest.raises(SystemExit) as ei:
        run(["extract", "--nonsense"])
    assert ei.value.code == 2
    assert capsys.readouterr().err.startswith("ERROR code=2 ")


def test_no_subcommand_exit_2(capsys):
    with pytest.raises(SystemExit) as ei:
        run([])
    assert ei.value.code == 2


# ----------------------------------------------------------------- config

def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nseed=9\nsigma_log=2.0\n")
    out = tmp_path / "t.csv"
    assert run(["dump-target", "duration", "hour", "--config", str(cfg),
                "--seed", "11", "--output", str(out)]) == 0
    header = header_lines(out)
    assert "# seed=11" in header        # flag beats file
    assert "# sigma_log=2.0" in header  # file beats default
    assert "# tempomine dump-target" in header
    # paths never leak into the echo
    assert not any("output" in line or str(tmp_path) in line for line in header)


def test_config_file_unknown_key_exit_2(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("sigma=2.0\n")
    assert run(["manifest", "--config", str(cfg)]) == 2
    assert "unknown config key" in capsys.readouterr().err


def test_config_file_bad_value_exit_2(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("seed=often\n")
    assert run(["manifest", "--config", str(cfg)]) == 2


def test_invalid_knob_combination_exit_2(tmp_path, capsys):
    out = tmp_path / "t.csv"
    assert run(["dump-target", "duration", "hour", "--output", str(out),
                "--p-mask", "1.5"]) == 2


def test_am_preset_sets_p_event(tmp_path):
    out = tmp_path / "t.csv"
    assert run(["dump-target", "duration", "hour", "--am",
                "--output", str(out)]) == 0
    header = header_lines(out)
    assert "# am=true" in header
    assert "# p_event=0.6" in header


def test_am_with_explicit_p_event(tmp_path):
    out = tmp_path / "t.csv"
    assert run(["dump-target", "duration", "hour", "--am", "--p-event", "0.25",
                "--output", str(out)]) == 0
    header = header_lines(out)
    assert "# am=true" in header
    assert "# p_event=0.25" in header


# ----------------------------------------------------------------- stats

def test_stats_output(pipeline, tmp_path):
    out = tmp_path / "stats.csv"
    assert run(["stats", "--input", str(pipeline["tuples"]),
                "--output", str(out)]) == 0
    lines = non_comment_lines(out)
    assert lines[0].strip() == "dimension,label,count,weight"
    assert len(lines) > 1
    for line in lines[1:]:
        dim, label, count, weight = line.strip().split(",")
        assert int(count) > 0
        assert 0.1 <= float(weight) <= 10.0


def test_stats_empty_input_exit_0(tmp_path, capsys):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("# nothing here\n")
    assert run(["stats", "--input", str(empty)]) == 0
    out = capsys.readouterr().out
    assert "dimension,label,count,weight" in out


def test_stats_to_stdout(pipeline, capsys):
    assert run(["stats", "--input", str(pipeline["tuples"])]) == 0
    out = capsys.readouterr().out
    assert "dimension,label,count,weight" in out


# ------------------------------------------------------------ build-dataset

def test_build_dataset_jsonl(pipeline):
    records = read_records_jsonl(str(pipeline["dataset"]))
    tuples = non_comment_lines(pipeline["tuples"])
    assert len(records) == len(tuples) == 150
    with open(pipeline["vocab"], encoding="utf-8") as f:
        vocab = Vocabulary.from_tsv_lines(f)
    assert len(vocab) > 71


def test_build_dataset_binary_agrees(pipeline, tmp_path):
    out = tmp_path / "ds.bin"
    assert run(["build-dataset", "--input", str(pipeline["tuples"]),
                "--output", str(out), "--seed", "21",
                "--format", "binary"]) == 0
    binary_records = read_records_binary(str(out))
    jsonl_records = read_records_jsonl(str(pipeline["dataset"]))
    assert binary_records == jsonl_records
    with open(out, "rb") as f:
        assert f.read(4) == b"TMDS"


def test_build_dataset_deterministic(pipeline, tmp_path):
    a = tmp_path / "a.jsonl"
    b = tmp_path / "b.jsonl"
    for path in (a, b):
        assert run(["build-dataset", "--input", str(pipeline["tuples"]),
                    "--output", str(path), "--seed", "21"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.jsonl.vocab.tsv").read_bytes() == (
        tmp_path / "b.jsonl.vocab.tsv").read_bytes()


def test_build_dataset_workers_equivalent(pipeline, tmp_path):
    out = tmp_path / "w2.jsonl"
    try:
        code = run(["build-dataset", "--input", str(pipeline["tuples"]),
                    "--output", str(out), "--seed", "21", "--workers", "2"])
    except OSError:
        pytest.skip("process pool unavailable in this environment")
    assert code == 0
    assert read_records_jsonl(str(out)) == read_records_jsonl(str(pipeline["dataset"]))


def test_build_dataset_balance(pipeline, tmp_path):
    out = tmp_path / "bal.jsonl"
    assert run(["build-dataset", "--input", str(pipeline["tuples"]),
                "--output", str(out), "--seed", "21", "--balance"]) == 0
    balanced = read_records_jsonl(str(out))
    assert 0 < len(balanced) <= 150
    assert "# balance=true" in header_lines(out)


def test_build_dataset_hard_targets(pipeline, tmp_path):
    out = tmp_path / "hard.jsonl"
    assert run(["build-dataset", "--input", str(pipeline["tuples"]),
                "--output", str(out), "--seed", "21", "--targets", "hard"]) == 0
    for rec in read_records_jsonl(str(out)):
        for t in rec.targets:
            if t.soft is not None:
                assert sorted(set(t.soft)) == [0.0, 1.0]


def test_build_dataset_ms_without_corpus_exit_2(pipeline, capsys):
    assert run(["build-dataset", "--input", str(pipeline["tuples"]),
                "--output", "/tmp/never-written.jsonl", "--ms"]) == 2
    assert "--corpus" in capsys.readouterr().err


def test_build_dataset_vocab_out_flag(pipeline, tmp_path):
    ds = tmp_path / "d.jsonl"
    vc = tmp_path / "custom-vocab.tsv"
    assert run(["build-dataset", "--input", str(pipeline["tuples"]),
                "--output", str(ds), "--seed", "21",
                "--vocab-out", str(vc)]) == 0
    assert vc.exists()


# ----------------------------------------------------------------- train

def test_train_outputs(pipeline):
    assert pipeline["model"].exists()
    with open(pipeline["model"], "rb") as f:
        assert f.read(4) == b"TMCK"
    loss_log = pipeline["root"] / "model.ckpt.loss.csv"
    lines = non_comment_lines(loss_log)
    assert lines[0].strip() == "epoch,split,loss,mean_distance"
    rows = [line.strip().split(",") for line in lines[1:]]
    assert len(rows) == 4  # one train row per epoch, no val split
    losses = [float(r[2]) for r in rows]
    assert losses[-1] < losses[0]


def test_train_deterministic_checkpoint(pipeline, tmp_path):
    a = tmp_path / "a.ckpt"
    b = tmp_path / "b.ckpt"
    argv = ["train", "--input", str(pipeline["dataset"]),
            "--vocab", str(pipeline["vocab"]), "--seed", "21",
            "--d-model", "16", "--n-layers", "1", "--n-heads", "2",
            "--ff-dim", "32", "--epochs", "2", "--batch-size", "16"]
    assert run(argv + ["--output", str(a)]) == 0
    assert run(argv + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_train_val_fraction_rows(pipeline, tmp_path):
    ckpt = tmp_path / "v.ckpt"
    log = tmp_path / "v.loss.csv"
    assert run(["train", "--input", str(pipeline["dataset"]),
                "--vocab", str(pipeline["vocab"]), "--output", str(ckpt),
                "--seed", "21", "--d-model", "16", "--n-layers", "1",
                "--n-heads", "2", "--ff-dim", "32", "--epochs", "2",
                "--batch-size", "16", "--val-fraction", "0.2",
                "--loss-log", str(log)]) == 0
    rows = [line.strip().split(",") for line in non_comment_lines(log)[1:]]
    assert [r[1] for r in rows] == ["train", "val", "train", "val"]
    val_rows = [r for r in rows if r[1] == "val"]
    assert all(r[3] != "" for r in val_rows)


def test_train_divergence_exit_5(pipeline, tmp_path, capsys):
    ckpt = tmp_path / "d.ckpt"
    assert run(["train", "--input", str(pipeline["dataset"]),
                "--vocab", str(pipeline["vocab"]), "--output", str(ckpt),
                "--seed", "21", "--d-model", "16", "--n-layers", "1",
                "--n-heads", "2", "--ff-dim", "32", "--epochs", "30",
                "--batch-size", "16", "--learning-rate", "100000.0"]) == 5
    assert capsys.readouterr().err.startswith("ERROR code=5 ")


# ----------------------------------------------------------------- eval

def test_eval_report(pipeline, tmp_path):
    out = tmp_path / "report.csv"
    assert run(["eval", "--input", str(pipeline["instances"]),
                "--model", str(pipeline["model"]),
                "--vocab", str(pipeline["vocab"]),
                "--output", str(out)]) == 0
    lines = non_comment_lines(out)
    assert lines[0].strip() == (
        "dimension,count,mean_distance,normalized_mean_distance,accuracy_at_0")
    rows = [line.strip().split(",") for line in lines[1:]]
    assert sum(int(r[1]) for r in rows) == 40


def test_eval_missing_model_exit_3(pipeline, tmp_path, capsys):
    assert run(["eval", "--input", str(pipeline["instances"]),
                "--model", str(tmp_path / "absent.ckpt"),
                "--vocab", str(pipeline["vocab"])]) == 3


# ----------------------------------------------------------------- predict

def test_predict_inline(pipeline, capsys):
    assert run(["predict", "--model", str(pipeline["model"]),
                "--vocab", str(pipeline["vocab"]),
                "--event", "the manager paused briefly", "--verb-index", "2",
                "--dimension", "duration"]) == 0
    out = capsys.readouterr().out
    rows = [line.split(",") for line in out.splitlines()
            if line and not line.startswith("#")][1:]
    assert len(rows) == 9
    assert sum(float(r[1]) for r in rows) == pytest.approx(1.0, abs=1e-9)


def test_predict_query_file(pipeline, tmp_path):
    queries = tmp_path / "q.jsonl"
    queries.write_text(json.dumps({
        "event_tokens": ["the", "team", "audited", "the", "books"],
        "verb_index": 2,
        "dimension": "typical_week",
    }) + "\n")
    out = tmp_path / "dist.csv"
    assert run(["predict", "--model", str(pipeline["model"]),
                "--vocab", str(pipeline["vocab"]),
                "--input", str(queries), "--output", str(out)]) == 0
    lines = non_comment_lines(out)
    assert lines[0].strip() == "event_id,dimension,label,probability"
    assert len(lines) == 1 + 7


def test_predict_needs_query_or_flags(pipeline, capsys):
    assert run(["predict", "--model", str(pipeline["model"]),
                "--vocab", str(pipeline["vocab"])]) == 2


def test_predict_unknown_dimension_exit_2(pipeline, capsys):
    assert run(["predict", "--model", str(pipeline["model"]),
                "--vocab", str(pipeline["vocab"]),
                "--event", "they met", "--verb-index", "1",
                "--dimension", "bogus"]) == 2


# ----------------------------------------------------------- small commands

def test_grad_check_command(capsys):
    assert run(["grad-check", "--coords", "5"]) == 0
    out = capsys.readouterr().out
    assert "worst relative error" in out


def test_dump_target_stdout(capsys):
    assert run(["dump-target", "typical_week", "Friday"]) == 0
    out = capsys.readouterr().out
    rows = [line.split(",") for line in out.splitlines()
            if line and not line.startswith("#")][1:]
    assert len(rows) == 7
    assert sum(float(r[1]) for r in rows) == pytest.approx(1.0, abs=1e-9)
    best = max(rows, key=lambda r: float(r[1]))
    assert best[0] == "Friday"


def test_dump_target_bad_label_exit_2(capsys):
    assert run(["dump-target", "duration", "eon"]) == 2


def test_manifest_lists_every_dimension(capsys):
    assert run(["manifest"]) == 0
    out = capsys.readouterr().out
    for name in ("duration", "frequency", "upper_bound", "typical_day",
                 "typical_week", "typical_month", "typical_season", "hierarchy"):
        assert f"[{name}]" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "tempomine.cli", "manifest"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert "[duration]" in proc.stdout
