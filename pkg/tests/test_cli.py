import csv
import json

import pytest

from augmentarium.cli import main
from augmentarium.corpus import load_dataset, save_dataset, save_vectors
from augmentarium.nnet import load_model
from augmentarium.synthetic import two_blob_dataset

from _helpers import text_dataset


@pytest.fixture()
def dataset_file(tmp_path):
    ds = text_dataset([i % 2 for i in range(40)])
    path = tmp_path / "data.jsonl"
    save_dataset(ds, path)
    return path, ds


@pytest.fixture()
def blob_files(tmp_path):
    ds, vecs = two_blob_dataset(120, dim=5, separation=1.5, seed=2)
    ds_path = tmp_path / "blobs.jsonl"
    vec_path = tmp_path / "blobs.vec.jsonl"
    save_dataset(ds, ds_path)
    save_vectors(vecs, vec_path)
    return ds_path, vec_path


def test_augment_text_roundtrip(tmp_path, dataset_file, capsys):
    path, ds = dataset_file
    out = tmp_path / "aug.jsonl"
    code = main(
        [
            "augment", "--method", "rs", "--in", str(path), "--out", str(out),
            "--rate", "2.0", "--seed", "5",
        ]
    )
    assert code == 0
    aug = load_dataset(out, num_classes=ds.num_classes)
    assert len(aug) == 2 * len(ds)
    parents = ds.by_id()
    for s in aug.samples:
        assert s.label == parents[s.parent_id].label


def test_augment_vector_method(tmp_path, blob_files):
    ds_path, vec_path = blob_files
    out = tmp_path / "noise.jsonl"
    code = main(
        [
            "augment", "--method", "noise", "--in", str(ds_path),
            "--vectors", str(vec_path), "--out", str(out), "--sigma", "0.5",
        ]
    )
    assert code == 0
    records = [json.loads(line) for line in out.read_text().splitlines()]
    assert len(records) == 120
    assert all(len(r["vec"]) == 5 for r in records)
    assert all(abs(sum(r["probs"]) - 1.0) < 1e-9 for r in records)


def test_filter_cli(tmp_path, dataset_file):
    path, ds = dataset_file
    aug_path = tmp_path / "aug.jsonl"
    main(["augment", "--method", "rd", "--in", str(path), "--out", str(aug_path)])
    aug = load_dataset(aug_path, num_classes=2)

    scores_path = tmp_path / "scores.csv"
    with open(scores_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sample_id", "loss"])
        for i, s in enumerate(aug.samples):
            writer.writerow([s.id, float(i)])

    out = tmp_path / "kept.jsonl"
    code = main(
        [
            "filter", "--quantile", "0.5", "--scores", str(scores_path),
            "--in", str(aug_path), "--out", str(out),
        ]
    )
    assert code == 0
    kept = load_dataset(out, num_classes=2)
    assert len(kept) == (len(aug) + 1) // 2
    # lowest-loss records were listed first in the synthetic score file
    assert {s.id for s in kept.samples} == {s.id for s in aug.samples[: len(kept)]}


def test_train_cli_writes_model_and_schedule(tmp_path, blob_files):
    ds_path, vec_path = blob_files
    model_path = tmp_path / "model.ckpt"
    sched_path = tmp_path / "plans.jsonl"
    code = main(
        [
            "train", "--in", str(ds_path), "--vectors", str(vec_path),
            "--strategy", "vanilla", "--epochs", "3", "--batch", "16",
            "--seed", "1", "--out", str(model_path),
            "--dump-schedule", str(sched_path),
        ]
    )
    assert code == 0
    model = load_model(model_path)
    assert model.dims == [5, 64, 64, 2]
    plans = [json.loads(line) for line in sched_path.read_text().splitlines()]
    assert [p["epoch"] for p in plans] == [0, 1, 2]
    assert all(len(p["ids"]) == 120 for p in plans)


def test_train_cli_with_aug_file(tmp_path, dataset_file):
    path, _ = dataset_file
    aug_path = tmp_path / "aug.jsonl"
    main(["augment", "--method", "aeda", "--in", str(path), "--out", str(aug_path)])
    model_path = tmp_path / "m.ckpt"
    code = main(
        [
            "train", "--in", str(path), "--aug", str(aug_path),
            "--strategy", "adf", "--epochs", "2", "--dim", "32",
            "--out", str(model_path),
        ]
    )
    assert code == 0
    assert load_model(model_path).dims == [32, 64, 64, 2]


def test_train_cli_vectors_cover_aug_file(tmp_path, dataset_file):
    # one vectors file spanning both --in and --aug ids keeps a single
    # feature space
    path, ds = dataset_file
    aug_path = tmp_path / "aug.jsonl"
    main(["augment", "--method", "rs", "--in", str(path), "--out", str(aug_path)])
    aug = load_dataset(aug_path, num_classes=2)
    vec_path = tmp_path / "both.vec.jsonl"
    with open(vec_path, "w", encoding="utf-8") as fh:
        for i, sample in enumerate([*ds.samples, *aug.samples]):
            fh.write(json.dumps({"id": sample.id, "vec": [float(i), 1.0, -1.0]}) + "\n")
    model_path = tmp_path / "m.ckpt"
    code = main(
        [
            "train", "--in", str(path), "--aug", str(aug_path),
            "--vectors", str(vec_path), "--strategy", "ada", "--epochs", "2",
            "--out", str(model_path),
        ]
    )
    assert code == 0
    assert load_model(model_path).dims == [3, 64, 64, 2]


def test_train_cli_rejects_mismatched_aug_vector_dim(tmp_path, blob_files, capsys):
    ds_path, vec_path = blob_files
    bad = tmp_path / "aug.vec.jsonl"
    bad.write_text(
        json.dumps({"id": "x:noise:0", "vec": [1.0, 2.0], "probs": [1.0, 0.0]}) + "\n",
        encoding="utf-8",
    )
    code = main(
        [
            "train", "--in", str(ds_path), "--vectors", str(vec_path),
            "--aug-vectors", str(bad), "--epochs", "1",
            "--out", str(tmp_path / "m.ckpt"),
        ]
    )
    assert code == 2
    assert "dim" in capsys.readouterr().err


def test_experiment_cli(tmp_path, blob_files, capsys):
    ds_path, vec_path = blob_files
    spec_path = tmp_path / "exp.spec"
    spec_path.write_text(
        f"name = cli-demo\ndataset = {ds_path}\nvectors = {vec_path}\n"
        "feature_dim = 5\ntrain_n = 30\ntest_n = 60\nmethod = noise\n"
        "sigma = 0.3\nstrategy = vanilla\nepochs = 4\nrepetitions = 3\n",
        encoding="utf-8",
    )
    outdir = tmp_path / "reports"
    code = main(["experiment", "--spec", str(spec_path), "--out", str(outdir)])
    assert code == 0
    assert (outdir / "summary.csv").exists()
    assert (outdir / "tally.csv").exists()
    assert (outdir / "heatmap.csv").exists()
    payload = json.loads((outdir / "report.json").read_text())
    assert payload["name"] == "cli-demo"
    assert len(payload["method_accuracies"]) == 3
    assert "cli-demo" in capsys.readouterr().out


def test_report_cli_aggregates(tmp_path, blob_files):
    ds_path, vec_path = blob_files
    spec_path = tmp_path / "exp.spec"
    spec_path.write_text(
        f"name = agg\ndataset = {ds_path}\nvectors = {vec_path}\n"
        "feature_dim = 5\ntrain_n = 20\ntest_n = 40\nmethod = none\n"
        "epochs = 2\nrepetitions = 2\n",
        encoding="utf-8",
    )
    first = tmp_path / "r1"
    main(["experiment", "--spec", str(spec_path), "--out", str(first)])
    merged = tmp_path / "merged"
    code = main(
        ["report", "--in", str(first / "report.json"), "--out", str(merged)]
    )
    assert code == 0
    assert (merged / "tally.csv").exists()


def test_bench_cli(tmp_path, dataset_file, capsys):
    path, _ = dataset_file
    out = tmp_path / "bench.csv"
    code = main(
        ["bench", "--in", str(path), "--methods", "rd,noise", "--reps", "2",
         "--out", str(out)]
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 3
    assert "rd" in capsys.readouterr().out


def test_validate_cli(tmp_path, blob_files, capsys):
    ds_path, vec_path = blob_files
    adapter = tmp_path / "adapter.jsonl"
    adapter.write_text(
        '{"parent_id":"b00000","method":"back_tr","text":"hello there"}\n',
        encoding="utf-8",
    )
    code = main(
        ["validate", "--dataset", str(ds_path), "--vectors", str(vec_path),
         "--adapter", str(adapter)]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "120 samples" in out
    assert "dim 5" in out
    assert "adapter: 1 augmented samples" in out


def test_usage_error_exit_code(capsys):
    assert main(["augment", "--method", "rd"]) == 1  # missing --in/--out


def test_unknown_command_exit_code(capsys):
    assert main(["frobnicate"]) == 1


def test_data_error_exit_code(tmp_path, capsys):
    missing = tmp_path / "nope.jsonl"
    code = main(["validate", "--dataset", str(missing)])
    assert code == 2


def test_numeric_error_exit_code(monkeypatch, tmp_path, capsys):
    import augmentarium.cli as cli
    from augmentarium.errors import NonFiniteLoss

    def boom(path, fmt="jsonl", name=None, num_classes=None):
        raise NonFiniteLoss("synthetic failure")

    monkeypatch.setattr(cli, "load_dataset", boom)
    code = main(["validate", "--dataset", str(tmp_path / "d.jsonl")])
    assert code == 3
    assert "numeric failure" in capsys.readouterr().err
