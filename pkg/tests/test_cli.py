import io
import re

import pytest

from relboost import example_data
from relboost.cli import main, summarize


def run(args, capsys=None):
    out = io.StringIO()
    code = main([str(a) for a in args], stdout=out)
    return code, out.getvalue()


@pytest.fixture
def files(tmp_path):
    names = ["pos", "neg", "facts", "modes"]
    for name, text in zip(names, example_data.files()):
        (tmp_path / f"{name}.txt").write_text(text)
    return {n: tmp_path / f"{n}.txt" for n in names}


def data_args(files, modes=True):
    args = ["--pos", files["pos"], "--neg", files["neg"], "--facts", files["facts"]]
    return args + (["--modes", files["modes"]] if modes else [])


def test_train_predict_eval_toy(tmp_path):
    model = tmp_path / "model.txt"
    code, out = run(["train", "--toy", "--out", model])
    assert code == 0
    assert model.read_text().count("\ntree ") == 10
    assert re.search(r"trained 10 trees for cancer in \d+\.\d+s \(pos=2 neg=2 facts=6\)", out)

    code, out = run(["predict", "--toy", "--model", model])
    lines = out.splitlines()
    assert code == 0 and [l.split()[0] for l in lines] == [f"cancer({n})" for n in ("alice", "bob", "chuck", "fred")]
    p = [float(l.split()[1]) for l in lines]
    assert min(p[:2]) > max(p[2:])
    assert all(re.fullmatch(r"\S+ \d\.\d{6}", l) for l in lines)

    preds = tmp_path / "preds.txt"
    assert run(["predict", "--toy", "--model", model, "--out", preds]) == (0, "")
    code, out = run(["eval", "--toy", "--predictions", preds])
    assert code == 0 and "auc_roc   1.000000" in out


def test_files_match_toy_flag(files, tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert run(["train", "--toy", "--out", a])[0] == 0
    assert run(["train", *data_args(files), "--out", b])[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_reproducible(files, tmp_path):
    outputs = []
    for k in range(2):
        model, preds = tmp_path / f"m{k}.txt", tmp_path / f"p{k}.txt"
        assert run(["train", *data_args(files), "--out", model])[0] == 0
        assert run(["predict", *data_args(files, modes=False), "--model", model, "--out", preds])[0] == 0
        outputs.append((model.read_bytes(), preds.read_bytes()))
    assert outputs[0] == outputs[1]


def test_missing_modes_file(files, tmp_path, capsys):
    code, out = run(["train", "--pos", files["pos"], "--neg", files["neg"], "--facts", files["facts"],
                     "--modes", tmp_path / "nope.txt", "--out", tmp_path / "m.txt"])
    assert code == 1 and out == ""
    assert "nope.txt" in capsys.readouterr().err


def test_missing_flag(files, tmp_path, capsys):
    code, _ = run(["train", "--pos", files["pos"], "--out", tmp_path / "m.txt"])
    assert code == 1
    assert "--modes" in capsys.readouterr().err


def test_parse_errors_are_aggregated(files, tmp_path, capsys):
    files["facts"].write_text("smokes(alice)\nfriends(alice,Bob).\nsmokes(bob).\n")
    code, _ = run(["train", *data_args(files), "--out", tmp_path / "m.txt"])
    err = capsys.readouterr().err
    assert code == 1
    assert f"{files['facts']}:1:" in err and f"{files['facts']}:2:" in err


def test_mode_mismatch_is_input_error(files, tmp_path, capsys):
    files["facts"].write_text("drinks(alice).\n")
    assert run(["train", *data_args(files), "--out", tmp_path / "m.txt"])[0] == 1
    assert "drinks/1" in capsys.readouterr().err


def test_zero_trees(tmp_path):
    model = tmp_path / "m.txt"
    assert run(["train", "--toy", "--trees", "0", "--out", model])[0] == 0
    _, out = run(["predict", "--toy", "--model", model])
    assert [l.split()[1] for l in out.splitlines()] == ["0.500000"] * 4


def test_hyperparameter_flags(tmp_path):
    model = tmp_path / "m.txt"
    args = ["--trees", "3", "--depth", "1", "--node-size", "1", "--learning-rate", "0.5", "--psi0", "prior"]
    assert run(["train", "--toy", *args, "--out", model])[0] == 0
    text = model.read_text()
    assert "n_trees 3\nmax_tree_depth 1\nnode_size 1\n" in text and "learning_rate 0.5\n" in text
    assert run(["train", "--toy", "--learning-rate", "2", "--out", model])[0] == 1
    assert run(["train", "--toy", "--psi0", "high", "--out", model])[0] == 1


def test_empty_test_files(tmp_path):
    model = tmp_path / "m.txt"
    run(["train", "--toy", "--out", model])
    for n in ("pos", "neg"):
        (tmp_path / f"{n}.txt").write_text("")
    preds = tmp_path / "p.txt"
    code, _ = run(["predict", "--pos", tmp_path / "pos.txt", "--neg", tmp_path / "neg.txt",
                   "--model", model, "--out", preds])
    assert code == 0 and preds.read_text() == ""


def test_corrupted_model(tmp_path, capsys):
    bad = tmp_path / "m.txt"
    bad.write_text("relboost-model 7\n")
    assert run(["predict", "--toy", "--model", bad])[0] == 1
    assert "version" in capsys.readouterr().err
    bad.write_bytes(b"\x00\xff garbage")
    assert run(["predict", "--toy", "--model", bad])[0] == 1


def test_eval_variants(tmp_path, capsys):
    preds = tmp_path / "p.txt"
    preds.write_text("".join(f"{a} 0.500000\n" for a in example_data.train.pos + example_data.train.neg))
    code, out = run(["eval", "--toy", "--predictions", preds, "--kv"])
    assert code == 0 and "mean_cll=-0.6931471805599453" in out

    preds.write_text("".join(f"{a} 0.700000\n" for a in example_data.train.pos))
    code, out = run(["eval", "--toy", "--predictions", preds])
    assert code == 0
    assert "auc_roc   absent" in out and "mean_cll  -0.356675" in out
    assert "warning" in capsys.readouterr().err

    preds.write_text("cancer(zed) 0.5\n")
    assert run(["eval", "--toy", "--predictions", preds])[0] == 1
    preds.write_text("cancer(alice) 1.5\n")
    assert run(["eval", "--toy", "--predictions", preds])[0] == 1


def test_bench_toy():
    code, out = run(["bench", "--toy", "--repeat", "3"])
    assert code == 0
    header, row = out.splitlines()
    assert "over 3 runs" in header
    assert re.fullmatch(r"toy\s+\d+\.\d{4} \(\d+\.\d{4}\)", row)


def test_bench_repeat_one(capsys):
    assert run(["bench", "--toy", "--repeat", "1"]) == (1, "")
    assert "repeat" in capsys.readouterr().err


def test_summarize():
    assert summarize([1.0] * 10) == (1.0, 0.0)
    with pytest.raises(ValueError):
        summarize([1.0])


def test_target_inference(tmp_path, files, capsys):
    files["pos"].write_text("cancer(alice).\nsmokes(bob).\n")
    assert run(["train", *data_args(files), "--out", tmp_path / "m.txt"])[0] == 1
    assert "--target" in capsys.readouterr().err


def test_negatives(files, tmp_path):
    out_file = tmp_path / "n.txt"
    code, _ = run(["negatives", "--pos", files["pos"], "--facts", files["facts"], "--modes", files["modes"],
                   "--out", out_file])
    assert code == 0
    assert out_file.read_text() == "cancer(chuck).\ncancer(fred).\n"


def test_write_failure_is_io_error(tmp_path):
    assert run(["train", "--toy", "--out", tmp_path / "missing" / "m.txt"])[0] == 2


def test_no_command(capsys):
    assert run([])[0] == 1
    assert run(["frobnicate"])[0] == 1
    assert capsys.readouterr().out == ""
