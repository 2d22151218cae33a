import json

import numpy as np
import pytest

from jlvt import SurrogateModel, label_with_oracle, read_csv
from jlvt.bench import parse_table
from jlvt.cli import main
from jlvt.config import ExperimentConfig, default_config_json, from_dict, load
from jlvt.errors import ConfigError
from jlvt.metrics import nmse_percent
from jlvt.ols_solver import fit
from jlvt.regressors import build_regressor_matrix, eval_expansion, monomial_basis
from jlvt.dataset import Dataset, write_csv

SMALL = {
    "train": {"n": 300, "seed": 4},
    "signals": [
        {"name": "chirp", "kind": "chirp", "n": 243, "waveform": {"f0": 1, "f1": 10}},
        {"name": "sin", "kind": "sinusoidal", "n": 162, "waveform": {"frequency": 3}},
        {"name": "tri", "kind": "q_triangular", "n": 162, "waveform": {"period": 40}},
    ],
    "bench": {"warmup_runs": 1, "measured_runs": 3, "n": 400},
}


@pytest.fixture
def cfg_path(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(SMALL))
    return p


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def fitted(tmp_path, cfg_path):
    out = tmp_path / "out"
    assert run("--config", cfg_path, "--out", out, "gen") == 0
    assert run("--config", cfg_path, "--out", out, "fit") == 0
    return out


def test_print_default_config(capsys):
    assert run("--print-default-config") == 0
    d = json.loads(capsys.readouterr().out)
    assert d["ranges"]["tox"] == [1.0, 4.0]
    assert d["bench"]["measured_runs"] == 11
    assert from_dict(d).to_dict() == d


def test_gen_schema(tmp_path, cfg_path):
    cfg = dict(SMALL, train={"n": 100, "seed": 1})
    p = tmp_path / "c.json"
    p.write_text(json.dumps(cfg))
    assert run("--config", p, "--out", tmp_path / "o", "gen") == 0
    lines = (tmp_path / "o" / "train.csv").read_text().split("\n")
    assert lines[-1] == ""
    assert len(lines[:-1]) == 101
    assert all(len(ln.split(",")) == 7 for ln in lines[:-1])
    assert lines[0] == "L,Ld,tsi,tox,VC,VD,VT"


def test_gen_byte_identical(tmp_path, cfg_path):
    run("--config", cfg_path, "--out", tmp_path / "a", "gen")
    run("--config", cfg_path, "--out", tmp_path / "b", "gen")
    for name in ("train", "chirp", "sin", "tri"):
        assert (tmp_path / "a" / f"{name}.csv").read_bytes() == (tmp_path / "b" / f"{name}.csv").read_bytes()


def test_seed_flag_overrides(tmp_path, cfg_path):
    run("--config", cfg_path, "--out", tmp_path / "a", "gen")
    run("--config", cfg_path, "--seed", 99, "--out", tmp_path / "b", "gen")
    assert (tmp_path / "a" / "train.csv").read_bytes() != (tmp_path / "b" / "train.csv").read_bytes()
    assert (tmp_path / "a" / "chirp.csv").read_bytes() == (tmp_path / "b" / "chirp.csv").read_bytes()


def test_gen_labels_match_oracle(fitted, cfg_path):
    params = load(cfg_path).oracle.params()
    for name in ("train", "chirp"):
        ds = read_csv(fitted / f"{name}.csv")
        relabeled = label_with_oracle(Dataset(ds.inputs), params)
        assert np.array_equal(relabeled.outputs, ds.outputs)


def test_fit_residual_self_consistent(fitted):
    model = SurrogateModel.load(fitted / "model.json")
    train = read_csv(fitted / "train.csv")
    resid = np.linalg.norm(train.outputs - model.predict(train.inputs))
    assert resid == pytest.approx(model.fit_report.residual_norm, rel=1e-10, abs=1e-12)


def test_fit_planted_theta(tmp_path, cfg_path, rng):
    cfg = load(cfg_path)
    X = rng.uniform(*np.array(cfg.ranges.bounds()).T, size=(400, 6))
    theta = rng.normal(size=64)
    z = build_regressor_matrix(X, monomial_basis(6), cfg.scaler()) @ theta
    write_csv(Dataset(X, z), tmp_path / "planted.csv")
    assert run("--config", cfg_path, "--out", tmp_path, "fit", "--train", tmp_path / "planted.csv",
               "--model", tmp_path / "p.json") == 0
    got = SurrogateModel.load(tmp_path / "p.json").theta
    assert np.max(np.abs(got - theta)) / np.max(np.abs(theta)) <= 1e-8


def test_eval_self_labeled_is_zero(fitted, cfg_path):
    model = SurrogateModel.load(fitted / "model.json")
    ds = read_csv(fitted / "chirp.csv")
    write_csv(Dataset(ds.inputs, model.predict(ds.inputs)), fitted / "self.csv")
    assert run("--config", cfg_path, "--out", fitted, "eval", fitted / "self.csv") == 0
    rep = json.loads((fitted / "eval_self.json").read_text())
    assert rep["nmse_percent"] == 0.0


def test_eval_outputs(fitted, cfg_path):
    assert run("--config", cfg_path, "--out", fitted, "eval") == 0
    for name in ("chirp", "sin", "tri"):
        rep = json.loads((fitted / f"eval_{name}.json").read_text())
        assert rep["nmse_percent"] <= 1.0
        rows = (fitted / f"hist_{name}.csv").read_text().splitlines()
        assert rows[0] == "bin_center,normalized_count"
        assert abs(sum(float(r.split(",")[1]) for r in rows[1:]) - 1.0) <= 1e-12
        assert len(rows) == 31


def test_eval_labels_unlabeled_file_with_oracle(fitted, cfg_path):
    ds = read_csv(fitted / "sin.csv")
    write_csv(Dataset(ds.inputs), fitted / "bare.csv")
    run("--config", cfg_path, "--out", fitted, "eval", fitted / "sin.csv", fitted / "bare.csv")
    a = json.loads((fitted / "eval_sin.json").read_text())
    b = json.loads((fitted / "eval_bare.json").read_text())
    assert a == b


def test_bench_outputs(fitted, cfg_path):
    assert run("--config", cfg_path, "--out", fitted, "bench") == 0
    rep = json.loads((fitted / "timing.json").read_text())
    table = parse_table((fitted / "table.txt").read_text())
    assert [r[0] for r in table] == ["chirp", "sin", "tri", "Mean"]
    for sig, row in zip(rep["signals"], table):
        assert row[4] == pytest.approx(sig["rt_ref"] / sig["rt_pred"], rel=1e-9)
        assert sig["sur"] == pytest.approx(sig["rt_ref"] / sig["rt_pred"], rel=1e-12)
        assert len(sig["rt_ref_samples"]) == 3
    mean = np.mean([s["sur"] for s in rep["signals"]])
    assert table[-1][4] == pytest.approx(mean, rel=1e-9)
    assert rep["mean_sur"] == pytest.approx(mean, rel=1e-12)


def test_predict_single_row(fitted, cfg_path, tmp_path):
    (tmp_path / "one.csv").write_text("L,Ld,tsi,tox,VC,VD\n31.5,7.25,9.0,2.5,0.4,0.6\n")
    assert run("--config", cfg_path, "--out", fitted, "predict", tmp_path / "one.csv",
               "-o", tmp_path / "pred.csv") == 0
    pred = read_csv(tmp_path / "pred.csv").outputs
    model = SurrogateModel.load(fitted / "model.json")
    assert pred.tolist() == [eval_expansion([31.5, 7.25, 9.0, 2.5, 0.4, 0.6], model.basis, model.theta,
                                            model.scaler)]


def test_predict_column_order_irrelevant(fitted, cfg_path, tmp_path):
    ds = read_csv(fitted / "tri.csv")
    write_csv(Dataset(ds.inputs), tmp_path / "a.csv")
    cols = ["VD", "tox", "L", "VC", "Ld", "tsi"]
    order = [5, 3, 0, 4, 1, 2]
    lines = [",".join(cols)] + [",".join(repr(float(r[i])) for i in order) for r in ds.inputs]
    (tmp_path / "b.csv").write_text("\n".join(lines) + "\n")
    run("--config", cfg_path, "--out", fitted, "predict", tmp_path / "a.csv", "-o", tmp_path / "pa.csv")
    run("--config", cfg_path, "--out", fitted, "predict", tmp_path / "b.csv", "-o", tmp_path / "pb.csv")
    assert (tmp_path / "pa.csv").read_bytes() == (tmp_path / "pb.csv").read_bytes()


def test_predict_matches_eval_internals(fitted, cfg_path, tmp_path):
    run("--config", cfg_path, "--out", fitted, "predict", fitted / "chirp.csv", "-o", tmp_path / "p.csv")
    run("--config", cfg_path, "--out", fitted, "eval", fitted / "chirp.csv")
    ds = read_csv(fitted / "chirp.csv")
    pred = read_csv(tmp_path / "p.csv").outputs
    rep = json.loads((fitted / "eval_chirp.json").read_text())
    assert rep["nmse_percent"] == nmse_percent(ds.outputs, pred)
    assert rep["dvt_mean"] == float(np.mean(ds.outputs - pred))


def test_exit_codes(tmp_path, cfg_path, fitted):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"bogus": 1}))
    assert run("--config", bad, "gen") == 2
    bad.write_text("{not json")
    assert run("--config", bad, "gen") == 2
    assert run("--config", tmp_path / "missing.json", "gen") == 5
    (tmp_path / "broken.csv").write_text("L,Ld\n1,2\n")
    assert run("--config", cfg_path, "--out", fitted, "predict", tmp_path / "broken.csv") == 3
    # two identical rows cannot support 64 independent columns
    (tmp_path / "tiny.csv").write_text("L,Ld,tsi,tox,VC,VD,VT\n" + "30,5,10,2,0.5,0.5,0.1\n" * 70)
    assert run("--config", cfg_path, "--out", tmp_path, "fit", "--train", tmp_path / "tiny.csv") == 4
    assert run("--config", cfg_path, "--out", fitted, "predict", tmp_path / "nothere.csv") == 5
    assert run() == 2


@pytest.mark.parametrize("patch", [
    {"solver": {"mode": "qr"}},
    {"metrics": {"bins": 0}},
    {"metrics": {"normalization": "peak"}},
    {"ranges": {"tox": [4, 1]}},
    {"signals": [{"name": "x", "kind": "square"}]},
    {"signals": [{"name": "x", "kind": "sinusoidal", "n": 10}]},
    {"signals": [{"name": "a/b", "kind": "sinusoidal"}]},
    {"oracle": {"barrier": {"tol": -1}}},
    {"oracle": {"N_sub": -5}},
    {"bench": {"measured_runs": 0}},
    {"train": {"n": 0}},
    {"train": {"size": 5}},
])
def test_config_validation(patch):
    with pytest.raises(ConfigError):
        from_dict(patch)


def test_config_defaults_round_trip():
    d = json.loads(default_config_json())
    cfg = from_dict(d)
    assert cfg.oracle.params() == ExperimentConfig().oracle.params()
    assert [s.kind for s in cfg.signals] == ["chirp", "sinusoidal", "q_triangular"]
