import json

import numpy as np
import pytest

from jlvt import Dataset, SurrogateModel, read_csv, write_csv
from jlvt.dataset import to_csv_text
from jlvt.errors import DataError


def test_csv_round_trip_exact(tmp_path, rng):
    X = rng.uniform([20, 0, 5, 1, 0, 0], [40, 20, 15, 4, 1, 1], size=(50, 6))
    ds = Dataset(X, rng.normal(size=50) * 1e-3 + np.pi)
    write_csv(ds, tmp_path / "d.csv")
    back = read_csv(tmp_path / "d.csv")
    assert np.array_equal(back.inputs, X) and np.array_equal(back.outputs, ds.outputs)
    assert back.provenance == "d"


def test_csv_format(tmp_path):
    ds = Dataset(np.array([[30.0, 5.0, 10.0, 2.0, 0.5, 0.1]]), np.array([0.25]))
    text = to_csv_text(ds)
    assert text == "L,Ld,tsi,tox,VC,VD,VT\n30.0,5.0,10.0,2.0,0.5,0.1,0.25\n"
    assert to_csv_text(Dataset(ds.inputs)).splitlines()[0] == "L,Ld,tsi,tox,VC,VD"


def test_csv_header_binding(tmp_path):
    (tmp_path / "a.csv").write_text("VD,VC,tox,tsi,Ld,L\n0.1,0.5,2,10,5,30\n")
    ds = read_csv(tmp_path / "a.csv")
    assert ds.inputs.tolist() == [[30.0, 5.0, 10.0, 2.0, 0.5, 0.1]]
    assert ds.outputs is None


@pytest.mark.parametrize("text", [
    "",
    "L,Ld,tsi,tox,VC\n1,2,3,4,5\n",
    "L,Ld,tsi,tox,VC,VD,extra\n1,0,3,4,5,6,7\n",
    "L,Ld,tsi,tox,VC,VD\n1,0,3,4,5\n",
    "L,Ld,tsi,tox,VC,VD\n1,0,3,x,5,6\n",
    "L,Ld,tsi,tox,VC,VD\n",
])
def test_csv_rejects_bad_files(tmp_path, text):
    (tmp_path / "b.csv").write_text(text)
    with pytest.raises(DataError):
        read_csv(tmp_path / "b.csv")


def test_csv_require_outputs(tmp_path):
    (tmp_path / "c.csv").write_text("L,Ld,tsi,tox,VC,VD\n30,5,10,2,0.5,0.1\n")
    with pytest.raises(DataError):
        read_csv(tmp_path / "c.csv", require_outputs=True)


def test_dataset_shape_checks():
    with pytest.raises(DataError):
        Dataset(np.ones((3, 5)))
    with pytest.raises(DataError):
        Dataset(np.ones((3, 6)), np.ones(2))
    with pytest.raises(DataError):
        Dataset(np.ones((0, 6)))


def test_model_round_trip_bit_identical(tmp_path, model_small, train_small):
    model_small.save(tmp_path / "m.json")
    back = SurrogateModel.load(tmp_path / "m.json")
    assert np.array_equal(back.theta, model_small.theta)
    assert back.scaler == model_small.scaler
    assert back.fit_report == model_small.fit_report
    assert np.array_equal(back.predict(train_small.inputs), model_small.predict(train_small.inputs))


def test_model_file_schema(tmp_path, model_small):
    model_small.save(tmp_path / "m.json")
    d = json.loads((tmp_path / "m.json").read_text())
    assert d["format_version"] == 1
    assert d["m"] == 6 and d["include_bias"] is True
    assert len(d["terms"]) == 63 and len(d["theta"]) == 64
    assert set(d["scaler"]) == {"offset", "gain"}
    assert set(d["fit_report"]) >= {"residual_norm", "condition_indicator", "solver", "provenance"}


def test_model_rejects_unknown_version(tmp_path, model_small):
    d = model_small.to_dict()
    d["format_version"] = 99
    with pytest.raises(DataError):
        SurrogateModel.from_dict(d)
    d = model_small.to_dict()
    d["terms"] = d["terms"][::-1]
    with pytest.raises(DataError):
        SurrogateModel.from_dict(d)
    d = model_small.to_dict()
    del d["theta"]
    with pytest.raises(DataError):
        SurrogateModel.from_dict(d)


def test_predict_one_matches_batch_exactly(model_small, train_small):
    batch = model_small.predict(train_small.inputs[:50])
    single = [model_small.predict_one(r) for r in train_small.inputs[:50]]
    assert batch.tolist() == single


def test_model_theta_checks(model_small):
    with pytest.raises(DataError):
        SurrogateModel(np.ones(3), model_small.basis)
    with pytest.raises(DataError):
        SurrogateModel(np.full(64, np.nan), model_small.basis)
