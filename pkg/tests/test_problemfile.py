import json

import pytest

from fpsdae.errors import ParseError, ValidationError
from fpsdae.problemfile import SchemaError, load, load_dict

BASE = {"schema_version": 1, "equations": ["x*y' - 3*y"], "n": 1, "initial": ["0", "0", "0"], "m": 1}


def test_shipped_problems_load(problems_dir):
    files = sorted(problems_dir.glob("*.json"))
    assert len(files) >= 10
    for path in files:
        pf = load(path)
        assert pf.problem().r == pf.r


def test_defaults_and_env_tolerances():
    pf = load_dict(dict(BASE, field="f64"), environ={"FPSDAE_TOL": "atol=1e-9,rtol=1e-5"})
    assert (pf.field.atol, pf.field.rtol) == (1e-9, 1e-5)
    assert pf.order == 10 and pf.path == "auto" and pf.d == 1
    pf = load_dict(dict(BASE, options={"atol": 1e-7}), environ={"FPSDAE_TOL": "atol=1e-9"})
    assert pf.field.atol == 1e-7


def test_scan_and_free():
    pf = load_dict(dict(BASE, m={"scan": [1, 3]}, options={"free": {"3": ["7/2"]}}), environ={})
    assert pf.scan == (1, 3) and pf.m is None
    assert pf.free == {3: [pytest.approx(3.5)]}


@pytest.mark.parametrize(
    "patch, exc",
    [
        ({"schema_version": 2}, SchemaError),
        ({"n": -1}, SchemaError),
        ({"unknown": 1}, SchemaError),
        ({"equations": []}, SchemaError),
        ({"r": 2}, ValidationError),
        ({"initial": [["0", "1"]]}, ValidationError),
        ({"equations": ["x*y'' - y"]}, ParseError),
        ({"m": {"scan": [3, 1]}}, ValidationError),
    ],
)
def test_rejections(patch, exc):
    with pytest.raises(exc):
        load_dict(dict(BASE, **patch), environ={})


def test_file_errors(tmp_path):
    with pytest.raises(SchemaError):
        load(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json", encoding="utf-8")
    with pytest.raises(SchemaError) as info:
        load(bad)
    assert "line 1" in str(info.value)
    good = tmp_path / "good.json"
    good.write_text(json.dumps(BASE), encoding="utf-8")
    assert load(good).n == 1
