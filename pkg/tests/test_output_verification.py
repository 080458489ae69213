import json
import math

import numpy as np
import pytest

from nu_spectra import verification
from nu_spectra.errors import InvalidParams
from nu_spectra.nu_engine import LowPoly
from nu_spectra.output import (
    compact_json,
    dumps_csv,
    dumps_json,
    flatten,
    format_float,
    records_to_csv,
    to_plain,
)

# -- serialization ---------------------------------------------------------------


@pytest.mark.parametrize("x,text", [
    (1.0, "1.0"),
    (-3.0, "-3.0"),
    (0.0, "0.0"),
    (0.1, "0.10000000000000001"),
    (1e300, "1.0000000000000001e+300"),
    (math.inf, "inf"),
    (-math.inf, "-inf"),
    (math.nan, "nan"),
    (np.float64(2.5), "2.5"),
])
def test_format_float(x, text):
    assert format_float(x) == text


def test_format_float_round_trips():
    rng = np.random.default_rng(7)
    for x in rng.normal(size=200) * 10.0 ** rng.integers(-20, 20, size=200):
        assert float(format_float(x)) == x


def test_to_plain():
    out = to_plain({"a": np.arange(3), "b": (np.float64(1.5), np.bool_(True)), "c": 1 + 2j, "p": LowPoly.of(1, 2, 3)})
    assert out == {"a": [0, 1, 2], "b": [1.5, True], "c": {"re": 1.0, "im": 2.0}, "p": [1.0, 2.0, 3.0]}
    assert type(out["a"][0]) is int
    with pytest.raises(TypeError):
        to_plain(object())


def test_dumps_json():
    obj = {"x": [1.0, 2.0], "nested": {"ok": True, "none": None}, "bad": math.inf, "empty": []}
    text = dumps_json(obj)
    assert text.endswith("}\n") and "\r" not in text
    assert '"x": [1.0, 2.0]' in text
    back = json.loads(text)
    assert back == {"x": [1.0, 2.0], "nested": {"ok": True, "none": None}, "bad": "inf", "empty": []}
    assert compact_json(obj) == '{"x":[1.0,2.0],"nested":{"ok":true,"none":null},"bad":"inf","empty":[]}'


def test_dumps_json_list_of_records():
    text = dumps_json({"results": [{"a": 1}, {"a": 2}]})
    assert json.loads(text) == {"results": [{"a": 1}, {"a": 2}]}
    assert text.count("\n") > 3


def test_dumps_csv():
    text = dumps_csv(["name", "value", "flag"], [["a,b", 1.0, True], ['say "hi"', None, False]], {"potential": "morse"})
    assert text == ('# potential=morse\n'
                    'name,value,flag\n'
                    '"a,b",1.0,true\n'
                    '"say ""hi""",,false\n')


def test_flatten_and_records():
    assert flatten({"q": {"n": 1, "l": 0}, "e": 2.0, "d": {}}) == {"q.n": 1, "q.l": 0, "e": 2.0, "d": {}}
    text = records_to_csv([{"a": 1, "b": [1.0, 2.0]}, {"a": 2, "c": "x"}])
    assert text == 'a,b,c\n1,"[1.0,2.0]",\n2,,x\n'


# -- tolerances ------------------------------------------------------------------------


def test_tolerances_default_and_env():
    assert verification.tolerances({}) == verification.DEFAULT_TOLERANCES
    tol = verification.tolerances({"NU_SPECTRA_TOL": "table=1e-8, norm=2e-6"})
    assert tol["table"] == 1e-8 and tol["norm"] == 2e-6
    assert tol["laguerre"] == verification.DEFAULT_TOLERANCES["laguerre"]


@pytest.mark.parametrize("raw", ["bogus=1", "table", "table=abc", "table=-1", "table=0"])
def test_tolerances_invalid(raw):
    with pytest.raises(InvalidParams):
        verification.tolerances({"NU_SPECTRA_TOL": raw})


def test_run_rejects_unknown_scope():
    with pytest.raises(InvalidParams):
        verification.run("everything")


# -- verification suites ----------------------------------------------------------------


def test_run_tables():
    report = verification.run("tables", verification.tolerances({}))
    assert report["summary"] == {"total": 18, "passed": 18, "failed": 0}
    assert report["failed"] == []
    names = [c["name"] for c in report["checks"]]
    assert "molecules" in names
    assert all(c["measured"] is None or c["measured"] <= 1e-10 for c in report["checks"] if c["name"] != "molecules")


def test_run_expansions():
    report = verification.run("expansions", verification.tolerances({}))
    assert report["summary"]["failed"] == 0, report["failed"]
    assert report["summary"]["total"] > 0


def test_tightened_tolerance_fails():
    tol = verification.tolerances({"NU_SPECTRA_TOL": "expansion=1e-30"})
    report = verification.run("expansions", tol)
    assert report["summary"]["failed"] > 0
    assert report["summary"]["passed"] + report["summary"]["failed"] == report["summary"]["total"]
