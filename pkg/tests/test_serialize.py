"""Deterministic report serialization."""

import json
import math

import numpy as np
import pytest

from qkq import serialize


def test_fmt_float_17_digits():
    x = 1.0 / 3.0
    s = serialize.fmt_float(x)
    assert float(s) == x           # round-trips exactly
    assert s == "0.33333333333333331"


def test_fmt_float_integers_stay_short():
    assert serialize.fmt_float(2.0) == "2"
    assert serialize.fmt_float(-0.5) == "-0.5"


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_fmt_float_rejects_non_finite(bad):
    with pytest.raises(ValueError):
        serialize.fmt_float(bad)


def test_canonical_json_sorted_and_newline_terminated():
    text = serialize.canonical_json({"b": 1, "a": [1.5, 2]})
    assert text.endswith("\n")
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"b": 1, "a": [1.5, 2]}


def test_canonical_json_float_fidelity():
    x = 0.1 + 0.2
    text = serialize.canonical_json({"v": x})
    assert json.loads(text)["v"] == x


def test_canonical_json_handles_numpy_scalars():
    obj = {"a": np.float64(1.25), "b": np.int64(3),
           "c": np.array([1.0, 2.0])}
    parsed = json.loads(serialize.canonical_json(obj))
    assert parsed == {"a": 1.25, "b": 3, "c": [1.0, 2.0]}


def test_write_json_byte_stable(tmp_path):
    payload = {"x": [1 / 3, 2 / 7], "name": "case"}
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    serialize.write_json(p1, payload)
    serialize.write_json(p2, payload)
    assert p1.read_bytes() == p2.read_bytes()


def test_write_csv_formats_floats(tmp_path):
    path = tmp_path / "t.csv"
    serialize.write_csv(path, ("i", "v"),
                        [{"i": 0, "v": 1 / 3}, {"i": 1, "v": 2.0}])
    lines = path.read_text().splitlines()
    assert lines[0] == "i,v"
    assert lines[1] == "0,0.33333333333333331"
    assert lines[2] == "1,2"
