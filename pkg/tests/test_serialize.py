import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from qdframes.core import Frame, SelfAdjoint
from qdframes.serialize import (
    FormatError,
    dump_frame,
    dump_measurements,
    dump_operator,
    frame_from_json,
    frame_to_json,
    load_frame,
    load_measurements,
    load_operator,
    measurements_from_csv,
    operator_from_json,
)

doubles = st.floats(allow_nan=False, allow_infinity=False)


@settings(max_examples=50, deadline=None)
@given(re=arrays(float, (3, 2), elements=doubles), im=arrays(float, (3, 2), elements=doubles))
def test_frame_round_trip_exact(re, im):
    for X in (re, re + 1j * im):
        f = Frame(X)
        assert frame_from_json(json.loads(json.dumps(frame_to_json(f)))) == f


def test_complex_pairs_format():
    doc = frame_to_json(Frame([[1, 2j]]))
    assert doc == {"field": "complex", "dim": 2, "vectors": [[[1.0, 0.0], [0.0, 2.0]]]}


def test_files_round_trip(tmp_path, rng):
    f = Frame(rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3)))
    dump_frame(f, tmp_path / "f.json")
    assert load_frame(tmp_path / "f.json") == f
    T = SelfAdjoint(rng.standard_normal((3, 3)))
    dump_operator(T, tmp_path / "t.json")
    assert load_operator(tmp_path / "t.json") == T
    a = rng.standard_normal(5)
    dump_measurements(a, tmp_path / "a.csv")
    assert np.array_equal(load_measurements(tmp_path / "a.csv"), a)


@pytest.mark.parametrize("doc", [
    {"field": "quaternion", "dim": 1, "vectors": [[1]]},
    {"field": "real", "dim": 2, "vectors": [[1]]},
    {"field": "real", "dim": 0, "vectors": [[1]]},
    {"field": "real", "dim": 1, "vectors": []},
    {"field": "real", "dim": 1, "vectors": [["x"]]},
    {"field": "complex", "dim": 1, "vectors": [[1.0]]},
    [1, 2],
])
def test_bad_frame_documents(doc):
    with pytest.raises(FormatError):
        frame_from_json(doc)


def test_non_finite_rejected(tmp_path):
    p = tmp_path / "f.json"
    p.write_text('{"field": "real", "dim": 1, "vectors": [[NaN]]}')
    with pytest.raises(FormatError):
        load_frame(p)
    p.write_text("{not json")
    with pytest.raises(FormatError):
        load_frame(p)
    with pytest.raises(FormatError):
        measurements_from_csv("a\ninf\n")


def test_operator_shape_checked():
    with pytest.raises(FormatError):
        operator_from_json({"field": "real", "dim": 2, "matrix": [[1, 0]]})


def test_csv_parsing():
    assert np.array_equal(measurements_from_csv("1\n2.5\n\n"), [1, 2.5])
    assert np.array_equal(measurements_from_csv("a\n-3\n"), [-3])
    with pytest.raises(FormatError):
        measurements_from_csv("a\n")
    with pytest.raises(FormatError):
        measurements_from_csv("1,2\n")
    with pytest.raises(FormatError):
        measurements_from_csv("a\nfoo\n")
