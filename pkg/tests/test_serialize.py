import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from domdisc.frenet import Table, Transformed, Veronese
from domdisc.projlin import Chart, Subspace, grassmann_distance, normalize
from domdisc.serialize import (
    DecodeError,
    chart_from_json,
    chart_to_json,
    curve_from_json,
    curve_from_spec,
    dumps,
    flag_to_json,
    loads,
    point_from_json,
    point_to_json,
    subspace_from_json,
    subspace_to_json,
)

finite = st.floats(-1e3, 1e3, allow_nan=False)


@given(arrays(float, 4, elements=finite))
def test_point_roundtrip(v):
    if np.linalg.norm(v) < 1e-6:
        return
    p = normalize(v)
    assert point_from_json(loads(dumps(point_to_json(p)))).same(p)


@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
@settings(max_examples=40)
def test_subspace_roundtrip(k, seed):
    s = Subspace(np.random.default_rng(seed).standard_normal((4, k)))
    back = subspace_from_json(loads(dumps(subspace_to_json(s))))
    assert back.dim == k and grassmann_distance(s, back) < 1e-12


def test_chart_roundtrip():
    c = Chart([1.0, 0.2, -0.1, 0.3])
    back = chart_from_json(loads(dumps(chart_to_json(c))))
    assert np.allclose(back.covector, c.covector) and np.allclose(back.frame, c.frame)
    assert np.allclose(chart_from_json([0, 0, 0, 1]).covector, [0, 0, 0, 1])


def test_curve_json(V, tmp_path):
    g = np.diag([1.0, 2.0, 3.0, 4.0])
    T = curve_from_json({"g": g.tolist()})
    assert isinstance(T, Transformed)
    th = [0.0, 1.0, 2.0]
    obj = {"samples": [{"theta": t, "flag": flag_to_json(V.flag(t))} for t in th]}
    table = curve_from_json(loads(dumps(obj)))
    assert isinstance(table, Table)
    assert grassmann_distance(table.eval(1.0, 2), V.eval(1.0, 2)) < 1e-12
    path = tmp_path / "t.json"
    path.write_text(dumps(obj))
    assert isinstance(curve_from_spec(f"table:{path}"), Table)
    assert isinstance(curve_from_spec("veronese"), Veronese)


@pytest.mark.parametrize("bad", [
    lambda: point_from_json([0, 0, 0, 0]),
    lambda: point_from_json({"p": ["a", 1]}),
    lambda: point_from_json([1, math.inf, 0, 0]),
    lambda: subspace_from_json({"dim": 2, "basis": [[1, 0, 0, 0]]}),
    lambda: curve_from_json({}),
    lambda: curve_from_spec("sphere"),
    lambda: curve_from_spec("table:/nonexistent/file.json"),
    lambda: loads("{not json"),
])
def test_decode_errors(bad):
    with pytest.raises(DecodeError):
        bad()


def test_dumps_deterministic_and_clean():
    obj = {"b": np.float64(1.5), "a": [np.int64(2), math.nan], "c": np.array([1.0, 2.0])}
    text = dumps(obj)
    assert text == dumps(dict(reversed(list(obj.items()))))
    assert loads(text) == {"a": [2, None], "b": 1.5, "c": [1.0, 2.0]}
