import numpy as np
import pytest
from hypothesis import given, strategies as st

from spps_ist.direct import ScatteringData
from spps_ist.errors import ParseError
from spps_ist.formats import (dumps_scattering_data, load_solution, loads_scattering_data,
                              save_solution)

finite = st.floats(allow_nan=False, allow_infinity=False)
pairs = st.tuples(finite, finite).map(lambda p: complex(*p))


@st.composite
def scattering_data(draw):
    k = draw(st.integers(0, 8))
    m = draw(st.integers(0, 3))
    rho = draw(st.lists(finite, min_size=k, max_size=k))
    a = draw(st.lists(pairs, min_size=k, max_size=k))
    b = draw(st.lists(pairs, min_size=k, max_size=k))
    ev = draw(st.lists(pairs, min_size=m, max_size=m))
    cn = draw(st.lists(pairs, min_size=m, max_size=m))
    meta = {"N": draw(st.integers(1, 300)), "K": k, "domain": [-12.0, 12.0],
            "nodes_per_unit": 1500.0, "t": draw(finite)}
    return ScatteringData(rho, a, b, ev, cn, meta)


def _bits(arr):
    return np.asarray(arr).view(np.uint64 if np.asarray(arr).dtype == float else np.uint64)


@given(scattering_data())
def test_round_trip_is_bit_exact(sd):
    back = loads_scattering_data(dumps_scattering_data(sd))
    for name in ("rho", "a", "b", "eigenvalues", "norming_constants"):
        x, y = getattr(sd, name), getattr(back, name)
        assert x.dtype == y.dtype and x.shape == y.shape
        assert np.array_equal(x.view(np.uint64), y.view(np.uint64)), name
    assert back.meta == sd.meta


def test_empty_eigenvalues_round_trip():
    sd = ScatteringData([0.0], [1.0], [0.0], [], [])
    text = dumps_scattering_data(sd)
    assert '"eigenvalues": []' in text
    back = loads_scattering_data(text)
    assert back.M == 0 and back.validation == []


def test_unitarity_violation_is_flagged_not_rejected():
    sd = ScatteringData([0.0, 1.0], [1.0, 0.9], [0.0, 0.9], [], [])
    back = loads_scattering_data(dumps_scattering_data(sd))
    assert back.K == 2
    assert any("unitarity" in v for v in back.validation)


def test_parse_errors_carry_location():
    good = dumps_scattering_data(ScatteringData([0.0, 1.0], [1, 1], [0, 0], [0.5j], [1]))
    with pytest.raises(ParseError) as exc:
        loads_scattering_data(good.replace('"version": 1', '"version": 1,,'))
    assert exc.value.line == 3
    bad = good.replace("[1.0, 0.0]", '[1.0, "x"]', 1)
    with pytest.raises(ParseError) as exc:
        loads_scattering_data(bad)
    assert exc.value.field == "a"
    assert bad.splitlines()[exc.value.line - 1].strip().startswith('[1.0, "x"]')
    with pytest.raises(ParseError) as exc:
        loads_scattering_data(good.replace('"b"', '"bb"'))
    assert exc.value.field == "b"
    with pytest.raises(ParseError):
        loads_scattering_data(good.replace("[0.0, 0.5]", "[0.0, 0.5], [1.0, 1.0]"))


def test_solution_csv_round_trip(tmp_path):
    x = np.linspace(-1, 1, 7)
    q = np.exp(1j * x) / 3
    path = tmp_path / "q.csv"
    save_solution(path, x, q)
    lines = path.read_text().splitlines()
    assert lines[0] == "x,re_q,im_q,abs_q"
    assert float(lines[1].split(",")[3]) == abs(q[0])
    xs, qs = load_solution(path)
    assert np.array_equal(xs, x) and np.array_equal(qs, q)


def test_solution_csv_errors(tmp_path):
    path = tmp_path / "q.csv"
    path.write_text("x,re_q,im_q,abs_q\n0,1,0,1\n1,nan?,0,1\n")
    with pytest.raises(ParseError) as exc:
        load_solution(path)
    assert exc.value.line == 3 and exc.value.field == "re_q"
