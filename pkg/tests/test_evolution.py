import numpy as np
from hypothesis import given, strategies as st

from spps_ist.direct import ScatteringData
from spps_ist.evolution import evolve, evolve_to

times = st.floats(-3, 3, allow_nan=False)


def _data():
    rng = np.random.default_rng(0)
    rho = np.linspace(-5, 5, 41)
    b = 0.3 * (rng.normal(size=41) + 1j * rng.normal(size=41))
    a = np.sqrt(1 - np.abs(b) ** 2) * np.exp(1j * rho)
    return ScatteringData(rho, a, b, [0.5 + 1.2j, -1 + 0.3j], [1 - 1j, 0.2j])


@given(times, times)
def test_group_property(t1, t2):
    sd = _data()
    two = evolve(evolve(sd, t1), t2)
    one = evolve(sd, t1 + t2)
    assert np.allclose(two.b, one.b, rtol=1e-12, atol=1e-14)
    assert np.allclose(two.norming_constants, one.norming_constants, rtol=1e-11, atol=0)
    assert abs(two.meta["t"] - (t1 + t2)) < 1e-12


@given(times)
def test_a_and_moduli_are_invariant(t):
    sd = _data()
    out = evolve(sd, t)
    assert np.array_equal(out.a, sd.a)
    assert np.array_equal(out.eigenvalues, sd.eigenvalues)
    assert np.allclose(np.abs(out.b), np.abs(sd.b), rtol=1e-14)
    assert abs(out.unitarity_defect() - sd.unitarity_defect()) < 1e-14


def test_zero_time_is_a_copy():
    sd = _data()
    out = evolve(sd, 0.0)
    assert out is not sd and np.array_equal(out.b, sd.b)
    out.b[0] = 7
    assert sd.b[0] != 7


def test_norming_constant_phase():
    sd = _data()
    out = evolve(sd, 0.4)
    expect = sd.norming_constants * np.exp(4j * sd.eigenvalues ** 2 * 0.4)
    assert np.allclose(out.norming_constants, expect, rtol=1e-15)


def test_evolve_to_absolute_time():
    sd = evolve(_data(), 1.0)
    assert evolve_to(sd, 2.5).meta["t"] == 2.5
    assert np.allclose(evolve_to(sd, 0.0).b, _data().b, rtol=1e-13, atol=1e-15)
