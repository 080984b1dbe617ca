import numpy as np
import pytest
from hypothesis import given, strategies as st

from spps_ist.errors import PoleError, SpectralDomainError
from spps_ist.grid_quad import UniformGrid
from spps_ist.oracles import jost_ode
from spps_ist.potentials import PotentialSpec, evaluate
from spps_ist.spps import (build_table, evaluate_jost, rho_to_z, series, spectral_z,
                           tilded_row, z_to_rho)
from spps_ist.zs_base import solve_base, zeroth_coefficients

upper = st.builds(complex, st.floats(-50, 50), st.floats(0, 50))


@given(upper)
def test_mobius_round_trip(rho):
    p = rho_to_z(rho)
    assert abs(p.z) <= 1 + 1e-15
    assert abs(z_to_rho(p.z) - rho) <= 1e-14 * max(1.0, abs(rho) ** 2)
    assert abs(p.z * p.z_tilde - 1) < 1e-14


@given(st.floats(-1e3, 1e3))
def test_real_axis_maps_to_circle(rho):
    assert abs(abs(rho_to_z(rho).z) - 1) < 1e-14


def test_spectral_map_special_points():
    assert rho_to_z(0.5j).z == 0
    assert rho_to_z(0).z == 1
    with pytest.raises(PoleError):
        rho_to_z(-0.5j)
    rho = np.array([0.1, -2.0, 1 + 1j])
    assert np.allclose(spectral_z(rho), [rho_to_z(r).z for r in rho], rtol=0, atol=1e-15)


def test_series_horner():
    c = np.array([1.0, 2.0, -1.5, 0.25])
    w = 0.3 - 0.4j
    assert abs(series(c, w) - sum(ck * (-w) ** k for k, ck in enumerate(c))) < 1e-15


@pytest.fixture(scope="module")
def soliton_table():
    spec = PotentialSpec.soliton()
    q = evaluate(spec, UniformGrid.from_density(-12, 12, 300))
    base = solve_base(q)
    g = q.grid
    cols = [g.index_of(x) for x in (-3.0, 0.0, 2.5)]
    return spec, build_table(q, base, zeroth_coefficients(base, q), 60, x_index=cols)


def test_zero_potential_table_vanishes():
    q = evaluate(PotentialSpec.zero(), UniformGrid.from_density(-2, 2, 50))
    base = solve_base(q)
    t = build_table(q, base, zeroth_coefficients(base, q), 10)
    for arr in (t.a1, t.a2, t.b1, t.b2):
        assert not np.any(arr)


def test_evaluate_jost_matches_ode_at_random_real_rho(soliton_table):
    spec, table = soliton_table
    g = table.grid
    rng = np.random.default_rng(2024)
    worst = 0.0
    for rho in rng.uniform(-5, 5, 10):
        point = rho_to_z(rho)
        for which in ("phi", "psi"):
            ref = jost_ode(spec, rho, table.x, which, g.x_min, g.x_max)
            for j in range(len(table.x)):
                worst = max(worst, np.max(np.abs(evaluate_jost(table, point, which, j)
                                                 - ref[:, j])))
    assert worst <= 1e-8


def test_tilded_solutions_follow_conjugation(soliton_table):
    spec, table = soliton_table
    g = table.grid
    rho = 0.8
    point = rho_to_z(rho)
    psi = jost_ode(spec, rho, table.x, "psi", g.x_min, g.x_max)
    phi = jost_ode(spec, rho, table.x, "phi", g.x_min, g.x_max)
    for j in range(len(table.x)):
        # psi~ = (conj psi_2, -conj psi_1), phi~ = (conj phi_2, -conj phi_1) on the real line
        pt = evaluate_jost(table, point, "psi_tilde", j)
        ft = evaluate_jost(table, point, "phi_tilde", j)
        assert np.max(np.abs(pt - [np.conj(psi[1, j]), -np.conj(psi[0, j])])) < 1e-8
        assert np.max(np.abs(ft - [np.conj(phi[1, j]), -np.conj(phi[0, j])])) < 1e-8


def test_conjugation_relation_applied_twice_negates(soliton_table):
    _, table = soliton_table
    for n in (0, 5, 60):
        (at1, at2), _ = tilded_row(table, n)
        # tilde of the tilde: (conj at2, -conj at1) = -(a1, a2)
        assert np.array_equal(np.conj(at2), -table.a1[n])
        assert np.array_equal(-np.conj(at1), -table.a2[n])
    with pytest.raises(IndexError):
        tilded_row(table, 61)


def test_outside_disk_rejected(soliton_table):
    _, table = soliton_table
    with pytest.raises(SpectralDomainError):
        evaluate_jost(table, rho_to_z(-0.3j), "phi", 0)
    with pytest.raises(SpectralDomainError):
        evaluate_jost(table, rho_to_z(0.3j), "psi_tilde", 0)


def test_table_helpers(soliton_table):
    _, table = soliton_table
    assert table.column(0.0) == 1
    with pytest.raises(KeyError):
        table.column(1.0)
    t10 = table.truncated(10)
    assert t10.a1.shape == (11, 3) and np.array_equal(t10.b2, table.b2[:11])


def test_coefficients_decay(soliton_table):
    _, table = soliton_table
    j = table.column(0.0)
    assert np.max(np.abs(table.a1[-5:, j])) < 1e-6 * np.max(np.abs(table.a1[:5, j]))
