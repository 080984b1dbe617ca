import math

import numpy as np
import pytest

from spps_ist.direct import (ScatteringData, SppsPolynomials, direct_from_samples, evaluate_a,
                             evaluate_b, find_eigenvalues, log_spaced_rho, norming_constant,
                             polynomial_roots, run_direct)
from spps_ist.errors import DegenerateEigenvectorError, NFTError, SpectralDomainError
from spps_ist.grid_quad import UniformGrid
from spps_ist.oracles import Example1Params, analytic_ab_example1
from spps_ist.potentials import PotentialSpec, evaluate

from conftest import FAST_NPU


def test_log_spaced_rho_layout():
    rho = log_spaced_rho()
    assert len(rho) == 5000
    assert np.all(np.diff(rho) > 0)
    assert rho[2500] == pytest.approx(1e-3) and rho[-1] == pytest.approx(70)
    assert np.array_equal(rho[:2500], -rho[2500:][::-1])


def test_zero_potential():
    res = run_direct(PotentialSpec.zero(), N=20, nodes_per_unit=50, rho=log_spaced_rho(200))
    sd = res.data
    assert np.all(sd.a == 1) and np.all(sd.b == 0)
    assert sd.M == 0 and sd.unitarity_defect() == 0


def test_example1_against_closed_form():
    res = run_direct(PotentialSpec.chirped_sech(), N=160, nodes_per_unit=FAST_NPU)
    sd = res.data
    assert sd.meta["domain"] == [-25.0, 25.0]
    a_ex, b_ex = analytic_ab_example1(Example1Params(), sd.rho)
    assert np.max(np.abs(sd.a - a_ex)) < 1e-10
    assert np.max(np.abs(sd.b - b_ex)) < 1e-10
    assert sd.M == 1
    assert abs(sd.eigenvalues[0] - 0.498749217771909j) < 1e-12
    assert abs(sd.norming_constants[0] - (-0.0192926642392854 - 0.999813879232805j)) < 1e-10
    assert sd.unitarity_defect() < 1e-10


def test_example2_soliton(soliton_direct_full):
    # 300 nodes per unit limits the quadrature to ~1e-9 on this steep profile
    sd = soliton_direct_full.data
    assert sd.M == 1
    assert abs(sd.eigenvalues[0] - (0.5 + 0.5j * math.pi)) < 1e-8
    assert abs(sd.norming_constants[0] - (-1.09964966682947 - 0.110332988730178j)) < 1e-8
    assert sd.unitarity_defect() < 1e-8
    # reflectionless: b vanishes on the real line
    assert np.max(np.abs(sd.b)) < 1e-8


def test_example3_two_eigenvalues():
    sd = run_direct(PotentialSpec.chirped_gaussian(), N=160, nodes_per_unit=FAST_NPU).data
    assert sd.M == 2
    assert np.max(np.abs(sd.eigenvalues - [-0.5 + 1.97126262533634j,
                                           -0.5 + 0.792849539875588j])) < 1e-6
    assert np.max(np.abs(sd.norming_constants - [-1, 1])) < 1e-9


def test_example4_eigenvalue():
    sd = run_direct(PotentialSpec.rational_tail(), N=250, domain=(-200, 200),
                    nodes_per_unit=FAST_NPU).data
    assert sd.M == 1
    assert abs(sd.eigenvalues[0] - (-2.205978998465 + 0.485112496978116j)) < 1e-6
    assert abs(sd.norming_constants[0] + 1) < 1e-8
    assert sd.unitarity_defect() < 1e-4


def test_polynomial_roots_known():
    # (z - 0.5)(z + 0.25i) z^2
    coeffs = np.polynomial.polynomial.polyfromroots([0.5, -0.25j, 0, 0])
    roots = np.sort_complex(polynomial_roots(coeffs))
    assert np.allclose(roots, np.sort_complex(np.array([0.5, -0.25j, 0, 0])), atol=1e-14)
    assert len(polynomial_roots([3.0])) == 0


def test_trivial_polynomials_have_no_eigenvalues():
    zero = np.zeros(4, dtype=complex)
    polys = SppsPolynomials(zero, zero, zero, zero)
    assert find_eigenvalues(polys) == []
    assert evaluate_a(polys, np.array([0.0, 3.0])).tolist() == [1, 1]
    with pytest.raises(DegenerateEigenvectorError):
        # psi(i/2, 0) = 0 makes both quotients 0/0
        a2 = np.array([-1, 0, 0, 0], dtype=complex)
        norming_constant(SppsPolynomials(zero, a2, zero, zero), 0j)


def test_domain_guards(soliton_direct):
    polys = soliton_direct.polys
    with pytest.raises(SpectralDomainError):
        evaluate_a(polys, np.array([-0.2j]))
    with pytest.raises(SpectralDomainError):
        evaluate_b(polys, np.array([0.1 + 0.1j]))


def test_grid_must_contain_origin():
    g = UniformGrid.from_count(-3.05, 2.95, 61)
    q = evaluate(PotentialSpec.soliton(), g)
    with pytest.raises(NFTError):
        direct_from_samples(q, N=5)


def test_scattering_data_validation_flags():
    sd = ScatteringData([0.0, 1.0], [1.0, 0.5], [0.0, 0.5], [], [])
    issues = sd.validate()
    assert sd.unitarity_defect() == pytest.approx(0.5)
    assert len(issues) == 1 and "unitarity" in issues[0]
    with pytest.raises(ValueError):
        ScatteringData([0.0], [1.0, 1.0], [0.0], [], [])
