"""Inverse scattering transform for the focusing NLSE built on spectral parameter power series.

Typical use::

    from spps_ist import PotentialSpec, run_direct, evolve, run_inverse

    direct = run_direct(PotentialSpec.soliton())
    sd = evolve(direct.data, 1.0)
    q = run_inverse(sd).q_recovered
"""

from .direct import (DirectResult, ScatteringData, SppsPolynomials, evaluate_a, evaluate_b,
                     find_eigenvalues, log_spaced_rho, norming_constant, run_direct)
from .errors import NFTError
from .evolution import evolve, evolve_to
from .formats import (load_scattering_data, load_solution, save_scattering_data,
                      save_solution)
from .grid_quad import SampledFunction, UniformGrid
from .inverse import InverseConfig, InverseSolveResult, run_inverse, wronskian_indicator
from .potentials import PotentialKind, PotentialSpec, select_domain
from .spps import SpectralPoint, build_table, evaluate_jost, rho_to_z, z_to_rho
from .zs_base import solve_base, zeroth_coefficients

__version__ = "0.1.0"

__all__ = [
    "DirectResult", "ScatteringData", "SppsPolynomials", "evaluate_a", "evaluate_b",
    "find_eigenvalues", "log_spaced_rho", "norming_constant", "run_direct", "NFTError",
    "evolve", "evolve_to", "load_scattering_data", "load_solution", "save_scattering_data",
    "save_solution", "SampledFunction", "UniformGrid", "InverseConfig", "InverseSolveResult",
    "run_inverse", "wronskian_indicator", "PotentialKind", "PotentialSpec", "select_domain",
    "SpectralPoint", "build_table", "evaluate_jost", "rho_to_z", "z_to_rho", "solve_base",
    "zeroth_coefficients",
]
