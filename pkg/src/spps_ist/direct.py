"""Direct scattering: a(rho), b(rho), eigenvalues and norming constants.

Once the coefficient table is known at ``x = 0`` everything reduces to
four polynomials in ``z``.  ``a`` is evaluated anywhere in the closed unit
disk; ``b`` only on the unit circle (real ``rho``).  Eigenvalues are the
roots of the truncated ``a_N(z)`` inside the disk.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import potentials as pot
from .errors import DegenerateEigenvectorError, NFTError, SpectralDomainError
from .grid_quad import DEFAULT_NODES_PER_UNIT, SampledFunction, UniformGrid
from .spps import (DEFAULT_N_DIRECT, SppsTable, SpectralPoint, build_table, rho_to_z,
                   spectral_z, z_to_rho)
from .zs_base import solve_base, zeroth_coefficients

log = logging.getLogger(__name__)

P = np.polynomial.polynomial

DEFAULT_K = 5000
RHO_WINDOW = (1e-3, 70.0)
DISK_MARGIN = 1e-6
ROOT_RESIDUAL_TOL = 1e-8
QUOTIENT_TOL = 1e-6
DENOM_FLOOR = 1e-14
UNITARITY_TOL = 1e-8


def log_spaced_rho(K=DEFAULT_K, lo=RHO_WINDOW[0], hi=RHO_WINDOW[1]):
    """``K/2`` points ``10**alpha``, alpha uniform on ``[log10 lo, log10 hi]``, mirrored."""
    half = np.logspace(np.log10(lo), np.log10(hi), K // 2)
    return np.concatenate([-half[::-1], half])


@dataclass
class ScatteringData:
    rho: np.ndarray
    a: np.ndarray
    b: np.ndarray
    eigenvalues: np.ndarray
    norming_constants: np.ndarray
    meta: dict = field(default_factory=dict)
    # problems flagged when the data were parsed from a file
    validation: list = field(default_factory=list, compare=False)

    def __post_init__(self):
        self.rho = np.asarray(self.rho, dtype=float)
        self.a = np.asarray(self.a, dtype=complex)
        self.b = np.asarray(self.b, dtype=complex)
        self.eigenvalues = np.asarray(self.eigenvalues, dtype=complex).reshape(-1)
        self.norming_constants = np.asarray(self.norming_constants, dtype=complex).reshape(-1)
        if not (self.rho.shape == self.a.shape == self.b.shape):
            raise ValueError("rho, a and b must have equal length")
        if self.eigenvalues.shape != self.norming_constants.shape:
            raise ValueError("one norming constant per eigenvalue is required")
        self.meta.setdefault("t", 0.0)

    @property
    def M(self):
        return len(self.eigenvalues)

    @property
    def K(self):
        return len(self.rho)

    def unitarity_defect(self):
        """``max | |a|^2 + |b|^2 - 1 |`` over the real samples."""
        if not self.K:
            return 0.0
        with np.errstate(over="ignore"):
            return float(np.max(np.abs(np.abs(self.a) ** 2 + np.abs(self.b) ** 2 - 1)))

    def validate(self, tol=UNITARITY_TOL):
        """List of problems found; empty when the data are consistent."""
        issues = []
        d = self.unitarity_defect()
        if d > tol:
            issues.append(f"unitarity defect {d:.3g} exceeds {tol:g}")
        if np.any(self.eigenvalues.imag <= 0):
            issues.append("eigenvalue with non-positive imaginary part")
        if np.any(self.norming_constants == 0):
            issues.append("zero norming constant")
        return issues

    def copy(self):
        return ScatteringData(self.rho.copy(), self.a.copy(), self.b.copy(),
                              self.eigenvalues.copy(), self.norming_constants.copy(),
                              dict(self.meta))


@dataclass(frozen=True)
class SppsPolynomials:
    """Power-basis coefficients (lowest degree first) of the series at ``x = 0``."""

    A1: np.ndarray
    A2: np.ndarray
    B1: np.ndarray
    B2: np.ndarray

    @classmethod
    def from_table(cls, table: SppsTable, x=0.0):
        j = table.column(x)
        sign = (-1.0) ** np.arange(table.N + 1)
        return cls(sign * table.a1[:, j], sign * table.a2[:, j],
                   sign * table.b1[:, j], sign * table.b2[:, j])

    @property
    def N(self):
        return len(self.A1) - 1

    def a_poly(self):
        """Coefficients of ``a_N(z)``, degree ``2N + 2``."""
        zp1 = np.array([1.0, 1.0])
        left = P.polymul(P.polyadd([1.0], P.polymul(zp1, self.B1)),
                         P.polyadd([1.0], P.polymul(zp1, self.A2)))
        right = P.polymul(P.polymul(zp1, zp1), P.polymul(self.B2, self.A1))
        return P.polysub(left, right)


def _as_z(point):
    if isinstance(point, SpectralPoint):
        return np.asarray(point.z), np.asarray(point.rho)
    rho = np.asarray(point, dtype=complex)
    return spectral_z(rho), rho


def evaluate_a(polys: SppsPolynomials, point, tol=1e-12):
    """Truncated-series ``a(rho)``; ``point`` is a SpectralPoint or array of rho."""
    z, _ = _as_z(point)
    if np.any(np.abs(z) > 1 + tol):
        raise SpectralDomainError("a(rho) is only available for Im rho >= 0 (|z| <= 1)")
    zp1 = z + 1
    out = ((1 + zp1 * P.polyval(z, polys.B1)) * (1 + zp1 * P.polyval(z, polys.A2))
           - zp1 ** 2 * P.polyval(z, polys.B2) * P.polyval(z, polys.A1))
    return complex(out) if np.ndim(out) == 0 else out


def evaluate_b(polys: SppsPolynomials, point, tol=1e-12):
    """Truncated-series ``b(rho)`` for real ``rho`` (``|z| = 1``)."""
    z, rho = _as_z(point)
    if np.any(np.abs(np.imag(rho)) > tol):
        raise SpectralDomainError("b(rho) is defined for real rho only")
    zb = np.conj(z)
    zp1, zbp1 = z + 1, zb + 1
    out = (zp1 * P.polyval(z, polys.B2) * (1 + zbp1 * P.polyval(zb, np.conj(polys.A2)))
           + zbp1 * (1 + zp1 * P.polyval(z, polys.B1)) * P.polyval(zb, np.conj(polys.A1)))
    return complex(out) if np.ndim(out) == 0 else out


def polynomial_roots(coeffs):
    """All roots of a power-basis polynomial via its balanced companion matrix."""
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    if len(c) < 2:
        return np.empty(0, dtype=complex)
    # strip zero roots at the origin before building the companion form
    nz = 0
    while c[nz] == 0:
        nz += 1
    c = c[nz:]
    n = len(c) - 1
    comp = np.zeros((n, n), dtype=complex)
    comp[1:, :-1] = np.eye(n - 1)
    comp[:, -1] = -c[:-1] / c[-1]
    roots = scipy.linalg.eigvals(comp, check_finite=True)  # LAPACK geev balances
    return np.concatenate([np.zeros(nz, dtype=complex), roots])


def _newton_polish(coeffs, z, steps=8):
    dc = P.polyder(coeffs)
    for _ in range(steps):
        f = P.polyval(z, coeffs)
        d = P.polyval(z, dc)
        if d == 0:
            break
        step = f / d
        z = z - step
        if abs(step) < 1e-17 * max(1.0, abs(z)):
            break
    return z


def norming_quotients(polys: SppsPolynomials, z):
    """Both quotients ``phi_j(rho_m, 0) / psi_j(rho_m, 0)`` and their denominators."""
    zp1 = z + 1
    phi1 = 1 + zp1 * P.polyval(z, polys.B1)
    phi2 = zp1 * P.polyval(z, polys.B2)
    psi1 = zp1 * P.polyval(z, polys.A1)
    psi2 = 1 + zp1 * P.polyval(z, polys.A2)
    return (phi1, psi1), (phi2, psi2)


def norming_constant(polys_or_table, z_m, floor=DENOM_FLOOR):
    """Norming constant at ``z_m`` and the discrepancy of the two quotients.

    Accepts either :class:`SppsPolynomials` or an :class:`SppsTable` that
    stores the ``x = 0`` column.
    """
    polys = polys_or_table
    if isinstance(polys_or_table, SppsTable):
        polys = SppsPolynomials.from_table(polys_or_table)
    (n1, d1), (n2, d2) = norming_quotients(polys, z_m)
    ok1, ok2 = abs(d1) > floor, abs(d2) > floor
    if not (ok1 or ok2):
        raise DegenerateEigenvectorError(f"both Jost denominators vanish at z = {z_m}")
    c1 = n1 / d1 if ok1 else None
    c2 = n2 / d2 if ok2 else None
    best = c1 if abs(d1) >= abs(d2) else c2
    if c1 is not None and c2 is not None:
        discrepancy = abs(c1 - c2) / max(abs(best), 1e-300)
    else:
        discrepancy = float("nan")
    return complex(best), float(discrepancy)


@dataclass(frozen=True)
class Eigenvalue:
    z: complex
    rho: complex
    norming_constant: complex
    quotient_discrepancy: float
    residual: float


def find_eigenvalues(polys: SppsPolynomials, disk_margin=DISK_MARGIN,
                     root_residual_tol=ROOT_RESIDUAL_TOL, quotient_tol=QUOTIENT_TOL):
    """Validated zeros of ``a_N(z)`` inside the unit disk, sorted by ``Im rho`` descending.

    A root survives when it lies within ``|z| <= 1 - disk_margin``, the
    polished residual is small relative to ``max |a_N|`` on the unit
    circle, and the two norming-constant quotients agree.  Truncation
    produces spurious roots near the circle that fail the last test.
    """
    coeffs = polys.a_poly()
    circle = np.exp(2j * np.pi * np.arange(512) / 512)
    scale = max(np.max(np.abs(P.polyval(circle, coeffs))), 1e-300)
    found = []
    for z in polynomial_roots(coeffs):
        if not np.isfinite(z) or abs(z) > 1 - disk_margin:
            continue
        z = _newton_polish(coeffs, z)
        if abs(z) > 1 - disk_margin:
            continue
        res = abs(P.polyval(z, coeffs)) / scale
        if res > root_residual_tol:
            log.debug("rejecting root z=%s: residual %.3g", z, res)
            continue
        try:
            c, disc = norming_constant(polys, z)
        except DegenerateEigenvectorError:
            log.debug("rejecting root z=%s: degenerate Jost pair", z)
            continue
        if not disc <= quotient_tol:
            log.debug("rejecting root z=%s: quotient discrepancy %.3g", z, disc)
            continue
        rho = z_to_rho(z)
        if rho.imag <= 0:
            continue
        found.append(Eigenvalue(complex(z), complex(rho), c, disc, float(res)))
    found.sort(key=lambda e: -e.rho.imag)
    return found


@dataclass
class DirectResult:
    """Scattering data plus the intermediate products of the direct solve."""

    data: ScatteringData
    table: SppsTable
    polys: SppsPolynomials
    eigen: list
    q: SampledFunction


def direct_from_samples(q: SampledFunction, N=DEFAULT_N_DIRECT, rho=None,
                        extra_columns=(), **eig_kw) -> DirectResult:
    """Direct transform of a potential already sampled on a grid containing ``x = 0``."""
    grid = q.grid
    if rho is None:
        rho = log_spaced_rho()
    i0 = grid.index_of(0.0)
    if abs(grid.points[i0]) > 1e-12:
        raise NFTError("the x-grid must contain x = 0 as a node")
    cols = sorted({i0, *(int(c) for c in extra_columns)})
    base = solve_base(q)
    zeroth = zeroth_coefficients(base, q)
    table = build_table(q, base, zeroth, N, x_index=cols)
    polys = SppsPolynomials.from_table(table)
    rho = np.asarray(rho, dtype=float)
    a = evaluate_a(polys, rho) if len(rho) else np.empty(0, complex)
    b = evaluate_b(polys, rho) if len(rho) else np.empty(0, complex)
    eig = find_eigenvalues(polys, **eig_kw)
    meta = {"N": int(N), "K": int(len(rho)), "domain": [grid.x_min, grid.x_max],
            "nodes_per_unit": grid.nodes_per_unit, "t": 0.0}
    sd = ScatteringData(rho, a, b, [e.rho for e in eig], [e.norming_constant for e in eig], meta)
    return DirectResult(sd, table, polys, eig, q)


def run_direct(spec: pot.PotentialSpec, N=DEFAULT_N_DIRECT, rho=None, domain=None,
               nodes_per_unit=DEFAULT_NODES_PER_UNIT,
               tail_threshold=pot.DEFAULT_TAIL_THRESHOLD, **kw) -> DirectResult:
    """Full direct pipeline for a catalogue or file potential."""
    dom = pot.select_domain(spec, tail_threshold, override=domain)
    grid = UniformGrid.from_density(dom.x_min, dom.x_max, nodes_per_unit)
    q = pot.evaluate(spec, grid)
    log.info("direct: domain [%g, %g], %d nodes, N=%d", grid.x_min, grid.x_max, len(grid), N)
    return direct_from_samples(q, N, rho, **kw)
