"""Jost solutions of the Zakharov-Shabat system at ``rho = i/2``.

At ``rho = i/2`` the exponential factors of the Jost solutions are
``exp(-x/2)`` and ``exp(x/2)``.  Working with the scaled components

    f    = exp(x/2) psi_2,   psi1s = exp(x/2) psi_1
    g    = exp(-x/2) phi_1,  phi2s = exp(-x/2) phi_2

the system becomes

    psi1s' = psi1s + q f,      f'     = -conj(q) psi1s,
    g'     = q phi2s,          phi2s' = -phi2s - conj(q) g,

with ``(psi1s, f) -> (0, 1)`` at ``+inf`` and ``(g, phi2s) -> (1, 0)`` at
``-inf``.  Both pairs are obtained by Picard iteration of the equivalent
Volterra equations, whose exponential kernels ``exp(x - s)`` (``s > x``)
and ``exp(s - x)`` (``s < x``) never exceed one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BaseSolveError
from .grid_quad import (SampledFunction, UniformGrid, cumulative_left_values,
                        cumulative_right_values)

DEFAULT_TOL = 1e-13
DEFAULT_MAX_ITER = 200


@dataclass(frozen=True)
class BaseJost:
    grid: UniformGrid
    f: np.ndarray
    f_prime: np.ndarray
    g: np.ndarray
    g_prime: np.ndarray
    psi1_scaled: np.ndarray
    phi2_scaled: np.ndarray
    iterations: int = 0

    def phi(self):
        """``phi(i/2, x)`` as a ``(2, n)`` array."""
        e = np.exp(self.grid.points / 2)
        return np.vstack([e * self.g, e * self.phi2_scaled])

    def psi(self):
        """``psi(i/2, x)`` as a ``(2, n)`` array."""
        e = np.exp(-self.grid.points / 2)
        return np.vstack([e * self.psi1_scaled, e * self.f])

    def wronskian(self):
        # W[phi; psi] = phi1 psi2 - phi2 psi1; the exponentials cancel
        return self.g * self.f - self.phi2_scaled * self.psi1_scaled


@dataclass(frozen=True)
class ZerothCoefficients:
    a10: np.ndarray
    a20: np.ndarray
    b10: np.ndarray
    b20: np.ndarray
    a10_prime: np.ndarray
    b20_prime: np.ndarray


def _picard(step, init, tol, max_iter, label):
    cur = init
    diff = np.inf
    for it in range(1, max_iter + 1):
        new = step(cur)
        diff = max(np.max(np.abs(n - c)) for n, c in zip(new, cur))
        cur = new
        if diff < tol:
            return cur, it
    raise BaseSolveError(
        f"{label}: Picard iteration did not reach {tol:g} in {max_iter} steps "
        f"(last update {diff:.3g})", residual=diff)


def solve_base(q, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER) -> BaseJost:
    """Base Jost solutions ``phi(i/2, x)``, ``psi(i/2, x)`` in scaled form.

    ``q`` is a :class:`SampledFunction`.  The iteration stops once two
    successive iterates differ by less than ``tol`` in the max norm.
    """
    grid = q.grid
    h = grid.h
    qv = q.values
    qc = np.conj(qv)
    n = len(grid)

    def psi_step(state):
        p, f = state
        # psi1s(x) = -int_x^inf exp(x-s) q f ds,  f(x) = 1 + int_x^inf conj(q) psi1s ds
        p_new = -cumulative_right_values(qv * f, h, rate=1.0)
        f_new = 1.0 + cumulative_right_values(qc * p_new, h)
        return p_new, f_new

    def phi_step(state):
        g, r = state
        # phi2s(x) = -int_-inf^x exp(s-x) conj(q) g ds,  g(x) = 1 + int_-inf^x q phi2s ds
        r_new = -cumulative_left_values(qc * g, h, rate=1.0)
        g_new = 1.0 + cumulative_left_values(qv * r_new, h)
        return g_new, r_new

    zeros = np.zeros(n, dtype=complex)
    ones = np.ones(n, dtype=complex)
    (p, f), it1 = _picard(psi_step, (zeros, ones), tol, max_iter, "psi(i/2)")
    (g, r), it2 = _picard(phi_step, (ones, zeros), tol, max_iter, "phi(i/2)")
    return BaseJost(grid=grid, f=f, f_prime=-qc * p, g=g, g_prime=qv * r,
                    psi1_scaled=p, phi2_scaled=r, iterations=max(it1, it2))


def zeroth_coefficients(base: BaseJost, q) -> ZerothCoefficients:
    """Row ``n = 0`` of the coefficient table and the derivative seeds.

    ``a_{1,0}`` and ``b_{2,0}`` are the scaled Jost components themselves,
    so nothing is divided by ``q``.
    """
    qv = q.values if isinstance(q, SampledFunction) else np.asarray(q)
    a10 = base.psi1_scaled
    a20 = base.f - 1.0
    b10 = base.g - 1.0
    b20 = base.phi2_scaled
    return ZerothCoefficients(
        a10=a10, a20=a20, b10=b10, b20=b20,
        a10_prime=a10 + qv * (a20 + 1.0),
        b20_prime=-b20 - np.conj(qv) * (b10 + 1.0),
    )
