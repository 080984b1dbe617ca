"""Closed-form reference data: chirped-sech scattering data and the one-soliton."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import PoleError


def _is_pole(w):
    w = np.asarray(w, dtype=complex)
    return (np.abs(w.imag) < 1e-14) & (w.real <= 0) & (np.abs(w.real - np.round(w.real)) < 1e-14)


def gamma_function(w):
    """Complex Gamma function; raises :class:`PoleError` at 0, -1, -2, ..."""
    if np.any(_is_pole(w)):
        raise PoleError(f"Gamma has a pole at {w}")
    out = special.gamma(np.asarray(w, dtype=complex))
    return complex(out) if np.ndim(out) == 0 else out


def log_gamma(w):
    if np.any(_is_pole(w)):
        raise PoleError(f"Gamma has a pole at {w}")
    return special.loggamma(np.asarray(w, dtype=complex))


@dataclass(frozen=True)
class Example1Params:
    """Parameters of ``q0 = -iA sech(x) exp(-i gamma A log cosh x)``."""

    A: float = 1.0
    gamma: float = 0.1

    @property
    def T(self) -> complex:
        # principal branch: T = i|T| when |gamma| < 2
        return cmath.sqrt(self.gamma ** 2 / 4 - 1)

    @property
    def omega_plus(self) -> complex:
        return -1j * self.A * (self.T + self.gamma / 2)

    @property
    def omega_minus(self) -> complex:
        return 1j * self.A * (self.T - self.gamma / 2)

    def omega(self, rho):
        return -1j * np.asarray(rho) - 0.5j * self.A * self.gamma + 0.5

    @property
    def eigenvalue_count(self) -> int:
        return int(math.floor(0.5 + self.A * abs(self.T)))

    def eigenvalues(self):
        return np.array([self.A * self.T - 1j * (m - 0.5)
                         for m in range(1, self.eigenvalue_count + 1)])


def _log_rgamma(w):
    # log(1/Gamma(w)), -inf at the poles of Gamma
    w = np.asarray(w, dtype=complex)
    pole = _is_pole(w)
    out = -special.loggamma(np.where(pole, 1.0, w))
    return np.where(pole, -np.inf, out)


def analytic_a_example1(params: Example1Params, rho):
    w = params.omega(rho)
    wp, wm = params.omega_plus, params.omega_minus
    return np.exp(log_gamma(w) + log_gamma(w - wm - wp)
                  + _log_rgamma(w - wp) + _log_rgamma(w - wm))


def analytic_b_example1(params: Example1Params, rho):
    A, g = params.A, params.gamma
    w = params.omega(rho)
    wp, wm = params.omega_plus, params.omega_minus
    pref = 1j / A * np.exp(-1j * g * A * math.log(2))
    return pref * np.exp(log_gamma(w) + log_gamma(1 - w + wm + wp)
                         - log_gamma(wp) - log_gamma(wm))


def analytic_ab_example1(params: Example1Params, rho):
    """Closed-form ``(a(rho), b(rho))`` for the chirped-sech potential.

    ``b`` is the scattering coefficient only for real ``rho``; at an
    eigenvalue its analytic continuation gives the norming constant.
    """
    a = analytic_a_example1(params, rho)
    b = analytic_b_example1(params, rho)
    if np.ndim(a) == 0:
        return complex(a), complex(b)
    return a, b


def soliton_solution(alpha, beta, delta, theta, x, t):
    """One-soliton of ``i q_t + q_xx + 2 q |q|^2 = 0`` with eigenvalue ``alpha + i beta``."""
    x = np.asarray(x, dtype=float)
    arg = 2 * beta * x + 8 * alpha * beta * t - delta
    phase = -2 * alpha * x - 4 * (alpha ** 2 - beta ** 2) * t - theta
    return 2 * beta / np.cosh(arg) * np.exp(1j * phase)


def jost_ode(q, rho, x_eval, which, x_min, x_max, rtol=1e-12, atol=1e-14):
    """Jost solution of the Zakharov-Shabat system by adaptive Runge-Kutta.

    ``q`` is a callable potential taken as zero outside ``[x_min, x_max]``.
    ``phi`` starts from ``exp(-i rho x_min) (1, 0)`` and is integrated to the
    right; ``psi`` starts from ``exp(i rho x_max) (0, 1)`` and is integrated
    to the left.  Returns an array of shape ``(2, len(x_eval))``.
    """
    x_eval = np.atleast_1d(np.asarray(x_eval, dtype=float))

    def rhs(x, n):
        qx = complex(q(np.array([x]))[0])
        return np.array([-1j * rho * n[0] + qx * n[1],
                         1j * rho * n[1] - qx.conjugate() * n[0]])

    if which == "phi":
        start, y0 = x_min, np.array([cmath.exp(-1j * rho * x_min), 0], dtype=complex)
        order = np.argsort(x_eval)
    elif which == "psi":
        start, y0 = x_max, np.array([0, cmath.exp(1j * rho * x_max)], dtype=complex)
        order = np.argsort(x_eval)[::-1]
    else:
        raise ValueError(f"unknown Jost solution {which!r}")
    targets = x_eval[order]
    sol = integrate.solve_ivp(rhs, (start, targets[-1]), y0, method="DOP853",
                              t_eval=targets, rtol=rtol, atol=atol)
    if not sol.success:
        raise RuntimeError(f"ODE oracle failed: {sol.message}")
    out = np.empty((2, len(x_eval)), dtype=complex)
    out[:, order] = sol.y
    return out
