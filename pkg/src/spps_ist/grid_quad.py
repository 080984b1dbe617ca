"""Uniform grids, composite 6-point Newton-Cotes quadrature and spline derivatives.

All integrals are computed panel by panel: a grid of ``5*P + 1`` points is
split into ``P`` panels of six nodes, and on each panel the integrand is
replaced by its quintic interpolant.  Cumulative integrals at interior
panel nodes integrate the same quintic, so they are exact for quintics at
every node and the full-interval value coincides with :func:`integrate`.

The ``rate`` argument of the cumulative routines computes exponentially
weighted integrals such as ``int_{x_min}^{x} exp(rate*(s-x)) y(s) ds``
without forming ``exp(x)`` explicitly, which keeps long domains free of
overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.interpolate import CubicSpline, make_interp_spline
from scipy.signal import lfilter

from .errors import InvalidGridError

PANEL = 5  # intervals per Newton-Cotes panel
DEFAULT_NODES_PER_UNIT = 1500


def _panel_weights():
    # W[j, k] = int_0^j L_k(s) ds, L_k the Lagrange basis on nodes 0..5
    nodes = range(PANEL + 1)
    W = np.zeros((PANEL + 1, PANEL + 1))
    for k in nodes:
        # coefficients of prod_{m != k} (s - m) / (k - m), exact rationals
        poly = [Fraction(1)]
        denom = Fraction(1)
        for m in nodes:
            if m == k:
                continue
            poly = [Fraction(0)] + poly  # multiply by s
            for i in range(len(poly) - 1):
                poly[i] -= m * poly[i + 1]
            denom *= k - m
        for j in nodes:
            val = sum(c * Fraction(j) ** (i + 1) / (i + 1) for i, c in enumerate(poly))
            W[j, k] = float(val / denom)
    return W


_W = _panel_weights()
NC6_WEIGHTS = _W[PANEL].copy()  # 19/288 * [19, 75, 50, 50, 75, 19] * 5


@dataclass(frozen=True)
class UniformGrid:
    """Equispaced nodes with ``count - 1`` a multiple of 5."""

    x_min: float
    x_max: float
    nodes_per_unit: float
    points: np.ndarray = field(repr=False, compare=False)

    def __post_init__(self):
        n = len(self.points)
        if n < PANEL + 1 or (n - 1) % PANEL:
            raise InvalidGridError(
                f"grid needs 5*P+1 >= 6 points for whole Newton-Cotes panels, got {n}")

    @classmethod
    def from_density(cls, x_min, x_max, nodes_per_unit=DEFAULT_NODES_PER_UNIT, anchor=0.0):
        """Grid of spacing ``1/nodes_per_unit`` covering ``[x_min, x_max]``.

        When ``anchor`` lies inside the interval it is placed exactly on a
        node (the direct problem reads coefficients at ``x = 0``).  The
        right end is extended until the panel count is whole.
        """
        if not x_max > x_min:
            raise InvalidGridError(f"empty interval [{x_min}, {x_max}]")
        if nodes_per_unit <= 0:
            raise InvalidGridError("nodes_per_unit must be positive")
        h = 1.0 / nodes_per_unit
        if anchor is not None and x_min <= anchor <= x_max:
            n_left = math.ceil((anchor - x_min) / h - 1e-9)
            n_right = math.ceil((x_max - anchor) / h - 1e-9)
            n_int = n_left + n_right
            n_int += -n_int % PANEL
            n_int = max(n_int, PANEL)
            points = anchor + (np.arange(n_int + 1) - n_left) * h
        else:
            n_int = math.ceil((x_max - x_min) / h - 1e-9)
            n_int += -n_int % PANEL
            n_int = max(n_int, PANEL)
            points = x_min + np.arange(n_int + 1) * h
        return cls(float(points[0]), float(points[-1]), float(nodes_per_unit), points)

    @classmethod
    def from_count(cls, x_min, x_max, count):
        points = np.linspace(x_min, x_max, count)
        npu = (count - 1) / (x_max - x_min) if x_max > x_min else 1.0
        return cls(float(x_min), float(x_max), npu, points)

    @property
    def h(self):
        return (self.x_max - self.x_min) / (len(self.points) - 1)

    def __len__(self):
        return len(self.points)

    def index_of(self, x):
        """Index of the node closest to ``x``."""
        i = int(round((x - self.x_min) / self.h))
        return min(max(i, 0), len(self.points) - 1)


@dataclass(frozen=True)
class SampledFunction:
    """Complex values tabulated on a :class:`UniformGrid`."""

    grid: UniformGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (len(self.grid),):
            raise InvalidGridError(
                f"{v.shape[0] if v.ndim else 0} values for a grid of {len(self.grid)} points")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, grid, fn):
        return cls(grid, np.asarray(fn(grid.points), dtype=complex) * np.ones(len(grid)))


# --- array-level kernels -------------------------------------------------

def _check_len(n):
    if n < PANEL + 1 or (n - 1) % PANEL:
        raise InvalidGridError(f"need 5*P+1 >= 6 samples, got {n}")


def integrate_values(y, h):
    y = np.asarray(y)
    _check_len(len(y))
    panels = y[:-1].reshape(-1, PANEL)
    last = y[PANEL::PANEL]
    tot = panels @ NC6_WEIGHTS[:PANEL] + last * NC6_WEIGHTS[PANEL]
    return h * np.sum(tot)


def cumulative_left_values(y, h, rate=0.0):
    """``F[i] = int_{x_0}^{x_i} exp(rate*(s - x_i)) y(s) ds`` on every node."""
    y = np.asarray(y)
    _check_len(len(y))
    P = (len(y) - 1) // PANEL
    idx = np.arange(P)[:, None] * PANEL + np.arange(PANEL + 1)[None, :]
    stencil = y[idx]  # (P, 6)
    if rate == 0.0:
        local = h * stencil @ _W[1:].T  # (P, 5): integral from panel start to node j
        ends = np.concatenate(([0.0], np.cumsum(local[:, -1])))
        inner = ends[:-1, None] + local
    else:
        j = np.arange(1, PANEL + 1)[:, None]
        k = np.arange(PANEL + 1)[None, :]
        Wr = _W[1:] * np.exp(rate * h * (k - j))
        local = h * stencil @ Wr.T
        decay = math.exp(-rate * h * PANEL)
        ends = lfilter([1.0], [1.0, -decay], local[:, -1])
        start = np.concatenate(([0.0], ends[:-1]))
        inner = start[:, None] * np.exp(-rate * h * np.arange(1, PANEL + 1))[None, :] + local
    out = np.empty(len(y), dtype=np.result_type(y, complex))
    out[0] = 0.0
    out[1:] = inner.reshape(-1)
    return out


def cumulative_right_values(y, h, rate=0.0):
    """``F[i] = int_{x_i}^{x_max} exp(rate*(x_i - s)) y(s) ds`` on every node."""
    return cumulative_left_values(np.asarray(y)[::-1], h, rate)[::-1].copy()


def spline_derivative_values(x, y, order=3):
    if len(y) < 5:
        raise InvalidGridError(f"spline differentiation needs >= 5 points, got {len(y)}")
    y = np.asarray(y, dtype=complex)
    if order == 3:
        spl = CubicSpline(x, y, bc_type="not-a-knot")
    else:
        spl = make_interp_spline(x, y, k=order)
    return spl.derivative()(x)


# --- public operations on sampled functions -----------------------------

def integrate(fn: SampledFunction) -> complex:
    """Composite 6-point Newton-Cotes integral over the whole grid."""
    return complex(integrate_values(fn.values, fn.grid.h))


def cumulative_from_left(fn: SampledFunction) -> SampledFunction:
    return SampledFunction(fn.grid, cumulative_left_values(fn.values, fn.grid.h))


def cumulative_from_right(fn: SampledFunction) -> SampledFunction:
    return SampledFunction(fn.grid, cumulative_right_values(fn.values, fn.grid.h))


def spline_derivative(fn: SampledFunction, order=3) -> SampledFunction:
    """Derivative of the not-a-knot cubic spline through the samples."""
    return SampledFunction(fn.grid, spline_derivative_values(fn.grid.points, fn.values, order))
