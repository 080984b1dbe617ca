"""Spectral parameter power series (SPPS) for the Jost solutions.

With ``z = (1/2 + i rho) / (1/2 - i rho)`` the Jost solutions are

    phi(rho, x) = exp(-i rho x) [(1, 0) + (z + 1) sum_n (-z)^n b_n(x)]
    psi(rho, x) = exp( i rho x) [(0, 1) + (z + 1) sum_n (-z)^n a_n(x)]

and the tilded pair follows by conjugation.  Rows ``n >= 1`` of the
coefficient table are produced by a recurrent integration that needs only
the previous row and the base solutions at ``rho = i/2``.

Exponential factors in the recurrence are folded into weighted
cumulative integrals: the code carries ``G_n = exp(x) H_n`` and
``Q_n = exp(-x) P_n`` instead of ``H_n`` and ``P_n``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InstabilityError, SingularBaseError, SpectralDomainError
from .grid_quad import (SampledFunction, UniformGrid, cumulative_left_values,
                        cumulative_right_values)
from .zs_base import BaseJost, ZerothCoefficients

DEFAULT_N_DIRECT = 160
DEFAULT_N_INVERSE = 50
BASE_FLOOR = 1e-12
OVERFLOW_LIMIT = 1e150


@dataclass(frozen=True)
class SpectralPoint:
    rho: complex
    z: complex
    z_tilde: complex


def rho_to_z(rho) -> SpectralPoint:
    from .errors import PoleError
    rho = complex(rho)
    if abs(rho + 0.5j) < 1e-300:
        raise PoleError("rho = -i/2 is the pole of the spectral map")
    num, den = 0.5 + 1j * rho, 0.5 - 1j * rho
    z_tilde = den / num if num != 0 else complex("inf")
    return SpectralPoint(rho, num / den, z_tilde)


def z_to_rho(z):
    """Inverse spectral map ``rho = (z - 1) / (2i (z + 1))``."""
    z = np.asarray(z, dtype=complex)
    out = (z - 1) / (2j * (z + 1))
    return complex(out) if out.ndim == 0 else out


def spectral_z(rho):
    """Vectorised ``z(rho)``."""
    rho = np.asarray(rho, dtype=complex)
    return (0.5 + 1j * rho) / (0.5 - 1j * rho)


@dataclass
class RecurrenceWorkspace:
    """Intermediate functions of the last computed row (scaled forms)."""

    u: np.ndarray   # exp(x) h_n
    G: np.ndarray   # exp(x) H_n
    v: np.ndarray   # exp(-x) p_n
    Q: np.ndarray   # exp(-x) P_n


@dataclass(frozen=True)
class SppsTable:
    """Coefficient rows ``0..N`` sampled at the grid columns ``x_index``.

    Each array has shape ``(N + 1, len(x_index))``.
    """

    N: int
    grid: UniformGrid
    x_index: np.ndarray
    a1: np.ndarray
    a2: np.ndarray
    b1: np.ndarray
    b2: np.ndarray
    a1_prime: np.ndarray
    b2_prime: np.ndarray

    @property
    def x(self):
        return self.grid.points[self.x_index]

    def column(self, x):
        """Position of grid coordinate ``x`` among the stored columns."""
        i = self.grid.index_of(x)
        hits = np.flatnonzero(self.x_index == i)
        if not len(hits):
            raise KeyError(f"x = {x} is not a stored column")
        return int(hits[0])

    def truncated(self, N):
        if N > self.N:
            raise ValueError(f"table only has rows up to {self.N}")
        s = slice(0, N + 1)
        return SppsTable(N, self.grid, self.x_index, self.a1[s], self.a2[s],
                         self.b1[s], self.b2[s], self.a1_prime[s], self.b2_prime[s])

    def save_csv(self, path):
        """Dump ``x, n`` and the four complex components, one line per entry."""
        with open(path, "w") as fh:
            fh.write("x,n,re_a1,im_a1,re_a2,im_a2,re_b1,im_b1,re_b2,im_b2\n")
            for j, x in enumerate(self.x):
                for n in range(self.N + 1):
                    vals = (self.a1[n, j], self.a2[n, j], self.b1[n, j], self.b2[n, j])
                    parts = ",".join(f"{v.real!r},{v.imag!r}" for v in vals)
                    fh.write(f"{x!r},{n},{parts}\n")


def _next_row(qv, qc, h, base, prev, inv_f, inv_g):
    a1p, a2p, da1p, b1p, b2p, db2p = prev
    # a-side: u = exp(x) h_n, G = exp(x) H_n = int_x^inf exp(x-s) f u ds
    u = da1p + a1p - qv * a2p
    G = cumulative_right_values(base.f * u, h, rate=1.0)
    a2 = -base.f * cumulative_right_values(qc * inv_f ** 2 * G, h)
    a1 = base.psi1_scaled * inv_f * a2 - G * inv_f
    da1 = da1p + a1 + a1p + qv * (a2 - a2p)
    # b-side: v = exp(-x) p_n, Q = exp(-x) P_n = int_-inf^x exp(s-x) g v ds
    v = db2p - b2p + qc * b1p
    Q = cumulative_left_values(base.g * v, h, rate=1.0)
    b1 = base.g * cumulative_left_values(qv * inv_g ** 2 * Q, h)
    b2 = base.phi2_scaled * inv_g * b1 + Q * inv_g
    db2 = db2p - b2 - b2p - qc * (b1 - b1p)
    return (a1, a2, da1, b1, b2, db2), RecurrenceWorkspace(u, G, v, Q)


def build_table(q, base: BaseJost, zeroth: ZerothCoefficients, N=DEFAULT_N_DIRECT,
                x_index=None, floor=BASE_FLOOR) -> SppsTable:
    """Run the coefficient recurrence up to order ``N``.

    Only the grid columns in ``x_index`` are kept (all of them when
    ``None``); a full table at 1500 nodes per unit and ``N = 160`` would
    not fit in memory, while the recurrence itself needs just one row.
    """
    if N < 0:
        raise ValueError("N must be non-negative")
    grid = base.grid
    h = grid.h
    qv = q.values if isinstance(q, SampledFunction) else np.asarray(q, dtype=complex)
    qc = np.conj(qv)
    if x_index is None:
        x_index = np.arange(len(grid))
    x_index = np.atleast_1d(np.asarray(x_index, dtype=int))

    for name, arr in (("f", base.f), ("g", base.g)):
        m = np.min(np.abs(arr))
        if m < floor:
            raise SingularBaseError(f"|{name}| drops to {m:.3g} < {floor:g}; recurrence undefined")
    inv_f = 1.0 / base.f
    inv_g = 1.0 / base.g

    shape = (N + 1, len(x_index))
    out = {k: np.empty(shape, dtype=complex) for k in ("a1", "a2", "da1", "b1", "b2", "db2")}
    row = (zeroth.a10, zeroth.a20, zeroth.a10_prime, zeroth.b10, zeroth.b20, zeroth.b20_prime)
    for n in range(N + 1):
        if n:
            row, _ = _next_row(qv, qc, h, base, row, inv_f, inv_g)
            peak = max(np.max(np.abs(r)) for r in row)
            if not np.isfinite(peak) or peak > OVERFLOW_LIMIT:
                raise InstabilityError(
                    f"coefficient magnitudes overflow at order {n}", last_stable_order=n - 1)
        for key, r in zip(out, row):
            out[key][n] = r[x_index]
    return SppsTable(N, grid, x_index, out["a1"], out["a2"], out["b1"], out["b2"],
                     out["da1"], out["db2"])


def tilded_row(table: SppsTable, n):
    """``(a~_n, b~_n)`` from the conjugation relations, each a pair of arrays."""
    if not 0 <= n <= table.N:
        raise IndexError(f"row {n} outside 0..{table.N}")
    at = (np.conj(table.a2[n]), -np.conj(table.a1[n]))
    bt = (np.conj(table.b2[n]), -np.conj(table.b1[n]))
    return at, bt


def series(coeffs, w):
    """``sum_n (-w)^n c_n`` by Horner's scheme over axis 0 of ``coeffs``."""
    w = np.asarray(w, dtype=complex)
    acc = np.zeros(np.broadcast(w, coeffs[0]).shape, dtype=complex)
    for c in coeffs[::-1]:
        acc = acc * (-w) + c
    return acc


def evaluate_jost(table: SppsTable, point: SpectralPoint, which, x_index, tol=1e-12):
    """Truncated SPPS value of a Jost solution at stored column ``x_index``.

    ``which`` is one of ``"phi"``, ``"psi"``, ``"phi_tilde"``, ``"psi_tilde"``.
    ``x_index`` counts stored columns, not grid nodes.
    """
    j = x_index
    x = table.x[j]
    rho = point.rho
    if which in ("phi", "psi"):
        z = point.z
        if abs(z) > 1 + tol:
            raise SpectralDomainError(f"|z| = {abs(z):.6g} > 1 for {which}")
        if which == "phi":
            s1, s2 = series(table.b1[:, j], z), series(table.b2[:, j], z)
            e = np.exp(-1j * rho * x)
            return e * np.array([1 + (z + 1) * s1, (z + 1) * s2])
        s1, s2 = series(table.a1[:, j], z), series(table.a2[:, j], z)
        e = np.exp(1j * rho * x)
        return e * np.array([(z + 1) * s1, 1 + (z + 1) * s2])
    if which in ("phi_tilde", "psi_tilde"):
        zt = point.z_tilde
        if abs(zt) > 1 + tol:
            raise SpectralDomainError(f"|z~| = {abs(zt):.6g} > 1 for {which}")
        if which == "phi_tilde":
            c1, c2 = np.conj(table.b2[:, j]), -np.conj(table.b1[:, j])
            e = np.exp(1j * rho * x)
            return e * np.array([(zt + 1) * series(c1, zt), -1 + (zt + 1) * series(c2, zt)])
        c1, c2 = np.conj(table.a2[:, j]), -np.conj(table.a1[:, j])
        e = np.exp(-1j * rho * x)
        return e * np.array([1 + (zt + 1) * series(c1, zt), (zt + 1) * series(c2, zt)])
    raise ValueError(f"unknown Jost solution {which!r}")
