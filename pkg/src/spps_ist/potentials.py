"""Benchmark initial conditions, CSV-sampled potentials and domain truncation."""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DomainSelectionError, IngestionError, PotentialSpecError
from .grid_quad import SampledFunction, UniformGrid, integrate_values

DOMAIN_LADDER = (12.0, 25.0, 50.0, 100.0, 200.0)
DEFAULT_TAIL_THRESHOLD = 1e-7


class PotentialKind(str, enum.Enum):
    ZERO = "zero"
    CHIRPED_SECH = "chirped-sech"
    SOLITON = "soliton"
    CHIRPED_GAUSSIAN = "chirped-gaussian"
    RATIONAL_TAIL = "rational-tail"
    FROM_FILE = "file"


_REQUIRED = {
    PotentialKind.ZERO: (),
    PotentialKind.CHIRPED_SECH: ("A", "gamma"),
    PotentialKind.SOLITON: ("alpha", "beta", "delta", "theta"),
    PotentialKind.CHIRPED_GAUSSIAN: ("A", "sigma", "mu"),
    PotentialKind.RATIONAL_TAIL: ("A", "mu"),
    PotentialKind.FROM_FILE: (),
}


@dataclass(frozen=True)
class PotentialSpec:
    kind: PotentialKind
    params: dict = field(default_factory=dict)
    file_path: str | None = None

    def __post_init__(self):
        try:
            kind = PotentialKind(self.kind)
        except ValueError:
            raise PotentialSpecError(f"unknown potential kind {self.kind!r}") from None
        object.__setattr__(self, "kind", kind)
        p = self.params
        missing = [k for k in _REQUIRED[kind] if k not in p or p[k] is None]
        if missing:
            raise PotentialSpecError(f"{kind.value}: missing parameter(s) {', '.join(missing)}")
        for k, v in p.items():
            if v is not None and not math.isfinite(float(v)):
                raise PotentialSpecError(f"{kind.value}: parameter {k} = {v} is not finite")
        if kind in (PotentialKind.CHIRPED_SECH, PotentialKind.CHIRPED_GAUSSIAN) and not p["A"] > 0:
            raise PotentialSpecError(f"{kind.value}: A must be positive")
        if kind is PotentialKind.SOLITON and not p["beta"] > 0:
            raise PotentialSpecError("soliton: beta must be positive")
        if kind is PotentialKind.CHIRPED_GAUSSIAN and not p["sigma"] > 0:
            raise PotentialSpecError("chirped-gaussian: sigma must be positive")
        if kind is PotentialKind.FROM_FILE and not self.file_path:
            raise PotentialSpecError("file potential needs a file_path")

    # convenience constructors for the catalogue
    @classmethod
    def zero(cls):
        return cls(PotentialKind.ZERO)

    @classmethod
    def chirped_sech(cls, A=1.0, gamma=0.1):
        return cls(PotentialKind.CHIRPED_SECH, {"A": A, "gamma": gamma})

    @classmethod
    def soliton(cls, alpha=0.5, beta=math.pi / 2, delta=0.1, theta=0.1):
        return cls(PotentialKind.SOLITON,
                   {"alpha": alpha, "beta": beta, "delta": delta, "theta": theta})

    @classmethod
    def chirped_gaussian(cls, A=2.5, sigma=2.0, mu=1.0):
        return cls(PotentialKind.CHIRPED_GAUSSIAN, {"A": A, "sigma": sigma, "mu": mu})

    @classmethod
    def rational_tail(cls, A=math.pi / 2, mu=1.0):
        return cls(PotentialKind.RATIONAL_TAIL, {"A": A, "mu": mu})

    @classmethod
    def from_file(cls, path):
        return cls(PotentialKind.FROM_FILE, {}, str(path))

    def __call__(self, x):
        return evaluate_at(self, x)


def _sech(x):
    ax = np.abs(x)
    e = np.exp(-ax)
    return 2 * e / (1 + e * e)


def _log_cosh(x):
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2 * ax)) - math.log(2)


def read_potential_csv(path):
    """Read ``x, Re q, Im q`` rows; ``#`` comments and one header line allowed."""
    xs, vals = [], []
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise IngestionError(f"cannot open potential file {path}: {exc}") from exc
    with fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                x, re, im = (float(c) for c in row[:3])
                if len(row) != 3:
                    raise ValueError
            except ValueError:
                if not xs and lineno == 1:
                    continue  # header
                raise IngestionError(f"{path}:{lineno}: expected three numeric columns") from None
            xs.append(x)
            vals.append(complex(re, im))
    if len(xs) < 2:
        raise IngestionError(f"{path}: need at least two samples")
    xs = np.array(xs)
    if np.any(np.diff(xs) <= 0):
        raise IngestionError(f"{path}: x column must be strictly increasing")
    return xs, np.array(vals)


def write_potential_csv(path, x, q):
    with open(path, "w") as fh:
        fh.write("x,re_q,im_q\n")
        for xi, qi in zip(x, q):
            fh.write(f"{float(xi)!r},{float(qi.real)!r},{float(qi.imag)!r}\n")


def evaluate_at(spec: PotentialSpec, x):
    """Potential values at arbitrary points ``x``."""
    x = np.asarray(x, dtype=float)
    p = spec.params
    kind = spec.kind
    if kind is PotentialKind.ZERO:
        return np.zeros(x.shape, dtype=complex)
    if kind is PotentialKind.CHIRPED_SECH:
        A, g = p["A"], p["gamma"]
        return -1j * A * _sech(x) * np.exp(-1j * g * A * _log_cosh(x))
    if kind is PotentialKind.SOLITON:
        al, be, de, th = p["alpha"], p["beta"], p["delta"], p["theta"]
        return 2 * be * _sech(2 * be * x - de) * np.exp(-1j * (2 * al * x + th))
    if kind is PotentialKind.CHIRPED_GAUSSIAN:
        return p["A"] * np.exp(1j * p["mu"] * x - x * x / p["sigma"])
    if kind is PotentialKind.RATIONAL_TAIL:
        return p["A"] * np.exp(1j * p["mu"] * x) / (x + 1j) ** 4
    xs, vals = read_potential_csv(spec.file_path)
    out = np.zeros(x.shape, dtype=complex)
    inside = (x >= xs[0]) & (x <= xs[-1])
    if len(xs) >= 4:
        out[inside] = CubicSpline(xs, vals)(x[inside])
    else:
        out[inside] = np.interp(x[inside], xs, vals.real) + 1j * np.interp(x[inside], xs, vals.imag)
    # nodes that coincide with file abscissae take the file value verbatim
    pos = np.searchsorted(xs, x)
    pos = np.clip(pos, 0, len(xs) - 1)
    exact = xs[pos] == x
    out[exact] = vals[pos[exact]]
    return out


def evaluate(spec: PotentialSpec, grid: UniformGrid) -> SampledFunction:
    return SampledFunction(grid, evaluate_at(spec, grid.points))


@dataclass(frozen=True)
class TruncatedDomain:
    x_min: float
    x_max: float
    tail_threshold: float


def select_domain(spec: PotentialSpec, tail_threshold=DEFAULT_TAIL_THRESHOLD,
                  override=None) -> TruncatedDomain:
    """Smallest ladder interval ``[-L, L]`` with ``|q0(+-L)| <= tail_threshold``."""
    if not tail_threshold > 0:
        raise DomainSelectionError("tail_threshold must be positive")
    if override is not None:
        lo, hi = override
        if not lo < hi:
            raise DomainSelectionError(f"empty domain override [{lo}, {hi}]")
        return TruncatedDomain(float(lo), float(hi), tail_threshold)
    seen = []
    for L in DOMAIN_LADDER:
        edge = np.abs(evaluate_at(spec, np.array([-L, L])))
        seen.append((L, float(edge.max())))
        if edge.max() <= tail_threshold:
            return TruncatedDomain(-L, L, tail_threshold)
    detail = ", ".join(f"|q0(+-{L:g})| = {v:.3g}" for L, v in seen)
    raise DomainSelectionError(
        f"no ladder interval reaches tail threshold {tail_threshold:g}: {detail}")


@dataclass(frozen=True)
class ClassQReport:
    k: int
    l1_weighted: float
    l2_weighted: float
    edge_ratio: float
    decaying: bool


def check_class_q(q: SampledFunction, k=1, edge_tol=1e-3) -> ClassQReport:
    """Weighted norms of ``(1 + |x|^k) |q|`` on the truncated domain.

    Advisory only: a finite interval cannot prove membership.  The report
    flags potentials whose edge values are not small relative to the peak.
    """
    x = q.grid.points
    w = (1 + np.abs(x) ** k) * np.abs(q.values)
    l1 = float(integrate_values(w, q.grid.h).real)
    l2 = float(np.sqrt(integrate_values(w * w, q.grid.h).real))
    peak = float(np.max(np.abs(q.values)))
    edge = float(max(abs(q.values[0]), abs(q.values[-1])))
    ratio = edge / peak if peak > 0 else 0.0
    return ClassQReport(k, l1, l2, ratio, ratio <= edge_tol)
