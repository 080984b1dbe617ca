"""End-to-end reproduction of the four benchmark examples.

Each ``validate_example_*`` runs one example at reference-grade settings and
returns :class:`CriterionResult` records, one per acceptance check, with the
measured value, the tolerance and the published figure for comparison.
Failures are recorded, not raised.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from .direct import log_spaced_rho, run_direct
from .evolution import evolve
from .grid_quad import (DEFAULT_NODES_PER_UNIT, UniformGrid, cumulative_left_values,
                        integrate_values)
from .inverse import InverseConfig, SystemBuilder, run_inverse, solve_at
from .oracles import (Example1Params, analytic_ab_example1, jost_ode, soliton_solution)
from .potentials import PotentialSpec, evaluate, select_domain
from .spps import build_table, evaluate_jost, rho_to_z, tilded_row, z_to_rho
from .zs_base import solve_base, zeroth_coefficients

EX1_RHO = 0.498749217771909j
EX1_C = -0.0192926642392854 - 0.999813879232805j
EX3_RHO = (-0.5 + 1.97126262533634j, -0.5 + 0.792849539875588j)
EX4_EPS = {0.0: 0.11, 1.2: 0.08, 2.5: 0.03}


@dataclass(frozen=True)
class CriterionResult:
    criterion: int
    name: str
    measured: float
    tolerance: float
    baseline: float | None = None
    passed: bool = False
    detail: str = ""

    def line(self):
        mark = "PASS" if self.passed else "FAIL"
        base = f" (published {self.baseline:.3g})" if self.baseline is not None else ""
        extra = f" [{self.detail}]" if self.detail else ""
        return (f"[{mark}] criterion {self.criterion}: {self.name}: "
                f"measured {self.measured:.3g}, bound {self.tolerance:.3g}{base}{extra}")

    def as_dict(self):
        return asdict(self)


def _le(criterion, name, measured, tol, baseline=None, detail=""):
    ok = bool(np.isfinite(measured) and measured <= tol)
    return CriterionResult(criterion, name, float(measured), float(tol), baseline, ok, detail)


def _within_factor(criterion, name, measured, target, factor, detail=""):
    ratio = max(measured / target, target / measured) if measured > 0 else math.inf
    return CriterionResult(criterion, name, float(measured), float(factor * target), target,
                           bool(ratio <= factor), detail or f"ratio {ratio:.2f}")


def _eig_error(found, expected):
    found = np.asarray(found)
    if len(found) != len(expected):
        return math.inf
    return max(float(np.min(np.abs(found - e))) for e in expected)


def _recovery_error(sd, t, reference, cfg=None):
    res = run_inverse(evolve(sd, t), cfg or InverseConfig())
    err = float(np.max(np.abs(res.q_recovered - reference(res.x))))
    return err, res


def validate_example_1(nodes_per_unit=DEFAULT_NODES_PER_UNIT, with_recovery=True):
    """Chirped sech: direct accuracy, eigenvalue, norming constant, unitarity, recovery."""
    spec = PotentialSpec.chirped_sech(1.0, 0.1)
    params = Example1Params(1.0, 0.1)
    out = []

    t0 = time.perf_counter()
    narrow = run_direct(spec, N=160, domain=(-12.0, 12.0), nodes_per_unit=nodes_per_unit)
    elapsed = time.perf_counter() - t0
    a_ex, b_ex = analytic_ab_example1(params, narrow.data.rho)
    out.append(_le(1, "Ex.1 max|a - a_exact| on [-12,12]",
                   np.max(np.abs(narrow.data.a - a_ex)), 1e-8, 1.06e-13))
    out.append(_le(1, "Ex.1 max|b - b_exact| on [-12,12]",
                   np.max(np.abs(narrow.data.b - b_ex)), 1e-8, 3.3e-15))
    out.append(_le(1, "Ex.1 direct runtime [s]", elapsed, 300.0))

    dom = select_domain(spec)
    wide = run_direct(spec, N=160, nodes_per_unit=nodes_per_unit)
    sd = wide.data
    domain = f"domain [{dom.x_min:g},{dom.x_max:g}]"
    out.append(_le(2, "Ex.1 |rho_1 - rho_ref|", _eig_error(sd.eigenvalues, [EX1_RHO]),
                   1e-10, 2.7e-16, domain))
    c_err = abs(sd.norming_constants[0] - EX1_C) if sd.M == 1 else math.inf
    out.append(_le(2, "Ex.1 |c_1 - c_ref|", c_err, 1e-8, 1.7e-15, domain))
    out.append(_le(5, "Ex.1 unitarity defect", sd.unitarity_defect(), 1e-8, None, domain))
    if with_recovery:
        err, _ = _recovery_error(sd, 0.0, spec)
        out.append(_le(7, "Ex.1 recovery max error at t=0", err, 5e-3, 2.1e-4))
    return out


def validate_example_2(nodes_per_unit=DEFAULT_NODES_PER_UNIT, with_recovery=True,
                       jost_points=10, seed=7):
    """One-soliton: eigenvalue, unitarity, recovery at t = 0, 1, 2, ODE oracle."""
    alpha, beta, delta, theta = 0.5, math.pi / 2, 0.1, 0.1
    spec = PotentialSpec.soliton(alpha, beta, delta, theta)
    out = []
    res = run_direct(spec, N=60, nodes_per_unit=nodes_per_unit)
    sd = res.data
    out.append(_le(3, "Ex.2 |rho_1 - (0.5 + i pi/2)|",
                   _eig_error(sd.eigenvalues, [alpha + 1j * beta]), 1e-10, 4.6e-14))
    out.append(_le(5, "Ex.2 unitarity defect", sd.unitarity_defect(), 1e-8))
    if with_recovery:
        for t, published in ((0.0, 2.09e-6), (1.0, 2.13e-6), (2.0, 2.13e-6)):
            err, _ = _recovery_error(
                sd, t, lambda x, t=t: soliton_solution(alpha, beta, delta, theta, x, t))
            out.append(_le(6, f"Ex.2 recovery max error at t={t:g}", err, 1e-4, published))
    if jost_points:
        out.append(_le(10, "Ex.2 SPPS Jost vs adaptive ODE (max component error)",
                       jost_oracle_error(res, spec, jost_points, seed), 1e-8))
    return out


def jost_oracle_error(direct, spec, count=10, seed=7, x_probe=(-3.0, 0.0, 2.5)):
    """Largest gap between SPPS Jost values and an adaptive ODE solve at random real rho."""
    q, grid = direct.q, direct.q.grid
    cols = [grid.index_of(x) for x in x_probe]
    # rebuild the table keeping only the probe columns
    base = solve_base(q)
    table = build_table(q, base, zeroth_coefficients(base, q), direct.table.N, x_index=cols)
    rng = np.random.default_rng(seed)
    rhos = rng.uniform(-5.0, 5.0, count)
    worst = 0.0
    for rho in rhos:
        point = rho_to_z(rho)
        for which in ("phi", "psi"):
            ref = jost_ode(spec, rho, table.x, which, grid.x_min, grid.x_max)
            for j in range(len(cols)):
                val = evaluate_jost(table, point, which, j)
                worst = max(worst, float(np.max(np.abs(val - ref[:, j]))))
    return worst


def validate_example_3(nodes_per_unit=DEFAULT_NODES_PER_UNIT, with_recovery=True):
    """Chirped Gaussian: two eigenvalues, norming constants, unitarity, recovery."""
    spec = PotentialSpec.chirped_gaussian(2.5, 2.0, 1.0)
    out = []
    sd = run_direct(spec, N=160, nodes_per_unit=nodes_per_unit).data
    out.append(_le(4, "Ex.3 eigenvalue distance to reference values",
                   _eig_error(sd.eigenvalues, EX3_RHO), 1e-6))
    if sd.M == 2:
        order = np.argsort(-sd.eigenvalues.imag)
        c1, c2 = sd.norming_constants[order]
        out.append(_le(4, "Ex.3 |c_1 + 1|", abs(c1 + 1), 1e-8))
        out.append(_le(4, "Ex.3 |c_2 - 1|", abs(c2 - 1), 1e-8))
    else:
        out.append(_le(4, "Ex.3 norming constants", math.inf, 1e-8,
                       detail=f"{sd.M} eigenvalues found"))
    out.append(_le(5, "Ex.3 unitarity defect", sd.unitarity_defect(), 1e-8))
    if with_recovery:
        err, _ = _recovery_error(sd, 0.0, spec)
        out.append(_le(7, "Ex.3 recovery max error at t=0", err, 1e-2, 1.3e-3))
    return out


def validate_example_4(nodes_per_unit=DEFAULT_NODES_PER_UNIT, with_recovery=True):
    """Rational tail on [-200,200]: unitarity and the Wronskian indicator."""
    spec = PotentialSpec.rational_tail(math.pi / 2, 1.0)
    out = []
    sd = run_direct(spec, N=250, domain=(-200.0, 200.0), nodes_per_unit=nodes_per_unit).data
    out.append(_le(5, "Ex.4 unitarity defect on [-200,200]", sd.unitarity_defect(), 1e-4))
    if with_recovery:
        cfg = InverseConfig()
        for t, published in EX4_EPS.items():
            res = run_inverse(evolve(sd, t), cfg)
            out.append(_within_factor(8, f"Ex.4 Wronskian indicator at t={t:g}",
                                      res.wronskian_epsilon, published, 3.0))
    return out


def validate_properties(nodes_per_unit=300, seed=11, samples=200):
    """Structural identities that hold independently of the examples' reference values."""
    rng = np.random.default_rng(seed)
    out = []

    # zero potential end to end
    zero = run_direct(PotentialSpec.zero(), N=20, nodes_per_unit=50, rho=log_spaced_rho(200))
    sd0 = zero.data
    inv = run_inverse(sd0, InverseConfig(N=20, x_grid=UniformGrid.from_count(-5, 5, 51)))
    gap = max(np.max(np.abs(sd0.a - 1)), np.max(np.abs(sd0.b)), np.max(np.abs(inv.q_recovered)))
    out.append(_le(9, "q = 0 gives a = 1, b = 0, q_rec = 0", gap if sd0.M == 0 else math.inf,
                   0.0, detail=f"{sd0.M} eigenvalues"))

    # quadrature exactness on random quintics
    worst = 0.0
    for _ in range(samples // 4):
        p = np.polynomial.Polynomial(rng.normal(size=6))
        P = p.integ()
        g = UniformGrid.from_count(-rng.uniform(0, 3), rng.uniform(0.5, 4), 31)
        scale = 1 + np.max(np.abs(P(g.points)))
        y = p(g.points)
        worst = max(worst, abs(integrate_values(y, g.h) - (P(g.x_max) - P(g.x_min))) / scale,
                    np.max(np.abs(cumulative_left_values(y, g.h) - (P(g.points) - P(g.x_min))))
                    / scale)
    out.append(_le(9, "quintic quadrature exactness (relative)", worst, 1e-12))

    # spectral map round trip on the closed upper half-plane
    rho = rng.uniform(-50, 50, samples) + 1j * rng.uniform(0, 50, samples)
    back = np.array([z_to_rho(rho_to_z(r).z) for r in rho])
    out.append(_le(9, "Moebius round trip (relative)",
                   np.max(np.abs(back - rho) / np.maximum(1, np.abs(rho) ** 2)), 1e-14))

    # evolution group property
    spec = PotentialSpec.soliton(0.5, math.pi / 2, 0.1, 0.1)
    direct = run_direct(spec, N=60, nodes_per_unit=nodes_per_unit, rho=log_spaced_rho(1000))
    sd = direct.data
    worst = 0.0
    for t1, t2 in rng.uniform(-3, 3, (20, 2)):
        two, one = evolve(evolve(sd, t1), t2), evolve(sd, t1 + t2)
        worst = max(worst, np.max(np.abs(two.b - one.b)),
                    np.max(np.abs(two.norming_constants - one.norming_constants)
                           / np.abs(one.norming_constants)))
    out.append(_le(9, "evolution group property", worst, 1e-12))

    # conjugation relation applied twice gives back minus the original
    table = direct.table
    worst = 0.0
    for n in range(table.N + 1):
        (at1, at2), _ = tilded_row(table, n)
        worst = max(worst, np.max(np.abs(np.conj(at2) + table.a1[n])),
                    np.max(np.abs(np.conj(at1) - table.a2[n])))
    out.append(_le(9, "conjugation-relation involution", worst, 0.0))

    # per-x solves do not depend on the visiting order
    cfg = InverseConfig(N=30)
    builder = SystemBuilder(sd, cfg)
    xs = [-2.0, 0.5, 3.0, 7.0]
    fwd = [solve_at(sd, x, cfg, builder) for x in xs]
    bwd = [solve_at(sd, x, cfg, builder) for x in xs[::-1]][::-1]
    gap = max(float(np.max(np.abs(np.concatenate([f.b1 - b.b1, f.a1 - b.a1, f.a2 - b.a2,
                                                   f.b2 - b.b2]))))
              for f, b in zip(fwd, bwd))
    out.append(_le(9, "per-x solve order independence", gap, 0.0))

    # base Jost Wronskian is constant in x
    dom = select_domain(spec)
    q = evaluate(spec, UniformGrid.from_density(dom.x_min, dom.x_max, DEFAULT_NODES_PER_UNIT))
    w = solve_base(q).wronskian()
    out.append(_le(9, "Ex.2 base Wronskian constancy", np.max(np.abs(w - w[len(w) // 2])), 1e-10))
    return out


VALIDATORS = {1: validate_example_1, 2: validate_example_2,
              3: validate_example_3, 4: validate_example_4}


def validate(example_id, **kw):
    try:
        fn = VALIDATORS[int(example_id)]
    except (KeyError, ValueError):
        raise ValueError(f"example id must be one of 1, 2, 3, 4, got {example_id!r}") from None
    return fn(**kw)
