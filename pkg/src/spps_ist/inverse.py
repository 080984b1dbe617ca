"""Inverse scattering through the scattering relations written for SPPS coefficients.

For each ``x`` the truncated series for ``phi_1``, ``conj(phi_2)``,
``psi_1`` and ``conj(psi_2)`` turn the scattering relations on the real
line, and the proportionality of ``phi`` and ``psi`` at every eigenvalue,
into an overdetermined linear system for

    u = [b_{1,0..N-1} | a_{1,0..N-1} | conj(a_{2,0..N-1}) | conj(b_{2,0..N-1})].

Only row ``n = 0`` is needed afterwards: ``phi(i/2, x)`` is built from
``b_0(x)`` and the potential follows from the ZS system at ``rho = i/2``.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .direct import ScatteringData
from .errors import ConfigurationError, IllConditioningError, RecoverySingularityError
from .grid_quad import SampledFunction, UniformGrid, spline_derivative_values
from .spps import DEFAULT_N_INVERSE, spectral_z

log = logging.getLogger(__name__)

DEFAULT_X_STEP = 0.01
RECOVERY_FLOOR = 1e-10
COND_LIMIT = 1e12


@dataclass(frozen=True)
class InverseConfig:
    N: int = DEFAULT_N_INVERSE
    K: int | None = None           # None: use every real sample
    x_grid: UniformGrid | None = None
    regularization: float = 0.0
    residual_report: bool = True
    spline_order: int = 3
    method: str = "gram"            # "gram" (fast) or "qr" (full matrix)

    def check(self, sd: ScatteringData):
        K = sd.K if self.K is None else self.K
        if self.N < 1:
            raise ConfigurationError("N must be positive")
        if K > sd.K:
            raise ConfigurationError(f"K = {K} exceeds the {sd.K} available samples")
        if 2 * self.N > K + sd.M:
            raise ConfigurationError(
                f"2N = {2 * self.N} exceeds K + M = {K + sd.M}; system would be underdetermined")
        return K


RECOVERY_HALF_WIDTH = 12.0


def default_x_grid(x_min=-RECOVERY_HALF_WIDTH, x_max=RECOVERY_HALF_WIDTH, step=DEFAULT_X_STEP):
    return UniformGrid.from_density(x_min, x_max, 1.0 / step)


def recovery_grid(sd: ScatteringData, step=DEFAULT_X_STEP):
    """Direct-problem domain clipped to ``[-12, 12]``, sampled every ``step``."""
    lo, hi = sd.meta.get("domain", (-RECOVERY_HALF_WIDTH, RECOVERY_HALF_WIDTH))
    lo = max(float(lo), -RECOVERY_HALF_WIDTH)
    hi = min(float(hi), RECOVERY_HALF_WIDTH)
    if not lo < hi:
        lo, hi = -RECOVERY_HALF_WIDTH, RECOVERY_HALF_WIDTH
    return default_x_grid(lo, hi, step)


def _subsample(sd: ScatteringData, K):
    if K == sd.K:
        return sd.rho, sd.a, sd.b
    idx = np.unique(np.round(np.linspace(0, sd.K - 1, K)).astype(int))
    return sd.rho[idx], sd.a[idx], sd.b[idx]


def _powers(w, N):
    """Columns ``(w + 1) (-w)^n`` for ``n < N`` by iterated products."""
    out = np.empty((len(w), N), dtype=complex)
    cur = w + 1
    for n in range(N):
        out[:, n] = cur
        cur = cur * (-w)
    return out


class SystemBuilder:
    """Precomputes the x-independent parts of the linear system.

    :meth:`assemble` forms the full matrix.  :meth:`solve` never does:
    after multiplying each real-sample row by a unimodular phase, the Gram
    matrix of those rows has Toeplitz and Hankel blocks in the power index
    whose generating sums over ``rho_k`` are x-independent except for two
    of them.  The Gram matrix is factored by a Hermitian eigendecomposition
    (it is singular along the ``2M`` soliton directions), stacked with the
    eigenvalue rows and solved by an orthogonal least-squares routine,
    followed by one step of residual correction against the full system.
    """

    def __init__(self, sd: ScatteringData, cfg: InverseConfig):
        K = cfg.check(sd)
        N = self.N = cfg.N
        self.rho, a, b = _subsample(sd, K)
        z = spectral_z(self.rho)
        zb = np.conj(z)
        self.a, self.b = a, b
        self.Pz = _powers(z, N)
        self.Pzb = _powers(zb, N)
        self.eig = sd.eigenvalues
        self.c = sd.norming_constants
        zm = spectral_z(self.eig)
        self.Pm = _powers(zm, N)
        self.Pmb = np.conj(self.Pm)

        # Toeplitz generators: sum_k w_k |z_k+1|^2 (-z_k)^d, d = -(N-1)..N-1
        d = np.arange(-(N - 1), N)
        self._toep_basis = np.abs(z + 1)[None, :] ** 2 * (-z[None, :]) ** d[:, None]
        # Hankel generators: sum_k w_k conj(z_k+1)^2 (-conj z_k)^j, j = 0..2N-2
        j = np.arange(2 * N - 1)
        hank_basis = np.conj(z + 1)[None, :] ** 2 * (-zb[None, :]) ** j[:, None]
        n = np.arange(N)
        self._tidx = n[None, :] - n[:, None] + (N - 1)   # entry (n, m) -> m - n
        hidx = n[:, None] + n[None, :]

        G = np.zeros((4 * N, 4 * N), dtype=complex)
        T00 = (self._toep_basis.sum(axis=1))[self._tidx]
        T11 = (self._toep_basis @ (np.abs(a) ** 2 + np.abs(b) ** 2))[self._tidx]
        H02 = (hank_basis @ (-a))[hidx]
        H13 = (hank_basis @ a)[hidx]
        blocks = {(0, 0): T00, (1, 1): T11, (2, 2): np.conj(T11), (3, 3): np.conj(T00),
                  (0, 2): H02, (1, 3): H13}
        for (i, k), blk in blocks.items():
            G[i * N:(i + 1) * N, k * N:(k + 1) * N] = blk
            if i != k:
                G[k * N:(k + 1) * N, i * N:(i + 1) * N] = blk.conj().T
        self._G0 = G
        self._h0 = np.concatenate([
            np.conj(self.Pz).T @ (a - 1),
            np.zeros(N, dtype=complex),
            self.Pz.T @ (np.conj(a) - np.abs(a) ** 2 - np.abs(b) ** 2),
            np.zeros(N, dtype=complex),
        ])

    @property
    def shape(self):
        return 2 * (len(self.rho) + len(self.eig)), 4 * self.N

    def assemble(self, x):
        N, K, M = self.N, len(self.rho), len(self.eig)
        A = np.zeros(self.shape, dtype=complex)
        r = np.empty(self.shape[0], dtype=complex)
        em = np.exp(-1j * self.rho * x)[:, None]
        ep = np.conj(em)
        a, b = self.a[:, None], self.b[:, None]
        # real samples, phi_1 = a psi~_1 + b psi_1
        A[:K, 0:N] = em * self.Pz
        A[:K, N:2 * N] = -b * ep * self.Pz
        A[:K, 2 * N:3 * N] = -a * em * self.Pzb
        r[:K] = (self.a - 1) * em[:, 0]
        # real samples, conj(phi_2) = conj(b) psi~_1 - conj(a) psi_1
        A[K:2 * K, N:2 * N] = np.conj(a) * ep * self.Pz
        A[K:2 * K, 2 * N:3 * N] = -np.conj(b) * em * self.Pzb
        A[K:2 * K, 3 * N:] = ep * self.Pzb
        r[K:2 * K] = np.conj(self.b) * em[:, 0]
        if M:
            Ae, re = self._eigen_rows(x)
            A[2 * K:] = Ae
            r[2 * K:] = re
        return A, r

    def _eigen_rows(self, x):
        N, M = self.N, len(self.eig)
        A = np.zeros((2 * M, 4 * N), dtype=complex)
        r = np.empty(2 * M, dtype=complex)
        rm = self.eig[:, None]
        cm = self.c[:, None]
        e1 = np.exp(-1j * rm * x)
        e2 = np.exp(1j * np.conj(rm) * x)
        # phi_1(rho_m) = c_m psi_1(rho_m)
        A[:M, 0:N] = e1 * self.Pm
        A[:M, N:2 * N] = -cm / e1 * self.Pm
        r[:M] = -e1[:, 0]
        # conj(phi_2(rho_m)) = conj(c_m) conj(psi_2(rho_m))
        A[M:, 3 * N:] = e2 * self.Pmb
        A[M:, 2 * N:3 * N] = -np.conj(cm) / e2 * self.Pmb
        r[M:] = np.conj(self.c) / e2[:, 0]
        return A, r

    # -- fast path: never materialises the (2K + 2M) x 4N matrix ----------

    def _beta(self, x):
        return self.b * np.exp(2j * self.rho * x)

    def _apply(self, u, beta):
        """Real-sample rows (phase-normalised) times ``u``."""
        N = self.N
        u0, u1, u2, u3 = u[:N], u[N:2 * N], u[2 * N:3 * N], u[3 * N:]
        pu0, pu1 = self.Pz @ u0, self.Pz @ u1
        qu2, qu3 = self.Pzb @ u2, self.Pzb @ u3
        top = pu0 - beta * pu1 - self.a * qu2
        bot = np.conj(self.a) * pu1 - np.conj(beta) * qu2 + qu3
        return top, bot

    def _apply_adjoint(self, top, bot, beta):
        Pc, Pbc = np.conj(self.Pz), np.conj(self.Pzb)
        return np.concatenate([
            Pc.T @ top,
            Pc.T @ (-np.conj(beta) * top + self.a * bot),
            Pbc.T @ (-np.conj(self.a) * top - beta * bot),
            Pbc.T @ bot,
        ])

    def _rhs(self, beta):
        return self.a - 1, np.conj(beta)

    def gram(self, x):
        """Gram matrix and right-hand side of the real-sample rows at ``x``."""
        N = self.N
        beta = self._beta(x)
        G = self._G0.copy()
        T01 = (self._toep_basis @ (-beta))[self._tidx]
        # block (2, 3) is conj of the Toeplitz generated by -conj(beta)
        T23 = np.conj((self._toep_basis @ (-np.conj(beta)))[self._tidx])
        for (i, k), blk in (((0, 1), T01), ((2, 3), T23)):
            G[i * N:(i + 1) * N, k * N:(k + 1) * N] = blk
            G[k * N:(k + 1) * N, i * N:(i + 1) * N] = blk.conj().T
        h = self._h0.copy()
        bc = np.conj(beta)
        h[N:2 * N] = np.conj(self.Pz).T @ bc
        h[3 * N:] = self.Pz.T @ bc
        return G, h

    def solve(self, x, regularization=0.0, refine=1):
        """Least-squares solution at ``x`` and its relative residual."""
        beta = self._beta(x)
        rt, rb = self._rhs(beta)
        Ae, re = self._eigen_rows(x) if len(self.eig) else (None, None)
        rnorm2 = np.vdot(rt, rt).real + np.vdot(rb, rb).real
        if re is not None:
            rnorm2 += np.vdot(re, re).real
        rnorm = np.sqrt(rnorm2)
        if rnorm == 0:
            return np.zeros(4 * self.N, dtype=complex), 0.0
        G, h = self.gram(x)
        if regularization > 0:
            G = G + regularization * np.eye(len(G))
        lam, V = np.linalg.eigh(G)
        keep = lam > lam[-1] * 1e-13
        R = np.sqrt(lam[keep])[:, None] * V[:, keep].conj().T

        def small_solve(hvec, evec):
            c = (V[:, keep].conj().T @ hvec) / np.sqrt(lam[keep])
            if Ae is None:
                S, rhs = R, c
            else:
                S, rhs = np.vstack([R, Ae]), np.concatenate([c, evec])
            sol, _, _, sv = scipy.linalg.lstsq(S, rhs, lapack_driver="gelsd",
                                               check_finite=False)
            return sol, sv

        u, sv = small_solve(h, re)
        cond = sv[0] / sv[-1] if sv[-1] > 0 else np.inf
        if cond > COND_LIMIT and regularization == 0:
            log.debug("x=%g: condition %.3g, applying ridge", x, cond)
            return self.solve(x, regularization=(1e-12 * sv[0]) ** 2, refine=refine)
        for _ in range(refine):
            top, bot = self._apply(u, beta)
            st, sb = rt - top, rb - bot
            se = re - Ae @ u if Ae is not None else None
            du, _ = small_solve(self._apply_adjoint(st, sb, beta), se)
            u = u + du
        top, bot = self._apply(u, beta)
        res2 = np.sum(np.abs(rt - top) ** 2) + np.sum(np.abs(rb - bot) ** 2)
        if Ae is not None:
            res2 += np.sum(np.abs(re - Ae @ u) ** 2)
        if not np.all(np.isfinite(u)):
            raise IllConditioningError(f"least-squares solve failed at x={x}", cond)
        return u, float(np.sqrt(res2) / rnorm)


def assemble_system(sd: ScatteringData, x: float, cfg: InverseConfig):
    """Matrix ``(2K + 2M) x 4N`` and right-hand side of the system at ``x``."""
    return SystemBuilder(sd, cfg).assemble(x)


@dataclass(frozen=True)
class PointSolution:
    x: float
    b1: np.ndarray
    a1: np.ndarray
    a2: np.ndarray
    b2: np.ndarray
    residual: float


def _lstsq(A, r, ridge):
    if ridge > 0:
        n = A.shape[1]
        A = np.vstack([A, np.sqrt(ridge) * np.eye(n)])
        r = np.concatenate([r, np.zeros(n, dtype=complex)])
    u, _, rank, _ = scipy.linalg.lstsq(A, r, lapack_driver="gelsy", check_finite=False)
    return u, rank


def solve_system(A, r, regularization=0.0):
    """Least-squares solution and relative residual of one assembled system."""
    rn = np.linalg.norm(r)
    if rn == 0:
        return np.zeros(A.shape[1], dtype=complex), 0.0
    ridge = regularization
    u, rank = _lstsq(A, r, ridge)
    if rank < A.shape[1] and ridge == 0:
        # column scales are O(1); the ridge is relative to the matrix norm
        cond = np.linalg.cond(A)
        if cond > COND_LIMIT:
            ridge = (1e-12 * np.linalg.norm(A, 2)) ** 2
            u, rank = _lstsq(A, r, ridge)
            if not np.all(np.isfinite(u)):
                raise IllConditioningError("least-squares solve failed after ridge repair", cond)
    res = float(np.linalg.norm(A @ u - r) / rn)
    return u, res


def _split(u, N):
    b1, a1, a2c, b2c = u[:N], u[N:2 * N], u[2 * N:3 * N], u[3 * N:]
    return b1, a1, np.conj(a2c), np.conj(b2c)


def solve_at(sd: ScatteringData, x: float, cfg: InverseConfig, builder=None) -> PointSolution:
    """Coefficient blocks at one ``x`` and the relative residual."""
    builder = builder or SystemBuilder(sd, cfg)
    if cfg.method == "qr":
        A, r = builder.assemble(x)
        u, res = solve_system(A, r, cfg.regularization)
    elif cfg.method == "gram":
        u, res = builder.solve(x, cfg.regularization)
    else:
        raise ConfigurationError(f"unknown least-squares method {cfg.method!r}")
    return PointSolution(float(x), *_split(u, cfg.N), res)


def recover_potential(x, b10, b20, floor=RECOVERY_FLOOR, spline_order=3):
    """Potential from the recovered ``b_0`` block via the ZS system at ``rho = i/2``.

    With ``G1 = 1 + b_{1,0}`` and ``G2 = b_{2,0}``:  ``q = G1' / G2`` or
    ``conj(q) = -(G2' + G2) / G1``; each node uses the quotient with the
    larger denominator.
    """
    x = np.asarray(x, dtype=float)
    G1 = 1 + np.asarray(b10, dtype=complex)
    G2 = np.asarray(b20, dtype=complex)
    dG1 = spline_derivative_values(x, G1, spline_order)
    dG2 = spline_derivative_values(x, G2, spline_order)
    num_b = -(dG2 + G2)
    with np.errstate(divide="ignore", invalid="ignore"):
        qa = dG1 / G2
        qb = np.conj(num_b / G1)
    use_a = np.abs(G2) >= np.abs(G1)
    q = np.where(use_a, qa, qb)
    dead = (np.abs(G2) < floor) & (np.abs(G1) < floor)
    if np.any(dead):
        quiet = dead & (np.abs(dG1) < floor) & (np.abs(num_b) < floor)
        bad = dead & ~quiet
        if np.any(bad):
            raise RecoverySingularityError("potential undefined where both denominators vanish",
                                           x[bad])
        q = np.where(quiet, 0.0, q)
    return q


def wronskian(b10, b20, a10, a20):
    """``W[phi(i/2, x); psi(i/2, x)]``; the exponential factors cancel."""
    return (1 + b10) * (1 + a20) - b20 * a10


def wronskian_indicator(b10, b20, a10, a20):
    w = np.abs(wronskian(b10, b20, a10, a20))
    return float(w.max() - w.min()) if len(w) else 0.0


@dataclass(frozen=True)
class InverseSolveResult:
    x: np.ndarray
    q_recovered: np.ndarray
    b10: np.ndarray
    b20: np.ndarray
    a10: np.ndarray
    a20: np.ndarray
    ls_residuals: np.ndarray
    wronskian_epsilon: float
    t: float = 0.0

    @property
    def q(self):
        return SampledFunction(UniformGrid.from_count(self.x[0], self.x[-1], len(self.x)),
                               self.q_recovered) if (len(self.x) - 1) % 5 == 0 else None


def _threads():
    try:
        return max(1, int(os.environ.get("NFT_THREADS", "1")))
    except ValueError:
        return 1


def run_inverse(sd: ScatteringData, cfg: InverseConfig | None = None) -> InverseSolveResult:
    """Solve the per-x systems on ``cfg.x_grid`` and reconstruct the potential."""
    cfg = cfg or InverseConfig()
    grid = cfg.x_grid or recovery_grid(sd)
    xs = grid.points
    builder = SystemBuilder(sd, cfg)
    log.info("inverse: %d x-points, system %dx%d, t=%g", len(xs), *builder.shape,
             sd.meta.get("t", 0.0))

    def one(x):
        return solve_at(sd, x, cfg, builder)

    workers = _threads()
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            sols = list(pool.map(one, xs))
    else:
        sols = [one(x) for x in xs]
    b10 = np.array([s.b1[0] for s in sols])
    b20 = np.array([s.b2[0] for s in sols])
    a10 = np.array([s.a1[0] for s in sols])
    a20 = np.array([s.a2[0] for s in sols])
    res = np.array([s.residual for s in sols])
    q = recover_potential(xs, b10, b20, spline_order=cfg.spline_order)
    eps = wronskian_indicator(b10, b20, a10, a20)
    return InverseSolveResult(xs, q, b10, b20, a10, a20, res, eps,
                              float(sd.meta.get("t", 0.0)))
