"""Recall by constrained energy minimization and one linear solve.

Clamping the known neurons with a diagonal projector P and adding a
ridge term gives the Lagrangian

    L(x, lam) = -1/2 x^T W x + theta^T x - lam^T (P x - x_inc) + gamma/2 x^T x.

Its stationarity conditions form one symmetric linear system

    A (x; lam) = (theta; x_inc),   A = [[W - gamma I, P], [P, 0]],

solved through a truncated pseudoinverse: eigendecompose A and invert
only eigenvalues of magnitude >= mu. The recovered state is sign(x).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .hebbian import WeightMatrix, spectral_norm
from .patterns import ClampSet

RANK_TOL_FACTOR = 1e-10  # relative eigenvalue cutoff treated as exact rank deficiency


@dataclass(frozen=True)
class LinearSystem:
    """Assembled saddle-point system A v = w for one recall instance."""

    a: np.ndarray
    rhs: np.ndarray
    gamma: float
    clamp: ClampSet
    theta: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        rhs = np.asarray(self.rhs, dtype=float)
        d = self.clamp.d
        if a.shape != (2 * d, 2 * d) or rhs.shape != (2 * d,):
            raise ValueError("system blocks must have shape (2d, 2d) and (2d,)")
        if np.max(np.abs(a - a.T), initial=0.0) > 1e-12:
            raise ValueError("system matrix must be symmetric")
        if np.max(np.abs(np.linalg.eigvalsh(a))) > self.gamma + 2.0 + 1e-9:
            raise ValueError("system norm exceeds gamma + 2, blocks are malformed")
        a = a.copy()
        a.setflags(write=False)
        rhs = rhs.copy()
        rhs.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "rhs", rhs)

    @property
    def d(self) -> int:
        return self.clamp.d


@dataclass(frozen=True)
class SolveReport:
    """Solution and diagnostics of one truncated-pseudoinverse solve.

    lam holds the multipliers (zero off the clamp set; empty for the
    penalty variant, which has none) and discretized is sign(x) with the
    +1 tie rule.
    """

    x: np.ndarray
    lam: np.ndarray
    discretized: np.ndarray
    gamma: float
    mu: float
    rank_tol: float
    kept: int
    eta: float
    residual_constraint: float
    residual_stationarity: float
    minimum_certified: bool

    CSV_HEADER = "gamma,mu,kept,eta,residual_constraint,residual_stationarity,minimum_certified"

    def to_csv_row(self) -> str:
        return (f"{self.gamma:.10g},{self.mu:.10g},{self.kept},{self.eta:.10g},"
                f"{self.residual_constraint:.10g},{self.residual_stationarity:.10g},"
                f"{int(self.minimum_certified)}")


def _thresholds(theta, d: int) -> np.ndarray:
    if theta is None:
        return np.zeros(d)
    t = np.asarray(theta, dtype=float)
    if t.shape != (d,) or not np.all(np.isfinite(t)):
        raise ValueError(f"thresholds must be a finite vector of shape ({d},)")
    return t


def assemble(wm: WeightMatrix, clamp: ClampSet, theta=None, gamma: float = 1.0) -> LinearSystem:
    """Build A = [[W - gamma I, P], [P, 0]] and rhs (theta; x_inc)."""
    if clamp.d != wm.d:
        raise ValueError(f"clamp dimension {clamp.d} does not match weights {wm.d}")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if gamma <= spectral_norm(wm):
        warnings.warn("gamma does not exceed the spectral norm of W; the clamped "
                      "minimum is no longer guaranteed", RuntimeWarning, stacklevel=2)
    elif gamma < 1.0:
        warnings.warn("gamma below the conventional default of 1; the minimum is "
                      "still certified while gamma > |W|", RuntimeWarning, stacklevel=2)
    d = wm.d
    t = _thresholds(theta, d)
    p = clamp.projector()
    a = np.zeros((2 * d, 2 * d))
    a[:d, :d] = wm.w - gamma * np.eye(d)
    a[:d, d:] = p
    a[d:, :d] = p
    rhs = np.concatenate([t, clamp.values])
    return LinearSystem(a=a, rhs=rhs, gamma=float(gamma), clamp=clamp, theta=t)


def truncated_pseudoinverse_apply(a, w, mu: float, rank_tol: float | None = None):
    """Apply the mu-truncated pseudoinverse of symmetric a to w.

    Eigenvalues of magnitude below max(mu, rank_tol) are not inverted.
    Returns (v, eta, kept, rank_tol) where eta = |v - v0|_2 against the
    plain rank-tolerance pseudoinverse solution v0, and kept counts the
    inverted eigenvalues.
    """
    a = np.asarray(a, dtype=float)
    w = np.asarray(w, dtype=float)
    if mu < 0:
        raise ValueError("mu must be >= 0")
    eigs, vecs = np.linalg.eigh(a)
    anorm = float(np.max(np.abs(eigs), initial=0.0))
    if rank_tol is None:
        rank_tol = RANK_TOL_FACTOR * anorm
    beta = vecs.T @ w

    def apply_cut(cut):
        inv = np.zeros_like(eigs)
        keep = np.abs(eigs) >= cut
        inv[keep] = 1.0 / eigs[keep]
        return vecs @ (inv * beta), int(keep.sum())

    v0, _ = apply_cut(rank_tol)
    v, kept = apply_cut(max(mu, rank_tol))
    eta = float(np.linalg.norm(v - v0))
    return v, eta, kept, float(rank_tol)


def solve(sys: LinearSystem, mu: float = 0.0, certify: bool = True,
          method: str = "eigen") -> SolveReport:
    """Solve the assembled system with spectral filtering.

    mu = 0 requests the exact pseudoinverse at the default rank tolerance.
    method="reduced" eliminates the clamped block directly instead of
    eigendecomposing; it is only valid for mu = 0 and falls back to the
    eigendecomposition when the reduced block is singular. certify=False
    replaces the determinant certificate with the sufficient spectral
    condition gamma > |W|, which implies it.
    """
    if method not in ("eigen", "reduced"):
        raise ValueError(f"unknown solve method {method!r}")
    d = sys.d
    v = None
    if method == "reduced" and mu == 0.0:
        v = _solve_reduced(sys)
        if v is not None:
            # full-rank elimination: rank(A) = d + l, truncation plays no part
            eta, kept, rank_tol = 0.0, d + sys.clamp.l, 0.0
    if v is None:
        v, eta, kept, rank_tol = truncated_pseudoinverse_apply(sys.a, sys.rhs, mu)
    x, lam = v[:d], v[d:]

    p_mask = sys.clamp.mask()
    residual_constraint = float(np.max(np.abs(np.where(p_mask, x, 0.0) - sys.clamp.values)))
    stat = (sys.a[:d, :d] @ x) + np.where(p_mask, lam, 0.0) - sys.theta
    residual_stationarity = float(np.max(np.abs(stat)))

    if certify:
        certified = certify_minimum(_weights_of(sys), sys.clamp, sys.gamma)
    else:
        certified = sys.gamma > spectral_norm(sys.a[:d, :d] + sys.gamma * np.eye(d))
    return SolveReport(x=x, lam=lam, discretized=discretize(x), gamma=sys.gamma,
                       mu=float(mu), rank_tol=rank_tol, kept=kept, eta=eta,
                       residual_constraint=residual_constraint,
                       residual_stationarity=residual_stationarity,
                       minimum_certified=bool(certified))


def _weights_of(sys: LinearSystem) -> WeightMatrix:
    d = sys.d
    return WeightMatrix(sys.a[:d, :d] + sys.gamma * np.eye(d))


def _solve_reduced(sys: LinearSystem):
    """Eliminate clamped coordinates; returns None when the block is singular.

    With Q = gamma I - W the stationarity rows give Q_UU x_U =
    -(theta_U + Q_UK x_K) on the unclamped set U, and lam = (Q x + theta)
    on the clamp set. This reproduces the minimum-norm pseudoinverse
    solution whenever Q_UU is nonsingular.
    """
    d = sys.d
    q = -(sys.a[:d, :d])  # Q = gamma I - W
    mask = sys.clamp.mask()
    x = sys.clamp.values.copy()
    u = ~mask
    if np.any(u):
        quu = q[np.ix_(u, u)]
        rhs = -(sys.theta[u] + q[np.ix_(u, mask)] @ x[mask])
        try:
            xu = np.linalg.solve(quu, rhs)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(xu)):
            return None
        # guard against a numerically singular block that solve() accepted
        if np.max(np.abs(quu @ xu - rhs)) > 1e-8 * max(1.0, float(np.max(np.abs(rhs), initial=0.0))):
            return None
        x[u] = xu
    lam = np.where(mask, q @ x + sys.theta, 0.0)
    return np.concatenate([x, lam])


def discretize(x) -> np.ndarray:
    """Map solver output to +/-1 by sign; exact zeros resolve to +1."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("cannot discretize non-finite values")
    return np.where(x >= 0.0, 1.0, -1.0)


def solve_perturbed(wm: WeightMatrix, x_pert, theta=None, gamma: float = 1.0,
                    beta: float = 1.0) -> SolveReport:
    """Solve ((gamma + beta) I - W) x = beta x_pert - theta.

    The soft variant: instead of clamping, a quadratic penalty of weight
    beta pulls the state toward the perturbed anchor x_pert, so there are
    no multipliers (lam comes back empty). The matrix is positive definite
    whenever gamma + beta exceeds the spectral norm of W; a singular
    matrix is rejected.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if beta <= 0:
        raise ValueError("beta must be positive")
    anchor = np.asarray(x_pert, dtype=float)
    if anchor.shape != (wm.d,) or not np.all(np.isfinite(anchor)):
        raise ValueError(f"x_pert must be a finite vector of shape ({wm.d},)")
    t = _thresholds(theta, wm.d)
    definite = gamma + beta > spectral_norm(wm)
    if not definite:
        warnings.warn("gamma + beta does not exceed |W|; system may be indefinite",
                      RuntimeWarning, stacklevel=2)
    m = (gamma + beta) * np.eye(wm.d) - wm.w
    try:
        x = np.linalg.solve(m, beta * anchor - t)
    except np.linalg.LinAlgError:
        raise ValueError("perturbed system matrix is singular") from None
    residual = float(np.max(np.abs(m @ x - (beta * anchor - t))))
    return SolveReport(x=x, lam=np.zeros(0), discretized=discretize(x),
                       gamma=float(gamma), mu=0.0, rank_tol=0.0, kept=wm.d,
                       eta=0.0, residual_constraint=0.0,
                       residual_stationarity=residual,
                       minimum_certified=bool(definite))


def certify_minimum(wm: WeightMatrix, clamp: ClampSet, gamma: float) -> bool:
    """Bordered-Hessian second-order check of the clamped minimizer.

    Builds H = [[0, -P~], [-P~^T, gamma I - W]] with P~ the clamp rows of
    the projector, and requires (-1)^l det(H_k) > 0 for every leading
    principal minor of order k in {2l+1, ..., l+d}. The outcome depends
    only on (W, clamp, gamma). Determinant signs are evaluated two ways
    (LU and symmetric eigenvalues) and must agree. gamma = 0 is legal and
    simply fails certification whenever a required minor degenerates.
    """
    if gamma < 0:
        raise ValueError("gamma must be non-negative")
    if clamp.d != wm.d:
        raise ValueError(f"clamp dimension {clamp.d} does not match weights {wm.d}")
    d, l = wm.d, clamp.l
    # Order coordinates clamped-first so the constraint rows of every
    # required minor keep full rank; the minor test needs that ordering,
    # and the outcome is otherwise permutation-invariant.
    clamped = np.array([i - 1 for i in clamp.indices], dtype=int)
    perm = np.concatenate([clamped, np.setdiff1d(np.arange(d), clamped)])
    p_tilde = np.zeros((l, d))
    p_tilde[np.arange(l), np.arange(l)] = 1.0
    h = np.zeros((l + d, l + d))
    h[:l, l:] = -p_tilde
    h[l:, :l] = -p_tilde.T
    h[l:, l:] = gamma * np.eye(d) - wm.w[np.ix_(perm, perm)]
    want = 1.0 if l % 2 == 0 else -1.0
    for k in range(2 * l + 1, l + d + 1):
        sign = _minor_sign(h[:k, :k])
        if sign * want <= 0:
            return False
    return True


def _minor_sign(hk: np.ndarray) -> float:
    """Sign of det(hk), 0 when numerically singular; two methods must agree."""
    eigs = np.linalg.eigvalsh(hk)
    scale = float(np.max(np.abs(eigs), initial=0.0))
    if scale == 0.0 or np.min(np.abs(eigs)) < 1e-10 * scale:
        return 0.0
    sign_eig = -1.0 if np.count_nonzero(eigs < 0) % 2 else 1.0
    sign_lu, _ = np.linalg.slogdet(hk)
    if sign_lu != sign_eig:
        raise ArithmeticError("determinant sign is numerically ambiguous")
    return sign_eig
