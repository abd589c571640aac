"""Hebbian training: weight matrix, pattern density matrix, capacity rule.

Training averages outer products of the stored patterns,

    W = (1/(M d)) sum_m x(m) x(m)^T - I/d,

which is symmetric with an exactly zero diagonal and spectral norm <= 1.
Adding I/d back yields the density matrix of the normalized pattern
ensemble: rho = W + I/d, positive semidefinite with unit trace.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .patterns import TrainingSet


@dataclass(frozen=True)
class WeightMatrix:
    """Symmetric coupling matrix with zero self-couplings and norm <= 1."""

    w: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] < 1:
            raise ValueError("weight matrix must be square and non-empty")
        if np.max(np.abs(w - w.T), initial=0.0) > 1e-12:
            raise ValueError("weight matrix must be symmetric within 1e-12")
        if np.any(np.diag(w) != 0.0):
            raise ValueError("weight matrix diagonal must be exactly zero")
        if np.max(np.abs(np.linalg.eigvalsh(w))) > 1.0 + 1e-12:
            raise ValueError("weight matrix spectral norm must not exceed 1")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    @property
    def d(self) -> int:
        return self.w.shape[0]


@dataclass(frozen=True)
class DensityMatrix:
    """Unit-trace positive semidefinite mixture of normalized patterns."""

    rho: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.rho, dtype=float)
        if r.ndim != 2 or r.shape[0] != r.shape[1] or r.shape[0] < 1:
            raise ValueError("density matrix must be square and non-empty")
        if np.max(np.abs(r - r.T), initial=0.0) > 1e-12:
            raise ValueError("density matrix must be symmetric within 1e-12")
        if abs(np.trace(r) - 1.0) > 1e-12:
            raise ValueError("density matrix trace must equal 1 within 1e-12")
        if np.min(np.linalg.eigvalsh(r)) < -1e-12:
            raise ValueError("density matrix must be positive semidefinite")
        r = r.copy()
        r.setflags(write=False)
        object.__setattr__(self, "rho", r)

    @property
    def d(self) -> int:
        return self.rho.shape[0]


def train(ts: TrainingSet) -> WeightMatrix:
    """Hebbian rule: average of pattern outer products, self-couplings removed."""
    p = ts.patterns
    m, d = p.shape
    w = (p.T @ p) / (m * d)
    np.fill_diagonal(w, 0.0)  # outer-product diagonal is exactly 1/d for bipolar patterns
    w = (w + w.T) / 2.0
    return WeightMatrix(w)


def density(source: TrainingSet | WeightMatrix) -> DensityMatrix:
    """Density matrix rho = W + I/d of the normalized stored patterns."""
    if isinstance(source, TrainingSet):
        w = train(source).w
    elif isinstance(source, WeightMatrix):
        w = source.w
    else:
        raise TypeError("density expects a TrainingSet or WeightMatrix")
    d = w.shape[0]
    return DensityMatrix(w + np.eye(d) / d)


def spectral_norm(wm: WeightMatrix | DensityMatrix | np.ndarray) -> float:
    """Largest absolute eigenvalue of a symmetric matrix."""
    if isinstance(wm, WeightMatrix):
        a = wm.w
    elif isinstance(wm, DensityMatrix):
        a = wm.rho
    else:
        a = np.asarray(wm, dtype=float)
    return float(np.max(np.abs(np.linalg.eigvalsh(a))))


def capacity(d: int) -> float:
    """Retrieval-capacity guideline d / (2 ln d) for d >= 2."""
    if d < 2:
        raise ValueError("capacity is defined for d >= 2")
    return d / (2.0 * np.log(d))


def save_matrix_csv(path, matrix) -> None:
    """Write a square matrix row-major as CSV with a 'd=<n>' header line."""
    a = matrix.w if isinstance(matrix, WeightMatrix) else (
        matrix.rho if isinstance(matrix, DensityMatrix) else np.asarray(matrix, dtype=float))
    with open(path, "w") as fh:
        fh.write(f"d={a.shape[0]}\n")
        for row in a:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def load_matrix_csv(path) -> np.ndarray:
    """Read a matrix written by save_matrix_csv."""
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("d="):
            raise ValueError(f"{path}: expected 'd=<n>' header, got {header!r}")
        d = int(header[2:])
        rows = [[float(tok) for tok in line.strip().split(",")] for line in fh if line.strip()]
    a = np.array(rows)
    if a.shape != (d, d):
        raise ValueError(f"{path}: expected {d}x{d} matrix, got {a.shape}")
    return a
