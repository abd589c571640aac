"""Phase estimation on an evolution callback, with signed eigenvalue bins.

The phase register holds T qubits (most significant first). Controlled
powers U^(2^k) come from repeated squaring of U(t0), and the inverse
Fourier transform runs along the phase axis. Bin b of 2^T encodes the
phase b/2^T; bins above 2^(T-1) wrap to negative phases (two's
complement), so eigenvalues are read in the window (-pi/t0, +pi/t0].
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .register import QuantumRegister


def controlled_powers(u1: np.ndarray, t_qubits: int) -> list[np.ndarray]:
    """[U, U^2, U^4, ...] by repeated squaring, one entry per phase qubit."""
    powers = [np.asarray(u1, dtype=complex)]
    for _ in range(t_qubits - 1):
        powers.append(powers[-1] @ powers[-1])
    return powers


def fwht_axis0(s: np.ndarray) -> np.ndarray:
    """Unitary Walsh-Hadamard transform (H on every phase qubit) along axis 0."""
    out = s.astype(complex).copy()
    n = out.shape[0]
    h = 1
    while h < n:
        v = out.reshape(n // (2 * h), 2, h, -1)
        a = v[:, 0].copy()
        b = v[:, 1].copy()
        v[:, 0] = a + b
        v[:, 1] = a - b
        h *= 2
    return out.reshape(s.shape) / np.sqrt(n)


def qpe_forward(powers: list[np.ndarray], psi: np.ndarray) -> np.ndarray:
    """Hadamards, controlled powers, inverse QFT; returns a (2^T, dim) array."""
    t_qubits = len(powers)
    n_bins = 2 ** t_qubits
    s = np.tile(psi.astype(complex) / np.sqrt(n_bins), (n_bins, 1))
    bins = np.arange(n_bins)
    for k, u in enumerate(powers):
        rows = (bins >> k) & 1 == 1
        s[rows] = s[rows] @ u.T
    # inverse QFT along the phase axis: QFT^dag = fft / sqrt(N)
    return np.fft.fft(s, axis=0) / np.sqrt(n_bins)


def qpe_backward(s: np.ndarray, powers: list[np.ndarray]) -> np.ndarray:
    """Exact inverse of qpe_forward: QFT, inverted powers, Hadamards."""
    t_qubits = len(powers)
    n_bins = 2 ** t_qubits
    out = np.fft.ifft(s, axis=0) * np.sqrt(n_bins)
    bins = np.arange(n_bins)
    for k, u in enumerate(powers):
        rows = (bins >> k) & 1 == 1
        out[rows] = out[rows] @ u.conj()  # (U^dag)^T = conj(U)
    return fwht_axis0(out)


def bin_eigenvalues(t_qubits: int, t0: float) -> np.ndarray:
    """Eigenvalue estimate of each phase bin under the signed convention."""
    n_bins = 2 ** t_qubits
    b = np.arange(n_bins)
    phi = b / n_bins
    phi = np.where(b > n_bins // 2, phi - 1.0, phi)
    return 2.0 * np.pi * phi / t0


@dataclass(frozen=True)
class EigenReadout:
    """Phase-register measurement distribution mapped to eigenvalues.

    resolution is the eigenvalue width of one bin, 2 pi / (t0 2^T);
    aliasing marks a declared spectral bound outside the readable window.
    """

    eigenvalues: np.ndarray
    probabilities: np.ndarray
    t_qubits: int
    t0: float
    resolution: float
    aliasing: bool

    def peak(self) -> tuple[float, float]:
        """(eigenvalue estimate, probability) of the most likely bin."""
        i = int(np.argmax(self.probabilities))
        return float(self.eigenvalues[i]), float(self.probabilities[i])


def phase_estimate(evolve, state, t_qubits: int, t0: float | None = None,
                   bound: float | None = None) -> EigenReadout:
    """Run phase estimation and return the eigenvalue readout.

    evolve is a callback t -> e^{iHt}; its spectral_bound attribute (or
    the bound argument) sets the default scale t0 = pi / bound so the
    spectrum maps into the signed window. A bound that does not fit the
    window flags aliasing and warns rather than failing.
    """
    if not 1 <= t_qubits <= 12:
        raise ValueError("phase register must hold 1..12 qubits at desk scale")
    if bound is None:
        bound = getattr(evolve, "spectral_bound", None)
    if t0 is None:
        if bound is None:
            raise ValueError("provide t0 or a spectral bound to derive it")
        t0 = np.pi / bound
    aliasing = bool(bound is not None and bound * t0 > np.pi + 1e-12)
    if aliasing:
        warnings.warn(f"spectral bound {bound:.4g} exceeds the +/- {np.pi / t0:.4g} "
                      "window at this t0; eigenvalues may alias", RuntimeWarning,
                      stacklevel=2)
    psi = state.amplitudes if isinstance(state, QuantumRegister) else np.asarray(state, dtype=complex)
    u1 = evolve(t0)
    if u1.shape != (psi.size, psi.size):
        raise ValueError(f"evolution dimension {u1.shape} does not match state {psi.size}")
    s = qpe_forward(controlled_powers(u1, t_qubits), psi)
    probs = np.sum(np.abs(s) ** 2, axis=1)
    return EigenReadout(
        eigenvalues=bin_eigenvalues(t_qubits, t0),
        probabilities=probs,
        t_qubits=t_qubits,
        t0=float(t0),
        resolution=2.0 * np.pi / (t0 * 2 ** t_qubits),
        aliasing=aliasing,
    )
