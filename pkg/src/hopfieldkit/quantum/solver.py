"""End-to-end simulated quantum recall: embed, estimate, rotate, uncompute.

The linear solve happens in the eigenbasis of the saddle-point matrix A:
phase estimation tags each eigencomponent of |w> = (theta; x_inc) with an
eigenvalue estimate mu~, a rotation writes amplitude C/mu~ (C = mu) onto a
flag ancilla for every bin with |mu~| >= mu, the phase register is
uncomputed, and post-selecting the flag leaves a state proportional to
the truncated-pseudoinverse solution (x; lambda). A second post-selection
on the leading system qubit isolates |x>.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ..patterns import ClampSet
from .evolution import assemble_quantum_a
from .phase import bin_eigenvalues, controlled_powers, qpe_backward, qpe_forward
from .register import QuantumRegister, embed_w, qubits_for

QUBIT_BUDGET = 16
ANCILLA_QUBITS = 2  # rotation flag plus the conditioning ancilla of the D block
PHASE_RESIDUAL_NOTE = 1e-2  # advisory threshold at T = 9 for well-separated spectra


@dataclass(frozen=True)
class QhopReport:
    """Diagnostics and final registers of one pipeline run.

    success_probability is the flag post-selection weight,
    post_selection_probability the |0>-branch weight |x|^2/(|x|^2+|lambda|^2)
    of the leading system qubit, and phase_residual the amplitude weight
    that failed to return to the all-zeros phase register.
    """

    ok: bool
    message: str
    success_probability: float
    post_selection_probability: float
    phase_residual: float
    resolution_ok: bool
    aliasing: bool
    kept_bins: int
    mu: float
    t0: float
    t_qubits: int
    mode: str
    w_norm: float
    x_register: QuantumRegister | None
    v_register: QuantumRegister | None
    shots: int | None = None
    shot_success_rate: float | None = None
    shot_post_rate: float | None = None


def _top_amplitudes(vec: np.ndarray, count: int = 8) -> str:
    order = np.argsort(-np.abs(vec))[:count]
    return " ".join(f"{int(i)}:{vec[i]:.4g}" for i in order)


def qhop_solve(source, clamp: ClampSet, theta=None, gamma: float = 1.0, mu: float = 0.05,
               t_qubits: int = 9, shots: int | None = None, mode: str = "reference",
               steps: int | None = None, rng_seed=None, trace_path=None) -> QhopReport:
    """Simulate the full recall pipeline on the saddle-point system.

    mu is both the eigenvalue cutoff and the rotation constant C. The
    phase grid must resolve mu (bin width <= mu) or the run is marked
    not resolution_ok. Total qubits (system + phase + 2 ancillas) must
    fit the 16-qubit desk-scale budget.
    """
    if mu <= 0:
        raise ValueError("mu must be positive; it doubles as the rotation constant")
    evolve = assemble_quantum_a(source, clamp, gamma, mode=mode, steps=steps)
    n_sys = qubits_for(clamp.d) + 1
    total = n_sys + t_qubits + ANCILLA_QUBITS
    if total > QUBIT_BUDGET:
        raise ValueError(f"needs {total} qubits (system {n_sys}, phase {t_qubits}, "
                         f"ancillas {ANCILLA_QUBITS}), budget is {QUBIT_BUDGET}")

    t0 = np.pi / evolve.spectral_bound
    resolution = 2.0 * np.pi / (t0 * 2 ** t_qubits)
    resolution_ok = resolution <= mu
    if not resolution_ok:
        warnings.warn(f"phase resolution {resolution:.3g} is coarser than the cutoff "
                      f"mu={mu:.3g}; filtering is unreliable at T={t_qubits}",
                      RuntimeWarning, stacklevel=2)

    reg_w, w_norm = embed_w(theta, clamp)
    psi = reg_w.amplitudes
    trace_rows = [("embed_w", "system", float(np.linalg.norm(psi)), _top_amplitudes(psi))]

    powers = controlled_powers(evolve(t0), t_qubits)
    s = qpe_forward(powers, psi)
    trace_rows.append(("phase_estimate", "phase+system", float(np.linalg.norm(s)),
                       _top_amplitudes(np.sum(np.abs(s) ** 2, axis=1))))

    mu_tilde = bin_eigenvalues(t_qubits, t0)
    keep = np.abs(mu_tilde) >= mu
    rot = np.zeros_like(mu_tilde)
    rot[keep] = mu / mu_tilde[keep]
    kept_bins = int(keep.sum())

    s_flag = s * rot[:, None]
    s_rest = s * np.sqrt(1.0 - rot ** 2)[:, None]
    trace_rows.append(("rotation", "flag=1", float(np.linalg.norm(s_flag)),
                       _top_amplitudes(np.sum(np.abs(s_flag) ** 2, axis=1))))

    success_probability = float(np.linalg.norm(s_flag) ** 2)
    aliasing = False  # bound fits the window by construction of t0

    def _fail(message: str) -> QhopReport:
        warnings.warn(message, RuntimeWarning, stacklevel=3)
        return QhopReport(ok=False, message=message,
                          success_probability=success_probability,
                          post_selection_probability=0.0, phase_residual=1.0,
                          resolution_ok=resolution_ok, aliasing=aliasing,
                          kept_bins=kept_bins, mu=mu, t0=float(t0), t_qubits=t_qubits,
                          mode=mode, w_norm=w_norm, x_register=None, v_register=None)

    if success_probability < 1e-14:
        _write_trace(trace_path, trace_rows)
        return _fail("every eigencomponent fell below the cutoff; nothing to invert")

    back = qpe_backward(s_flag, powers)
    trace_rows.append(("uncompute", "phase+system", float(np.linalg.norm(back)),
                       _top_amplitudes(back[0])))
    del s_rest  # the flag=0 branch is discarded by post-selection

    phase_zero = float(np.linalg.norm(back[0]) ** 2) / success_probability
    phase_residual = 1.0 - phase_zero
    if phase_zero < 1e-14:
        _write_trace(trace_path, trace_rows)
        return _fail("phase register failed to uncompute; no usable solution branch")

    v_sys = back[0] / np.linalg.norm(back[0])
    d_pad = evolve.d_pad
    post_selection_probability = float(np.linalg.norm(v_sys[:d_pad]) ** 2)
    trace_rows.append(("postselect_flag", "system", 1.0, _top_amplitudes(v_sys)))

    if post_selection_probability < 1e-14:
        _write_trace(trace_path, trace_rows)
        return _fail("solution has no weight on the x block")

    x_amps = v_sys[:d_pad] / np.sqrt(post_selection_probability)
    trace_rows.append(("postselect_block", "x", 1.0, _top_amplitudes(x_amps)))
    _write_trace(trace_path, trace_rows)

    x_register = QuantumRegister(x_amps, (("system", qubits_for(clamp.d)),))
    v_register = QuantumRegister(v_sys, (("system", n_sys),))

    shot_success = shot_post = None
    if shots is not None:
        if shots < 1:
            raise ValueError("shots must be >= 1 when given")
        rng = np.random.default_rng(rng_seed)
        flag_ones = int(rng.binomial(shots, success_probability))
        shot_success = flag_ones / shots
        post_ones = int(rng.binomial(flag_ones, post_selection_probability)) if flag_ones else 0
        shot_post = post_ones / flag_ones if flag_ones else 0.0

    return QhopReport(ok=True, message="",
                      success_probability=success_probability,
                      post_selection_probability=post_selection_probability,
                      phase_residual=phase_residual, resolution_ok=resolution_ok,
                      aliasing=aliasing, kept_bins=kept_bins, mu=mu, t0=float(t0),
                      t_qubits=t_qubits, mode=mode, w_norm=w_norm,
                      x_register=x_register, v_register=v_register,
                      shots=shots, shot_success_rate=shot_success, shot_post_rate=shot_post)


def _write_trace(trace_path, rows) -> None:
    if trace_path is None:
        return
    with open(trace_path, "w") as fh:
        fh.write("step,subregister,norm,top_amplitudes\n")
        for step, reg, norm, amps in rows:
            fh.write(f'{step},{reg},{norm:.10g},"{amps}"\n')
