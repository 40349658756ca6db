"""Bipartite correlation and entanglement measures for two-qubit states.

Discord-type quantities optimize over rank-1 projective measurements on the
designated side (two angles per qubit), so the reported discord is an upper
bound on the POVM-based value; the reported entanglement of assistance is a
lower bound on the true maximum for the same reason. Tests therefore treat
both one-sidedly.

The spin-flip spectrum lambda_1 >= ... >= lambda_4 of rho (sigma_y x sigma_y)
rho* (sigma_y x sigma_y) yields both the concurrence (lambda_1 - rest) and
its all-plus variant, the concurrence of assistance (the full sum).
"""

from __future__ import annotations

from dataclasses import replace
from math import prod

import numpy as np
from scipy.special import xlogy

from .entropy import binary_entropy, mutual_information, von_neumann_entropy
from .measurement import PAULI_Y
from .optimize import (
    DecompositionEnsemble,
    OptimizerConfig,
    _isometry_batch,
    _spectral_factor,
    decomposition_from_isometry,
    minimize_multistart,
)
from .states import DensityOperator, Ket, ket_to_density, partial_trace

__all__ = [
    "DecompositionEnsemble",
    "decomposition_from_isometry",
    "classical_correlation",
    "quantum_discord",
    "concurrence",
    "eof_from_concurrence",
    "concurrence_of_assistance",
    "entanglement_of_assistance",
    "distillable_entanglement_pure",
    "log_negativity",
]

MEASUREMENT_BOX = ((0.0, np.pi), (0.0, 2.0 * np.pi))

_SPIN_FLIP = np.kron(PAULI_Y, PAULI_Y)


def _require_two_qubits(rho: DensityOperator, what: str) -> None:
    if rho.dims != (2, 2):
        raise ValueError(f"{what} supports two qubits only, got dims {rho.dims}")


_LN2 = np.log(2.0)


def _h2_rows(x: np.ndarray) -> np.ndarray:
    x = np.clip(x, 0.0, 1.0)
    return -(xlogy(x, x) + xlogy(1.0 - x, 1.0 - x)) / _LN2


def _post_measurement_entropy_objective(rho_ab: DensityOperator, measured: int):
    """Batched average conditional entropy after projecting ``measured``.

    Points are (theta, phi) Bloch angles of the measurement basis; the
    value is sum_k p_k S(rho_other|k), computed from the closed-form 2x2
    spectrum of each conditional block.
    """
    rho4 = rho_ab.matrix.reshape(2, 2, 2, 2)

    def objective(pts: np.ndarray) -> np.ndarray:
        half = pts[:, 0] / 2.0
        c, s = np.cos(half), np.sin(half)
        e = np.exp(1j * pts[:, 1])
        vecs = np.empty((pts.shape[0], 2, 2), dtype=np.complex128)
        vecs[:, 0, 0] = c
        vecs[:, 0, 1] = e * s
        vecs[:, 1, 0] = s
        vecs[:, 1, 1] = -e * c
        if measured == 0:
            blocks = np.einsum("xka,abcd,xkc->xkbd", vecs.conj(), rho4, vecs)
        else:
            blocks = np.einsum("xkb,abcd,xkd->xkac", vecs.conj(), rho4, vecs)
        probs = (blocks[:, :, 0, 0] + blocks[:, :, 1, 1]).real
        dets = (
            blocks[:, :, 0, 0] * blocks[:, :, 1, 1]
            - blocks[:, :, 0, 1] * blocks[:, :, 1, 0]
        ).real
        disc = np.sqrt(np.clip(probs * probs - 4.0 * dets, 0.0, None))
        safe = np.where(probs > 1e-15, probs, 1.0)
        lam = np.where(probs > 1e-15, (probs + disc) / (2.0 * safe), 0.5)
        return np.sum(probs * _h2_rows(lam), axis=1)

    return objective


def classical_correlation(
    rho_ab: DensityOperator, measured: int, config: OptimizerConfig | None = None
) -> float:
    """Correlation extractable by projectively measuring one side.

    J = S(rho_other) - min over bases of the average post-measurement
    entropy of the unmeasured side; lies in [0, S(rho_other)].
    """
    _require_two_qubits(rho_ab, "classical_correlation")
    measured = int(measured)
    if measured not in (0, 1):
        raise ValueError(f"measured side must be 0 or 1, got {measured}")
    config = config or OptimizerConfig()
    other = 1 - measured
    s_other = von_neumann_entropy(partial_trace(rho_ab, (other,)))
    objective = _post_measurement_entropy_objective(rho_ab, measured)
    result = minimize_multistart(objective, 2, MEASUREMENT_BOX, config, vectorized=True)
    return s_other - result.value


def quantum_discord(
    rho_ab: DensityOperator, measured: int, config: OptimizerConfig | None = None
) -> float:
    """Mutual information minus the classical correlation for the same side."""
    return mutual_information(rho_ab, (0,), (1,)) - classical_correlation(
        rho_ab, measured, config
    )


def _flip_spectrum(rho_ab: DensityOperator) -> np.ndarray:
    flipped = _SPIN_FLIP @ rho_ab.matrix.conj() @ _SPIN_FLIP
    ev = np.linalg.eigvals(rho_ab.matrix @ flipped)
    lam = np.sqrt(np.clip(ev.real, 0.0, None))
    return np.sort(lam)[::-1]


def concurrence(rho_ab: DensityOperator) -> float:
    """Wootters concurrence max(0, l1 - l2 - l3 - l4) of the flip spectrum."""
    _require_two_qubits(rho_ab, "concurrence")
    lam = _flip_spectrum(rho_ab)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def concurrence_of_assistance(rho_ab: DensityOperator) -> float:
    """All-plus variant l1 + l2 + l3 + l4 of the flip spectrum."""
    _require_two_qubits(rho_ab, "concurrence_of_assistance")
    return float(min(1.0, np.sum(_flip_spectrum(rho_ab))))


def eof_from_concurrence(c: float) -> float:
    """Entanglement of formation h2((1 + sqrt(1 - C^2))/2) for a concurrence C."""
    if not -1e-12 <= c <= 1.0 + 1e-12:
        raise ValueError(f"concurrence must lie in [0, 1], got {c}")
    c = min(max(float(c), 0.0), 1.0)
    return binary_entropy((1.0 + np.sqrt(1.0 - c * c)) / 2.0)


def _pair_entropy_rows(vecs: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Per-element weighted marginal entropies for unnormalized 2x2 vectors."""
    q = vecs.reshape(vecs.shape[0], vecs.shape[1], 2, 2)
    det = q[:, :, 0, 0] * q[:, :, 1, 1] - q[:, :, 0, 1] * q[:, :, 1, 0]
    disc = np.sqrt(np.clip(weights * weights - 4.0 * np.abs(det) ** 2, 0.0, None))
    safe = np.where(weights > 1e-15, weights, 1.0)
    lam = np.where(weights > 1e-15, (weights + disc) / (2.0 * safe), 0.5)
    return weights * _h2_rows(lam)


def _assistance_objective(factor: np.ndarray, rank: int, m: int):
    def objective(pts: np.ndarray) -> np.ndarray:
        iso = _isometry_batch(pts, m, rank)
        vecs = np.conj(iso) @ factor
        weights = np.sum(vecs.real**2 + vecs.imag**2, axis=2)
        return -np.sum(_pair_entropy_rows(vecs, weights), axis=1)

    return objective


def _angle_box(n_params: int) -> tuple:
    return tuple(
        (0.0, np.pi) if k % 2 == 0 else (0.0, 2.0 * np.pi) for k in range(n_params)
    )


def entanglement_of_assistance(
    rho_ac: DensityOperator, m: int | None = None, config: OptimizerConfig | None = None
) -> float:
    """Best average marginal entropy over parametrized pure-state decompositions.

    Maximizes sum_j p_j S(tr_C |psi_j><psi_j|) over ensembles of size ``m``
    (default rank^2) built from Givens isometries. Restarts are doubled
    relative to the config because this landscape is flatter than the
    discord one. The reported value is a lower bound on the true maximum.
    """
    _require_two_qubits(rho_ac, "entanglement_of_assistance")
    config = config or OptimizerConfig()
    factor, rank = _spectral_factor(rho_ac)
    if rank == 1:
        vecs = factor[None, :, :]
        weights = np.sum(vecs.real**2 + vecs.imag**2, axis=2)
        return float(np.sum(_pair_entropy_rows(vecs, weights)))
    m = rank * rank if m is None else int(m)
    if m < rank:
        raise ValueError(f"ensemble size {m} is below the state rank {rank}")
    n_params = rank * m
    objective = _assistance_objective(factor, rank, m)
    result = minimize_multistart(
        objective,
        n_params,
        _angle_box(n_params),
        replace(config, restarts=2 * config.restarts),
        vectorized=True,
    )
    return -result.value


def distillable_entanglement_pure(psi: Ket, cut) -> float:
    """Reduced-state entropy across the cut; exact for pure states."""
    cut = tuple(sorted(set(int(i) for i in cut)))
    n = len(psi.dims)
    if not cut or len(cut) >= n:
        raise ValueError("cut must be a nonempty proper subset of the subsystems")
    if cut[0] < 0 or cut[-1] >= n:
        raise ValueError(f"cut indices out of range: {cut}")
    return von_neumann_entropy(partial_trace(ket_to_density(psi), cut))


def _partial_transpose(matrix: np.ndarray, dims, transposed) -> np.ndarray:
    n = len(dims)
    tensor = matrix.reshape(tuple(dims) * 2)
    perm = list(range(2 * n))
    for i in transposed:
        perm[i], perm[i + n] = perm[i + n], perm[i]
    side = prod(dims)
    return tensor.transpose(perm).reshape(side, side)


def log_negativity(rho: DensityOperator, cut) -> float:
    """log2 of the trace norm of the partial transpose over ``cut``."""
    cut = tuple(sorted(set(int(i) for i in cut)))
    n = rho.subsystem_count
    if not cut or len(cut) >= n:
        raise ValueError("cut must be a nonempty proper subset of the subsystems")
    if cut[0] < 0 or cut[-1] >= n:
        raise ValueError(f"cut indices out of range: {cut}")
    pt = _partial_transpose(rho.matrix, rho.dims, cut)
    trace_norm = float(np.sum(np.abs(np.linalg.eigvalsh(pt))))
    return max(0.0, float(np.log2(trace_norm)))
