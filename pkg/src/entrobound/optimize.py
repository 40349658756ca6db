"""Deterministic multistart derivative-free minimization over bounded boxes.

The local refinement is a Nelder-Mead simplex; restarts begin at scrambled
Halton points (low-discrepancy, seed-reproducible) and all restarts advance
in lockstep as one numpy batch, which keeps per-point sweep costs low enough
for optimization-per-grid-point workloads. Results are bit-identical for a
fixed seed: the Halton schedule, the simplex arithmetic, and the final
argmin (first minimum wins) contain no other randomness.

Doubling ``restarts`` extends the same Halton schedule, so the reported best
value can only improve.

This module also owns the two parametrizations the correlation measures
optimize over: qubit projective bases from Bloch angles, and pure-state
decomposition ensembles from Givens-rotation isometries.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.stats import qmc

from .measurement import ObservableBasis, basis_from_bloch_angles
from .states import DensityOperator, Ket

RANK_CUTOFF = 1e-11
ENSEMBLE_WEIGHT_CUTOFF = 1e-14

_REFLECT = 1.0
_EXPAND = 2.0
_CONTRACT = 0.5
_SHRINK = 0.5
_INITIAL_STEP = 0.08


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 32
    max_iterations: int = 400
    f_tol: float = 1e-9
    x_tol: float = 1e-7
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.max_iterations < 1:
            raise ValueError("restarts and max_iterations must be positive")
        if self.f_tol <= 0.0 or self.x_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")


@dataclass(frozen=True)
class OptimizationResult:
    parameters: np.ndarray
    value: float
    evaluations: int
    converged: bool


def _checked_batch(batch_fn: Callable[[np.ndarray], np.ndarray]) -> Callable[[np.ndarray], np.ndarray]:
    def fn(x: np.ndarray) -> np.ndarray:
        vals = np.asarray(batch_fn(x), dtype=float).reshape(-1)
        if vals.shape[0] != x.shape[0]:
            raise ValueError(
                f"objective returned {vals.shape[0]} values for {x.shape[0]} points"
            )
        bad = ~np.isfinite(vals)
        if bad.any():
            i = int(np.argmax(bad))
            raise ValueError(
                f"objective returned non-finite value {vals[i]} at parameters {x[i].tolist()}"
            )
        return vals

    return fn


def _sort_simplices(simplex, fvals):
    order = np.argsort(fvals, axis=1, kind="stable")
    return (
        np.take_along_axis(simplex, order[:, :, None], axis=1),
        np.take_along_axis(fvals, order, axis=1),
    )


def _converged_rows(simplex, fvals, f_tol, x_tol):
    f_spread = fvals[:, -1] - fvals[:, 0]
    x_spread = np.max(np.abs(simplex - simplex[:, :1, :]), axis=(1, 2))
    return (f_spread <= f_tol) & (x_spread <= x_tol)


def _nelder_mead_batch(batch_fn, starts, lo, hi, max_iter, f_tol, x_tol):
    """Run one bounded Nelder-Mead per row of ``starts``, all in lockstep.

    Candidate points are clipped into the box. Convergence per restart uses
    the scipy criterion (simplex value spread <= f_tol and coordinate spread
    <= x_tol); converged restarts drop out of the working batch, so late
    iterations only pay for the stragglers. Row trajectories are independent
    of each other and of the compaction, keeping results deterministic.
    """
    n_batch, dim = starts.shape
    step = _INITIAL_STEP * (hi - lo)
    simplex = np.repeat(starts[:, None, :], dim + 1, axis=1)
    for k in range(dim):
        bumped = simplex[:, k + 1, k] + step[k]
        simplex[:, k + 1, k] = np.where(
            bumped <= hi[k], bumped, simplex[:, k + 1, k] - step[k]
        )
    fvals = batch_fn(simplex.reshape(-1, dim)).reshape(n_batch, dim + 1)
    evals = n_batch * (dim + 1)

    out_x = np.empty((n_batch, dim))
    out_f = np.empty(n_batch)
    out_converged = np.zeros(n_batch, dtype=bool)
    live = np.arange(n_batch)

    for _ in range(max_iter):
        simplex, fvals = _sort_simplices(simplex, fvals)
        done = _converged_rows(simplex, fvals, f_tol, x_tol)
        if done.any():
            finished = live[done]
            out_x[finished] = simplex[done, 0, :]
            out_f[finished] = fvals[done, 0]
            out_converged[finished] = True
            keep = ~done
            live, simplex, fvals = live[keep], simplex[keep], fvals[keep]
            if live.size == 0:
                break

        centroid = simplex[:, :-1, :].mean(axis=1)
        worst = simplex[:, -1, :]
        direction = centroid - worst
        x_reflect = np.clip(centroid + _REFLECT * direction, lo, hi)
        f_reflect = batch_fn(x_reflect)
        evals += x_reflect.shape[0]

        f_best = fvals[:, 0]
        f_second = fvals[:, -2]
        f_worst = fvals[:, -1]
        expand = f_reflect < f_best
        accept = (f_reflect >= f_best) & (f_reflect < f_second)
        contract_out = (f_reflect >= f_second) & (f_reflect < f_worst)
        contract_in = f_reflect >= f_worst

        scale = np.where(expand, _EXPAND, np.where(contract_out, _CONTRACT, -_CONTRACT))
        x_second = np.clip(centroid + scale[:, None] * direction, lo, hi)
        need_second = ~accept
        f_second_eval = np.full(live.size, np.inf)
        if need_second.any():
            f_second_eval[need_second] = batch_fn(x_second[need_second])
            evals += int(need_second.sum())

        new_x = worst.copy()
        new_f = f_worst.copy()
        took_expand = expand & (f_second_eval < f_reflect)
        kept_reflect = (expand & ~took_expand) | accept
        new_x[kept_reflect] = x_reflect[kept_reflect]
        new_f[kept_reflect] = f_reflect[kept_reflect]
        new_x[took_expand] = x_second[took_expand]
        new_f[took_expand] = f_second_eval[took_expand]
        ok_contract = (contract_out & (f_second_eval <= f_reflect)) | (
            contract_in & (f_second_eval < f_worst)
        )
        new_x[ok_contract] = x_second[ok_contract]
        new_f[ok_contract] = f_second_eval[ok_contract]

        simplex[:, -1, :] = new_x
        fvals[:, -1] = new_f

        shrink = (contract_out | contract_in) & ~ok_contract
        if shrink.any():
            idx = np.flatnonzero(shrink)
            best = simplex[idx, :1, :]
            shrunk = best + _SHRINK * (simplex[idx, 1:, :] - best)
            simplex[idx, 1:, :] = shrunk
            fvals[idx, 1:] = batch_fn(shrunk.reshape(-1, dim)).reshape(len(idx), dim)
            evals += len(idx) * dim

    if live.size:
        simplex, fvals = _sort_simplices(simplex, fvals)
        out_x[live] = simplex[:, 0, :]
        out_f[live] = fvals[:, 0]
        out_converged[live] = _converged_rows(simplex, fvals, f_tol, x_tol)
    return out_x, out_f, evals, out_converged


def minimize_multistart(
    objective: Callable,
    dimension: int,
    box,
    config: OptimizerConfig | None = None,
    vectorized: bool = False,
) -> OptimizationResult:
    """Minimize ``objective`` over a box via multistart simplex refinement.

    ``box`` is a sequence of (low, high) pairs, one per coordinate. With
    ``vectorized=True`` the objective receives an (n_points, dimension)
    array and must return n_points values in one call, which is much faster
    for numpy-friendly objectives.
    """
    config = config or OptimizerConfig()
    dimension = int(dimension)
    if dimension < 1:
        raise ValueError("dimension must be positive")
    bounds = [(float(b[0]), float(b[1])) for b in box]
    if len(bounds) != dimension:
        raise ValueError(f"box has {len(bounds)} entries for dimension {dimension}")
    if any(hi <= lo for lo, hi in bounds):
        raise ValueError("every box interval must have positive width")
    lo = np.array([b[0] for b in bounds])
    hi = np.array([b[1] for b in bounds])

    sampler = qmc.Halton(d=dimension, scramble=True, seed=config.seed)
    starts = lo + sampler.random(config.restarts) * (hi - lo)

    if vectorized:
        batch_fn = _checked_batch(objective)
    else:
        batch_fn = _checked_batch(
            lambda pts: np.array([float(objective(p)) for p in pts])
        )

    best_x, best_f, evals, conv = _nelder_mead_batch(
        batch_fn, starts, lo, hi, config.max_iterations, config.f_tol, config.x_tol
    )
    winner = int(np.argmin(best_f))
    return OptimizationResult(
        parameters=best_x[winner].copy(),
        value=float(best_f[winner]),
        evaluations=evals,
        converged=bool(conv[winner]),
    )


def qubit_projective_basis(theta: float, phi: float) -> ObservableBasis:
    """Orthonormal qubit measurement basis for polar/azimuthal angles."""
    return basis_from_bloch_angles(theta, phi)


@dataclass(frozen=True)
class DecompositionEnsemble:
    """Probabilities p_j and pure states realizing a mixed state as a mixture."""

    probabilities: np.ndarray
    states: tuple[Ket, ...]

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float).reshape(-1)
        if p.size != len(self.states):
            raise ValueError("probability count does not match state count")
        if p.size == 0:
            raise ValueError("ensemble must be nonempty")
        if np.any(p < 0.0) or abs(float(p.sum()) - 1.0) > 1e-9:
            raise ValueError("ensemble probabilities must be nonnegative and sum to 1")
        dims = self.states[0].dims
        if any(s.dims != dims for s in self.states):
            raise ValueError("ensemble states disagree on dims")
        p = np.ascontiguousarray(p)
        p.setflags(write=False)
        object.__setattr__(self, "probabilities", p)
        object.__setattr__(self, "states", tuple(self.states))

    def mixture(self) -> DensityOperator:
        """Reassemble sum_j p_j |psi_j><psi_j|."""
        dims = self.states[0].dims
        out = np.zeros((self.states[0].amplitudes.size,) * 2, dtype=np.complex128)
        for p, s in zip(self.probabilities, self.states):
            out += p * np.outer(s.amplitudes, s.amplitudes.conj())
        return DensityOperator(dims, out)


def _isometry_batch(params: np.ndarray, m: int, r: int) -> np.ndarray:
    """Map (n_batch, r*m) angle/phase rows to m x r column isometries.

    Parameters are consumed pairwise as (angle, phase) Givens rotations over
    a fixed cyclic schedule of coordinate planes, applied to the first r
    columns of the identity. A trailing unpaired parameter acts as a
    phase-free rotation.
    """
    n_batch, n_par = params.shape
    cols = np.zeros((n_batch, m, r), dtype=np.complex128)
    diag = np.arange(r)
    cols[:, diag, diag] = 1.0
    if m == 1:
        return cols
    planes = [(i, j) for i in range(m) for j in range(i + 1, m)]
    n_rot = (n_par + 1) // 2
    cos_t = np.cos(params[:, 0::2])
    sin_t = np.sin(params[:, 0::2])
    phase = np.exp(1j * params[:, 1::2])
    n_phase = phase.shape[1]
    for k in range(n_rot):
        a, b = planes[k % len(planes)]
        c = cos_t[:, k, None]
        s = sin_t[:, k, None]
        e = phase[:, k, None] if k < n_phase else 1.0
        row_a = cols[:, a, :]
        row_b = cols[:, b, :]
        new_a = c * row_a - (e * s) * row_b
        cols[:, b, :] = np.conj(e) * (s * row_a) + c * row_b
        cols[:, a, :] = new_a
    return cols


def _spectral_factor(rho: DensityOperator) -> tuple[np.ndarray, int]:
    """Rows sqrt(lambda_i) e_i of the spectral decomposition, plus the rank."""
    w, v = np.linalg.eigh(rho.matrix)
    keep = w > RANK_CUTOFF
    w, v = w[keep], v[:, keep]
    return (v * np.sqrt(w)).T, int(w.size)


def decomposition_from_isometry(rho: DensityOperator, params, m: int) -> DecompositionEnsemble:
    """Pure-state ensemble of size <= m realizing ``rho``.

    The ensemble elements are |psi_j> ~ sum_i conj(U_ji) sqrt(lambda_i) |e_i>
    for the column isometry U built from ``params`` (length rank*m). Zero-
    weight elements are dropped; the mixture reconstructs ``rho``.
    """
    params = np.asarray(params, dtype=float).reshape(-1)
    factor, rank = _spectral_factor(rho)
    m = int(m)
    if m < rank:
        raise ValueError(f"ensemble size {m} is below the state rank {rank}")
    if params.size != rank * m:
        raise ValueError(
            f"expected {rank * m} parameters for rank {rank} and ensemble size {m}, "
            f"got {params.size}"
        )
    iso = _isometry_batch(params[None, :], m, rank)[0]
    unnormalized = np.conj(iso) @ factor
    weights = np.einsum("jd,jd->j", unnormalized, unnormalized.conj()).real
    keep = weights > ENSEMBLE_WEIGHT_CUTOFF
    weights = weights[keep]
    vectors = unnormalized[keep] / np.sqrt(weights)[:, None]
    weights = weights / weights.sum()
    return DecompositionEnsemble(
        probabilities=weights,
        states=tuple(Ket(rho.dims, vec) for vec in vectors),
    )
