"""Shannon and von Neumann entropies and derived correlation quantities.

All logarithms are base 2, so every quantity is in bits. The convention
0*log2(0) = 0 applies throughout, and spectrum entries below 1e-12 are
treated as exact zeros so that clamp residue from state validation never
produces NaNs.

The coherent information I(A>B) is not a separate operation here: it equals
``-conditional_entropy(rho, first, second)`` with the memory side second.
"""

from __future__ import annotations

import numpy as np

from .states import DensityOperator, hermitian_eigenvalues, partial_trace

ZERO_PROBABILITY_CUTOFF = 1e-12
PROBABILITY_SUM_TOL = 1e-9


def validate_probabilities(p) -> np.ndarray:
    """Check nonnegativity and unit sum (within 1e-9); returns a float array."""
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.size == 0:
        raise ValueError("probability vector is empty")
    if np.any(p < -ZERO_PROBABILITY_CUTOFF) or np.any(p > 1.0 + ZERO_PROBABILITY_CUTOFF):
        raise ValueError("probabilities must lie in [0, 1]")
    if abs(float(p.sum()) - 1.0) > PROBABILITY_SUM_TOL:
        raise ValueError(f"probabilities sum to {p.sum():.12f}, not 1")
    return np.clip(p, 0.0, 1.0)


def _entropy_of_spectrum(p: np.ndarray) -> float:
    p = p[p > ZERO_PROBABILITY_CUTOFF]
    if p.size == 0:
        return 0.0
    return float(-np.sum(p * np.log2(p)))


def shannon_entropy(p) -> float:
    """H(p) = -sum_x p_x log2 p_x for a valid probability vector."""
    return _entropy_of_spectrum(validate_probabilities(p))


def binary_entropy(x: float) -> float:
    """Shannon entropy of (x, 1-x)."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary entropy argument must be in [0, 1], got {x}")
    return _entropy_of_spectrum(np.array([x, 1.0 - x]))


def von_neumann_entropy(rho: DensityOperator) -> float:
    """S(rho) = -tr(rho log2 rho), evaluated on the spectrum."""
    return _entropy_of_spectrum(hermitian_eigenvalues(rho))


def _subsystem_sets(rho: DensityOperator, first, second) -> tuple[tuple[int, ...], tuple[int, ...]]:
    first = tuple(sorted(set(int(i) for i in first)))
    second = tuple(sorted(set(int(i) for i in second)))
    if not first or not second:
        raise ValueError("subsystem sets must be nonempty")
    if set(first) & set(second):
        raise ValueError(f"subsystem sets overlap: {first} and {second}")
    n = rho.subsystem_count
    for i in first + second:
        if not 0 <= i < n:
            raise ValueError(f"subsystem index {i} out of range for {n} subsystems")
    return first, second


def conditional_entropy(rho: DensityOperator, first, second) -> float:
    """S(first|second) = S(rho on first+second) - S(rho on second).

    Negative values witness entanglement across the cut.
    """
    first, second = _subsystem_sets(rho, first, second)
    joint = von_neumann_entropy(partial_trace(rho, first + second))
    marginal = von_neumann_entropy(partial_trace(rho, second))
    return joint - marginal


def mutual_information(rho: DensityOperator, first, second) -> float:
    """I(first:second) = S(first) + S(second) - S(first+second)."""
    first, second = _subsystem_sets(rho, first, second)
    s_first = von_neumann_entropy(partial_trace(rho, first))
    s_second = von_neumann_entropy(partial_trace(rho, second))
    s_joint = von_neumann_entropy(partial_trace(rho, first + second))
    return s_first + s_second - s_joint


def ssa_gap(rho: DensityOperator) -> float:
    """S(A|B) + S(A|C) for a three-subsystem state.

    Strong subadditivity forces the result to be nonnegative; it vanishes
    identically on pure states.
    """
    if rho.subsystem_count != 3:
        raise ValueError(f"expected exactly three subsystems, got {rho.subsystem_count}")
    return conditional_entropy(rho, (0,), (1,)) + conditional_entropy(rho, (0,), (2,))
