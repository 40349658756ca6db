"""Observables, projective measurement channels, and uncertainty sums.

A basis is a full set of orthonormal eigenvectors on one subsystem; the
overlap figure c = max_ij |<q_i|r_j>|^2 quantifies how complementary two
bases are (c = 1/d for mutually unbiased bases, c = 1 for equal ones).
Built-in qubit bases are addressable by name: "z", "x", "y", and
"bloch:theta,phi" for an arbitrary polar/azimuthal pair in radians.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .entropy import conditional_entropy
from .states import DensityOperator, Ket

ORTHONORMALITY_TOL = 1e-9
OVERLAP_TOL = 1e-12

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)


@dataclass(frozen=True)
class ObservableBasis:
    """Orthonormal eigenvector set of a nondegenerate observable on one subsystem."""

    kets: tuple[Ket, ...]

    def __post_init__(self):
        kets = tuple(self.kets)
        if not kets:
            raise ValueError("basis must contain at least one ket")
        dims = kets[0].dims
        if len(dims) != 1:
            raise ValueError("basis kets must live on a single subsystem")
        d = dims[0]
        if any(k.dims != dims for k in kets):
            raise ValueError("basis kets disagree on dimension")
        if len(kets) != d:
            raise ValueError(f"need {d} kets for dimension {d}, got {len(kets)}")
        cols = np.column_stack([k.amplitudes for k in kets])
        gram = cols.conj().T @ cols
        if np.max(np.abs(gram - np.eye(d))) > ORTHONORMALITY_TOL:
            raise ValueError("basis kets are not pairwise orthonormal")
        object.__setattr__(self, "kets", kets)

    @property
    def dimension(self) -> int:
        return self.kets[0].dims[0]

    @property
    def matrix(self) -> np.ndarray:
        """Unitary with the basis kets as columns."""
        return np.column_stack([k.amplitudes for k in self.kets])

    def projector(self, i: int) -> np.ndarray:
        v = self.kets[i].amplitudes
        return np.outer(v, v.conj())


@dataclass(frozen=True)
class HermitianObservable:
    """Hermitian operator on a single subsystem, for deviation-based bounds."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("observable must be a square matrix")
        if np.max(np.abs(m - m.conj().T)) > ORTHONORMALITY_TOL:
            raise ValueError("observable is not Hermitian")
        m = np.ascontiguousarray(m)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


def basis_from_matrix(u: np.ndarray) -> ObservableBasis:
    """Basis whose kets are the columns of a unitary."""
    u = np.asarray(u, dtype=np.complex128)
    d = u.shape[0]
    return ObservableBasis(tuple(Ket((d,), u[:, j]) for j in range(d)))


def basis_from_bloch_angles(theta: float, phi: float) -> ObservableBasis:
    """Qubit basis {cos(t/2)|0> + e^(i p) sin(t/2)|1>, sin(t/2)|0> - e^(i p) cos(t/2)|1>}."""
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    e = np.exp(1j * phi)
    u = np.array([[c, s], [e * s, -e * c]], dtype=np.complex128)
    return basis_from_matrix(u)


def named_basis(name: str) -> ObservableBasis:
    """Resolve a CLI basis name: "z", "x", "y", or "bloch:theta,phi" (radians)."""
    key = name.strip().lower()
    if key == "z":
        return basis_from_bloch_angles(0.0, 0.0)
    if key == "x":
        return basis_from_bloch_angles(np.pi / 2.0, 0.0)
    if key == "y":
        return basis_from_bloch_angles(np.pi / 2.0, np.pi / 2.0)
    if key.startswith("bloch:"):
        parts = key[len("bloch:"):].split(",")
        if len(parts) != 2:
            raise ValueError(f"expected bloch:theta,phi with two angles, got {name!r}")
        try:
            theta, phi = float(parts[0]), float(parts[1])
        except ValueError as exc:
            raise ValueError(f"could not parse bloch angles in {name!r}") from exc
        return basis_from_bloch_angles(theta, phi)
    raise ValueError(f"unknown basis name {name!r} (use z, x, y, or bloch:theta,phi)")


def complementarity_c(q: ObservableBasis, r: ObservableBasis) -> float:
    """c = max_ij |<q_i|r_j>|^2; lies in [1/d, 1] and is symmetric in its arguments."""
    if q.dimension != r.dimension:
        raise ValueError(f"basis dimensions differ: {q.dimension} vs {r.dimension}")
    overlaps = np.abs(q.matrix.conj().T @ r.matrix) ** 2
    return float(np.max(overlaps))


@dataclass(frozen=True)
class ObservablePair:
    """Two bases for the same subsystem together with their overlap figure c."""

    q: ObservableBasis
    r: ObservableBasis
    c: float

    def __post_init__(self):
        c_check = complementarity_c(self.q, self.r)
        if abs(self.c - c_check) > OVERLAP_TOL:
            raise ValueError(f"stored c={self.c} disagrees with bases (c={c_check})")
        if not 0.0 < self.c <= 1.0:
            raise ValueError(f"c must be in (0, 1], got {self.c}")

    @classmethod
    def from_bases(cls, q: ObservableBasis, r: ObservableBasis) -> "ObservablePair":
        return cls(q, r, complementarity_c(q, r))

    @classmethod
    def from_names(cls, q_name: str, r_name: str) -> "ObservablePair":
        return cls.from_bases(named_basis(q_name), named_basis(r_name))


def measurement_channel(rho: DensityOperator, basis: ObservableBasis, target: int) -> DensityOperator:
    """Dephase subsystem ``target`` in the measurement basis.

    Returns sum_i (P_i (x) I) rho (P_i (x) I), which is block-diagonal in the
    measured basis and trace preserving.
    """
    n = rho.subsystem_count
    if not 0 <= target < n:
        raise ValueError(f"target {target} out of range for {n} subsystems")
    if basis.dimension != rho.dims[target]:
        raise ValueError(
            f"basis dimension {basis.dimension} does not match subsystem {target} "
            f"(dimension {rho.dims[target]})"
        )
    pre = int(np.prod(rho.dims[:target], dtype=np.int64))
    post = int(np.prod(rho.dims[target + 1:], dtype=np.int64))
    out = np.zeros_like(rho.matrix)
    for i in range(basis.dimension):
        p = np.kron(np.kron(np.eye(pre), basis.projector(i)), np.eye(post))
        out += p @ rho.matrix @ p
    return DensityOperator(rho.dims, out)


def measured_conditional_entropy(rho_ab: DensityOperator, basis: ObservableBasis) -> float:
    """S(X|B) on the post-measurement state after measuring the first subsystem."""
    if rho_ab.subsystem_count != 2:
        raise ValueError("expected a two-subsystem state")
    dephased = measurement_channel(rho_ab, basis, 0)
    return conditional_entropy(dephased, (0,), (1,))


def uncertainty_sum(rho_ab: DensityOperator, pair: ObservablePair) -> float:
    """S(Q|B) + S(R|B): the measured left side of the memory-assisted relation."""
    if rho_ab.subsystem_count != 2:
        raise ValueError("expected a two-subsystem state")
    return measured_conditional_entropy(rho_ab, pair.q) + measured_conditional_entropy(
        rho_ab, pair.r
    )


def robertson_rhs(
    q: HermitianObservable, r: HermitianObservable, rho: DensityOperator
) -> tuple[float, float]:
    """Deviation product and commutator bound for two observables on one system.

    Returns (dQ*dR, |<[Q,R]>|/2); theory guarantees the first is never below
    the second.
    """
    if rho.subsystem_count != 1:
        raise ValueError("expected a single-subsystem state")
    qm, rm = q.matrix, r.matrix
    if qm.shape != rho.matrix.shape or rm.shape != rho.matrix.shape:
        raise ValueError("observable dimension does not match the state")

    def deviation(op: np.ndarray) -> float:
        mean = float(np.trace(rho.matrix @ op).real)
        mean_sq = float(np.trace(rho.matrix @ op @ op).real)
        return float(np.sqrt(max(mean_sq - mean * mean, 0.0)))

    commutator_mean = np.trace(rho.matrix @ (qm @ rm - rm @ qm))
    return deviation(qm) * deviation(rm), float(np.abs(commutator_mean)) / 2.0
