"""Dense complex-matrix quantum states: construction, validation, reduction.

Every state carries an ordered tuple of subsystem dimensions next to its
matrix (or amplitude vector), so partial traces and tensor products never
need side-channel bookkeeping. All values are immutable after construction
and every operation here is a pure function, so states are safe to share
between threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import prod

import numpy as np

HERMITICITY_TOL = 1e-9
TRACE_TOL = 1e-9
EIGENVALUE_CLAMP = 1e-9
KET_NORM_TOL = 1e-12


def _as_dims(dims) -> tuple[int, ...]:
    out = tuple(int(d) for d in dims)
    if not out:
        raise ValueError("dims must contain at least one subsystem")
    if any(d < 2 for d in out):
        raise ValueError(f"every subsystem dimension must be >= 2, got {out}")
    return out


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DensityOperator:
    """Positive, unit-trace complex matrix over ordered subsystems.

    Use :func:`validate_density` to build one from an untrusted matrix;
    the constructor itself only checks shape consistency so that internal
    operations (which preserve physicality by construction) stay cheap.
    """

    dims: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        dims = _as_dims(self.dims)
        m = np.asarray(self.matrix, dtype=np.complex128)
        side = prod(dims)
        if m.shape != (side, side):
            raise ValueError(
                f"matrix side {m.shape} does not match product of dims {dims}"
            )
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def side(self) -> int:
        return self.matrix.shape[0]

    @property
    def subsystem_count(self) -> int:
        return len(self.dims)


@dataclass(frozen=True)
class Ket:
    """Normalized state vector over ordered subsystems."""

    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = _as_dims(self.dims)
        v = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if v.shape[0] != prod(dims):
            raise ValueError(
                f"amplitude length {v.shape[0]} does not match product of dims {dims}"
            )
        norm = float(np.vdot(v, v).real)
        if abs(norm - 1.0) > KET_NORM_TOL:
            raise ValueError(f"ket norm deviates from 1 by {abs(norm - 1.0):.3e}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", _frozen(v))


def validate_density(m, dims) -> DensityOperator:
    """Validate an untrusted matrix and return a DensityOperator.

    The matrix is symmetrized to (M + M')/2 and eigenvalues in
    [-EIGENVALUE_CLAMP, 0) are clamped to zero with trace renormalization.
    Anything outside those tolerance windows is rejected.
    """
    dims = _as_dims(dims)
    m = np.asarray(m, dtype=np.complex128)
    side = prod(dims)
    if m.ndim != 2 or m.shape != (side, side):
        raise ValueError(f"expected a {side}x{side} matrix for dims {dims}, got {m.shape}")

    herm_dev = float(np.max(np.abs(m - m.conj().T)))
    if herm_dev > HERMITICITY_TOL:
        raise ValueError(f"Hermiticity violation {herm_dev:.3e} exceeds {HERMITICITY_TOL}")
    h = (m + m.conj().T) / 2.0

    trace_dev = abs(float(np.trace(h).real) - 1.0)
    if trace_dev > TRACE_TOL:
        raise ValueError(f"trace deviates from 1 by {trace_dev:.3e}")

    w, v = np.linalg.eigh(h)
    if w[0] < -EIGENVALUE_CLAMP:
        raise ValueError(f"negative eigenvalue {w[0]:.3e} below -{EIGENVALUE_CLAMP}")
    if np.any(w < 0.0):
        w = np.clip(w, 0.0, None)
        w = w / w.sum()
        h = (v * w) @ v.conj().T
    return DensityOperator(dims, h)


def ket_to_density(k: Ket) -> DensityOperator:
    """Rank-1 projector |psi><psi| with the same subsystem dims."""
    v = k.amplitudes
    return DensityOperator(k.dims, np.outer(v, v.conj()))


def tensor_product(a: DensityOperator, b: DensityOperator) -> DensityOperator:
    """Kronecker product; dims are concatenated in order."""
    return DensityOperator(a.dims + b.dims, np.kron(a.matrix, b.matrix))


def partial_trace(rho: DensityOperator, keep) -> DensityOperator:
    """Reduce to the subsystems in ``keep``, preserving their relative order."""
    keep = sorted(set(int(i) for i in keep))
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    n = rho.subsystem_count
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"subsystem index out of range for {n} subsystems: {keep}")
    reduced = _partial_trace_matrix(rho.matrix, rho.dims, keep)
    new_dims = tuple(rho.dims[i] for i in keep)
    return DensityOperator(new_dims, reduced)


def _partial_trace_matrix(matrix: np.ndarray, dims, keep) -> np.ndarray:
    dims = list(dims)
    t = matrix.reshape(dims + dims)
    traced = [i for i in range(len(dims)) if i not in keep]
    for idx in sorted(traced, reverse=True):
        t = np.trace(t, axis1=idx, axis2=idx + len(dims))
        del dims[idx]
    side = prod(dims)
    return t.reshape(side, side)


def hermitian_eigenvalues(rho: DensityOperator) -> np.ndarray:
    """Real spectrum in descending order, clamped into [0, 1] within 1e-9."""
    w = np.linalg.eigvalsh(rho.matrix)
    w = np.where((w < 0.0) & (w >= -EIGENVALUE_CLAMP), 0.0, w)
    w = np.where((w > 1.0) & (w <= 1.0 + EIGENVALUE_CLAMP), 1.0, w)
    return w[::-1].copy()


def random_state(seed: int, dims, kind: str = "mixed", rank: int | None = None) -> DensityOperator:
    """Seeded random state: Haar-uniform pure or Ginibre-induced mixed.

    ``kind="pure"`` draws a Haar-random state vector; ``kind="mixed"`` draws
    G from the complex Ginibre ensemble with ``rank`` columns (full rank by
    default) and returns GG'/tr(GG'). Deterministic for a fixed seed.
    """
    dims = _as_dims(dims)
    d = prod(dims)
    rng = np.random.default_rng(seed)
    if kind == "pure":
        if rank not in (None, 1):
            raise ValueError(f"pure states have rank 1, got rank={rank}")
        v = rng.normal(size=d) + 1j * rng.normal(size=d)
        v = v / np.linalg.norm(v)
        return DensityOperator(dims, np.outer(v, v.conj()))
    if kind == "mixed":
        r = d if rank is None else int(rank)
        if not 1 <= r <= d:
            raise ValueError(f"rank must be in [1, {d}], got {rank}")
        g = rng.normal(size=(d, r)) + 1j * rng.normal(size=(d, r))
        m = g @ g.conj().T
        m = (m + m.conj().T) / 2.0
        return DensityOperator(dims, m / np.trace(m).real)
    raise ValueError(f"kind must be 'pure' or 'mixed', got {kind!r}")


def random_ket(seed: int, dims) -> Ket:
    """Seeded Haar-random state vector."""
    dims = _as_dims(dims)
    rng = np.random.default_rng(seed)
    v = rng.normal(size=prod(dims)) + 1j * rng.normal(size=prod(dims))
    return Ket(dims, v / np.linalg.norm(v))


def haar_unitary(seed: int, dim: int) -> np.ndarray:
    """Seeded Haar-random unitary via phase-fixed QR of a Ginibre matrix."""
    rng = np.random.default_rng(seed)
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


# --- JSON state files -------------------------------------------------------
#
# Matrices: {"dims": [d1, ...], "re": [[...]], "im": [[...]]}   (row-major)
# Kets:     {"dims": [d1, ...], "re": [...],   "im": [...]}


def density_to_json(rho: DensityOperator) -> str:
    return json.dumps(
        {
            "dims": list(rho.dims),
            "re": rho.matrix.real.tolist(),
            "im": rho.matrix.imag.tolist(),
        }
    )


def ket_to_json(k: Ket) -> str:
    return json.dumps(
        {
            "dims": list(k.dims),
            "re": k.amplitudes.real.tolist(),
            "im": k.amplitudes.imag.tolist(),
        }
    )


def state_from_json(text: str) -> DensityOperator | Ket:
    """Parse a JSON state file; nested "re" means a matrix, flat means a ket."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed state document: {exc}") from exc
    for key in ("dims", "re", "im"):
        if key not in doc:
            raise ValueError(f"state document is missing key {key!r}")
    dims = _as_dims(doc["dims"])
    re = doc["re"]
    im = doc["im"]
    if re and isinstance(re[0], list):
        m = np.asarray(re, dtype=float) + 1j * np.asarray(im, dtype=float)
        return validate_density(m, dims)
    v = np.asarray(re, dtype=float) + 1j * np.asarray(im, dtype=float)
    return Ket(dims, v)


def load_state_file(path) -> DensityOperator | Ket:
    with open(path, "r", encoding="utf-8") as fh:
        return state_from_json(fh.read())


def save_state_file(path, state: DensityOperator | Ket) -> None:
    text = density_to_json(state) if isinstance(state, DensityOperator) else ket_to_json(state)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")
