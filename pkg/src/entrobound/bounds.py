"""Entropic uncertainty lower bounds and their information-theoretic pieces.

Covers the basis-only bound log2(1/c), the mixed-state refinement, the
memory-assisted bound in both its conditional-entropy and mutual-information
forms, the tripartite pair of bounds, the reduction of the bound after
concentrating correlations on one memory via LOCC (closed forms for pure
states and for product-with-ancilla states, plus a computable upper bound),
and the dense-coding-capacity decomposition of the conditional entropy.

Every report re-verifies its own arithmetic at construction so downstream
consumers can trust component/bound consistency to 1e-12.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, NamedTuple

import numpy as np

from .correlations import (
    entanglement_of_assistance,
    log_negativity,
    quantum_discord,
)
from .entropy import conditional_entropy, mutual_information, von_neumann_entropy
from .measurement import ObservablePair
from .optimize import OptimizerConfig
from .states import DensityOperator, Ket, ket_to_density, partial_trace

REPORT_ARITHMETIC_TOL = 1e-12
PURITY_TOL = 1e-9

_RECIPES = {
    "basis_only": ("log2_inv_c",),
    "mixed_state": ("log2_inv_c", "state_entropy"),
    "memory": ("log2_inv_c", "conditional_a_given_memory"),
    "post_concentration": ("log2_inv_c", "state_entropy_a", "-concentrated_information"),
}


@dataclass(frozen=True)
class BoundReport:
    """A lower bound in bits plus the named components it was assembled from."""

    kind: str
    components: Mapping[str, float]
    bound: float

    def __post_init__(self):
        if self.kind not in _RECIPES:
            raise ValueError(f"unknown bound kind {self.kind!r}")
        comps = dict(self.components)
        total = 0.0
        for term in _RECIPES[self.kind]:
            if term.startswith("-"):
                total -= comps[term[1:]]
            else:
                total += comps[term]
        if abs(total - self.bound) > REPORT_ARITHMETIC_TOL:
            raise ValueError(
                f"bound {self.bound} drifts from its components ({total}) "
                f"beyond {REPORT_ARITHMETIC_TOL}"
            )
        object.__setattr__(self, "components", MappingProxyType(comps))


@dataclass(frozen=True)
class TripartiteScenario:
    """A three-party state with the measured pair of observables on party A."""

    state: DensityOperator
    pair: ObservablePair

    def __post_init__(self):
        if self.state.subsystem_count != 3:
            raise ValueError(
                f"scenario needs exactly three subsystems, got {self.state.subsystem_count}"
            )
        if self.pair.q.dimension != self.state.dims[0]:
            raise ValueError(
                f"observable dimension {self.pair.q.dimension} does not match "
                f"party A (dimension {self.state.dims[0]})"
            )


def maassen_uffink_bound(pair: ObservablePair) -> float:
    """Basis-only lower bound log2(1/c) on the two measurement entropies."""
    return float(np.log2(1.0 / pair.c))


def mixed_state_bound(rho_a: DensityOperator, pair: ObservablePair) -> float:
    """log2(1/c) + S(rho) for a single-subsystem state."""
    if rho_a.subsystem_count != 1:
        raise ValueError("expected a single-subsystem state")
    if pair.q.dimension != rho_a.dims[0]:
        raise ValueError("observable dimension does not match the state")
    return maassen_uffink_bound(pair) + von_neumann_entropy(rho_a)


def memory_bound(rho_ab: DensityOperator, pair: ObservablePair) -> BoundReport:
    """Memory-assisted bound log2(1/c) + S(A|B) for a bipartite state.

    The report also carries the equivalent mutual-information form
    log2(1/c) + S(rho_A) - I(A:B) under the key ``bound_mutual_form``; the
    two are checked to agree within 1e-12.
    """
    if rho_ab.subsystem_count != 2:
        raise ValueError("expected a two-subsystem state")
    if pair.q.dimension != rho_ab.dims[0]:
        raise ValueError("observable dimension does not match party A")
    s_a = von_neumann_entropy(partial_trace(rho_ab, (0,)))
    s_b = von_neumann_entropy(partial_trace(rho_ab, (1,)))
    s_ab = von_neumann_entropy(rho_ab)
    log_inv_c = maassen_uffink_bound(pair)
    cond = s_ab - s_b
    mutual = s_a + s_b - s_ab
    bound = log_inv_c + cond
    mutual_form = log_inv_c + s_a - mutual
    if abs(bound - mutual_form) > REPORT_ARITHMETIC_TOL:
        raise ValueError(
            f"conditional-entropy and mutual-information forms disagree by "
            f"{abs(bound - mutual_form):.3e}"
        )
    return BoundReport(
        kind="memory",
        components={
            "log2_inv_c": log_inv_c,
            "state_entropy_a": s_a,
            "conditional_a_given_memory": cond,
            "mutual_a_memory": mutual,
            "bound_mutual_form": mutual_form,
        },
        bound=bound,
    )


def tripartite_pair_bounds(sc: TripartiteScenario) -> tuple[BoundReport, BoundReport]:
    """Memory bounds for both marginals: (via party B, via party C)."""
    rho_ab = partial_trace(sc.state, (0, 1))
    rho_ac = partial_trace(sc.state, (0, 2))
    return memory_bound(rho_ab, sc.pair), memory_bound(rho_ac, sc.pair)


def one_way_ci_pure(
    psi_abc: Ket, m: int | None = None, config: OptimizerConfig | None = None
) -> float:
    """One-way concentrated information S(rho_A) + E_a(rho_AC), exact for pure states."""
    if len(psi_abc.dims) != 3:
        raise ValueError("expected a pure state on exactly three subsystems")
    rho = ket_to_density(psi_abc)
    s_a = von_neumann_entropy(partial_trace(rho, (0,)))
    rho_ac = partial_trace(rho, (0, 2))
    return s_a + entanglement_of_assistance(rho_ac, m, config)


def ci_product(
    rho_ab: DensityOperator,
    config: OptimizerConfig | None = None,
    measured: int = 1,
) -> float:
    """Concentrated information I(A:B) - D(A|B) for product-with-ancilla states.

    The third party factors out, so only the AB block matters. The
    default convention measures on B (the communicating side); pass
    ``measured=0`` to condition the discord on A instead.
    """
    if rho_ab.dims != (2, 2):
        raise ValueError(f"supported for two qubits only, got dims {rho_ab.dims}")
    return mutual_information(rho_ab, (0,), (1,)) - quantum_discord(
        rho_ab, measured, config
    )


def _is_pure(rho: DensityOperator) -> bool:
    purity = float(np.trace(rho.matrix @ rho.matrix).real)
    return purity >= 1.0 - PURITY_TOL


def ci_upper_bound(sc: TripartiteScenario) -> float:
    """min{I(A:BC), S(rho_A) + E_d-surrogate(AB:C)} bounding the concentrated information.

    For pure scenario states the surrogate is the exact reduced-entropy
    distillable entanglement; otherwise the log-negativity across AB:C,
    which upper-bounds distillable entanglement and so keeps the whole
    expression a valid upper bound.
    """
    mutual_abc = mutual_information(sc.state, (0,), (1, 2))
    s_a = von_neumann_entropy(partial_trace(sc.state, (0,)))
    if _is_pure(sc.state):
        ed = von_neumann_entropy(partial_trace(sc.state, (2,)))
    else:
        ed = log_negativity(sc.state, (2,))
    return min(mutual_abc, s_a + ed)


def post_ci_bound(sc: TripartiteScenario, ci: float) -> BoundReport:
    """Bound after concentrating information: log2(1/c) + S(rho_A) - CI."""
    log_inv_c = maassen_uffink_bound(sc.pair)
    s_a = von_neumann_entropy(partial_trace(sc.state, (0,)))
    return BoundReport(
        kind="post_concentration",
        components={
            "log2_inv_c": log_inv_c,
            "state_entropy_a": s_a,
            "concentrated_information": float(ci),
        },
        bound=log_inv_c + s_a - float(ci),
    )


def dc_capacity(rho_ab: DensityOperator) -> float:
    """Single-copy dense-coding capacity log2(d_A) + max{0, -S(A|B)}.

    The sender either uses the shared state (identity encoding, worth the
    coherent information -S(A|B) when positive) or discards it and sends an
    orthogonal alphabet, so the optimum over encodings collapses to the clip.
    """
    if rho_ab.subsystem_count != 2:
        raise ValueError("expected a two-subsystem state")
    coherent_info = -conditional_entropy(rho_ab, (0,), (1,))
    return float(np.log2(rho_ab.dims[0])) + max(0.0, coherent_info)


class DenseCodingCheck(NamedTuple):
    """Both sides of the two decomposition identities on a pure tripartite state.

    ``conditional_ab`` should match ``discord_difference`` within the
    combined discord-optimization tolerance. ``capacity_difference`` is
    reported alongside ``discord_difference_dc`` (the same discord value)
    without any asserted relationship; callers decide where the capacity
    identity applies.
    """

    conditional_ab: float
    discord_difference: float
    discord_difference_dc: float
    capacity_difference: float


def dc_identity_check(
    psi_abc: Ket, config: OptimizerConfig | None = None
) -> DenseCodingCheck:
    """Evaluate S(A|B) vs D(C|A) - D(B|A) and the capacity difference.

    Both discords condition on a measurement of A. Input must be a pure
    three-qubit state.
    """
    if psi_abc.dims != (2, 2, 2):
        raise ValueError(f"expected a pure three-qubit state, got dims {psi_abc.dims}")
    rho = ket_to_density(psi_abc)
    rho_ab = partial_trace(rho, (0, 1))
    rho_ac = partial_trace(rho, (0, 2))
    cond_ab = conditional_entropy(rho_ab, (0,), (1,))
    discord_diff = quantum_discord(rho_ac, 0, config) - quantum_discord(rho_ab, 0, config)
    capacity_diff = dc_capacity(rho_ac) - dc_capacity(rho_ab)
    return DenseCodingCheck(cond_ab, discord_diff, discord_diff, capacity_diff)
