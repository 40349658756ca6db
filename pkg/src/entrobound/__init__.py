"""Memory-assisted entropic uncertainty bounds for small quantum systems.

The package computes the entropy-pair lower bounds for two measurements on
one party of a shared state, the correlation measures that control how far
those bounds drop (quantum discord, entanglement of assistance), the
reduction of the bound after the other parties concentrate their
correlations on one memory via LOCC (closed forms and a computable upper
bound), and a dense-coding-capacity decomposition of the conditional
entropy. The ``entrobound`` CLI reproduces the three reference sweeps as
CSV data and runs the invariant selftest.
"""

from .bounds import (
    BoundReport,
    DenseCodingCheck,
    TripartiteScenario,
    ci_product,
    ci_upper_bound,
    dc_capacity,
    dc_identity_check,
    maassen_uffink_bound,
    memory_bound,
    mixed_state_bound,
    one_way_ci_pure,
    post_ci_bound,
    tripartite_pair_bounds,
)
from .correlations import (
    DecompositionEnsemble,
    classical_correlation,
    concurrence,
    concurrence_of_assistance,
    distillable_entanglement_pure,
    entanglement_of_assistance,
    eof_from_concurrence,
    log_negativity,
    quantum_discord,
)
from .entropy import (
    binary_entropy,
    conditional_entropy,
    mutual_information,
    shannon_entropy,
    ssa_gap,
    von_neumann_entropy,
)
from .measurement import (
    HermitianObservable,
    ObservableBasis,
    ObservablePair,
    basis_from_bloch_angles,
    complementarity_c,
    measured_conditional_entropy,
    measurement_channel,
    named_basis,
    robertson_rhs,
    uncertainty_sum,
)
from .optimize import (
    OptimizationResult,
    OptimizerConfig,
    decomposition_from_isometry,
    minimize_multistart,
    qubit_projective_basis,
)
from .scenarios import ScenarioConfig, SweepRow, parse_scenario, run_scenario
from .selftest import SuiteResult, run_selftest
from .states import (
    DensityOperator,
    Ket,
    haar_unitary,
    hermitian_eigenvalues,
    ket_to_density,
    load_state_file,
    partial_trace,
    random_ket,
    random_state,
    save_state_file,
    tensor_product,
    validate_density,
)

__version__ = "0.1.0"
