"""Built-in invariant suites behind the ``selftest`` CLI command.

Each suite draws seeded random instances and checks the module invariants
it names; a failure is recorded with the first offending detail rather than
raised, so every suite always runs. Optimizer-backed suites scale their
draw counts down (the counts they actually used are reported) to keep the
quick run interactive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bounds, correlations, entropy, measurement, optimize, states

QUICK_DRAWS = 100
FULL_DRAWS = 1000


@dataclass(frozen=True)
class SuiteResult:
    name: str
    draws: int
    failures: int
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0


class _Recorder:
    def __init__(self):
        self.failures = 0
        self.detail = ""

    def check(self, ok: bool, detail: str) -> None:
        if not ok:
            self.failures += 1
            if not self.detail:
                self.detail = detail


def _random_pair(seed: int) -> measurement.ObservablePair:
    q = measurement.basis_from_matrix(states.haar_unitary(seed, 2))
    r = measurement.basis_from_matrix(states.haar_unitary(seed + 1, 2))
    return measurement.ObservablePair.from_bases(q, r)


def _suite_state_consistency(draws: int, rec: _Recorder) -> None:
    for i in range(draws):
        rho = states.random_state(1000 + i, (2, 2), "mixed")
        other = states.random_state(2000 + i, (2,), "mixed")
        revalidated = states.validate_density(rho.matrix, rho.dims)
        rec.check(
            np.max(np.abs(revalidated.matrix - rho.matrix)) < 1e-9,
            f"draw {i}: validation altered a valid state",
        )
        spectrum = states.hermitian_eigenvalues(rho)
        rec.check(abs(spectrum.sum() - 1.0) <= 1e-9, f"draw {i}: spectrum sum off 1")
        joint = states.tensor_product(rho, other)
        back = states.partial_trace(joint, (0, 1))
        rec.check(
            np.max(np.abs(back.matrix - rho.matrix)) <= 1e-12,
            f"draw {i}: tensor/partial-trace roundtrip drift",
        )
        big = states.random_state(3000 + i, (2, 2, 2), "mixed")
        a_via_b = states.partial_trace(states.partial_trace(big, (0, 1)), (0,))
        a_via_c = states.partial_trace(states.partial_trace(big, (0, 2)), (0,))
        rec.check(
            np.max(np.abs(a_via_b.matrix - a_via_c.matrix)) <= 1e-12,
            f"draw {i}: trace order changed the A marginal",
        )


def _suite_entropy_invariance(draws: int, rec: _Recorder) -> None:
    for i in range(draws):
        rho = states.random_state(4000 + i, (2, 2), "mixed")
        u = states.haar_unitary(5000 + i, 4)
        rotated = states.DensityOperator((2, 2), u @ rho.matrix @ u.conj().T)
        rec.check(
            abs(entropy.von_neumann_entropy(rotated) - entropy.von_neumann_entropy(rho)) <= 1e-9,
            f"draw {i}: entropy not unitarily invariant",
        )
        mi = entropy.mutual_information(rho, (0,), (1,))
        s_a = entropy.von_neumann_entropy(states.partial_trace(rho, (0,)))
        s_b = entropy.von_neumann_entropy(states.partial_trace(rho, (1,)))
        rec.check(mi >= -1e-9, f"draw {i}: negative mutual information {mi}")
        rec.check(
            mi <= 2.0 * min(s_a, s_b) + 1e-9,
            f"draw {i}: mutual information above twice the smaller entropy",
        )


def _suite_ssa(draws: int, rec: _Recorder) -> None:
    for i in range(draws):
        mixed = states.random_state(6000 + i, (2, 2, 2), "mixed", rank=4)
        gap = entropy.ssa_gap(mixed)
        rec.check(gap >= -1e-9, f"draw {i}: mixed-state gap {gap} negative")
        pure = states.random_state(7000 + i, (2, 2, 2), "pure")
        gap = entropy.ssa_gap(pure)
        rec.check(abs(gap) <= 1e-9, f"draw {i}: pure-state gap {gap} nonzero")


def _suite_measurement(draws: int, rec: _Recorder) -> None:
    for i in range(draws):
        rho = states.random_state(8000 + i, (2, 2), "mixed")
        pair = _random_pair(9000 + 2 * i)
        dephased = measurement.measurement_channel(rho, pair.q, 0)
        twice = measurement.measurement_channel(dephased, pair.q, 0)
        rec.check(
            np.max(np.abs(twice.matrix - dephased.matrix)) <= 1e-12,
            f"draw {i}: measurement channel not idempotent",
        )
        states.validate_density(dephased.matrix, dephased.dims)
        gap = measurement.measured_conditional_entropy(rho, pair.q) - entropy.conditional_entropy(
            rho, (0,), (1,)
        )
        rec.check(gap >= -1e-9, f"draw {i}: data processing violated by {gap}")
        c_qr = measurement.complementarity_c(pair.q, pair.r)
        c_rq = measurement.complementarity_c(pair.r, pair.q)
        rec.check(abs(c_qr - c_rq) <= 1e-12, f"draw {i}: complementarity asymmetric")
        rec.check(0.5 - 1e-12 <= c_qr <= 1.0 + 1e-12, f"draw {i}: c={c_qr} outside [1/2, 1]")


def _suite_memory_bound(draws: int, rec: _Recorder) -> None:
    for i in range(draws):
        rho = states.random_state(10000 + i, (2, 2), "mixed")
        pair = _random_pair(11000 + 2 * i)
        report = bounds.memory_bound(rho, pair)
        lhs = measurement.uncertainty_sum(rho, pair)
        rec.check(
            lhs >= report.bound - 1e-9,
            f"draw {i}: uncertainty sum {lhs} below bound {report.bound}",
        )
        rec.check(
            abs(report.bound - report.components["bound_mutual_form"]) <= 1e-12,
            f"draw {i}: bound forms disagree",
        )


def _suite_optimizer(draws: int, rec: _Recorder) -> None:
    config = optimize.OptimizerConfig(restarts=8, seed=3)
    for i in range(draws):
        rng = np.random.default_rng(12000 + i)
        target = rng.uniform(0.2, 0.8, size=3)

        def objective(x, t=target):
            return float(np.sum((x - t) ** 2))

        result = optimize.minimize_multistart(objective, 3, [(0.0, 1.0)] * 3, config)
        rec.check(
            result.value <= 1e-9,
            f"draw {i}: quadratic minimum missed (value {result.value})",
        )
    again = optimize.minimize_multistart(
        lambda x: float((x[0] - 0.3) ** 2), 1, [(0.0, 1.0)], config
    )
    twice = optimize.minimize_multistart(
        lambda x: float((x[0] - 0.3) ** 2), 1, [(0.0, 1.0)], config
    )
    rec.check(
        again.value == twice.value and np.array_equal(again.parameters, twice.parameters),
        "optimizer not deterministic for a fixed seed",
    )


def _classical_two_qubit(seed: int) -> states.DensityOperator:
    rng = np.random.default_rng(seed)
    probs = rng.dirichlet(np.ones(4)).reshape(2, 2)
    u_a = states.haar_unitary(seed + 1, 2)
    u_b = states.haar_unitary(seed + 2, 2)
    m = np.zeros((4, 4), dtype=np.complex128)
    for a in range(2):
        for b in range(2):
            vec = np.kron(u_a[:, a], u_b[:, b])
            m += probs[a, b] * np.outer(vec, vec.conj())
    return states.DensityOperator((2, 2), m)


def _suite_discord(draws: int, rec: _Recorder) -> None:
    config = optimize.OptimizerConfig()
    bell = states.Ket((2, 2), np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0))
    d_bell = correlations.quantum_discord(states.ket_to_density(bell), 0, config)
    rec.check(abs(d_bell - 1.0) <= 1e-6, f"maximally entangled discord {d_bell} != 1")
    product = states.tensor_product(
        states.random_state(13000, (2,), "mixed"), states.random_state(13001, (2,), "mixed")
    )
    d_prod = correlations.quantum_discord(product, 0, config)
    rec.check(abs(d_prod) <= 1e-9, f"product-state discord {d_prod} != 0")
    for i in range(draws):
        cc = _classical_two_qubit(14000 + 3 * i)
        d = correlations.quantum_discord(cc, 0, config)
        rec.check(-1e-6 <= d <= 1e-6, f"draw {i}: classical-state discord {d}")


def _suite_assistance(draws: int, rec: _Recorder) -> None:
    config = optimize.OptimizerConfig()
    for i in range(draws):
        rho = states.random_state(15000 + i, (2, 2), "mixed", rank=2)
        ea = correlations.entanglement_of_assistance(rho, config=config)
        eof = correlations.eof_from_concurrence(correlations.concurrence(rho))
        s_a = entropy.von_neumann_entropy(states.partial_trace(rho, (0,)))
        s_c = entropy.von_neumann_entropy(states.partial_trace(rho, (1,)))
        rec.check(eof <= ea + 1e-3, f"draw {i}: formation {eof} above assistance {ea}")
        rec.check(
            ea <= min(s_a, s_c) + 1e-3,
            f"draw {i}: assistance {ea} above marginal entropies",
        )


def _suite_bound_ordering(draws: int, rec: _Recorder) -> None:
    config = optimize.OptimizerConfig()
    pair = measurement.ObservablePair.from_names("z", "x")
    for i in range(draws):
        psi = states.random_ket(16000 + i, (2, 2, 2))
        sc = bounds.TripartiteScenario(states.ket_to_density(psi), pair)
        _, report_c = bounds.tripartite_pair_bounds(sc)
        ci = bounds.one_way_ci_pure(psi, config=config)
        after = bounds.post_ci_bound(sc, ci).bound
        rec.check(
            after <= report_c.bound + 2e-3,
            f"draw {i}: concentration raised the bound ({after} > {report_c.bound})",
        )
        upper = bounds.ci_upper_bound(sc)
        rec.check(ci <= upper + 2e-3, f"draw {i}: exact form {ci} above upper bound {upper}")


_SUITES = (
    ("state-consistency", _suite_state_consistency, 1),
    ("entropy-invariance", _suite_entropy_invariance, 1),
    ("strong-subadditivity", _suite_ssa, 1),
    ("measurement-channel", _suite_measurement, 1),
    ("memory-bound-validity", _suite_memory_bound, 1),
    ("optimizer-convergence", _suite_optimizer, 10),
    ("discord-calibration", _suite_discord, 10),
    ("assistance-chain", _suite_assistance, 25),
    ("bound-ordering", _suite_bound_ordering, 25),
)


def run_selftest(depth: str = "quick") -> list[SuiteResult]:
    """Run every invariant suite; quick uses 100 base draws, full 1000."""
    if depth not in ("quick", "full"):
        raise ValueError(f"depth must be 'quick' or 'full', got {depth!r}")
    base = QUICK_DRAWS if depth == "quick" else FULL_DRAWS
    results = []
    for name, fn, scale in _SUITES:
        draws = max(2, base // scale)
        rec = _Recorder()
        fn(draws, rec)
        results.append(SuiteResult(name, draws, rec.failures, rec.detail))
    return results
