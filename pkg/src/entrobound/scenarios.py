"""Declarative parameter sweeps and CSV emission for the three figure scenarios.

Scenario kinds:

* ``fig2`` -- single-excitation pure state sin(t)cos(f)|011> + sin(t)sin(f)|101>
  + cos(t)|110>, swept over the polar angle t with f fixed (default pi/4).
  The after-bound concentrates on party C through the exact pure-state form
  (state entropy plus entanglement of assistance of the AC marginal).
* ``fig3`` -- product state rho_AB (x) rho_C with rho_AB a mix of the
  triplet-type pair state and |11>, rho_C a classical bit with weight p
  (default 1/3), swept over t. Concentration uses the discord-based form
  I(A:B) - D(A|B), measuring B by default.
* ``fig4`` -- the correlated-branch family a|000> + sqrt(1-a^2)|111>, swept
  over a. The before-bound is identically 1 for the z/x pair; after uses the
  pure-state concentration form.
* ``custom`` -- a user-supplied state file; all applicable bounds are computed
  for the chosen memory party.

Every sweep is deterministic for a fixed seed: the per-point optimizer seed
schedule is derived once from the config, so reruns are byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .bounds import (
    TripartiteScenario,
    ci_upper_bound,
    dc_capacity,
    memory_bound,
    one_way_ci_pure,
    post_ci_bound,
)
from .correlations import (
    concurrence,
    entanglement_of_assistance,
    eof_from_concurrence,
    quantum_discord,
)
from .entropy import mutual_information, von_neumann_entropy
from .measurement import ObservablePair, named_basis
from .optimize import OptimizerConfig
from .states import (
    DensityOperator,
    Ket,
    ket_to_density,
    load_state_file,
    partial_trace,
    tensor_product,
)

ROW_ORDER_SLACK = 2e-3

_KINDS = ("fig2", "fig3", "fig4", "custom")
_SWEEP_DOMAIN = {
    "fig2": (0.0, np.pi),
    "fig3": (0.0, np.pi),
    "fig4": (0.0, 1.0),
}
_COLUMNS = {
    "fig2": ("theta", "before", "after", "ci", "entropy_a", "ea", "eof_ac"),
    "fig3": ("theta", "before", "after", "ci", "entropy_a", "discord"),
    "fig4": ("alpha", "before", "after", "ci", "entropy_a", "ea"),
    "custom": ("value", "before", "after", "ci", "entropy_a", "aux"),
}

_ALLOWED_KEYS = {
    "kind", "steps", "start", "stop", "phi", "p", "qbasis", "rbasis",
    "seed", "restarts", "ensemble_size", "discord_measured", "out",
    "state", "memory",
}


@dataclass(frozen=True)
class ScenarioConfig:
    kind: str
    steps: int
    start: float
    stop: float
    phi: float
    p: float
    qbasis: str
    rbasis: str
    seed: int
    restarts: int
    ensemble_size: int | None
    discord_measured: str
    out: str | None
    state_path: str | None
    memory: str

    def optimizer_config(self) -> OptimizerConfig:
        return OptimizerConfig(restarts=self.restarts, seed=self.seed)

    def pair(self) -> ObservablePair:
        return ObservablePair.from_bases(named_basis(self.qbasis), named_basis(self.rbasis))


@dataclass(frozen=True)
class SweepRow:
    """One emitted data row: sweep value, both bounds, and their components."""

    value: float
    before: float
    after: float
    ci: float
    entropy_a: float
    aux: float
    eof_ac: float | None = None


def parse_scenario(text: str) -> ScenarioConfig:
    """Parse and validate a JSON scenario document, filling defaults."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed scenario document: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValueError("scenario document must be a JSON object")
    unknown = set(doc) - _ALLOWED_KEYS
    if unknown:
        raise ValueError(f"unknown scenario keys: {sorted(unknown)}")
    kind = doc.get("kind")
    if kind not in _KINDS:
        raise ValueError(f"kind must be one of {_KINDS}, got {kind!r}")

    steps = int(doc.get("steps", 201))
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    if kind == "custom":
        start, stop = 0.0, 0.0
    else:
        lo, hi = _SWEEP_DOMAIN[kind]
        start = float(doc.get("start", lo))
        stop = float(doc.get("stop", hi))
        if not lo - 1e-12 <= start < stop <= hi + 1e-12:
            raise ValueError(
                f"sweep range [{start}, {stop}] outside the {kind} domain [{lo}, {hi}]"
            )

    phi = float(doc.get("phi", np.pi / 4.0))
    if not np.isfinite(phi):
        raise ValueError("phi must be finite")
    p = float(doc.get("p", 1.0 / 3.0))
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")

    qbasis = str(doc.get("qbasis", "z"))
    rbasis = str(doc.get("rbasis", "x"))
    named_basis(qbasis)
    named_basis(rbasis)

    seed = int(doc.get("seed", 0))
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    restarts = int(doc.get("restarts", 32))
    if restarts < 1:
        raise ValueError("restarts must be positive")
    ensemble_size = doc.get("ensemble_size")
    if ensemble_size is not None:
        ensemble_size = int(ensemble_size)
        if ensemble_size < 1:
            raise ValueError("ensemble_size must be positive")

    discord_measured = str(doc.get("discord_measured", "B")).upper()
    if discord_measured not in ("A", "B"):
        raise ValueError(f"discord_measured must be A or B, got {discord_measured!r}")
    memory = str(doc.get("memory", "C")).upper()
    if memory not in ("B", "C"):
        raise ValueError(f"memory must be B or C, got {memory!r}")

    state_path = doc.get("state")
    if kind == "custom" and not state_path:
        raise ValueError("custom scenarios need a 'state' file path")

    return ScenarioConfig(
        kind=kind,
        steps=steps,
        start=start,
        stop=stop,
        phi=phi,
        p=p,
        qbasis=qbasis,
        rbasis=rbasis,
        seed=seed,
        restarts=restarts,
        ensemble_size=ensemble_size,
        discord_measured=discord_measured,
        out=doc.get("out"),
        state_path=state_path,
        memory=memory,
    )


def single_excitation_ket(theta: float, phi: float) -> Ket:
    """sin(t)cos(f)|011> + sin(t)sin(f)|101> + cos(t)|110> on three qubits."""
    amps = np.zeros(8, dtype=np.complex128)
    amps[0b011] = np.sin(theta) * np.cos(phi)
    amps[0b101] = np.sin(theta) * np.sin(phi)
    amps[0b110] = np.cos(theta)
    return Ket((2, 2, 2), amps)


def correlated_branch_ket(alpha: float) -> Ket:
    """a|000> + sqrt(1-a^2)|111> on three qubits, 0 <= a <= 1."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    amps = np.zeros(8, dtype=np.complex128)
    amps[0b000] = alpha
    amps[0b111] = np.sqrt(max(0.0, 1.0 - alpha * alpha))
    return Ket((2, 2, 2), amps)


def pair_with_classical_ancilla(theta: float, p: float) -> tuple[DensityOperator, DensityOperator]:
    """(rho_AB, rho_C): mixed pair state times a classical bit of weight p."""
    pair_vec = np.array([0.0, 1.0, 1.0, 0.0], dtype=np.complex128) / np.sqrt(2.0)
    eleven = np.zeros(4, dtype=np.complex128)
    eleven[0b11] = 1.0
    s2, c2 = np.sin(theta) ** 2, np.cos(theta) ** 2
    rho_ab = DensityOperator(
        (2, 2), s2 * np.outer(pair_vec, pair_vec.conj()) + c2 * np.outer(eleven, eleven.conj())
    )
    rho_c = DensityOperator((2,), np.diag([p, 1.0 - p]).astype(np.complex128))
    return rho_ab, rho_c


def _check_row_order(row: SweepRow, kind: str) -> SweepRow:
    if row.after > row.before + ROW_ORDER_SLACK:
        raise ValueError(
            f"{kind} row at value {row.value}: after-bound {row.after} exceeds "
            f"before-bound {row.before} beyond {ROW_ORDER_SLACK}"
        )
    return row


def _sweep_grid(cfg: ScenarioConfig) -> np.ndarray:
    return np.linspace(cfg.start, cfg.stop, cfg.steps)


def _pure_concentration_row(
    value: float,
    psi: Ket,
    pair: ObservablePair,
    cfg: ScenarioConfig,
    with_eof: bool,
) -> SweepRow:
    rho = ket_to_density(psi)
    rho_ac = partial_trace(rho, (0, 2))
    before = memory_bound(rho_ac, pair).bound
    entropy_a = von_neumann_entropy(partial_trace(rho, (0,)))
    ea = entanglement_of_assistance(rho_ac, cfg.ensemble_size, cfg.optimizer_config())
    ci = entropy_a + ea
    after = post_ci_bound(TripartiteScenario(rho, pair), ci).bound
    eof_ac = eof_from_concurrence(concurrence(rho_ac)) if with_eof else None
    return SweepRow(value, before, after, ci, entropy_a, ea, eof_ac)


def _rows_fig2(cfg: ScenarioConfig) -> list[SweepRow]:
    pair = cfg.pair()
    rows = []
    for theta in _sweep_grid(cfg):
        psi = single_excitation_ket(float(theta), cfg.phi)
        row = _pure_concentration_row(float(theta), psi, pair, cfg, with_eof=True)
        rows.append(_check_row_order(row, "fig2"))
    return rows


def _rows_fig4(cfg: ScenarioConfig) -> list[SweepRow]:
    pair = cfg.pair()
    rows = []
    for alpha in _sweep_grid(cfg):
        psi = correlated_branch_ket(float(alpha))
        row = _pure_concentration_row(float(alpha), psi, pair, cfg, with_eof=False)
        rows.append(_check_row_order(row, "fig4"))
    return rows


def _rows_fig3(cfg: ScenarioConfig) -> list[SweepRow]:
    pair = cfg.pair()
    opt = cfg.optimizer_config()
    measured = 1 if cfg.discord_measured == "B" else 0
    rows = []
    for theta in _sweep_grid(cfg):
        rho_ab, rho_c = pair_with_classical_ancilla(float(theta), cfg.p)
        rho = tensor_product(rho_ab, rho_c)
        rho_ac = partial_trace(rho, (0, 2))
        before = memory_bound(rho_ac, pair).bound
        entropy_a = von_neumann_entropy(partial_trace(rho, (0,)))
        discord = quantum_discord(rho_ab, measured, opt)
        ci = mutual_information(rho_ab, (0,), (1,)) - discord
        after = post_ci_bound(TripartiteScenario(rho, pair), ci).bound
        row = SweepRow(float(theta), before, after, ci, entropy_a, discord)
        rows.append(_check_row_order(row, "fig3"))
    return rows


def _rows_custom(cfg: ScenarioConfig) -> list[SweepRow]:
    state = load_state_file(cfg.state_path)
    pair = cfg.pair()
    is_ket = isinstance(state, Ket)
    rho = ket_to_density(state) if is_ket else state

    if rho.subsystem_count == 2:
        report = memory_bound(rho, pair)
        row = SweepRow(
            value=0.0,
            before=report.bound,
            after=report.bound,
            ci=0.0,
            entropy_a=report.components["state_entropy_a"],
            aux=dc_capacity(rho),
        )
        return [row]

    if rho.subsystem_count != 3:
        raise ValueError(
            f"custom states must have two or three subsystems, got {rho.subsystem_count}"
        )
    sc = TripartiteScenario(rho, pair)
    memory_keep = (0, 1) if cfg.memory == "B" else (0, 2)
    before = memory_bound(partial_trace(rho, memory_keep), pair).bound
    if is_ket and rho.dims == (2, 2, 2):
        ci = one_way_ci_pure(state, cfg.ensemble_size, cfg.optimizer_config())
    else:
        ci = ci_upper_bound(sc)
    after_report = post_ci_bound(sc, ci)
    row = SweepRow(
        value=0.0,
        before=before,
        after=after_report.bound,
        ci=ci,
        entropy_a=after_report.components["state_entropy_a"],
        aux=ci_upper_bound(sc),
    )
    return [_check_row_order(row, "custom")]


def format_csv(kind: str, rows: list[SweepRow]) -> str:
    """Render rows as CSV text: header, comma-separated, 9 significant digits."""
    columns = _COLUMNS[kind]
    lines = [",".join(columns)]
    for row in rows:
        cells = [row.value, row.before, row.after, row.ci, row.entropy_a, row.aux]
        if kind == "fig2":
            cells.append(row.eof_ac)
        lines.append(",".join(f"{c:.9g}" for c in cells))
    return "\n".join(lines) + "\n"


def run_scenario(cfg: ScenarioConfig) -> list[SweepRow]:
    """Evaluate the sweep for ``cfg`` and write CSV when an output path is set."""
    if cfg.kind == "fig2":
        rows = _rows_fig2(cfg)
    elif cfg.kind == "fig3":
        rows = _rows_fig3(cfg)
    elif cfg.kind == "fig4":
        rows = _rows_fig4(cfg)
    else:
        rows = _rows_custom(cfg)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(format_csv(cfg.kind, rows))
    return rows
