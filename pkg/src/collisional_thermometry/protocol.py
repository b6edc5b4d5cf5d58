"""Layered collision protocol.

One round j: thermalize the system, then for k = 1..N-1 the pair
[S-A_k partial swap, A_k-A_{k+1} swap], closed by the final S-A_N partial
swap. Only the system plus the N active ancillae of the current round are
kept in memory; completed ancillae are archived as reduced states.
"""

from __future__ import annotations

import dataclasses
import warnings
from dataclasses import dataclass, field

import numpy as np

from .channels import (
    SWAP,
    CollisionCouplings,
    ThermalParams,
    gibbs_state,
    isotropic_swap_unitary,
    partial_swap_unitary,
    thermal_kraus,
)
from .linops import (
    PROJ_0,
    DensityOperator,
    InvariantViolation,
    QubitRegister,
    apply_operator,
    herm_propagator,
    kron,
    kron_all,
    partial_trace_matrix,
)

RESET_EXACT = "exact-gibbs"
RESET_FINITE = "finite-time"
RESET_NONE = "none"
RESET_MODES = (RESET_EXACT, RESET_FINITE, RESET_NONE)

AA_ISOTROPIC = "isotropic"
AA_XY = "xy"
AA_CONVENTIONS = (AA_ISOTROPIC, AA_XY)

MAX_QUBITS = 11


@dataclass(frozen=True)
class ProtocolParams:
    """Chain count N, rounds n, thermal environment, collision angles."""

    n_chains: int
    n_rounds: int
    thermal: ThermalParams
    couplings: CollisionCouplings
    reset_mode: str = RESET_EXACT
    tau_se: float = 1.0
    time_steps_per_collision: int = 200
    # Inter-ancilla collision generator. "isotropic" (exp(-i SWAP angle))
    # gives a phase-free full swap at pi/2 and reproduces the layered
    # sensitivity growth; "xy" uses the same excitation-exchange generator
    # as the system-ancilla collision, whose pi/2 swap carries (-i) phases
    # that cancel the accumulation along the chain.
    aa_collision: str = AA_ISOTROPIC

    def __post_init__(self):
        if self.n_chains < 1:
            raise InvariantViolation("n_chains must be >= 1")
        if self.n_chains + 1 > MAX_QUBITS:
            raise InvariantViolation(
                f"n_chains + 1 exceeds the {MAX_QUBITS}-qubit memory cap"
            )
        if self.n_rounds < 1:
            raise InvariantViolation("n_rounds must be >= 1")
        if self.reset_mode not in RESET_MODES:
            raise InvariantViolation(f"unknown reset_mode {self.reset_mode!r}")
        if self.tau_se < 0:
            raise InvariantViolation("tau_se must be >= 0")
        if self.time_steps_per_collision < 1:
            raise InvariantViolation("time_steps_per_collision must be >= 1")
        if self.aa_collision not in AA_CONVENTIONS:
            raise InvariantViolation(f"unknown aa_collision {self.aa_collision!r}")

    def with_temperature(self, temperature: float) -> "ProtocolParams":
        thermal = dataclasses.replace(self.thermal, temperature=temperature)
        return dataclasses.replace(self, thermal=thermal)

    @property
    def register(self) -> QubitRegister:
        return QubitRegister.active_column(self.n_chains)


@dataclass
class Snapshot:
    """Intermediate state during one collision (or reset)."""

    time: float
    fraction: float
    joint: np.ndarray
    reduced: dict


@dataclass
class CollisionEvent:
    """One two-body collision or thermalization step."""

    kind: str  # "thermalization" | "system-ancilla" | "ancilla-ancilla"
    round_index: int
    participants: tuple
    angle: float | None
    snapshots: list | None = None
    post_state: np.ndarray | None = None


@dataclass
class ProtocolTrace:
    """Full event log plus archived per-(chain, round) ancilla states."""

    params: ProtocolParams
    events: list = field(default_factory=list)
    end_of_round_states: dict = field(default_factory=dict)
    final_state: DensityOperator | None = None


def _event_plan(n_chains: int, couplings: CollisionCouplings, round_index: int):
    """Ordered event descriptors (kind, slot pair, angle) for one round."""
    plan = [("thermalization", (0,), None)]
    g, j = couplings.g_tau_sa, couplings.j_tau_a
    for k in range(1, n_chains):
        plan.append(("system-ancilla", (0, k), g))
        plan.append(("ancilla-ancilla", (k, k + 1), j))
    plan.append(("system-ancilla", (0, n_chains), g))
    return plan


def _thermalize(mat: np.ndarray, params: ProtocolParams, m: int) -> np.ndarray:
    if params.reset_mode == RESET_EXACT:
        rest = partial_trace_matrix(mat, list(range(1, m)), m)
        return kron(gibbs_state(params.thermal).matrix, rest)
    if params.reset_mode == RESET_FINITE:
        ch = thermal_kraus(params.thermal, params.tau_se)
        return sum(apply_operator(mat, k, [0], m) for k in ch.operators)
    return mat


def _run_round_matrix(mat, params: ProtocolParams, round_index: int, collect_joint: bool):
    m = params.n_chains + 1
    u_sa = partial_swap_unitary(params.couplings.g_tau_sa)
    if params.aa_collision == AA_ISOTROPIC:
        u_aa = isotropic_swap_unitary(params.couplings.j_tau_a)
    else:
        u_aa = partial_swap_unitary(params.couplings.j_tau_a)
    events = []
    for kind, slots, angle in _event_plan(params.n_chains, params.couplings, round_index):
        if kind == "thermalization":
            if params.reset_mode == RESET_NONE:
                continue
            mat = _thermalize(mat, params, m)
            participants = ("S",)
        else:
            u = u_sa if kind == "system-ancilla" else u_aa
            mat = apply_operator(mat, u, list(slots), m)
            participants = tuple(params.register.labels[s] for s in slots)
        ev = CollisionEvent(kind, round_index, participants, angle)
        if collect_joint:
            ev.post_state = mat.copy()
        events.append(ev)
    return mat, events


def run_round(state: DensityOperator, params: ProtocolParams, round_index: int = 1,
              *, collect_joint: bool = False, warn_excited_ancillae: bool = True):
    """Apply one full round to a (N+1)-qubit state; returns (state, events)."""
    if state.n_qubits != params.n_chains + 1:
        raise InvariantViolation(
            f"state has {state.n_qubits} qubits, protocol needs {params.n_chains + 1}"
        )
    if warn_excited_ancillae:
        for k in range(1, params.n_chains + 1):
            red = partial_trace_matrix(state.matrix, [k], state.n_qubits)
            if abs(red[1, 1].real) > 1e-9:
                warnings.warn(
                    f"ancilla slot {k} not in the ground state at round start",
                    stacklevel=2,
                )
    mat, events = _run_round_matrix(state.matrix, params, round_index, collect_joint)
    return DensityOperator(mat, state.register), events


def _fresh_column(system_mat: np.ndarray, n_chains: int) -> np.ndarray:
    return kron_all(system_mat, *([PROJ_0] * n_chains))


def run_protocol(params: ProtocolParams, *, collect_joint: bool = False,
                 initial_system: np.ndarray | None = None) -> ProtocolTrace:
    """Iterate rounds j = 1..n, archiving each ancilla's reduced state.

    The system's reduced state carries over between rounds; fresh
    ground-state ancillae are attached at each round start.
    """
    m = params.n_chains + 1
    sys_mat = PROJ_0 if initial_system is None else np.asarray(initial_system, dtype=complex)
    mat = _fresh_column(sys_mat, params.n_chains)
    trace = ProtocolTrace(params)
    for j in range(1, params.n_rounds + 1):
        mat, events = _run_round_matrix(mat, params, j, collect_joint)
        trace.events.extend(events)
        for k in range(1, params.n_chains + 1):
            red = partial_trace_matrix(mat, [k], m)
            trace.end_of_round_states[(k, j)] = DensityOperator(
                red, QubitRegister((f"A{k}",))
            )
        if j < params.n_rounds:
            sys_red = partial_trace_matrix(mat, [0], m)
            mat = _fresh_column(sys_red, params.n_chains)
    trace.final_state = DensityOperator(mat, params.register)
    return trace


def _reduced_all(mat: np.ndarray, register: QubitRegister) -> dict:
    m = register.n_qubits
    return {
        label: partial_trace_matrix(mat, [q], m)
        for q, label in enumerate(register.labels)
    }


def _run_resolved_single(params: ProtocolParams, system_mat: np.ndarray,
                         apply_thermalization: bool) -> ProtocolTrace:
    m = params.n_chains + 1
    reg = params.register
    steps = params.time_steps_per_collision
    h_sa = np.zeros((4, 4), dtype=complex)
    h_sa[1, 2] = h_sa[2, 1] = 1.0
    h_aa = SWAP if params.aa_collision == AA_ISOTROPIC else h_sa
    mat = _fresh_column(np.asarray(system_mat, dtype=complex), params.n_chains)
    trace = ProtocolTrace(params)
    t = 0.0
    for j in range(1, params.n_rounds + 1):
        for kind, slots, angle in _event_plan(params.n_chains, params.couplings, j):
            if kind == "thermalization":
                if params.reset_mode == RESET_NONE or not apply_thermalization:
                    continue
                participants = ("S",)
                snaps = [Snapshot(t, 0.0, mat.copy(), _reduced_all(mat, reg))]
                if params.reset_mode == RESET_EXACT:
                    # instantaneous jump: pre and post share one timestamp
                    mat = _thermalize(mat, params, m)
                    snaps.append(Snapshot(t, 1.0, mat.copy(), _reduced_all(mat, reg)))
                else:
                    pre = mat
                    for i in range(1, steps + 1):
                        f = i / steps
                        ch = thermal_kraus(params.thermal, f * params.tau_se)
                        cur = sum(apply_operator(pre, k, [0], m) for k in ch.operators)
                        snaps.append(Snapshot(t + f, f, cur, _reduced_all(cur, reg)))
                    mat = snaps[-1].joint
                    t += 1.0
            else:
                participants = tuple(reg.labels[s] for s in slots)
                gen = h_sa if kind == "system-ancilla" else h_aa
                pre = mat
                snaps = []
                for i in range(steps + 1):
                    f = i / steps
                    u = herm_propagator(gen, f * angle)
                    cur = apply_operator(pre, u, list(slots), m)
                    snaps.append(Snapshot(t + f, f, cur, _reduced_all(cur, reg)))
                mat = snaps[-1].joint
                t += 1.0
            ev = CollisionEvent(kind, j, participants, angle, snapshots=snaps)
            ev.post_state = mat
            trace.events.append(ev)
        for k in range(1, params.n_chains + 1):
            red = partial_trace_matrix(mat, [k], m)
            trace.end_of_round_states[(k, j)] = DensityOperator(
                red, QubitRegister((f"A{k}",))
            )
        if j < params.n_rounds:
            sys_red = partial_trace_matrix(mat, [0], m)
            mat = _fresh_column(sys_red, params.n_chains)
    trace.final_state = DensityOperator(mat, reg)
    return trace


def run_time_resolved(params: ProtocolParams, initial_system_pair,
                      *, apply_thermalization: bool = True):
    """Run the identical collision sequence on two system preparations,
    sampling every collision at intermediate fractions.

    With `apply_thermalization=False` the preparations stand in for the
    thermalized system and evolve through the collisions only.
    """
    rho_a, rho_b = initial_system_pair
    mat_a = rho_a.matrix if isinstance(rho_a, DensityOperator) else np.asarray(rho_a)
    mat_b = rho_b.matrix if isinstance(rho_b, DensityOperator) else np.asarray(rho_b)
    trace_a = _run_resolved_single(params, mat_a, apply_thermalization)
    trace_b = _run_resolved_single(params, mat_b, apply_thermalization)
    return trace_a, trace_b
