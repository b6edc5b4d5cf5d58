"""Quantum-metrology engine: SLD quantum Fisher information, projective
POVM scans of the classical Fisher information, the thermal benchmark, and
the chain/round sweep experiments."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .channels import ThermalParams, gibbs_state
from .linops import (
    DensityOperator,
    InvariantViolation,
    QubitRegister,
    partial_trace_matrix,
)
from .protocol import RESET_EXACT, ProtocolParams, run_protocol

SLD_EIGENVALUE_CUTOFF = 1e-12
DEFAULT_POVM_GRID = (181, 180)

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class NonUnimodalError(RuntimeError):
    """Coarse scan found more than one local maximum."""

    def __init__(self, maxima):
        self.maxima = maxima
        pts = ", ".join(f"(T={t:.4g}, f={v:.4g})" for t, v in maxima)
        super().__init__(f"objective is not unimodal on the bracket; local maxima: {pts}")


@dataclass
class StateFamily:
    """Temperature-parameterized reduced state of one designated qubit.

    `evaluator` maps T to a DensityOperator; `derivative`, when given,
    returns the analytic d(rho)/dT and bypasses finite differences.
    """

    evaluator: object
    derivative: object = None
    designation: str = ""

    def __call__(self, temperature: float) -> DensityOperator:
        return self.evaluator(temperature)


@dataclass
class EstimationResult:
    qfi: float
    optimal_angles: tuple | None
    thermal_bound: float
    ratio: float


def default_dt(temperature: float) -> float:
    return 1e-4 * max(temperature, 1.0)


def state_derivative(family: StateFamily, temperature: float, dt: float) -> np.ndarray:
    """Central finite difference [rho(T+dT) - rho(T-dT)] / (2 dT)."""
    if dt <= 0:
        raise InvariantViolation("dT must be > 0")
    if temperature - dt <= 0:
        raise InvariantViolation("T - dT must stay positive")
    hi = family(temperature + dt).matrix
    lo = family(temperature - dt).matrix
    return (hi - lo) / (2.0 * dt)


def _derivative(family: StateFamily, temperature: float, dt: float | None) -> np.ndarray:
    if family.derivative is not None and dt is None:
        return np.asarray(family.derivative(temperature), dtype=complex)
    return state_derivative(family, temperature, dt if dt is not None else default_dt(temperature))


def _sld_qfi(rho: np.ndarray, drho: np.ndarray) -> float:
    w, v = np.linalg.eigh(rho)
    d = v.conj().T @ drho @ v
    qfi = 0.0
    for i in range(len(w)):
        for j in range(len(w)):
            s = w[i] + w[j]
            if s > SLD_EIGENVALUE_CUTOFF:
                qfi += 2.0 * abs(d[i, j]) ** 2 / s
    return float(qfi)


def thermal_qfi(p: ThermalParams) -> float:
    """Fisher information of the equilibrium probe:
    (d nbar/dT)^2 / (nbar (nbar+1) (2 nbar+1)^2)."""
    x = p.omega / p.temperature
    e = np.exp(-x)
    if e == 0.0:
        return 0.0
    nbar = e / (1.0 - e)
    dnbar = (p.omega / p.temperature**2) * e / (1.0 - e) ** 2
    return float(dnbar**2 / (nbar * (nbar + 1.0) * (2.0 * nbar + 1.0) ** 2))


@lru_cache(maxsize=None)
def thermal_qfi_max(omega: float = 1.0, bracket=(0.05, 5.0)) -> tuple:
    """(T*, QFI*) of the equilibrium benchmark, via the coarse-scan + golden routine."""
    return max_over_temperature(lambda t: thermal_qfi(ThermalParams(t, omega)), bracket)


def qfi_sld(family: StateFamily, temperature: float, *, omega: float = 1.0,
            dt: float | None = None) -> EstimationResult:
    """Closed-form QFI from the eigendecomposition of rho(T)."""
    if temperature <= 0:
        raise InvariantViolation("temperature must be > 0")
    rho = family(temperature).matrix
    drho = _derivative(family, temperature, dt)
    qfi = _sld_qfi(rho, drho)
    bound = thermal_qfi(ThermalParams(temperature, omega))
    return EstimationResult(qfi, None, bound, qfi / thermal_qfi_max(omega)[1])


def _projector_probability(rho, drho, theta, phi):
    psi = np.array([np.cos(theta), np.exp(1j * phi) * np.sin(theta)])
    p = float(np.real(psi.conj() @ rho @ psi))
    dp = float(np.real(psi.conj() @ drho @ psi))
    return p, dp


def fisher_povm(family: StateFamily, temperature: float, theta: float, phi: float,
                *, dt: float | None = None,
                _cached: tuple | None = None) -> float:
    """Two-outcome classical Fisher information of the projective measurement
    {P(theta,phi), 1 - P(theta,phi)}; near-deterministic outcomes are skipped."""
    if _cached is not None:
        rho, drho = _cached
    else:
        rho = family(temperature).matrix
        drho = _derivative(family, temperature, dt)
    p, dp = _projector_probability(rho, drho, theta, phi)
    fi = 0.0
    for prob, dprob in ((p, dp), (1.0 - p, -dp)):
        if prob > 1e-12:
            fi += dprob**2 / prob
    return fi


def _golden_max(f, a, b, tol=1e-10):
    while b - a > tol:
        c = b - _INVPHI * (b - a)
        d = a + _INVPHI * (b - a)
        if f(c) >= f(d):
            b = d
        else:
            a = c
    return 0.5 * (a + b)


def qfi_scan(family: StateFamily, temperature: float, grid=DEFAULT_POVM_GRID,
             *, omega: float = 1.0, dt: float | None = None) -> EstimationResult:
    """Maximize the two-outcome Fisher information over a (theta, phi) grid,
    then refine each angle once by golden section."""
    n_theta, n_phi = grid
    if n_theta < 2 or n_phi < 2:
        raise InvariantViolation("grid counts must be >= 2")
    rho = family(temperature).matrix
    drho = _derivative(family, temperature, dt)
    thetas = np.linspace(0.0, np.pi, n_theta)
    phis = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
    tg, pg = np.meshgrid(thetas, phis, indexing="ij")
    # vectorized p and dp over the grid
    a = np.cos(tg)
    b = np.exp(1j * pg) * np.sin(tg)
    def probs(mat):
        return np.real(
            np.abs(a) ** 2 * mat[0, 0]
            + np.abs(b) ** 2 * mat[1, 1]
            + 2.0 * np.real(np.conj(a) * b * mat[1, 0])
        )
    p = probs(rho)
    dp = probs(drho)
    fi = np.zeros_like(p)
    for prob, dprob in ((p, dp), (1.0 - p, -dp)):
        mask = prob > 1e-12
        fi[mask] += dprob[mask] ** 2 / prob[mask]
    i, j = np.unravel_index(np.argmax(fi), fi.shape)
    theta0, phi0 = thetas[i], phis[j]
    dth = thetas[1] - thetas[0]
    dph = phis[1] - phis[0]
    cached = (rho, drho)
    f_theta = lambda th: fisher_povm(family, temperature, th, phi0, _cached=cached)
    theta1 = _golden_max(f_theta, max(theta0 - dth, 0.0), min(theta0 + dth, np.pi))
    f_phi = lambda ph: fisher_povm(family, temperature, theta1, ph, _cached=cached)
    phi1 = _golden_max(f_phi, phi0 - dph, phi0 + dph)
    best = fisher_povm(family, temperature, theta1, phi1, _cached=cached)
    if best < fi[i, j]:
        theta1, phi1, best = theta0, phi0, float(fi[i, j])
    bound = thermal_qfi(ThermalParams(temperature, omega))
    return EstimationResult(float(best), (float(theta1), float(phi1 % (2.0 * np.pi))),
                            bound, float(best) / thermal_qfi_max(omega)[1])


def max_over_temperature(f, bracket, *, coarse_points: int = 200, tol: float = 1e-6):
    """Coarse scan followed by golden-section refinement; ties break toward
    smaller T. Raises NonUnimodalError listing all local maxima otherwise."""
    t_lo, t_hi = bracket
    if t_lo <= 0:
        raise InvariantViolation("bracket must start at T > 0")
    ts = np.linspace(t_lo, t_hi, coarse_points)
    fs = np.array([f(t) for t in ts])
    maxima = []
    for i in range(len(ts)):
        left = fs[i - 1] if i > 0 else -np.inf
        right = fs[i + 1] if i < len(ts) - 1 else -np.inf
        if fs[i] > left and fs[i] > right:
            maxima.append((float(ts[i]), float(fs[i])))
    if len(maxima) > 1:
        raise NonUnimodalError(maxima)
    i0 = int(np.argmax(fs))
    a = ts[max(i0 - 1, 0)]
    b = ts[min(i0 + 1, len(ts) - 1)]
    t_star = _golden_max(f, a, b, tol=tol)
    return float(t_star), float(f(t_star))


def gibbs_family(omega: float = 1.0, gamma: float = 1.0) -> StateFamily:
    """Equilibrium probe family, with the analytic temperature derivative."""

    def ev(temperature):
        return gibbs_state(ThermalParams(temperature, omega, gamma))

    def der(temperature):
        x = omega / temperature
        e = np.exp(-x)
        d_excited = (omega / temperature**2) * e / (1.0 + e) ** 2
        return np.array([[-d_excited, 0.0], [0.0, d_excited]], dtype=complex)

    return StateFamily(ev, der, designation="gibbs")


def protocol_ancilla_family(params: ProtocolParams, chain: int | None = None,
                            round_index: int | None = None) -> StateFamily:
    """Reduced state of ancilla (chain, round) produced by the protocol at T."""
    chain = params.n_chains if chain is None else chain
    round_index = params.n_rounds if round_index is None else round_index

    @lru_cache(maxsize=64)
    def run(temperature):
        trace = run_protocol(params.with_temperature(temperature))
        return trace.end_of_round_states[(chain, round_index)]

    return StateFamily(lambda t: run(float(t)),
                       designation=f"A{chain},{round_index}")


def checkpoint_family(params: ProtocolParams, event_index: int, party) -> StateFamily:
    """Reduced state of one participant right after a given protocol event."""

    @lru_cache(maxsize=64)
    def run(temperature):
        p = params.with_temperature(temperature)
        trace = run_protocol(p, collect_joint=True)
        ev = trace.events[event_index]
        slot = p.register.slot(party)
        red = partial_trace_matrix(ev.post_state, [slot], p.n_chains + 1)
        return DensityOperator(red, QubitRegister((p.register.labels[slot],)))

    return StateFamily(lambda t: run(float(t)),
                       designation=f"event{event_index}:{party}")


def sweep_fig2(params_base: ProtocolParams, t_grid, n_list, round_list):
    """QFI(T) tables for the last-chain ancilla across chain counts and rounds.

    Emits both the per-ancilla QFI and the cumulative classical Fisher
    information of `round` independent repetitions.
    """
    t_grid = list(t_grid)
    n_list = list(n_list)
    round_list = list(round_list)
    if not t_grid or not n_list or not round_list:
        raise InvariantViolation("sweep grids must be nonempty")
    omega = params_base.thermal.omega
    rows = []
    for n_chains in n_list:
        for n_rounds in round_list:
            if params_base.reset_mode == RESET_EXACT:
                # rounds are i.i.d. under the exact reset: round 1 suffices
                params = dataclasses.replace(params_base, n_chains=n_chains, n_rounds=1)
                family = protocol_ancilla_family(params, chain=n_chains, round_index=1)
            else:
                params = dataclasses.replace(
                    params_base, n_chains=n_chains, n_rounds=n_rounds
                )
                family = protocol_ancilla_family(
                    params, chain=n_chains, round_index=n_rounds
                )
            for t in t_grid:
                res = qfi_sld(family, t, omega=omega)
                rows.append(
                    {
                        "temperature": float(t),
                        "n_chains": n_chains,
                        "round_j": n_rounds,
                        "qfi": res.qfi,
                        "qfi_thermal": res.thermal_bound,
                        "ratio": res.ratio,
                        "cumulative_fi": n_rounds * res.qfi,
                    }
                )
    return rows
