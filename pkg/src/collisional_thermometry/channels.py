"""Physical building blocks: thermal occupation, Gibbs states, the
finite-temperature relaxation channel, and exchange-collision unitaries.

Units: hbar = k_B = 1. |0> is the ground state and the fixed point of the
relaxation channel at T -> 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linops import (
    DensityOperator,
    InvariantViolation,
    QubitRegister,
    apply_operator,
)

COMPLETENESS_TOL = 1e-10


@dataclass(frozen=True)
class ThermalParams:
    """Environment temperature, system frequency, relaxation rate."""

    temperature: float
    omega: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        if self.temperature <= 0:
            raise InvariantViolation("temperature must be > 0")
        if self.omega <= 0:
            raise InvariantViolation("omega must be > 0")
        if self.gamma <= 0:
            raise InvariantViolation("gamma must be > 0")


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Trace-preserving channel given by a list of Kraus operators."""

    operators: tuple

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.operators)
        object.__setattr__(self, "operators", ops)
        dim = ops[0].shape[0]
        if any(k.shape != (dim, dim) for k in ops):
            raise InvariantViolation("Kraus operators must share one square dimension")
        total = sum(k.conj().T @ k for k in ops)
        dev = np.max(np.abs(total - np.eye(dim)))
        if dev > COMPLETENESS_TOL:
            raise InvariantViolation(f"channel not trace-preserving: deviation {dev:.3e}")

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    def apply_matrix(self, mat: np.ndarray) -> np.ndarray:
        return sum(k @ mat @ k.conj().T for k in self.operators)


@dataclass(frozen=True)
class CollisionCouplings:
    """Dimensionless collision angles g*tau_SA (system-ancilla) and J*tau_A (inter-ancilla)."""

    g_tau_sa: float
    j_tau_a: float

    def __post_init__(self):
        if self.g_tau_sa < 0 or self.j_tau_a < 0:
            raise InvariantViolation("collision angles must be non-negative")


def mean_occupation(p: ThermalParams) -> float:
    """Bose occupation 1 / (exp(omega/T) - 1), numerically stable at low T."""
    e = np.exp(-p.omega / p.temperature)
    return float(e / (1.0 - e))


def gibbs_state(p: ThermalParams) -> DensityOperator:
    """Thermal equilibrium qubit state diag((nbar+1)/(2nbar+1), nbar/(2nbar+1))."""
    e = np.exp(-p.omega / p.temperature)
    p_excited = e / (1.0 + e)
    mat = np.array([[1.0 - p_excited, 0.0], [0.0, p_excited]], dtype=complex)
    return DensityOperator(mat, QubitRegister(("S",)))


def thermal_kraus(p: ThermalParams, t: float) -> KrausChannel:
    """Generalized amplitude damping solving the finite-temperature
    relaxation master equation exactly for one qubit.

    Relaxation rate Gamma = gamma (2 nbar + 1); excited population decays
    toward nbar/(2 nbar + 1) as exp(-Gamma t), coherences as exp(-Gamma t / 2).
    """
    if t < 0:
        raise InvariantViolation("duration must be >= 0")
    nbar = mean_occupation(p)
    big_gamma = p.gamma * (2.0 * nbar + 1.0)
    eta = -np.expm1(-big_gamma * t)  # 1 - exp(-Gamma t)
    p_ground = (nbar + 1.0) / (2.0 * nbar + 1.0)
    root_eta = np.sqrt(eta)
    root_keep = np.sqrt(1.0 - eta)
    k0 = np.sqrt(p_ground) * np.array([[1.0, 0.0], [0.0, root_keep]])
    k1 = np.sqrt(p_ground) * np.array([[0.0, root_eta], [0.0, 0.0]])
    k2 = np.sqrt(1.0 - p_ground) * np.array([[root_keep, 0.0], [0.0, 1.0]])
    k3 = np.sqrt(1.0 - p_ground) * np.array([[0.0, 0.0], [root_eta, 0.0]])
    return KrausChannel((k0, k1, k2, k3))


def apply_channel(rho: DensityOperator, ch: KrausChannel, slot) -> DensityOperator:
    """Apply a single-qubit channel to one slot of a multi-qubit state."""
    if ch.dim != 2:
        raise InvariantViolation("apply_channel expects a single-qubit channel")
    s = rho.register.slot(slot)
    m = rho.n_qubits
    out = sum(apply_operator(rho.matrix, k, [s], m) for k in ch.operators)
    return DensityOperator(out, rho.register)


def exchange_hamiltonian(coupling: float) -> np.ndarray:
    """Two-qubit excitation-exchange generator: coupling * sigma_x on the
    {|01>, |10>} block, zero elsewhere."""
    h = np.zeros((4, 4), dtype=complex)
    h[1, 2] = coupling
    h[2, 1] = coupling
    return h


SWAP = np.array(
    [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ],
    dtype=complex,
)


def isotropic_swap_unitary(angle: float) -> np.ndarray:
    """exp(-i * SWAP * angle) = cos(angle) I - i sin(angle) SWAP.

    At angle pi/2 this is the plain SWAP up to a global phase, i.e. a full
    exchange with no residual two-body phase. The XY-generated
    partial_swap_unitary at pi/2 instead leaves (-i) phases on the
    odd-parity states; those phases destructively interfere with the
    small-angle accumulation along a layered chain, so the inter-ancilla
    collision defaults to this isotropic form (see protocol module).
    """
    if angle < 0:
        raise InvariantViolation("angle must be >= 0")
    return np.cos(angle) * np.eye(4, dtype=complex) - 1j * np.sin(angle) * SWAP


def partial_swap_unitary(angle: float) -> np.ndarray:
    """exp(-i * exchange_hamiltonian(1) * angle); the phased SWAP at angle pi/2.

    On the one-excitation block this is cos(angle) I - i sin(angle) sigma_x.
    """
    if angle < 0:
        raise InvariantViolation("angle must be >= 0")
    c = np.cos(angle)
    s = np.sin(angle)
    return np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, c, -1.0j * s, 0.0],
            [0.0, -1.0j * s, c, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ],
        dtype=complex,
    )
