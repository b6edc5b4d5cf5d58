"""Layered collisional quantum thermometer: simulation, metrology, and
information-flow analysis."""

__version__ = "0.1.0"

from .channels import (
    CollisionCouplings,
    KrausChannel,
    ThermalParams,
    apply_channel,
    exchange_hamiltonian,
    gibbs_state,
    isotropic_swap_unitary,
    mean_occupation,
    partial_swap_unitary,
    thermal_kraus,
)
from .estimation import (
    EstimationResult,
    NonUnimodalError,
    StateFamily,
    checkpoint_family,
    fisher_povm,
    gibbs_family,
    max_over_temperature,
    protocol_ancilla_family,
    qfi_scan,
    qfi_sld,
    state_derivative,
    sweep_fig2,
    thermal_qfi,
    thermal_qfi_max,
)
from .infoflow import (
    DistinguishabilitySeries,
    FlowSeries,
    blp_measure,
    distinguishability,
    flow,
    mutual_information,
)
from .linops import (
    DensityOperator,
    InvariantViolation,
    QubitRegister,
    embed,
    herm_propagator,
    kron,
    partial_trace,
    trace_norm,
    von_neumann_entropy,
)
from .protocol import (
    CollisionEvent,
    ProtocolParams,
    ProtocolTrace,
    run_protocol,
    run_round,
    run_time_resolved,
)
