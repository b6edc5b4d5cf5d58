"""Information-flow diagnostics: trace-distance distinguishability, its
time derivative (flow direction), the revival-sum non-Markovianity
measure, and system-ancilla mutual information.

Distinguishability carries no 1/2 factor; its range is [0, 2].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linops import (
    DensityOperator,
    InvariantViolation,
    partial_trace_matrix,
    trace_norm,
    von_neumann_entropy,
)
from .protocol import ProtocolTrace


@dataclass
class SeriesSegment:
    """Sample range belonging to one protocol event."""

    start: int
    stop: int  # exclusive
    kind: str
    participants: tuple
    round_index: int


@dataclass
class DistinguishabilitySeries:
    subject: object
    times: np.ndarray
    distance: np.ndarray
    segments: list = field(default_factory=list)


@dataclass
class FlowSeries:
    subject: object
    times: np.ndarray
    sigma: np.ndarray
    segments: list = field(default_factory=list)


def _subject_matrix(snapshot, subject, register):
    if subject == "joint":
        return snapshot.joint
    if isinstance(subject, (tuple, list)):
        slots = [register.slot(s) for s in subject]
        return partial_trace_matrix(snapshot.joint, slots, register.n_qubits)
    return snapshot.reduced[subject]


def distinguishability(trace_a: ProtocolTrace, trace_b: ProtocolTrace,
                       subject) -> DistinguishabilitySeries:
    """Trace distance between the two evolutions on the selected subsystem,
    at every snapshot of the shared timeline."""
    if len(trace_a.events) != len(trace_b.events):
        raise InvariantViolation("mismatched timelines: different event counts")
    register = trace_a.params.register
    times, dist, segments = [], [], []
    for ev_a, ev_b in zip(trace_a.events, trace_b.events):
        if (ev_a.kind, ev_a.participants) != (ev_b.kind, ev_b.participants):
            raise InvariantViolation("mismatched timelines: event sequences differ")
        if ev_a.snapshots is None or ev_b.snapshots is None:
            raise InvariantViolation("traces must come from a time-resolved run")
        if len(ev_a.snapshots) != len(ev_b.snapshots):
            raise InvariantViolation("mismatched timelines: snapshot counts differ")
        start = len(times)
        for sa, sb in zip(ev_a.snapshots, ev_b.snapshots):
            if abs(sa.time - sb.time) > 1e-12:
                raise InvariantViolation("mismatched timelines: sample times differ")
            delta = _subject_matrix(sa, subject, register) - _subject_matrix(
                sb, subject, register
            )
            times.append(sa.time)
            dist.append(trace_norm(delta))
        segments.append(
            SeriesSegment(start, len(times), ev_a.kind, ev_a.participants,
                          ev_a.round_index)
        )
    return DistinguishabilitySeries(subject, np.array(times), np.array(dist), segments)


def flow(series: DistinguishabilitySeries) -> FlowSeries:
    """Numeric derivative of the distinguishability, computed piecewise per
    event; instantaneous resets are excluded (NaN there)."""
    if len(series.times) < 3:
        raise InvariantViolation("need at least 3 samples to differentiate")
    sigma = np.full(len(series.times), np.nan)
    for seg in series.segments:
        t = series.times[seg.start:seg.stop]
        d = series.distance[seg.start:seg.stop]
        if len(t) < 2 or t[-1] - t[0] <= 0:
            continue  # zero-duration jump: derivative undefined
        sigma[seg.start:seg.stop] = np.gradient(d, t)
    return FlowSeries(series.subject, series.times, sigma, series.segments)


def blp_measure(series: DistinguishabilitySeries) -> float:
    """Sum of all distinguishability revivals: total increase of D over the
    maximal intervals where it grows. Jumps with zero elapsed time (resets,
    duplicated event boundaries) are skipped."""
    total = 0.0
    t = series.times
    d = series.distance
    for i in range(len(t) - 1):
        if t[i + 1] - t[i] <= 0:
            continue
        rise = d[i + 1] - d[i]
        if rise > 0:
            total += rise
    return float(total)


def mutual_information(rho_joint: DensityOperator, slot_a, slot_b) -> float:
    """I(A:B) = S(A) + S(B) - S(AB) with natural-log entropies."""
    a = rho_joint.register.slot(slot_a)
    b = rho_joint.register.slot(slot_b)
    if a == b:
        raise InvariantViolation("mutual information needs two distinct slots")
    m = rho_joint.n_qubits
    red_a = partial_trace_matrix(rho_joint.matrix, [a], m)
    red_b = partial_trace_matrix(rho_joint.matrix, [b], m)
    red_ab = partial_trace_matrix(rho_joint.matrix, [a, b], m)
    return (
        von_neumann_entropy(red_a)
        + von_neumann_entropy(red_b)
        - von_neumann_entropy(red_ab)
    )
