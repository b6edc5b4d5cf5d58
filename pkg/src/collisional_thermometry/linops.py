"""Dense complex linear algebra for multi-qubit density operators.

Convention: slot 0 is the leftmost tensor factor (the system qubit S);
basis index bit i corresponds to slot i.
"""

from __future__ import annotations

import string
from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
EIGENVALUE_FLOOR = -1e-10

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PROJ_0 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
PROJ_1 = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)
RAISE_OP = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)  # |1><0|
LOWER_OP = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |0><1|


class InvariantViolation(ValueError):
    """A state or operator failed one of its defining invariants."""


@dataclass(frozen=True)
class QubitRegister:
    """Ordered labeling of tensor factors; slot 0 is the system."""

    labels: tuple

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if len(labels) < 1:
            raise InvariantViolation("register needs at least one slot")
        if len(set(labels)) != len(labels):
            raise InvariantViolation(f"duplicate slot labels: {labels}")

    @property
    def n_qubits(self) -> int:
        return len(self.labels)

    def slot(self, label) -> int:
        """Slot index of a label (labels pass through unchanged as ints)."""
        if isinstance(label, (int, np.integer)):
            if not 0 <= label < self.n_qubits:
                raise InvariantViolation(f"slot {label} outside register of size {self.n_qubits}")
            return int(label)
        try:
            return self.labels.index(label)
        except ValueError:
            raise InvariantViolation(f"unknown slot label {label!r}") from None

    @classmethod
    def active_column(cls, n_chains: int) -> "QubitRegister":
        """System slot plus one slot per chain for the active ancilla column."""
        return cls(("S",) + tuple(f"A{k}" for k in range(1, n_chains + 1)))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, unit-trace, positive-semidefinite matrix over a qubit register."""

    matrix: np.ndarray
    register: QubitRegister

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", mat)
        m = self.register.n_qubits
        if mat.shape != (2**m, 2**m):
            raise InvariantViolation(
                f"matrix shape {mat.shape} does not match {m}-qubit register"
            )
        herm = np.max(np.abs(mat - mat.conj().T))
        if herm > HERMITICITY_TOL:
            raise InvariantViolation(f"not Hermitian: max deviation {herm:.3e}")
        tr = np.trace(mat).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvariantViolation(f"trace {tr!r} differs from 1")
        lo = np.linalg.eigvalsh(mat)[0]
        if lo < EIGENVALUE_FLOOR:
            raise InvariantViolation(f"negative eigenvalue {lo:.3e}")

    @property
    def n_qubits(self) -> int:
        return self.register.n_qubits


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product of two matrices."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(*mats) -> np.ndarray:
    out = np.asarray(mats[0], dtype=complex)
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def embed(op: np.ndarray, targets, m: int) -> np.ndarray:
    """Lift `op` acting on `targets` into the full m-qubit space.

    Identity on all other slots; target order is respected, so non-adjacent
    and permuted targets work.
    """
    targets = list(targets)
    k = len(targets)
    op = np.asarray(op, dtype=complex)
    if op.shape != (2**k, 2**k):
        raise InvariantViolation(f"operator shape {op.shape} does not match {k} targets")
    if len(set(targets)) != k:
        raise InvariantViolation(f"duplicate targets: {targets}")
    if any(t < 0 or t >= m for t in targets):
        raise InvariantViolation(f"target outside register of size {m}: {targets}")
    rest = [q for q in range(m) if q not in targets]
    full = np.kron(op, np.eye(2 ** (m - k), dtype=complex))
    # `full` has axis order targets + rest; permute back to 0..m-1.
    perm = targets + rest
    inv = np.argsort(perm)
    t = full.reshape((2,) * (2 * m))
    t = t.transpose(list(inv) + [m + i for i in inv])
    return t.reshape(2**m, 2**m)


def apply_operator(mat: np.ndarray, op: np.ndarray, targets, m: int) -> np.ndarray:
    """Compute (op on targets) @ mat @ (op on targets)† without building the embedding.

    Works for unitaries and Kraus operators alike.
    """
    targets = list(targets)
    k = len(targets)
    t = mat.reshape((2,) * (2 * m))
    opk = np.asarray(op, dtype=complex).reshape((2,) * (2 * k))
    t = np.tensordot(opk, t, axes=(list(range(k, 2 * k)), targets))
    t = np.moveaxis(t, range(k), targets)
    cols = [m + q for q in targets]
    t = np.tensordot(t, opk.conj(), axes=(cols, list(range(k, 2 * k))))
    t = np.moveaxis(t, range(2 * m - k, 2 * m), cols)
    return t.reshape(2**m, 2**m)


def partial_trace_matrix(mat: np.ndarray, keep, m: int) -> np.ndarray:
    """Reduced matrix on the `keep` slots (in the order given)."""
    keep = list(keep)
    if not keep:
        raise InvariantViolation("keep must be nonempty")
    if len(set(keep)) != len(keep):
        raise InvariantViolation(f"duplicate keep slots: {keep}")
    if any(q < 0 or q >= m for q in keep):
        raise InvariantViolation(f"keep slot outside register of size {m}: {keep}")
    letters = string.ascii_lowercase
    row = list(letters[:m])
    col = list(row)
    nxt = m
    for q in keep:
        col[q] = letters[nxt]
        nxt += 1
    sub = "".join(row) + "".join(col) + "->" + "".join(row[q] for q in keep) + "".join(
        col[q] for q in keep
    )
    k = len(keep)
    return np.einsum(sub, mat.reshape((2,) * (2 * m))).reshape(2**k, 2**k)


def partial_trace(rho: DensityOperator, keep) -> DensityOperator:
    """Reduced state on the `keep` slots; register relabeled accordingly."""
    slots = [rho.register.slot(q) for q in keep]
    red = partial_trace_matrix(rho.matrix, slots, rho.n_qubits)
    labels = tuple(rho.register.labels[q] for q in slots)
    return DensityOperator(red, QubitRegister(labels))


def herm_propagator(h: np.ndarray, t: float) -> np.ndarray:
    """Unitary exp(-i h t) of a Hermitian generator, via eigendecomposition."""
    h = np.asarray(h, dtype=complex)
    if h.shape[0] != h.shape[1]:
        raise InvariantViolation("generator must be square")
    dev = np.max(np.abs(h - h.conj().T))
    if dev > HERMITICITY_TOL:
        raise InvariantViolation(f"generator not Hermitian: max deviation {dev:.3e}")
    if t == 0:
        return np.eye(h.shape[0], dtype=complex)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def trace_norm(a: np.ndarray) -> float:
    """Schatten-1 norm; sum of |eigenvalues| on the Hermitian fast path."""
    a = np.asarray(a, dtype=complex)
    if a.shape[0] != a.shape[1]:
        raise InvariantViolation("trace norm requires a square matrix")
    if np.max(np.abs(a - a.conj().T)) <= HERMITICITY_TOL:
        return float(np.sum(np.abs(np.linalg.eigvalsh(a))))
    return float(np.sum(np.linalg.svd(a, compute_uv=False)))


def von_neumann_entropy(rho) -> float:
    """-sum(lambda ln lambda), natural log, with 0 ln 0 = 0."""
    mat = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho, dtype=complex)
    w = np.linalg.eigvalsh(mat)
    if w[0] < EIGENVALUE_FLOOR:
        raise InvariantViolation(f"negative eigenvalue {w[0]:.3e}")
    w = np.clip(w, 0.0, None)
    pos = w[w > 0.0]
    # an eigenvalue clipped up from a tiny negative leaves the largest one
    # slightly above 1, which would yield a tiny negative entropy
    return max(float(-np.sum(pos * np.log(pos))), 0.0)
