"""Labeled qubit registers and dense complex state vectors.

Index convention: the first register of a system is the most significant
digit, so for registers (r0, r1, ..., rk) the amplitude of the basis state
|n0, n1, ..., nk> lives at flat index n0*2**k + ... + nk. Tests pin this
convention.

States are immutable values; every operation returns a new vector, so they
can be shared freely across threads or worker processes. A state may be
sub-normalized after lossy scattering. Renormalization happens only at
measurement or by explicit request, which lets survival probabilities be
read directly off the squared norm.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

# factor amplitudes handed to tensor_state must be normalized this well
NORM_ATOL = 1e-9

# slack on the squared norm of any stored state (passive optics never gain)
NORM_CAP = 1.0 + 1e-6


@dataclass(frozen=True)
class Register:
    """A named two-level subsystem with named basis states.

    Examples: ``Register("a.pol", ("R", "L"))`` for a photon polarization,
    ``Register("e1", ("up", "down"))`` for an electron spin.
    """

    label: str
    basis_names: tuple[str, str]

    def __post_init__(self) -> None:
        if not self.label:
            raise ValueError("register label must be non-empty")
        names = tuple(self.basis_names)
        if len(names) != 2 or len(set(names)) != 2:
            raise ValueError(
                f"register {self.label!r} needs exactly two distinct basis names, got {names!r}"
            )
        object.__setattr__(self, "basis_names", names)

    @property
    def dimension(self) -> int:
        return len(self.basis_names)

    def index_of(self, name: str) -> int:
        """Basis index of a named basis state."""
        try:
            return self.basis_names.index(name)
        except ValueError:
            raise ValueError(
                f"register {self.label!r} has no basis state {name!r}; "
                f"known: {self.basis_names}"
            ) from None


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitudes over the tensor product of labeled registers."""

    registers: tuple[Register, ...]
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        regs = tuple(self.registers)
        labels = [r.label for r in regs]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate register labels: {labels}")
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != 2 ** len(regs):
            raise ValueError(
                f"expected {2 ** len(regs)} amplitudes for {len(regs)} registers, got {amps.size}"
            )
        norm2 = float(np.sum(np.abs(amps) ** 2))
        if norm2 > NORM_CAP:
            raise ValueError(f"squared norm {norm2} exceeds 1 (states here are passive)")
        amps.setflags(write=False)
        object.__setattr__(self, "registers", regs)
        object.__setattr__(self, "amplitudes", amps)

    # -- introspection -------------------------------------------------

    @property
    def num_registers(self) -> int:
        return len(self.registers)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(r.label for r in self.registers)

    @property
    def norm2(self) -> float:
        """Squared norm; 1 for normalized states, less after lossy steps."""
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def register_index(self, label: str) -> int:
        for i, reg in enumerate(self.registers):
            if reg.label == label:
                return i
        raise ValueError(f"unknown register label {label!r}; known: {self.labels}")

    def register(self, label: str) -> Register:
        return self.registers[self.register_index(label)]

    def amplitude(self, *basis_names: str) -> complex:
        """Amplitude of one basis state, addressed by per-register names."""
        if len(basis_names) != self.num_registers:
            raise ValueError(
                f"need {self.num_registers} basis names, got {len(basis_names)}"
            )
        flat = 0
        for reg, name in zip(self.registers, basis_names):
            flat = 2 * flat + reg.index_of(name)
        return complex(self.amplitudes[flat])

    def normalized(self) -> "StateVector":
        return normalize(self)

    def terms(self, eps: float = 1e-9) -> str:
        """Human-readable ket expansion, skipping negligible amplitudes."""
        parts = []
        for flat, amp in enumerate(self.amplitudes):
            if abs(amp) <= eps:
                continue
            names = []
            rem = flat
            for reg in reversed(self.registers):
                names.append(reg.basis_names[rem % 2])
                rem //= 2
            ket = ",".join(reversed(names))
            parts.append(f"({amp:.6g})|{ket}>")
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:  # the 64-entry array is noise in tracebacks
        return f"StateVector(registers={self.labels}, norm2={self.norm2:.6g})"


@dataclass(frozen=True)
class MeasurementRecord:
    """Outcome of a single-register measurement.

    ``probability`` is the squared norm of the projected component before
    renormalization; for a normalized input that is the Born probability.
    """

    register_label: str
    basis: str  # "computational" or "custom" (a unitary was applied first)
    outcome: int
    outcome_name: str
    probability: float


# -- construction ------------------------------------------------------


def tensor_state(parts: Sequence[tuple[Register, Sequence[complex]]]) -> StateVector:
    """Product state from (register, normalized amplitude pair) factors."""
    if not parts:
        raise ValueError("tensor_state needs at least one factor")
    registers = []
    amps = np.array([1.0], dtype=np.complex128)
    seen = set()
    for reg, pair in parts:
        if reg.label in seen:
            raise ValueError(f"duplicate register label {reg.label!r}")
        seen.add(reg.label)
        vec = np.asarray(pair, dtype=np.complex128).reshape(-1)
        if vec.size != 2:
            raise ValueError(f"factor for {reg.label!r} must have two amplitudes")
        if abs(float(np.sum(np.abs(vec) ** 2)) - 1.0) > NORM_ATOL:
            raise ValueError(f"factor for {reg.label!r} is not normalized")
        registers.append(reg)
        amps = np.kron(amps, vec)
    return StateVector(tuple(registers), amps)


def tensor_product(x: StateVector, y: StateVector) -> StateVector:
    """Tensor product of two systems; register order is x's then y's."""
    return StateVector(x.registers + y.registers, np.kron(x.amplitudes, y.amplitudes))


def attach_register(
    state: StateVector, register: Register, pair: Sequence[complex]
) -> StateVector:
    """Append one fresh register in the given normalized single-qubit state."""
    return tensor_product(state, tensor_state([(register, pair)]))


def basis_state(registers: Sequence[Register], names: Sequence[str]) -> StateVector:
    """Computational basis state addressed by per-register basis names."""
    pairs = []
    for reg, name in zip(registers, names, strict=True):
        amp = [0.0, 0.0]
        amp[reg.index_of(name)] = 1.0
        pairs.append((reg, amp))
    return tensor_state(pairs)


def state_from_terms(
    registers: Sequence[Register],
    terms: Mapping[tuple[str, ...], complex],
) -> StateVector:
    """State assembled from ``{(basis names per register): amplitude}``."""
    regs = tuple(registers)
    amps = np.zeros(2 ** len(regs), dtype=np.complex128)
    for names, amp in terms.items():
        flat = 0
        for reg, name in zip(regs, names, strict=True):
            flat = 2 * flat + reg.index_of(name)
        amps[flat] += amp
    return StateVector(regs, amps)


# -- operators ---------------------------------------------------------


def apply_operator(
    state: StateVector, target_labels: Sequence[str], matrix: np.ndarray
) -> StateVector:
    """Apply a (not necessarily unitary) matrix on the targeted subspace.

    The matrix dimension must be 2**len(target_labels); identity is implied
    on every other register. Matrix row/column index ordering follows the
    target label order, most significant first.
    """
    labels = list(target_labels)
    if len(set(labels)) != len(labels):
        raise ValueError(f"duplicate target labels: {labels}")
    axes = [state.register_index(label) for label in labels]
    k = len(axes)
    mat = np.asarray(matrix, dtype=np.complex128)
    if mat.shape != (2**k, 2**k):
        raise ValueError(
            f"matrix shape {mat.shape} does not match {k} target register(s)"
        )
    n = state.num_registers
    psi = state.amplitudes.reshape((2,) * n)
    op = mat.reshape((2,) * (2 * k))
    out = np.tensordot(op, psi, axes=(list(range(k, 2 * k)), axes))
    out = np.moveaxis(out, list(range(k)), axes)
    return StateVector(state.registers, out.reshape(-1))


def reorder_registers(state: StateVector, new_labels: Sequence[str]) -> StateVector:
    """Same state with registers listed (and indexed) in a new order."""
    if sorted(new_labels) != sorted(state.labels):
        raise ValueError(f"{tuple(new_labels)} is not a permutation of {state.labels}")
    perm = [state.register_index(label) for label in new_labels]
    psi = state.amplitudes.reshape((2,) * state.num_registers)
    regs = tuple(state.registers[i] for i in perm)
    return StateVector(regs, np.transpose(psi, perm).reshape(-1))


def normalize(state: StateVector) -> StateVector:
    norm = np.sqrt(state.norm2)
    if norm <= 0.0:
        raise ValueError("cannot normalize a zero-norm state")
    return StateVector(state.registers, state.amplitudes / norm)


# -- measurement -------------------------------------------------------


def outcome_weights(state: StateVector, register_label: str) -> np.ndarray:
    """Squared-norm weight of each basis outcome of one register."""
    axis = state.register_index(register_label)
    psi = state.amplitudes.reshape((2,) * state.num_registers)
    moved = np.moveaxis(psi, axis, 0)
    return np.array(
        [float(np.sum(np.abs(moved[0]) ** 2)), float(np.sum(np.abs(moved[1]) ** 2))]
    )


def _project(state: StateVector, register_label: str, outcome: int) -> StateVector:
    axis = state.register_index(register_label)
    arr = state.amplitudes.reshape((2,) * state.num_registers).copy()
    np.moveaxis(arr, axis, 0)[1 - outcome] = 0.0
    return StateVector(state.registers, arr.reshape(-1))


def measure(
    state: StateVector,
    register_label: str,
    rng: int | np.random.Generator | None = None,
) -> tuple[MeasurementRecord, StateVector]:
    """Sample one register by the Born rule on relative weights.

    Returns the record and the projected, renormalized post-measurement
    state (the measured register stays, collapsed onto the outcome).
    """
    weights = outcome_weights(state, register_label)
    total = float(weights.sum())
    if total <= 0.0:
        raise ValueError("cannot measure a zero-norm state")
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    outcome = int(gen.choice(2, p=weights / total))
    reg = state.register(register_label)
    record = MeasurementRecord(
        register_label=register_label,
        basis="computational",
        outcome=outcome,
        outcome_name=reg.basis_names[outcome],
        probability=float(weights[outcome]),
    )
    return record, normalize(_project(state, register_label, outcome))


def measure_all_branches(
    state: StateVector, register_label: str
) -> list[tuple[int, float, StateVector]]:
    """Every (outcome, probability, projected state) of one register.

    Projected states are returned unrenormalized, so probabilities of
    nested enumerations multiply through and the probabilities sum to the
    input squared norm.
    """
    weights = outcome_weights(state, register_label)
    return [
        (outcome, float(weights[outcome]), _project(state, register_label, outcome))
        for outcome in (0, 1)
    ]


def discard_register(state: StateVector, register_label: str) -> StateVector:
    """Drop a register that sits in a definite basis state (post-measurement)."""
    weights = outcome_weights(state, register_label)
    total = float(weights.sum())
    if total <= 0.0:
        raise ValueError("cannot discard a register of a zero-norm state")
    occupied = int(np.argmax(weights))
    if weights[1 - occupied] > total * 1e-18:
        raise ValueError(
            f"register {register_label!r} is not in a definite basis state"
        )
    axis = state.register_index(register_label)
    psi = state.amplitudes.reshape((2,) * state.num_registers)
    reduced = np.moveaxis(psi, axis, 0)[occupied]
    regs = tuple(r for r in state.registers if r.label != register_label)
    return StateVector(regs, reduced.reshape(-1))


# -- comparison --------------------------------------------------------


def fidelity_up_to_global_phase(x: StateVector, y: StateVector) -> float:
    """|<x|y>|**2 for two normalized states over the same register layout."""
    if x.registers != y.registers:
        raise ValueError(
            f"register layouts differ: {x.labels} vs {y.labels} "
            "(reorder_registers can align them)"
        )
    return float(abs(np.vdot(x.amplitudes, y.amplitudes)) ** 2)
