"""Linear-optical elements and single-spin rotations as fixed 2x2 matrices.

Each element is an exact constant matrix bound to a circuit symbol; there
are no tunable wave-plate angles. The circular-basis polarizing beam
splitter (CPBS) is deliberately absent from the matrix table: it routes R
and L into distinct physical paths, and the simulator folds every
CPBS/half-wave-plate/cavity sandwich into a single composite operator (see
protocols).
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .hilbert import StateVector, apply_operator

_SQRT2 = np.sqrt(2.0)


class ElementKind(Enum):
    BS = "bs"  # 50:50 beam splitter: Hadamard on a spatial-mode register
    CPBS = "cpbs"  # circular-basis polarizing beam splitter: routing only
    HWP_X = "hwp_x"  # polarization bit flip R <-> L
    HWP_H = "hwp_h"  # polarization Hadamard
    WP_U1 = "wp_u1"  # global -i phase plate (relative phase between paths)
    WP_U2 = "wp_u2"  # -i phase on L only
    HWP_PHASEFLIP = "hwp_phaseflip"  # sign flip on R
    SPIN_H = "spin_h"  # spin Hadamard
    SPIN_ROT_PLUS = "spin_rot_plus"  # up -> (i up + down)/sqrt2, down -> (i up - down)/sqrt2
    SPIN_ROT_MINUS = "spin_rot_minus"  # inverse of SPIN_ROT_PLUS


_HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / _SQRT2

_SPIN_ROT_PLUS = np.array([[1j, 1j], [1, -1]], dtype=np.complex128) / _SQRT2

_MATRICES: dict[ElementKind, np.ndarray] = {
    ElementKind.BS: _HADAMARD,
    ElementKind.HWP_X: np.array([[0, 1], [1, 0]], dtype=np.complex128),
    ElementKind.HWP_H: _HADAMARD,
    ElementKind.WP_U1: np.diag([-1j, -1j]).astype(np.complex128),
    ElementKind.WP_U2: np.diag([1, -1j]).astype(np.complex128),
    ElementKind.HWP_PHASEFLIP: np.diag([-1, 1]).astype(np.complex128),
    ElementKind.SPIN_H: _HADAMARD,
    ElementKind.SPIN_ROT_PLUS: _SPIN_ROT_PLUS,
    ElementKind.SPIN_ROT_MINUS: _SPIN_ROT_PLUS.conj().T,
}


def element_matrix(kind: ElementKind) -> np.ndarray:
    """The 2x2 matrix of an element; CPBS has none and raises."""
    if kind is ElementKind.CPBS:
        raise ValueError(
            "CPBS routes polarizations into separate paths and has no "
            "fixed-register matrix; use the composite stage operators"
        )
    return _MATRICES[kind].copy()


def apply_element(state: StateVector, kind: ElementKind, target_label: str) -> StateVector:
    return apply_operator(state, [target_label], element_matrix(kind))


def conditional_element(
    state: StateVector,
    kind: ElementKind,
    target_label: str,
    control_label: str,
    control_value: int,
) -> StateVector:
    """Apply an element on the target only in one control basis branch.

    Models a wave plate sitting in a single spatial path: the element acts
    when the control register carries ``control_value`` and the identity
    otherwise.
    """
    if control_value not in (0, 1):
        raise ValueError(f"control_value must be a basis index (0 or 1), got {control_value}")
    mat = element_matrix(kind)
    eye = np.eye(2, dtype=np.complex128)
    select = np.diag([1.0 - control_value, float(control_value)]).astype(np.complex128)
    other = eye - select
    block = np.kron(other, eye) + np.kron(select, mat)
    return apply_operator(state, [control_label, target_label], block)
