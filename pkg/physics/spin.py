"""Spin-1 algebra: matrices, pre/post-selected spinors and weak values.

Matrices use the dimensionless convention s_z = diag(1, 0, -1); hbar only ever
appears in the phases built by the propagation module.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from physics.errors import OrthogonalSelection
from physics.parameters import get_parameter


@dataclass(frozen=True)
class Spinor3:
    """Components (c+, c0, c-) of a spin-1 state in the s_z basis."""

    c_plus: complex
    c_zero: complex
    c_minus: complex

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.c_plus, self.c_zero, self.c_minus], dtype=complex)

    @classmethod
    def from_vector(cls, vector) -> 'Spinor3':
        c_plus, c_zero, c_minus = np.asarray(vector, dtype=complex)
        return cls(complex(c_plus), complex(c_zero), complex(c_minus))


@dataclass(frozen=True)
class SpinMatrices:
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray


@dataclass(frozen=True)
class WeakValue:
    value: complex

    @property
    def real(self) -> float:
        return self.value.real

    @property
    def imag(self) -> float:
        return self.value.imag


@lru_cache(maxsize=None)
def spin_matrices() -> SpinMatrices:
    r = 1 / np.sqrt(2)
    sx = r * np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex)
    sy = r * np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=complex)
    sz = np.diag([1, 0, -1]).astype(complex)
    for matrix in (sx, sy, sz):
        matrix.setflags(write=False)
    return SpinMatrices(sx=sx, sy=sy, sz=sz)


def make_spinor(theta: float, phi: float) -> Spinor3:
    """
    Pre-selected spinor for spin vector angle `theta` and azimuthal angle `phi`.

    The +z eigenstate sits at theta = pi/2 in this parametrisation.
    """
    return Spinor3(
        c_plus=0.5 * (1 + np.sin(theta)) * np.exp(-1j * phi),
        c_zero=np.cos(theta) / np.sqrt(2),
        c_minus=0.5 * (1 - np.sin(theta)) * np.exp(1j * phi),
    )


def post_selector() -> Spinor3:
    """The x-basis m = +1 state selected by the strong stage."""
    return Spinor3(0.5, 1 / np.sqrt(2), 0.5)


def norm_squared(spinor: Spinor3) -> float:
    return float(np.vdot(spinor.vector, spinor.vector).real)


def inner(bra: Spinor3, ket: Spinor3) -> complex:
    """<bra|ket>, conjugate-linear in `bra`."""
    return complex(np.vdot(bra.vector, ket.vector))


def matrix_element(bra: Spinor3, operator: np.ndarray, ket: Spinor3) -> complex:
    return complex(np.vdot(bra.vector, operator @ ket.vector))


def transition_amplitude(theta: float, phi: float) -> complex:
    """<S_f|S_i> for the fixed post-selector."""
    return inner(post_selector(), make_spinor(theta, phi))


def check_selection(amplitude: complex):
    if abs(amplitude) <= get_parameter('orthogonality_epsilon'):
        raise OrthogonalSelection(
            f"Pre- and post-selected states are orthogonal (|<S_f|S_i>| = {abs(amplitude):.3e}); "
            "the weak value diverges."
        )


def weak_value(theta: float, phi: float) -> WeakValue:
    """Closed-form weak value of s_z between make_spinor(theta, phi) and the post-selector."""

    check_selection(transition_amplitude(theta, phi))

    denominator = 1 + np.cos(phi) * np.cos(theta)
    real = np.sin(theta) / denominator
    imag = -np.sin(phi) * np.cos(theta) / denominator

    return WeakValue(complex(real, imag))


def weak_value_from_matrix_elements(theta: float, phi: float) -> complex:
    """<S_f|s_z|S_i> / <S_f|S_i> evaluated with the spin matrices."""
    bra, ket = post_selector(), make_spinor(theta, phi)
    amplitude = inner(bra, ket)
    check_selection(amplitude)
    return matrix_element(bra, spin_matrices().sz, ket) / amplitude


def weak_value_ratio_check(theta: float, phi: float) -> complex:
    """Difference between the matrix-element weak value and the closed form."""
    return weak_value_from_matrix_elements(theta, phi) - weak_value(theta, phi).value
