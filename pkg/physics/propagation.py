"""
The weak stage (exact and order-truncated), post-selection and the exact
three-component detector distribution.

The weak stage is impulsive: each m component receives a momentum kick
-m mu delta_t (dB/dz) and a phase -m mu delta_t B0 / hbar, nothing else.
"""

import math
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy.integrate import trapezoid
from scipy.linalg import expm

from physics.constants import constants
from physics.errors import GridTooNarrow, NonPositiveInputs, TanPole
from physics.experiment import ExperimentParams, limit_of
from physics.parameters import get_parameter
from physics.spin import Spinor3, make_spinor, post_selector, inner, matrix_element, spin_matrices, check_selection
from physics.wavepacket import initial_packet, evaluate, evolved_width, make_profile, DetectorProfile


MAGNETIC_NUMBERS = (1, 0, -1)


@dataclass(frozen=True)
class SpinorPacket:
    """Three spatial components tagged m = +1, 0, -1, weighted by the spinor coefficients."""

    components: tuple
    weights: np.ndarray
    mass: float

    @property
    def norm(self) -> float:
        # Components are unit-norm Gaussians
        return float(np.sum(np.abs(self.weights) ** 2))


@dataclass(frozen=True)
class Superposition:
    """A post-selected scalar wave function: sum of amplitude * component."""

    amplitudes: np.ndarray
    components: tuple
    mass: float

    @property
    def weight(self) -> float:
        """Norm of the superposition, interference between components included."""
        overlaps = overlap_matrix(self.components, self.mass)
        return float(np.real(np.conj(self.amplitudes) @ overlaps @ self.amplitudes))

    def evaluate(self, z, t: float) -> np.ndarray:
        psi = np.zeros(np.shape(z), dtype=complex)
        for amplitude, component in zip(self.amplitudes, self.components):
            psi += amplitude * evaluate(component, z, t, self.mass)
        return psi


@dataclass(frozen=True)
class InequalityReport:
    table: pd.DataFrame
    limit: float
    limit_holds: bool
    threshold: float

    @property
    def holds(self) -> bool:
        return bool(
            self.limit_holds
            and self.table['amplitude_holds'].all()
            and self.table['first_order_holds'].all()
        )


def _pair_terms(components: tuple, mass: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Wavenumbers k, differences q_ij = k_j - k_i and overlaps <psi_i|psi_j> of kicked
    Gaussians sharing width and centre. Free evolution is unitary, so the overlaps
    do not depend on time.
    """

    sigma, mean = components[0].sigma, components[0].mean
    if any(c.sigma != sigma or c.mean != mean for c in components):
        raise ValueError("Overlaps are only available for components sharing width and centre.")

    k = np.array([mass * c.velocity_kick / constants().hbar for c in components])
    phases = np.array([c.global_phase for c in components])
    q = k[None, :] - k[:, None]
    overlaps = np.exp(-q ** 2 * sigma ** 2 / 2 + 1j * (phases[None, :] - phases[:, None]))

    return k, q, overlaps


def overlap_matrix(components: tuple, mass: float) -> np.ndarray:
    return _pair_terms(components, mass)[2]


def prepare(params: ExperimentParams) -> SpinorPacket:
    """Pre-selected state psi(z, 0) xi_i(theta, phi) before the weak stage."""
    packet = initial_packet(params.sigma)
    return SpinorPacket(
        components=(packet, packet, packet),
        weights=make_spinor(params.theta, params.phi).vector,
        mass=params.mass,
    )


def apply_weak_stage(packet: SpinorPacket, params: ExperimentParams) -> SpinorPacket:
    """Applies exp(-i mu delta_t B_z s_z / hbar) to each component in the impulsive approximation."""

    components = []
    for m, component in zip(MAGNETIC_NUMBERS, packet.components):
        momentum = -m * params.moment * params.delta_t * params.dBdz
        # exp(-i m kappa z) = exp(-i m kappa mean) exp(-i m kappa (z - mean))
        phase = -m * params.homogeneous_phase - m * params.field_wavenumber * component.mean
        components.append(component.replace(
            velocity_kick=component.velocity_kick + momentum / params.mass,
            global_phase=component.global_phase + phase,
        ))

    return SpinorPacket(
        components=tuple(components),
        weights=np.array(packet.weights, dtype=complex),
        mass=packet.mass,
    )


def post_select(packet: SpinorPacket, bra: Spinor3 = None) -> Superposition:
    """Projects onto `bra` (the strong stage's x-basis m = +1 state by default)."""
    if bra is None:
        bra = post_selector()
    return Superposition(
        amplitudes=np.conj(bra.vector) * packet.weights,
        components=packet.components,
        mass=packet.mass,
    )


def post_selected_state(params: ExperimentParams) -> Superposition:
    return post_select(apply_weak_stage(prepare(params), params))


def exact_moments(params: ExperimentParams) -> tuple[float, float]:
    """
    Closed-form (mean, weight) of the exact post-selected detector distribution.

    Free flight moves the mean as <z>_t = <z>_0 + t <p> / m; both expectation values
    follow from Gaussian averages of exp(i q z).
    """

    state = post_selected_state(params)
    k, q, overlaps = _pair_terms(state.components, state.mass)
    a = state.amplitudes
    pairs = np.conj(a)[:, None] * a[None, :] * overlaps

    weight = float(np.real(np.sum(pairs)))
    if weight <= 0:
        return np.nan, weight

    # <psi_i|z - mean|psi_j> = i q sigma^2 <psi_i|psi_j>, <psi_i|p|psi_j> = hbar (k_i + k_j) / 2 <psi_i|psi_j>
    position = float(np.real(np.sum(pairs * 1j * q * params.sigma ** 2))) / weight
    wavenumber = float(np.real(np.sum(pairs * (k[:, None] + k[None, :]) / 2))) / weight
    velocity = constants().hbar * wavenumber / params.mass

    mean = state.components[0].mean + position + params.flight_time * velocity
    return mean, weight


def exact_mean_shift(params: ExperimentParams) -> float:
    return exact_moments(params)[0]


def exact_grid(params: ExperimentParams) -> np.ndarray:
    """Grid wide enough to hold all three displaced components."""
    t = params.flight_time
    width = evolved_width(params.sigma, t, params.mass)
    reach = get_parameter('grid_half_widths') * width + abs(params.transverse_velocity) * t
    return np.linspace(-reach, reach, get_parameter('grid_points'))


def exact_detector_density(params: ExperimentParams, z_grid=None) -> DetectorProfile:
    """
    |Psi_D(z, t)|^2 from the exact weak-stage propagator, interference between the
    three post-selected components retained.
    """

    state = post_selected_state(params)
    t = params.flight_time

    if z_grid is None:
        z_grid = exact_grid(params)
    z_grid = np.asarray(z_grid, dtype=float)

    density = np.abs(state.evaluate(z_grid, t)) ** 2

    _, expected_weight = exact_moments(params)
    if expected_weight > 0 and len(z_grid) >= 2:
        escaped = 1 - trapezoid(density, z_grid) / expected_weight
        if escaped > get_parameter('grid_escape_tolerance'):
            raise GridTooNarrow(f"{escaped:.2e} of the post-selected weight falls outside the grid.")

    try:
        limit = limit_of(params)
    except TanPole:
        limit = np.nan

    metadata = {
        'limit': limit,
        'post_selected_weight': expected_weight,
        'evolved_width': evolved_width(params.sigma, t, params.mass),
        'flight_time': t,
    }

    return make_profile(z_grid, density, metadata)


def exact_expansion_amplitude(params: ExperimentParams) -> complex:
    """<S_f| exp(-i mu delta_t B_z s_z / hbar) |S_i> with B_z taken at z = sigma."""
    coupling = params.coupling(params.sigma)
    propagator = expm(-1j * coupling * spin_matrices().sz)
    return matrix_element(post_selector(), propagator, make_spinor(params.theta, params.phi))


def _expansion_terms(params: ExperimentParams, n: int) -> list[complex]:
    """Signed terms (-i lambda)^j / j! <S_f|s_z^j|S_i> for j = 0..n, lambda at z = sigma."""

    coupling = params.coupling(params.sigma)
    bra, ket = post_selector(), make_spinor(params.theta, params.phi)
    sz = spin_matrices().sz

    terms = []
    for j in range(n + 1):
        element = matrix_element(bra, np.linalg.matrix_power(sz, j), ket)
        terms.append((-1j * coupling) ** j / math.factorial(j) * element)

    return terms


def truncated_expansion_amplitude(params: ExperimentParams, n: int) -> complex:
    """Partial sum of the Taylor series of the post-selected amplitude through order `n`."""
    if n < 0:
        raise NonPositiveInputs(f"Expansion order must be non-negative, got {n}.")
    return complex(sum(_expansion_terms(params, n)))


def check_inequalities(params: ExperimentParams, n_max: int, threshold: float = None) -> InequalityReport:
    """
    Ratios behind the first order approximation, for n = 2..n_max:

    amplitude_ratio   = |lambda^n <S_f|s_z^n|S_i>| / |<S_f|S_i>|
    first_order_ratio = |lambda^n <S_f|s_z^n|S_i>| / |lambda <S_f|s_z|S_i>|

    and L = |lambda W|. A ratio "holds" when it is below `threshold`.
    """

    if n_max < 2:
        raise NonPositiveInputs(f"n_max must be at least 2, got {n_max}.")
    if threshold is None:
        threshold = get_parameter('inequality_threshold')

    coupling = params.coupling(params.sigma)
    bra, ket = post_selector(), make_spinor(params.theta, params.phi)
    sz = spin_matrices().sz

    amplitude = inner(bra, ket)
    check_selection(amplitude)
    first_order = abs(coupling * matrix_element(bra, sz, ket))

    rows = []
    for n in range(2, n_max + 1):
        term = abs(coupling ** n * matrix_element(bra, np.linalg.matrix_power(sz, n), ket))
        if term == 0:
            first_order_ratio = 0.0
        elif first_order == 0:
            first_order_ratio = np.inf
        else:
            first_order_ratio = term / first_order
        rows.append({
            'n': n,
            'amplitude_ratio': term / abs(amplitude),
            'first_order_ratio': first_order_ratio,
        })

    table = pd.DataFrame(rows, columns=['n', 'amplitude_ratio', 'first_order_ratio'])
    table['amplitude_holds'] = table['amplitude_ratio'] < threshold
    table['first_order_holds'] = table['first_order_ratio'] < threshold

    limit = first_order / abs(amplitude)

    return InequalityReport(table=table, limit=limit, limit_holds=bool(limit < threshold), threshold=threshold)
