"""Gaussian centre-of-mass states, their free evolution and detector-plane densities."""

import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import trapezoid

from physics.constants import constants
from physics.errors import NonPositiveWidth, NonPositiveInputs, EmptyGrid, TanPole
from physics.experiment import ExperimentParams, limit_of
from physics.parameters import get_parameter
from physics.spin import weak_value, transition_amplitude


@dataclass(frozen=True)
class WavePacket:
    """
    A 1-D Gaussian packet at the instant it leaves the weak stage.

    sigma: m; mean: m; velocity_kick: transverse velocity in m/s; global_phase: rad.
    """

    sigma: float
    mean: float = 0.0
    velocity_kick: float = 0.0
    global_phase: float = 0.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise NonPositiveWidth(f"Packet width must be positive, got sigma = {self.sigma}.")

    def replace(self, **changes) -> 'WavePacket':
        return replace(self, **changes)


@dataclass(frozen=True)
class DetectorProfile:
    """Sampled |Psi_D(z, t)|^2 on a detector grid, with its quadrature moments."""

    z_grid: np.ndarray
    density: np.ndarray
    mean: float
    rms_width: float
    peak: float
    total_weight: float
    metadata: dict = field(default_factory=dict)


def initial_packet(sigma: float) -> WavePacket:
    """Unit-norm Gaussian of width `sigma`, centred at 0 with no kick."""
    return WavePacket(sigma=sigma)


def spread_at(packet: WavePacket, t: float, mass: float) -> float:
    """Width after free flight for time `t`: sigma * sqrt(1 + hbar^2 t^2 / (4 m^2 sigma^4))."""
    if t < 0:
        raise NonPositiveInputs(f"Flight time must be non-negative, got {t}.")
    return evolved_width(packet.sigma, t, mass)


def evolved_width(sigma: float, t: float, mass: float) -> float:
    tau = constants().hbar * t / (2 * mass * sigma ** 2)
    return sigma * np.sqrt(1 + tau ** 2)


def evaluate(packet: WavePacket, z, t: float, mass: float) -> np.ndarray:
    """
    Wave function of the freely evolved kicked Gaussian at time `t` on positions `z`.

    A kick v multiplies the initial Gaussian by exp(i k (z - mean)) with k = m v / hbar;
    the packet then stays Gaussian, its centre moving at v.
    """

    hbar = constants().hbar
    z = np.asarray(z, dtype=float)
    sigma = packet.sigma
    velocity = packet.velocity_kick
    k = mass * velocity / hbar
    tau = hbar * t / (2 * mass * sigma ** 2)
    spreading = 1 + 1j * tau

    offset = z - packet.mean
    exponent = (
        -(offset - velocity * t) ** 2 / (4 * sigma ** 2 * spreading)
        + 1j * k * (offset - velocity * t / 2)
        + 1j * packet.global_phase
    )

    return (2 * np.pi * sigma ** 2) ** -0.25 / np.sqrt(spreading) * np.exp(exponent)


def default_grid(center: float, width: float, points: int = None, half_widths: float = None) -> np.ndarray:
    """Uniform grid of `points` samples over center +/- half_widths * width."""

    if points is None:
        points = get_parameter('grid_points')
    if half_widths is None:
        half_widths = get_parameter('grid_half_widths')

    return np.linspace(center - half_widths * width, center + half_widths * width, points)


def density_moments(z_grid, density) -> tuple[float, float, float]:
    """Trapezoidal (mean, rms width, weight) of a sampled density."""

    z_grid = np.asarray(z_grid, dtype=float)
    density = np.asarray(density, dtype=float)

    if z_grid.ndim != 1 or len(z_grid) < 3 or z_grid.shape != density.shape:
        raise EmptyGrid("A profile needs at least three grid points matching its density samples.")
    if not np.all(np.diff(z_grid) > 0):
        raise EmptyGrid("Grid positions must be strictly increasing.")

    weight = trapezoid(density, z_grid)
    if weight <= 0:
        return np.nan, np.nan, float(weight)

    mean = trapezoid(z_grid * density, z_grid) / weight
    variance = trapezoid((z_grid - mean) ** 2 * density, z_grid) / weight

    return float(mean), float(np.sqrt(max(variance, 0.0))), float(weight)


def profile_moments(profile: DetectorProfile) -> tuple[float, float, float]:
    """Recomputes (mean, rms, weight) of a profile by quadrature."""
    return density_moments(profile.z_grid, profile.density)


def make_profile(z_grid, density, metadata: dict = None) -> DetectorProfile:
    z_grid = np.asarray(z_grid, dtype=float)
    density = np.clip(np.asarray(density, dtype=float), 0.0, None)
    mean, rms_width, weight = density_moments(z_grid, density)
    return DetectorProfile(
        z_grid=z_grid,
        density=density,
        mean=mean,
        rms_width=rms_width,
        peak=float(density.max()),
        total_weight=weight,
        metadata=dict(metadata or {}),
    )


def first_order_mean(params: ExperimentParams) -> float:
    """Closed-form mean of the first order density: -u t W_Re + 2 W_Im (mu dt / hbar)(dB/dz) sigma_t^2."""
    w = weak_value(params.theta, params.phi)
    width = evolved_width(params.sigma, params.flight_time, params.mass)
    shift = -params.transverse_velocity * params.flight_time * w.real
    return shift + 2 * w.imag * params.field_wavenumber * width ** 2


def first_order_weight(params: ExperimentParams) -> float:
    """
    Integral of the first order density.

    The W_Im term is linear in z, so the density stays Gaussian with width sigma_t and
    |<S_f|S_i>|^2 is rescaled by the completed square.
    """
    w = weak_value(params.theta, params.phi)
    probability = abs(transition_amplitude(params.theta, params.phi)) ** 2
    width = evolved_width(params.sigma, params.flight_time, params.mass)

    slope = 2 * w.imag * params.field_wavenumber
    center = -params.transverse_velocity * params.flight_time * w.real
    return probability * np.exp(2 * w.imag * params.homogeneous_phase + slope * center + slope ** 2 * width ** 2 / 2)


def first_order_detector_density(params: ExperimentParams, z_grid=None) -> DetectorProfile:
    """
    Detector density in the first order (weak value) approximation.

    |<S_f|S_i>|^2 (2 pi sigma_t^2)^(-1/2) exp[-(z + u t W_Re)^2 / (2 sigma_t^2) + 2 W_Im (mu dt / hbar) B_z(z)]
    """

    w = weak_value(params.theta, params.phi)
    probability = abs(transition_amplitude(params.theta, params.phi)) ** 2
    t = params.flight_time
    width = evolved_width(params.sigma, t, params.mass)
    center = first_order_mean(params)

    if z_grid is None:
        z_grid = default_grid(center, width)
    else:
        z_grid = np.asarray(z_grid, dtype=float)
        if len(z_grid) and (z_grid.min() > center - 6 * width or z_grid.max() < center + 6 * width):
            warnings.warn("The detector grid spans less than 6 evolved widths around the shifted mean.")

    log_density = (
        np.log(probability)
        - 0.5 * np.log(2 * np.pi * width ** 2)
        - (z_grid + params.transverse_velocity * t * w.real) ** 2 / (2 * width ** 2)
        + 2 * w.imag * params.coupling(z_grid)
    )

    metadata = {
        'limit': _limit_or_nan(params),
        'weak_value_real': w.real,
        'weak_value_imag': w.imag,
        'post_selection_probability': probability,
        'evolved_width': width,
        'flight_time': t,
    }

    return make_profile(z_grid, np.exp(log_density), metadata)


def _limit_or_nan(params: ExperimentParams) -> float:
    try:
        return limit_of(params)
    except TanPole:
        return np.nan
