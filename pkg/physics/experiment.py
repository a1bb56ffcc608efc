"""Experiment parameters and the first order validity limit L."""

from dataclasses import dataclass, field, replace, asdict

import numpy as np

from physics.constants import constants
from physics.errors import NonPositiveWidth, NonPositiveInputs, TanPole
from physics.parameters import get_parameter


@dataclass(frozen=True)
class ExperimentParams:
    """
    Every physical knob of the weak stage and the flight to the detector, in SI units.

    theta, phi: rad; B0: T; dBdz: T/m; delta_t (time in the weak field): s;
    sigma: m; flight_distance: m; beam_velocity: m/s; mass: kg; moment: J/T.
    """

    theta: float
    phi: float
    B0: float
    dBdz: float
    delta_t: float
    sigma: float
    flight_distance: float
    beam_velocity: float
    mass: float = field(default_factory=lambda: constants().helium4_mass)
    moment: float = field(default_factory=lambda: constants().metastable_he_moment)

    def __post_init__(self):
        if not self.sigma > 0:
            raise NonPositiveWidth(f"Beam width must be positive, got sigma = {self.sigma}.")
        if not self.delta_t >= 0:
            raise NonPositiveInputs(f"Time in the weak field must be non-negative, got {self.delta_t}.")
        if not self.flight_distance >= 0:
            raise NonPositiveInputs(f"Flight distance must be non-negative, got {self.flight_distance}.")
        if not self.beam_velocity > 0:
            raise NonPositiveInputs(f"Beam velocity must be positive, got {self.beam_velocity}.")
        if not (self.mass > 0 and self.moment > 0):
            raise NonPositiveInputs("Mass and magnetic moment must be positive.")

    @classmethod
    def from_magnet(cls, magnet_length: float, beam_velocity: float, **kwargs) -> 'ExperimentParams':
        """Derives delta_t from the weak magnet length and the beam velocity."""
        if not magnet_length >= 0:
            raise NonPositiveInputs(f"Magnet length must be non-negative, got {magnet_length}.")
        if not beam_velocity > 0:
            raise NonPositiveInputs(f"Beam velocity must be positive, got {beam_velocity}.")
        return cls(delta_t=magnet_length / beam_velocity, beam_velocity=beam_velocity, **kwargs)

    def replace(self, **changes) -> 'ExperimentParams':
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return asdict(self)

    @property
    def flight_time(self) -> float:
        """t = d / v, the time between the weak stage exit and the detector."""
        return self.flight_distance / self.beam_velocity

    @property
    def transverse_velocity(self) -> float:
        """u = (mu / m) (dB/dz) delta_t."""
        return self.moment * self.dBdz * self.delta_t / self.mass

    @property
    def field_wavenumber(self) -> float:
        """Momentum kick of the m = +1 component divided by hbar (1/m)."""
        return self.moment * self.delta_t * self.dBdz / constants().hbar

    @property
    def homogeneous_phase(self) -> float:
        return self.moment * self.delta_t * self.B0 / constants().hbar

    def coupling(self, z: float) -> float:
        """mu delta_t B_z(z) / hbar, with B_z = B0 + (dB/dz) z."""
        return self.moment * self.delta_t * (self.B0 + self.dBdz * z) / constants().hbar


def half_angle_tangent(theta: float) -> float:
    if abs(np.cos(theta / 2)) <= get_parameter('tan_pole_epsilon'):
        raise TanPole(f"tan(theta/2) diverges at theta = {theta}.")
    return float(np.tan(theta / 2))


def limit_of(params: ExperimentParams) -> float:
    """
    The validity limit L = mu delta_t (B0 + (dB/dz) sigma) / hbar * tan(theta/2).

    B_z is evaluated at z = sigma. The value is signed; with B0 = 0 this is the
    gradient-only form used throughout the planner.
    """
    return params.coupling(params.sigma) * half_angle_tangent(params.theta)


def gradient_for_limit(L: float, theta: float, sigma: float, delta_t: float, moment: float = None) -> float:
    """Field gradient (T/m) that gives limit `L` with the homogeneous field neglected."""

    if moment is None:
        moment = constants().metastable_he_moment

    if not 0 < theta < np.pi:
        if abs(np.cos(theta / 2)) <= get_parameter('tan_pole_epsilon'):
            raise TanPole(f"tan(theta/2) diverges at theta = {theta}.")
        raise NonPositiveInputs(f"theta must lie in (0, pi), got {theta}.")
    if not (L > 0 and sigma > 0 and delta_t > 0):
        raise NonPositiveInputs(
            f"L, sigma and delta_t must be positive (got L={L}, sigma={sigma}, delta_t={delta_t})."
        )

    tangent = half_angle_tangent(theta)
    return L * constants().hbar / (moment * delta_t * sigma * tangent)


def with_limit(params: ExperimentParams, L: float) -> ExperimentParams:
    """Copy of `params` whose gradient is re-solved so that the gradient-only limit equals `L`."""
    dBdz = gradient_for_limit(L, params.theta, params.sigma, params.delta_t, params.moment)
    return params.replace(dBdz=dBdz)
