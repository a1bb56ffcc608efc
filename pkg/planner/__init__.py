"""
Closed-form experiment planning around the displacement of the post-selected beam,

    Delta_w = mu (dB/dz) delta_t t / m * tan(theta/2) = hbar t L / (sigma m).
"""

from dataclasses import dataclass

import numpy as np

from physics.constants import constants
from physics.errors import NonPositiveInputs
from physics.experiment import ExperimentParams, limit_of, half_angle_tangent
from physics.parameters import get_parameter
from physics.spin import transition_amplitude
from physics.wavepacket import evolved_width


@dataclass(frozen=True)
class PlanResult:
    displacement: float
    limit: float
    evolved_width: float
    post_selection_probability: float
    detector_pitch: float
    resolvable: bool
    margin: float


def displacement(params: ExperimentParams, L: float) -> float:
    """Delta_w = hbar (d / v) L / (sigma m), in metres."""
    if L < 0:
        raise NonPositiveInputs(f"The limit must be non-negative, got L = {L}.")
    return constants().hbar * params.flight_time * L / (params.sigma * params.mass)


def gradient_limit(params: ExperimentParams) -> float:
    """The limit with the homogeneous field neglected."""
    return limit_of(params.replace(B0=0.0))


def displacement_two_ways(params: ExperimentParams) -> tuple[float, float]:
    """(field form, limit form) of Delta_w; equal whenever L comes from the same parameters."""

    tangent = half_angle_tangent(params.theta)
    field_form = params.transverse_velocity * params.flight_time * tangent
    limit_form = constants().hbar * params.flight_time * gradient_limit(params) / (params.sigma * params.mass)

    return field_form, limit_form


def weak_value_from_displacement(params: ExperimentParams, measured_displacement: float) -> float:
    """Real part of the weak value recovered from a measured Delta_w at known field settings."""
    drift = params.transverse_velocity * params.flight_time
    if drift == 0:
        raise NonPositiveInputs("A zero gradient, weak-field time or flight time carries no weak value signal.")
    return measured_displacement / drift


def resolvability(plan: PlanResult, detector_pitch: float) -> tuple[bool, float]:
    """Whether Delta_w reaches the detector pitch, and Delta_w / pitch."""
    if not detector_pitch > 0:
        raise NonPositiveInputs(f"Detector pitch must be positive, got {detector_pitch}.")
    margin = plan.displacement / detector_pitch
    return bool(plan.displacement >= detector_pitch), margin


def plan(params: ExperimentParams, L: float = None, detector_pitch: float = None) -> PlanResult:
    """Displacement, width and post-selection probability at the detector for limit `L`."""

    if L is None:
        L = abs(gradient_limit(params))
    if detector_pitch is None:
        detector_pitch = get_parameter('detector_pitch')

    shift = displacement(params, L)
    result = PlanResult(
        displacement=shift,
        limit=L,
        evolved_width=evolved_width(params.sigma, params.flight_time, params.mass),
        post_selection_probability=abs(transition_amplitude(params.theta, params.phi)) ** 2,
        detector_pitch=detector_pitch,
        resolvable=False,
        margin=np.nan,
    )
    resolvable, margin = resolvability(result, detector_pitch)

    return PlanResult(**{**result.__dict__, 'resolvable': resolvable, 'margin': margin})
