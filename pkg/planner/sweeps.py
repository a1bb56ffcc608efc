"""Parameter sweeps over velocity, spin angles and limit."""

import warnings

import numpy as np
import pandas as pd

from physics.errors import NonPositiveInputs
from physics.experiment import ExperimentParams, limit_of, with_limit
from physics.parameters import get_parameter
from physics.propagation import check_inequalities
from physics.spin import weak_value, transition_amplitude
from physics.wavepacket import first_order_mean, first_order_weight
from planner import plan, displacement, displacement_two_ways, gradient_limit


VELOCITY_COLUMNS = [
    'velocity', 'flight_time', 'displacement', 'evolved_width', 'peak_density',
    'post_selection_probability', 'resolvable', 'margin',
]


def _check_positive(values, name: str) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if np.any(values <= 0):
        raise NonPositiveInputs(f"All {name} must be positive.")
    return values


def at_velocity(params: ExperimentParams, velocity: float, L: float) -> ExperimentParams:
    """
    The same magnet and beam at another velocity, with the gradient rescaled so that
    the gradient-only limit keeps magnitude `L`.

    delta_t follows the magnet length. Parameters without a gradient keep it at zero.
    """

    point = params.replace(beam_velocity=velocity, delta_t=params.delta_t * params.beam_velocity / velocity)
    current = abs(gradient_limit(point))
    if current == 0:
        return point
    return point.replace(dBdz=point.dBdz * L / current)


def velocity_sweep(params: ExperimentParams, v_grid, L: float = None, detector_pitch: float = None) -> pd.DataFrame:
    """
    One plan per beam velocity at a fixed limit. Delta_w grows as 1 / v.

    peak_density is the maximum of the first order detector density at that limit.
    """

    if L is None:
        L = get_parameter('default_limit')
    v_grid = _check_positive(v_grid, 'velocities')

    rows = []
    for velocity in v_grid:
        point = at_velocity(params, velocity, L)
        result = plan(point, L, detector_pitch)
        rows.append({
            'velocity': velocity,
            'flight_time': point.flight_time,
            'displacement': result.displacement,
            'evolved_width': result.evolved_width,
            'peak_density': first_order_weight(point) / np.sqrt(2 * np.pi * result.evolved_width ** 2),
            'post_selection_probability': result.post_selection_probability,
            'resolvable': result.resolvable,
            'margin': result.margin,
        })

    return pd.DataFrame(rows, columns=VELOCITY_COLUMNS)


def displacement_surface(params: ExperimentParams, v_grid, L_grid) -> pd.DataFrame:
    """Delta_w for every (L, v) pair: raising L slightly while slowing the beam."""

    v_grid = _check_positive(v_grid, 'velocities')
    L_grid = _check_positive(L_grid, 'limits')

    rows = [
        {'L': L, 'velocity': velocity, 'displacement': displacement(at_velocity(params, velocity, L), L)}
        for L in L_grid for velocity in v_grid
    ]
    return pd.DataFrame(rows, columns=['L', 'velocity', 'displacement'])


def theta_sweep(
        params: ExperimentParams, theta_grid, hold_L_fixed: bool,
        L: float = None, n_max: int = 6
    ) -> pd.DataFrame:
    """
    Delta_w against the spin vector angle.

    With `hold_L_fixed` the gradient is re-solved at each angle so that L (and with it
    Delta_w) stays constant. Otherwise the gradient is kept, Delta_w follows tan(theta/2)
    and the validity flags show where the first order treatment stops holding.
    """

    theta_grid = np.asarray(theta_grid, dtype=float)
    if hold_L_fixed and L is None:
        L = abs(gradient_limit(params))

    rows = []
    for theta in theta_grid:
        point = params.replace(theta=theta)
        if hold_L_fixed:
            point = with_limit(point, L)

        field_form, _ = displacement_two_ways(point)
        report = check_inequalities(point, n_max)
        limit = limit_of(point)

        rows.append({
            'theta': theta,
            'dBdz': point.dBdz,
            'limit': limit,
            'displacement': field_form,
            'weak_value_real': weak_value(theta, point.phi).real,
            'post_selection_probability': abs(transition_amplitude(theta, point.phi)) ** 2,
            'within_limit': bool(abs(limit) <= get_parameter('default_limit') + 1e-12),
            'inequalities_hold': report.holds,
        })

    table = pd.DataFrame(rows, columns=[
        'theta', 'dBdz', 'limit', 'displacement', 'weak_value_real',
        'post_selection_probability', 'within_limit', 'inequalities_hold',
    ])

    if not hold_L_fixed and len(table) and not table['within_limit'].all():
        warnings.warn("Some angles exceed the calibrated limit; their displacements are outside the first order regime.")

    return table


def phi_sweep(params: ExperimentParams, phi_grid) -> pd.DataFrame:
    """
    First order detector mean and weight against the azimuthal angle at fixed theta and field.

    A non-zero imaginary part of the weak value moves the mean by
    2 W_Im (mu delta_t / hbar)(dB/dz) sigma_t^2 and rescales the post-selected weight.
    """

    rows = []
    for phi in np.asarray(phi_grid, dtype=float):
        point = params.replace(phi=phi)
        w = weak_value(params.theta, phi)
        rows.append({
            'phi': phi,
            'weak_value_real': w.real,
            'weak_value_imag': w.imag,
            'mean_shift': first_order_mean(point),
            'weight': first_order_weight(point),
        })

    return pd.DataFrame(rows, columns=['phi', 'weak_value_real', 'weak_value_imag', 'mean_shift', 'weight'])
