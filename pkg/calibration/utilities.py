import numpy as np

from physics.experiment import ExperimentParams, with_limit
from physics.parameters import get_parameter
from physics.propagation import exact_detector_density
from physics.wavepacket import first_order_detector_density


# Geometry used to calibrate the limit: 1 um beam, 10 mm weak magnet, 2.5 m flight at 1750 m/s
CALIBRATION_SIGMA = 1e-6
CALIBRATION_MAGNET_LENGTH = 10e-3
CALIBRATION_FLIGHT_DISTANCE = 2.5
CALIBRATION_VELOCITY = 1750.0


def calibration_params(theta: float = None) -> ExperimentParams:
    """Base parameters for the limit scan; the gradient is set per scanned limit."""

    if theta is None:
        theta = get_parameter('calibration_theta')

    return ExperimentParams.from_magnet(
        magnet_length=CALIBRATION_MAGNET_LENGTH,
        beam_velocity=CALIBRATION_VELOCITY,
        theta=theta,
        phi=0.0,
        B0=0.0,
        dBdz=0.0,
        sigma=CALIBRATION_SIGMA,
        flight_distance=CALIBRATION_FLIGHT_DISTANCE,
    )


def limit_lattice(scan_min: float = None, scan_max: float = None, step: float = None) -> np.ndarray:
    """Limits scan_min, scan_min + step, ..., up to scan_max inclusive."""

    scan_min = get_parameter('scan_min') if scan_min is None else scan_min
    scan_max = get_parameter('scan_max') if scan_max is None else scan_max
    step = get_parameter('scan_step') if step is None else step

    count = int(np.floor((scan_max - scan_min) / step + 1e-9)) + 1
    return np.round(scan_min + step * np.arange(count), 10)


def relative_deviation(exact_mean: float, first_order_mean: float) -> float:
    return abs(exact_mean - first_order_mean) / abs(first_order_mean)


def compare_means(base_params: ExperimentParams, L: float) -> tuple[float, float]:
    """Quadrature means (exact, first order) of the detector density at limit `L`."""
    params = with_limit(base_params, L)
    exact = exact_detector_density(params)
    first_order = first_order_detector_density(params)
    return exact.mean, first_order.mean
