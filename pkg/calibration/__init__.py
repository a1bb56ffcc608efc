"""
Calibration of the largest limit L* for which the first order approximation still
coincides with the exact evolution.

The gradient of the weak stage is increased with everything else held fixed; at
each limit the quadrature means of the exact and first order detector densities
are compared.
"""

import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from tqdm import tqdm

from physics.errors import EmptyGrid, NonPositiveInputs, NoValidLimit
from physics.experiment import ExperimentParams, limit_of, gradient_for_limit
from physics.parameters import get_parameter
from calibration.utilities import calibration_params, limit_lattice, relative_deviation, compare_means


logger = logging.getLogger(__name__)

__all__ = [
    'LimitScan', 'CalibrationResult', 'limit_of', 'gradient_for_limit', 'scan_limits',
    'find_max_limit', 'run_calibration', 'calibration_params',
]


@dataclass(frozen=True)
class LimitScan:
    L_values: np.ndarray
    mean_exact: np.ndarray
    mean_first_order: np.ndarray
    deviation: np.ndarray

    def __post_init__(self):
        lengths = {len(self.L_values), len(self.mean_exact), len(self.mean_first_order), len(self.deviation)}
        if len(lengths) != 1:
            raise ValueError("Scan arrays must have equal length.")
        if np.any(np.diff(self.L_values) <= 0):
            raise ValueError("Scanned limits must be strictly increasing.")

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'L': self.L_values,
            'mean_exact': self.mean_exact,
            'mean_first_order': self.mean_first_order,
            'deviation': self.deviation,
        })


@dataclass(frozen=True)
class CalibrationResult:
    scan: LimitScan
    max_limit: float
    tolerance: float
    # Deviation observed at the returned limit; the criterion made explicit
    implied_tolerance: float


def _check_limits(L_grid) -> np.ndarray:
    L_grid = np.asarray(L_grid, dtype=float)
    if L_grid.size == 0:
        raise EmptyGrid("The limit grid is empty.")
    if np.any(L_grid <= 0) or np.any(np.diff(L_grid) <= 0):
        raise NonPositiveInputs("Scanned limits must be positive and strictly increasing.")
    return L_grid


def scan_limits(base_params: ExperimentParams, L_grid, n_jobs: int = None, progress: bool = False) -> LimitScan:
    """Exact and first order detector means for each limit in `L_grid`."""

    L_grid = _check_limits(L_grid)
    if n_jobs is None:
        n_jobs = get_parameter('n_jobs')

    limits = tqdm(L_grid, desc="Scanning limits") if progress else L_grid
    means = Parallel(n_jobs=n_jobs)(delayed(compare_means)(base_params, L) for L in limits)

    mean_exact = np.array([exact for exact, _ in means])
    mean_first_order = np.array([first_order for _, first_order in means])
    deviation = np.abs(mean_exact - mean_first_order) / np.abs(mean_first_order)

    return LimitScan(
        L_values=L_grid,
        mean_exact=mean_exact,
        mean_first_order=mean_first_order,
        deviation=deviation,
    )


def find_max_limit(base_params: ExperimentParams, deviation_tolerance: float = None, lattice=None) -> float:
    """
    Largest limit on the scan lattice whose relative mean deviation is within tolerance.

    Bisects lattice indices, evaluating the deviation only where needed; this relies on
    the deviation growing with L.
    """

    if deviation_tolerance is None:
        deviation_tolerance = get_parameter('calibration_tolerance')
    if not 0 < deviation_tolerance < 1:
        raise NonPositiveInputs(f"Tolerance must lie in (0, 1), got {deviation_tolerance}.")

    lattice = limit_lattice() if lattice is None else _check_limits(lattice)
    cache = {}

    def within(index: int) -> bool:
        if index not in cache:
            cache[index] = relative_deviation(*compare_means(base_params, lattice[index]))
            logger.debug("L = %.2f: deviation %.4f", lattice[index], cache[index])
        return cache[index] <= deviation_tolerance

    if not within(0):
        raise NoValidLimit(
            f"Even L = {lattice[0]:g} deviates by {cache[0]:.3%}, above the tolerance of {deviation_tolerance:.3%}."
        )

    last = len(lattice) - 1
    if within(last):
        return float(lattice[last])

    low, high = 0, last
    while high - low > 1:
        middle = (low + high) // 2
        if within(middle):
            low = middle
        else:
            high = middle

    return float(lattice[low])


def run_calibration(
        base_params: ExperimentParams = None, deviation_tolerance: float = None,
        n_jobs: int = None, log: bool = False
    ) -> CalibrationResult:
    """Scans the full lattice, then reports L* and the deviation it implies."""

    if base_params is None:
        base_params = calibration_params()
    if deviation_tolerance is None:
        deviation_tolerance = get_parameter('calibration_tolerance')
    if not 0 < deviation_tolerance < 1:
        raise NonPositiveInputs(f"Tolerance must lie in (0, 1), got {deviation_tolerance}.")

    scan = scan_limits(base_params, limit_lattice(), n_jobs=n_jobs, progress=log)

    within = np.flatnonzero(scan.deviation <= deviation_tolerance)
    if within.size == 0 or within[0] != 0:
        raise NoValidLimit(
            f"Even L = {scan.L_values[0]:g} deviates by {scan.deviation[0]:.3%}, "
            f"above the tolerance of {deviation_tolerance:.3%}."
        )

    # Last point of the leading run that stays within tolerance
    breaks = np.flatnonzero(np.diff(within) != 1)
    index = within[breaks[0]] if breaks.size else within[-1]
    max_limit = float(scan.L_values[index])

    if log:
        print(f"Largest limit within {deviation_tolerance:.2%}: L* = {max_limit:.2f}")

    return CalibrationResult(
        scan=scan,
        max_limit=max_limit,
        tolerance=deviation_tolerance,
        implied_tolerance=float(scan.deviation[index]),
    )
