import unittest

import numpy as np

from calibration import (
    LimitScan, limit_of, gradient_for_limit, scan_limits, find_max_limit, run_calibration, calibration_params,
)
from calibration.utilities import limit_lattice, relative_deviation, compare_means
from physics.errors import EmptyGrid, NonPositiveInputs, NoValidLimit, TanPole
from physics.experiment import with_limit


class TestLimit(unittest.TestCase):

    def test_gradient_round_trip(self):
        base = calibration_params()
        for L in (0.01, 0.37, 1.5):
            self.assertAlmostEqual(limit_of(with_limit(base, L)), L, delta=1e-12)

    def test_limit_sign(self):
        params = with_limit(calibration_params(), 0.2).replace(theta=4.0)
        self.assertLess(limit_of(params), 0)

    def test_invalid_gradient_inputs(self):
        test_cases = [
            {'L': 0.37, 'theta': np.pi, 'error': TanPole},
            {'L': 0.37, 'theta': 4.0, 'error': NonPositiveInputs},
            {'L': 0.0, 'theta': 2.9, 'error': NonPositiveInputs},
            {'L': -0.1, 'theta': 2.9, 'error': NonPositiveInputs},
        ]
        for test_case in test_cases:
            with self.assertRaises(test_case['error']):
                gradient_for_limit(test_case['L'], test_case['theta'], 1e-6, 5e-6)


class TestScan(unittest.TestCase):

    def test_lattice(self):
        lattice = limit_lattice()
        self.assertEqual(len(lattice), 150)
        self.assertEqual(lattice[0], 0.01)
        self.assertEqual(lattice[36], 0.37)
        self.assertEqual(lattice[-1], 1.5)

    def test_scan(self):
        scan = scan_limits(calibration_params(), [0.1, 0.37, 1.0])
        frame = scan.to_frame()
        self.assertListEqual(list(frame.columns), ['L', 'mean_exact', 'mean_first_order', 'deviation'])
        self.assertTrue(np.all(np.diff(scan.deviation) > 0))
        self.assertTrue(np.all(scan.mean_first_order < 0))

        exact, first_order = compare_means(calibration_params(), 0.37)
        self.assertAlmostEqual(scan.deviation[1], relative_deviation(exact, first_order), delta=1e-12)

    def test_parallel_scan_is_ordered(self):
        grid = [0.05, 0.2, 0.6]
        serial = scan_limits(calibration_params(), grid, n_jobs=1)
        parallel = scan_limits(calibration_params(), grid, n_jobs=2)
        self.assertTrue(np.array_equal(serial.mean_exact, parallel.mean_exact))

    def test_invalid_grids(self):
        test_cases = [
            {'grid': [], 'error': EmptyGrid},
            {'grid': [0.2, 0.1], 'error': NonPositiveInputs},
            {'grid': [0.0, 0.1], 'error': NonPositiveInputs},
        ]
        for test_case in test_cases:
            with self.assertRaises(test_case['error']):
                scan_limits(calibration_params(), test_case['grid'])

    def test_scan_validation(self):
        with self.assertRaises(ValueError):
            LimitScan(np.array([0.1, 0.2]), np.zeros(2), np.ones(2), np.zeros(1))


class TestMaxLimit(unittest.TestCase):

    def test_find_max_limit(self):
        test_cases = [
            {'tolerance': None, 'expected': 0.37},
            {'tolerance': 1e-3, 'expected': 0.06},
            {'tolerance': 0.5, 'expected': 1.5},
        ]
        for test_case in test_cases:
            L = find_max_limit(calibration_params(), test_case['tolerance'])
            self.assertAlmostEqual(L, test_case['expected'], delta=1e-9)

    def test_monotone_in_tolerance(self):
        limits = [find_max_limit(calibration_params(), tolerance) for tolerance in (0.01, 0.035, 0.1, 0.3)]
        self.assertTrue(all(a <= b for a, b in zip(limits, limits[1:])))

    def test_no_valid_limit(self):
        with self.assertRaises(NoValidLimit):
            find_max_limit(calibration_params(), 1e-5)

    def test_invalid_tolerance(self):
        for tolerance in (0.0, 1.0, -0.2):
            with self.assertRaises(NonPositiveInputs):
                find_max_limit(calibration_params(), tolerance)

    def test_run_calibration(self):
        result = run_calibration()
        self.assertEqual(len(result.scan.L_values), 150)
        self.assertAlmostEqual(result.max_limit, 0.37, delta=1e-9)
        self.assertLessEqual(result.implied_tolerance, result.tolerance)
        self.assertAlmostEqual(result.implied_tolerance, 0.0347, delta=5e-4)
