import unittest

import numpy as np
from hypothesis import given, strategies as st

from physics.errors import OrthogonalSelection
from physics.spin import (
    Spinor3, spin_matrices, make_spinor, post_selector, norm_squared, inner,
    transition_amplitude, weak_value, weak_value_from_matrix_elements, weak_value_ratio_check,
)
from utilities import compare_arrays


angles = st.floats(min_value=-10, max_value=10, allow_nan=False)


class TestSpinMatrices(unittest.TestCase):

    def test_hermitian(self):
        for matrix in (spin_matrices().sx, spin_matrices().sy, spin_matrices().sz):
            self.assertTrue(np.allclose(matrix, matrix.conj().T))

    def test_commutation(self):
        s = spin_matrices()
        self.assertTrue(np.allclose(s.sx @ s.sy - s.sy @ s.sx, 1j * s.sz))
        self.assertTrue(np.allclose(s.sy @ s.sz - s.sz @ s.sy, 1j * s.sx))
        self.assertTrue(np.allclose(s.sz @ s.sx - s.sx @ s.sz, 1j * s.sy))

    def test_sz_eigenstate(self):
        up = np.array([1, 0, 0], dtype=complex)
        self.assertTrue(np.allclose(spin_matrices().sz @ up, up))
        self.assertTrue(np.allclose(np.diag(spin_matrices().sz), [1, 0, -1]))


class TestSpinors(unittest.TestCase):

    def test_make_spinor(self):
        test_cases = [
            {'theta': np.pi / 2, 'phi': 0.0, 'expected': [1, 0, 0]},
            {'theta': 0.0, 'phi': 0.0, 'expected': [0.5, 1 / np.sqrt(2), 0.5]},
            {'theta': -np.pi / 2, 'phi': 0.0, 'expected': [0, 0, 1]},
        ]
        for test_case in test_cases:
            spinor = make_spinor(test_case['theta'], test_case['phi'])
            self.assertTrue(compare_arrays(spinor.vector, test_case['expected'], atol=1e-12))

    @given(angles, angles)
    def test_unit_norm(self, theta, phi):
        self.assertAlmostEqual(norm_squared(make_spinor(theta, phi)), 1.0, delta=1e-12)

    def test_post_selector(self):
        f = post_selector()
        self.assertTrue(compare_arrays(f.vector, [0.5, 0.7071067812, 0.5], atol=1e-10))
        self.assertAlmostEqual(norm_squared(f), 1.0, delta=1e-12)
        self.assertAlmostEqual(inner(f, make_spinor(0, 0)), 1.0, delta=1e-12)

    def test_vector_round_trip(self):
        spinor = make_spinor(1.3, 0.4)
        self.assertEqual(Spinor3.from_vector(spinor.vector), spinor)

    def test_inner_conjugate_linear(self):
        a, b = make_spinor(0.3, 1.1), make_spinor(2.0, -0.7)
        scaled = Spinor3.from_vector(2j * a.vector)
        self.assertAlmostEqual(inner(scaled, b), -2j * inner(a, b), delta=1e-12)

    def test_transition_amplitude(self):
        rng = np.random.default_rng(0)
        for theta, phi in rng.uniform(0, 2 * np.pi, size=(200, 2)):
            expected = (np.cos(phi) + np.cos(theta) - 1j * np.sin(phi) * np.sin(theta)) / 2
            self.assertAlmostEqual(transition_amplitude(theta, phi), expected, delta=1e-12)
            self.assertLessEqual(abs(transition_amplitude(theta, phi)) ** 2, 1 + 1e-12)

    def test_orthogonal_selection(self):
        self.assertLess(abs(transition_amplitude(np.pi, 0)), 1e-12)
        with self.assertRaises(OrthogonalSelection):
            weak_value(np.pi, 0)
        with self.assertRaises(OrthogonalSelection):
            weak_value_ratio_check(np.pi, 0)


class TestWeakValue(unittest.TestCase):

    def test_weak_value(self):
        test_cases = [
            {'theta': 2.9, 'phi': 0.0, 'real': np.tan(1.45), 'imag': 0.0},
            {'theta': np.pi / 2, 'phi': 0.0, 'real': 1.0, 'imag': 0.0},
            {'theta': 0.0, 'phi': 0.0, 'real': 0.0, 'imag': 0.0},
        ]
        for test_case in test_cases:
            w = weak_value(test_case['theta'], test_case['phi'])
            self.assertAlmostEqual(w.real, test_case['real'], delta=1e-12 * max(1, abs(test_case['real'])))
            self.assertAlmostEqual(w.imag, test_case['imag'], delta=1e-12)
        self.assertAlmostEqual(weak_value(2.9, 0).real, 8.238, delta=1e-3)

    def test_ratio_check(self):
        test_cases = [(1.0, 0.7), (0.0, 0.0), (2.9, np.pi / 2)]
        for theta, phi in test_cases:
            self.assertLess(abs(weak_value_ratio_check(theta, phi)), 1e-12)

    def test_ratio_check_grid(self):
        thetas = np.linspace(0, 2 * np.pi, 100)
        phis = np.linspace(0, 2 * np.pi, 100)
        for theta in thetas:
            for phi in phis:
                # Both forms divide by 2 |<S_f|S_i>| = 1 + cos(phi) cos(theta) and lose digits with it
                amplitude = abs(transition_amplitude(theta, phi))
                w = weak_value(theta, phi).value
                tolerance = 1e-12 * max(1, abs(w)) * max(1, 0.01 / amplitude)
                self.assertLess(abs(weak_value_ratio_check(theta, phi)), tolerance)

    def test_real_part_is_half_angle_tangent(self):
        for theta in np.linspace(1e-3, 3.0, 1000):
            w = weak_value(theta, 0.0)
            self.assertAlmostEqual(w.real, np.tan(theta / 2), delta=1e-12)
            self.assertEqual(w.imag, 0.0)

    def test_extrema_follow_denominator(self):
        # At theta = 2.9 both parts peak in magnitude where 1 + cos(phi) cos(theta) is smallest
        phis = np.linspace(0, 2 * np.pi, 629)
        real = np.array([weak_value(2.9, phi).real for phi in phis])
        denominator = 1 + np.cos(phis) * np.cos(2.9)
        self.assertEqual(np.argmax(np.abs(real)), np.argmin(denominator))

    def test_matrix_elements_agree(self):
        w = weak_value_from_matrix_elements(1.2, 2.3)
        self.assertAlmostEqual(w, weak_value(1.2, 2.3).value, delta=1e-12)
