import unittest

from physics.constants import constants
from physics.experiment import ExperimentParams, limit_of


class TestConstants(unittest.TestCase):

    def test_values(self):
        c = constants()
        self.assertEqual(c.metastable_he_moment / c.bohr_magneton, 2.0)
        self.assertAlmostEqual(c.helium4_mass / 6.646e-27, 1.0, delta=1e-3)
        for value in (c.hbar, c.bohr_magneton, c.amu, c.helium4_mass, c.metastable_he_moment):
            self.assertGreater(value, 0)

    def test_repeatable(self):
        self.assertEqual(constants(), constants())

    def test_limit_is_dimensionless_and_order_one(self):
        # 10 mm magnet at 1717 m/s in a 0.1 T/m gradient
        params = ExperimentParams.from_magnet(
            magnet_length=10e-3, beam_velocity=1717.0, theta=2.9, phi=0.0,
            B0=0.0, dBdz=0.1, sigma=0.5e-6, flight_distance=2.5,
        )
        L = limit_of(params)
        self.assertGreater(L, 0.1)
        self.assertLess(L, 1.0)

