import unittest

import numpy as np

from snpeaks.errors import DomainError, GeometryError
from snpeaks.geometries import RadialGrid
from snpeaks.groundstate import solve_ground_state
from snpeaks.models import PolarModulation, SpherePotential
from snpeaks.pohozaev import (NONEXISTENCE_THRESHOLD, SLOPE_WINDOW,
                              nonexistence_probe, two_peak_C5_probe,
                              two_peak_c5)


class TwoPeakProbeTestCase(unittest.TestCase):
    """
    """

    @classmethod
    def setUpClass(cls):
        cls.bundle = solve_ground_state(
            RadialGrid(24.0, 2048), extrapolate=False)
        cls.eps = [0.025, 0.0177, 0.0125, 0.0088]
        cls.b1 = [0.0, 0.0, 1.0]
        cls.b2 = [0.0, 0.0, -1.0]
        cls.fit = two_peak_C5_probe(cls.bundle, cls.b1, cls.b2, cls.eps)

    def test_slope(self):
        fit = self.fit
        self.assertTrue(fit.passed)
        self.assertGreaterEqual(fit.power, SLOPE_WINDOW[0])
        self.assertLessEqual(fit.power, SLOPE_WINDOW[1])
        self.assertEqual(fit.details['j'], 2)

    def test_point_mass_limit(self):
        # far apart peaks interact like point masses
        expected = -self.bundle.a_star**2 / (32 * np.pi)
        self.assertAlmostEqual(
            self.fit.details['C_star_point_mass'] / expected, 1.0, places=3)
        self.assertAlmostEqual(self.fit.extrapolated / expected, 1.0,
                               delta=2e-2)

    def test_control(self):
        details = self.fit.details
        self.assertTrue(details['control_below_floor'] or
                        details['control_power'] >= 5.0)
        value, magnitude = two_peak_c5(self.bundle, [self.b1], 0.0125, 0.25,
                                       2)
        self.assertLess(abs(value), 1e-6 * magnitude)

    def test_swap(self):
        swapped = two_peak_C5_probe(self.bundle, self.b2, self.b1, self.eps)
        self.assertAlmostEqual(swapped.extrapolated / self.fit.extrapolated,
                               -1.0, places=6)

    def test_separation(self):
        near = two_peak_C5_probe(self.bundle, [0, 0, 1], [0, 0, 0], self.eps)
        # the Newton tail falls off with the squared distance
        self.assertAlmostEqual(
            near.extrapolated / self.fit.extrapolated, 4.0, delta=0.1)

    def test_geometry(self):
        with self.assertRaises(GeometryError):
            two_peak_C5_probe(self.bundle, self.b1, self.b1, self.eps)
        with self.assertRaises(GeometryError) as ctx:
            two_peak_C5_probe(self.bundle, self.b1, [0, 0, 0.5], self.eps)
        self.assertAlmostEqual(ctx.exception.distance, 0.5)
        with self.assertRaises(GeometryError):
            two_peak_C5_probe(self.bundle, self.b1, self.b2,
                              [0.05, 0.035, 0.025, 0.0177])


class NonexistenceProbeTestCase(unittest.TestCase):
    """
    """

    @classmethod
    def setUpClass(cls):
        cls.bundle = solve_ground_state(
            RadialGrid(24.0, 2048), extrapolate=False)
        cls.model = SpherePotential(
            R=1.0, q=1.0, beta=0.5, modulation=PolarModulation())
        cls.eps = [0.025, 0.0177, 0.0125, 0.0088]

    def test_poles(self):
        verdict = nonexistence_probe(self.model, [0, 0, 1], [0, 0, -1],
                                     self.eps, self.bundle)
        self.assertTrue(verdict['passed'])
        self.assertGreater(verdict['min_ratio'], NONEXISTENCE_THRESHOLD)
        self.assertEqual(len(verdict['rows']), 4)
        self.assertEqual(verdict['C_star'], verdict['probe'].extrapolated)

    def test_not_candidate(self):
        with self.assertRaises(DomainError):
            nonexistence_probe(self.model, [1, 0, 0], [0, 0, -1], self.eps,
                               self.bundle)

    def test_degenerate_points(self):
        # rotational symmetry: every point is a candidate, none is isolated
        symmetric = SpherePotential(R=1.0, q=1.0)
        with self.assertRaises(DomainError) as ctx:
            nonexistence_probe(symmetric, [0, 0, 1], [0, 0, -1], self.eps,
                               self.bundle)
        self.assertIn('degenerate', str(ctx.exception))


if __name__ == "__main__":
    unittest.main()
