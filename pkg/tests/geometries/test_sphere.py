import unittest

import numpy as np

from snpeaks.geometries import (ball_rule, fibonacci_sphere,
                                random_rotations, sphere_rule)


class SphereRuleTestCase(unittest.TestCase):
    """
    """

    def test_weights(self):
        rule = sphere_rule(17)
        self.assertAlmostEqual(rule.weights.sum(), 4 * np.pi, places=12)
        np.testing.assert_allclose(
            np.linalg.norm(rule.directions, axis=1), 1.0, atol=1e-14)

    def test_polynomial_exactness(self):
        rule = sphere_rule(17)
        x, y, z = rule.directions.T
        # ∫ z² dσ = 4π/3, ∫ x²y²z² dσ = 4π/105
        self.assertAlmostEqual(rule.weights @ z**2, 4 * np.pi / 3, places=12)
        self.assertAlmostEqual(
            rule.weights @ (x**2 * y**2 * z**2), 4 * np.pi / 105, places=12)
        self.assertAlmostEqual(rule.weights @ (x * z**3), 0.0, places=12)

    def test_invalid(self):
        with self.assertRaises(ValueError):
            sphere_rule(0)


class BallRuleTestCase(unittest.TestCase):
    """
    """

    def test_volume_and_gaussian(self):
        center = np.array([1.0, -2.0, 0.5])
        rule = ball_rule(center, 2.0, scale=0.1)
        self.assertAlmostEqual(rule.integrate(np.ones(len(rule))),
                               4 * np.pi / 3 * 8, places=10)
        r2 = np.sum(rule.offsets**2, axis=1)
        # the peak is narrow enough that the ball holds all of its mass
        value = rule.integrate(np.exp(-r2 / 0.01))
        self.assertAlmostEqual(value / (np.pi * 0.01)**1.5, 1.0, places=10)

    def test_points(self):
        rule = ball_rule([0, 0, 0], 1.0)
        self.assertLessEqual(np.max(np.linalg.norm(rule.points, axis=1)), 1.0)


class SamplingTestCase(unittest.TestCase):
    """
    """

    def test_fibonacci(self):
        points = fibonacci_sphere(500)
        np.testing.assert_allclose(
            np.linalg.norm(points, axis=1), 1.0, atol=1e-14)
        np.testing.assert_allclose(points.mean(axis=0), 0.0, atol=1e-2)

    def test_rotations(self):
        R = random_rotations(5, seed=1)
        for Q in R:
            np.testing.assert_allclose(Q @ Q.T, np.eye(3), atol=1e-12)
            self.assertAlmostEqual(np.linalg.det(Q), 1.0, places=12)
        np.testing.assert_array_equal(R, random_rotations(5, seed=1))


if __name__ == "__main__":
    unittest.main()
