import pickle
import unittest

import numpy as np

from snpeaks.errors import NormalDegeneracyError
from snpeaks.models import (ConstantPotential, PolarModulation,
                            RotatedPotential, SpherePotential,
                            TiltedModulation, build_potential,
                            make_sphere_family)


def finite_difference(fn, points, step=1e-5):
    out = []
    for axis in range(3):
        shift = np.zeros(3)
        shift[axis] = step
        out.append((fn(points + shift) - fn(points - shift)) / (2 * step))
    return np.stack(out, axis=-1)


class SpherePotentialTestCase(unittest.TestCase):
    """
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.model = SpherePotential(
            R=1.0, q=1.0, beta=0.5, modulation=PolarModulation(), P0=0.3)
        self.surface_points = self.model.surface.sample(64)
        self.points = self.model.sample_tube(32, seed=1)

    def test_surface_conditions(self):
        P = self.model
        np.testing.assert_allclose(P.value(self.surface_points), 0.3,
                                   atol=1e-14)
        np.testing.assert_allclose(P.gradient(self.surface_points), 0.0,
                                   atol=1e-13)
        hess = P.hessian([0.0, 0.0, 1.0])
        self.assertAlmostEqual(hess[2, 2], 2 * 1.0 * (1 + 0.5))

    def test_derivative_consistency(self):
        P = self.model
        np.testing.assert_allclose(
            finite_difference(P.value, self.points), P.gradient(self.points),
            rtol=1e-6, atol=1e-8)
        np.testing.assert_allclose(
            finite_difference(P.gradient, self.points),
            P.hessian(self.points), rtol=1e-6, atol=1e-7)
        np.testing.assert_allclose(
            finite_difference(P.laplacian, self.points),
            P.laplacian_gradient(self.points), rtol=1e-6, atol=1e-7)

    def test_tensor_symmetry(self):
        T = self.model.third(self.points)
        np.testing.assert_allclose(T, np.swapaxes(T, 1, 3), atol=1e-12)
        F = self.model.fourth(self.points[:4])
        np.testing.assert_allclose(F, np.swapaxes(F, 2, 4), atol=1e-10)
        self.assertEqual(self.model.fourth([1.0, 0.2, 0.1]).shape,
                         (3, 3, 3, 3))

    def test_tuned(self):
        tuned = SpherePotential(
            R=1.0, q=1.0, beta=0.5, modulation=PolarModulation(), tuned=True)
        self.assertAlmostEqual(tuned.k, -2.0 / 3.0)
        normals = self.surface_points / np.linalg.norm(
            self.surface_points, axis=1, keepdims=True)
        dnu = np.einsum('ni,ni->n',
                        tuned.laplacian_gradient(self.surface_points),
                        normals)
        np.testing.assert_allclose(dnu, 0.0, atol=1e-12)
        self.assertLessEqual(tuned.delta, 0.75)

    def test_invalid(self):
        with self.assertRaises(ValueError):
            SpherePotential(R=0.0)
        with self.assertRaises(NormalDegeneracyError):
            SpherePotential(q=0.0)
        with self.assertRaises(NormalDegeneracyError):
            SpherePotential(beta=1.0, modulation=PolarModulation())
        with self.assertRaises(ValueError):
            TiltedModulation(c=1.0)

    def test_to_config(self):
        rebuilt = build_potential(self.model.to_config())
        np.testing.assert_array_equal(
            rebuilt.value(self.points), self.model.value(self.points))
        unpickled = pickle.loads(pickle.dumps(self.model))
        np.testing.assert_array_equal(
            unpickled.hessian(self.points), self.model.hessian(self.points))
        family = make_sphere_family(1.0, 1.0, 0.5, 'PolarModulation', P0=0.3)
        self.assertEqual(family.to_config(), self.model.to_config())
        self.assertIn('PolarModulation', repr(self.model))

    def test_singular_points(self):
        np.testing.assert_array_equal(self.model.singular_points(),
                                      np.zeros((1, 3)))


class OtherPotentialTestCase(unittest.TestCase):
    """
    """

    def test_constant(self):
        P = ConstantPotential(1.5)
        self.assertEqual(P.value([0.1, 0.2, 0.3]), 1.5)
        self.assertEqual(P.hessian(np.zeros((4, 3))).shape, (4, 3, 3))
        self.assertIsNone(P.surface)
        self.assertEqual(build_potential(P.to_config()).P0, 1.5)

    def test_rotated(self):
        base = SpherePotential(
            R=1.0, q=2.0, beta=0.3, modulation=TiltedModulation(0.2))
        angle = 0.4
        Q = np.array([[np.cos(angle), -np.sin(angle), 0.0],
                      [np.sin(angle), np.cos(angle), 0.0], [0.0, 0.0, 1.0]])
        rotated = RotatedPotential(base, Q)
        points = base.sample_tube(16, seed=2)
        moved = points @ Q.T
        np.testing.assert_allclose(rotated.value(moved), base.value(points),
                                   atol=1e-13)
        np.testing.assert_allclose(
            rotated.gradient(moved), base.gradient(points) @ Q.T, atol=1e-12)
        np.testing.assert_allclose(
            rotated.laplacian(moved), base.laplacian(points), atol=1e-11)
        self.assertAlmostEqual(rotated.surface.distance(moved[0]),
                               base.surface.distance(points[0]))
        rebuilt = build_potential(rotated.to_config())
        np.testing.assert_allclose(rebuilt.value(moved), rotated.value(moved))
        with self.assertRaises(ValueError):
            RotatedPotential(base, 2 * np.eye(3))


if __name__ == "__main__":
    unittest.main()
