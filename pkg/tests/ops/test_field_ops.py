import unittest

import numpy as np
from scipy.special import erf

from snpeaks.errors import TruncationError
from snpeaks.geometries import Field3, Field3Grid
from snpeaks.ops import (boundary_ratio, gradient, helmholtz_solve,
                         laplacian_4th, laplacian_7pt, newton_field_3d,
                         newton_potential_3d, restrict)


def gaussian_mass(r):
    """∫_{|y|<r} e^{-|y|²} dy"""
    return np.pi**1.5 * (erf(r) - 2 * r * np.exp(-r**2) / np.sqrt(np.pi))


class DifferenceTestCase(unittest.TestCase):
    """
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.grid = Field3Grid.centered([0, 0, 0], 6.0, 64)
        self.r2 = self.grid.radius_from([0, 0, 0])**2
        self.f = np.exp(-self.r2)
        self.inner = (slice(4, -4), ) * 3

    def test_laplacian(self):
        exact = (4 * self.r2 - 6) * self.f
        h = self.grid.spacing
        err4 = np.max(np.abs(laplacian_4th(self.f, h) - exact)[self.inner])
        err2 = np.max(np.abs(laplacian_7pt(self.f, h) - exact)[self.inner])
        self.assertLess(err4, 1e-2)
        self.assertLess(err4, err2 / 10)

    def test_gradient(self):
        x = self.grid.mesh()[0]
        exact = -2 * x * self.f
        h = self.grid.spacing
        np.testing.assert_allclose(
            gradient(self.f, h, 0)[self.inner], exact[self.inner], atol=1e-3)
        err2 = np.max(np.abs(gradient(self.f, h, 0, order=2) - exact))
        self.assertGreater(err2, np.max(np.abs(gradient(self.f, h, 0) -
                                               exact)))


class HelmholtzTestCase(unittest.TestCase):
    """
    """

    def test_inverse(self):
        rng = np.random.default_rng(0)
        rhs = rng.normal(size=(32, 32, 32))
        h = 0.1
        x = helmholtz_solve(rhs, h, 3.0, scale=0.5)
        residual = -0.5 * laplacian_7pt(x, h) + 3.0 * x - rhs
        self.assertLess(np.max(np.abs(residual)), 1e-10)


class NewtonPotentialTestCase(unittest.TestCase):
    """
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.grid = Field3Grid.centered([0, 0, 0], 6.0, 64)
        self.r = self.grid.radius_from([0, 0, 0])
        self.density = Field3(self.grid, np.exp(-self.r**2))

    def test_potential(self):
        phi = newton_potential_3d(self.density).values
        mask = (self.r > 1.0) & (self.r < 4)
        exact = np.pi**1.5 * erf(self.r[mask]) / self.r[mask]
        np.testing.assert_allclose(phi[mask], exact, rtol=1e-2)

    def test_field(self):
        x = self.grid.mesh()[2]
        field = newton_field_3d(self.density, 2).values
        mask = (self.r > 2.0) & (self.r < 4) & (np.abs(x) > 1.0)
        exact = gaussian_mass(self.r[mask]) * x[mask] / self.r[mask]**3
        np.testing.assert_allclose(field[mask], exact, rtol=1e-2)

    def test_truncation(self):
        wide = Field3(self.grid, np.exp(-self.r**2 / 4))
        self.assertGreater(boundary_ratio(wide.values), 1e-4)
        with self.assertRaises(TruncationError):
            newton_potential_3d(wide)
        newton_potential_3d(wide, check=False)


class RestrictTestCase(unittest.TestCase):
    """
    """

    def test_restrict(self):
        values = np.arange(64**3, dtype=np.float64).reshape(64, 64, 64)
        coarse = restrict(values)
        self.assertEqual(coarse.shape, (32, 32, 32))
        self.assertAlmostEqual(coarse[0, 0, 0],
                               values[:2, :2, :2].mean())
        self.assertAlmostEqual(coarse.mean(), values.mean())
        with self.assertRaises(ValueError):
            restrict(np.zeros((33, 32, 32)))


if __name__ == "__main__":
    unittest.main()
