import os
import unittest

import numpy as np

from snpeaks.errors import GridMismatchError
from snpeaks.geometries import RadialGrid, RadialProfile
from snpeaks.utils.common import generate_tempdir


class RadialGridTestCase(unittest.TestCase):
    """
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.grid = RadialGrid(24.0, 4096)
        self.gauss = self.grid.profile(lambda r: np.exp(-r**2))

    def test_integrate(self):
        # ∫₀^∞ r² e^{-r²} dr = √π/4
        value = self.grid.integrate(self.gauss.values)
        self.assertAlmostEqual(value, np.sqrt(np.pi) / 4, places=10)
        self.assertAlmostEqual(self.gauss.moment(), np.pi**1.5, places=9)

    def test_coarsen_refine(self):
        self.assertEqual(self.grid.coarsen().N, 2048)
        self.assertEqual(self.grid.refine().N, 8192)
        with self.assertRaises(ValueError):
            RadialGrid(24.0, 101).coarsen()

    def test_invalid(self):
        with self.assertRaises(ValueError):
            RadialGrid(-1.0, 128)
        with self.assertRaises(GridMismatchError):
            RadialProfile(self.grid, np.zeros(10))


class RadialProfileTestCase(unittest.TestCase):
    """
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.grid = RadialGrid(24.0, 4096)
        self.f = self.grid.profile(lambda r: np.exp(-r**2))

    def test_interpolate(self):
        r = self.grid.nodes[100:110]
        np.testing.assert_allclose(self.f.interpolate(r), np.exp(-r**2),
                                   atol=1e-14)
        np.testing.assert_allclose(
            self.f.interpolate([0.3337, 1.2345]),
            np.exp(-np.array([0.3337, 1.2345])**2),
            atol=1e-9)
        self.assertEqual(self.f.interpolate([30.0])[0], 0.0)

    def test_derivative(self):
        r = self.grid.nodes
        d = self.f.derivative().values
        np.testing.assert_allclose(d, -2 * r * np.exp(-r**2), atol=1e-7)
        self.assertEqual(d[0], 0.0)

    def test_laplacian(self):
        r = self.grid.nodes
        lap = self.f.laplacian().values
        np.testing.assert_allclose(
            lap[:2000], (4 * r[:2000]**2 - 6) * np.exp(-r[:2000]**2),
            atol=1e-6)

    def test_arithmetic(self):
        g = self.f * self.f + self.f
        np.testing.assert_allclose(
            g.values, self.f.values**2 + self.f.values)
        with self.assertRaises(GridMismatchError):
            self.f + RadialGrid(24.0, 2048).profile(np.zeros(2049))

    def test_csv(self):
        with generate_tempdir() as tmpdir:
            path = os.path.join(tmpdir, 'f.csv')
            self.f.to_csv(path, name='f')
            loaded = RadialProfile.from_csv(path)
        self.assertEqual(loaded.grid, self.grid)
        np.testing.assert_array_equal(loaded.values, self.f.values)


if __name__ == "__main__":
    unittest.main()
