import unittest

import numpy as np
from scipy.special import erf

from snpeaks.errors import CapabilityError
from snpeaks.geometries import Field3Grid, RadialGrid
from snpeaks.ops import (double_integral_oracle, enclosed_mass,
                         newton_potential_sector, radial_to_field3)


class SectorPotentialTestCase(unittest.TestCase):
    """
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.grid = RadialGrid(24.0, 4096)
        self.f = self.grid.profile(lambda r: np.exp(-r**2 / 2))

    def test_monopole(self):
        # (1/|x|) * e^{-|x|²} = π^{3/2} erf(r)/r
        h = newton_potential_sector(self.f, self.f, 0).values
        r = self.grid.nodes
        mask = (r > 0.5) & (r < 10)
        np.testing.assert_allclose(
            h[mask], np.pi**1.5 * erf(r[mask]) / r[mask], rtol=1e-4)
        self.assertAlmostEqual(h[0] / (2 * np.pi), 1.0, places=5)

    def test_oracle(self):
        grid = RadialGrid(24.0, 1024)
        f = grid.profile(lambda r: np.exp(-r**2 / 2))
        g = grid.profile(lambda r: r**2 * np.exp(-r**2 / 2))
        r = grid.nodes
        mask = (r > 0.5) & (r < 8)
        for ell in (0, 2, 5):
            fast = newton_potential_sector(f, g, ell).values
            slow = double_integral_oracle(f, g, ell).values
            np.testing.assert_allclose(fast[mask], slow[mask], rtol=1e-3)

    def test_ell_range(self):
        with self.assertRaises(CapabilityError):
            newton_potential_sector(self.f, self.f, 9)


class EnclosedMassTestCase(unittest.TestCase):
    """
    """

    def test_gaussian(self):
        grid = RadialGrid(24.0, 4096)
        density = grid.profile(lambda r: np.exp(-r**2))
        m = enclosed_mass(density)
        self.assertAlmostEqual(m.values[-1] / np.pi**1.5, 1.0, places=8)
        exact = np.pi**1.5 * (erf(1.0) - 2 * np.exp(-1.0) / np.sqrt(np.pi))
        self.assertAlmostEqual(m.interpolate([1.0])[0] / exact, 1.0, places=5)


class RadialToField3TestCase(unittest.TestCase):
    """
    """

    def test_sampling(self):
        radial = RadialGrid(24.0, 4096)
        f = radial.profile(lambda r: np.exp(-r**2))
        grid = Field3Grid.centered([1, 0, 0], 1.0, 32)
        center = [1.1, 0.0, -0.05]
        field = radial_to_field3(f, center, grid, scale=3.0, amplitude=2.0)
        r = grid.radius_from(center)
        np.testing.assert_allclose(
            field.values, 2.0 * np.exp(-9 * r**2), atol=1e-9)


if __name__ == "__main__":
    unittest.main()
