import os
import unittest

import numpy as np

from snpeaks.errors import GeometryError, GridMismatchError
from snpeaks.geometries import Field3, Field3Grid
from snpeaks.utils.common import generate_tempdir


class Field3GridTestCase(unittest.TestCase):
    """
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.grid = Field3Grid.centered([0.5, 0.0, -0.5], 2.0, 32)

    def test_layout(self):
        self.assertEqual(self.grid.shape, (32, 32, 32))
        self.assertAlmostEqual(self.grid.spacing, 0.125)
        np.testing.assert_allclose(self.grid.center, [0.5, 0.0, -0.5])
        x = self.grid.axes()[0]
        self.assertAlmostEqual(x[0], -1.5 + 0.0625)
        self.assertEqual(self.grid.refine().shape, (64, 64, 64))
        self.assertEqual(self.grid.coarsen().shape, (16, 16, 16))

    def test_cells_must_be_powers_of_two(self):
        with self.assertRaises(ValueError):
            Field3Grid([0, 0, 0], 0.1, 48)
        with self.assertRaises(ValueError):
            Field3Grid([0, 0, 0], 0.1, 16)

    def test_ball_clearance(self):
        self.assertTrue(self.grid.contains_ball([0.5, 0, -0.5], 1.0, 4))
        self.assertFalse(self.grid.contains_ball([0.5, 0, -0.5], 1.9, 4))
        with self.assertRaises(GeometryError) as ctx:
            self.grid.check_ball([2.45, 0, 0], 0.1)
        self.assertLess(ctx.exception.distance, 0)

    def test_dict(self):
        self.assertEqual(Field3Grid.from_dict(self.grid.to_dict()), self.grid)


class Field3TestCase(unittest.TestCase):
    """
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.grid = Field3Grid.centered([0, 0, 0], 6.0, 64)
        self.center = np.array([0.1, -0.2, 0.05])
        r2 = self.grid.radius_from(self.center)**2
        self.field = Field3(self.grid, np.exp(-r2))

    def test_mass(self):
        # ∫ e^{-2|x|²} dx = (π/2)^{3/2}
        self.assertAlmostEqual(self.field.mass(), (np.pi / 2)**1.5, places=8)
        self.assertAlmostEqual(self.field.integral(), np.pi**1.5, places=8)

    def test_sample(self):
        points = np.array([[0.3, 0.2, -0.1], [1.0, 0.5, 0.25]])
        exact = np.exp(-np.sum((points - self.center)**2, axis=1))
        np.testing.assert_allclose(
            self.field.sample(points, order=3), exact, rtol=1e-3)
        np.testing.assert_allclose(
            self.field.sample(points, order=1), exact, rtol=5e-2)
        self.assertEqual(self.field.sample(np.array([[10., 0, 0]]))[0], 0.0)

    def test_argmax(self):
        np.testing.assert_allclose(
            self.field.argmax_interpolated(), self.center, atol=5e-3)

    def test_grid_mismatch(self):
        with self.assertRaises(GridMismatchError):
            Field3(self.grid, np.zeros((32, 32, 32)))
        other = Field3(Field3Grid.centered([0, 0, 0], 5.0, 64),
                       np.zeros((64, 64, 64)))
        with self.assertRaises(GridMismatchError):
            self.field.dot(other)

    def test_save_load(self):
        with generate_tempdir() as tmpdir:
            prefix = os.path.join(tmpdir, 'u')
            self.field.save(prefix)
            self.assertTrue(os.path.exists(prefix + '.bin'))
            loaded = Field3.load(prefix)
        self.assertEqual(loaded.grid, self.grid)
        np.testing.assert_array_equal(loaded.values, self.field.values)


if __name__ == "__main__":
    unittest.main()
