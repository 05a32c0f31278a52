import os
import unittest

import numpy as np

from snpeaks.errors import InsufficientDataError
from snpeaks.reduction import (ExpansionFit, check_ladder, fit_power,
                               geometric_ladder, richardson)
from snpeaks.utils.common import generate_tempdir, read_table


class LadderTestCase(unittest.TestCase):
    """
    """

    def test_geometric(self):
        eps = geometric_ladder(0.1, 0.5, 4)
        np.testing.assert_allclose(eps, [0.1, 0.05, 0.025, 0.0125])
        check_ladder(eps)

    def test_invalid(self):
        with self.assertRaises(InsufficientDataError):
            check_ladder([0.1, 0.05, 0.025])
        with self.assertRaises(ValueError):
            check_ladder([0.1, 0.05, 0.0, -0.1])

    def test_fit_power(self):
        x = geometric_ladder(0.2, 0.7, 5)
        power, constant = fit_power(x, -3 * x**2)
        self.assertAlmostEqual(power, 2.0)
        self.assertAlmostEqual(constant, 3.0)
        with self.assertRaises(InsufficientDataError):
            fit_power(x, [1.0, 0, 0, 0, 0])

    def test_richardson(self):
        x = geometric_ladder(0.2, 0.7, 4)
        self.assertAlmostEqual(richardson(x, 1 + 2 * x**2), 1.0)
        self.assertAlmostEqual(richardson(x, 1 - x**4, power=4), 1.0)
        with self.assertRaises(InsufficientDataError):
            richardson([0.1], [1.0])


class ExpansionFitTestCase(unittest.TestCase):
    """
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        eps = geometric_ladder(0.1, 0.5, 4)
        self.fit = ExpansionFit(
            name='offset',
            eps=eps,
            measured=2 * eps**2 + 0.5 * eps**4,
            predicted=2 * eps**2)

    def test_fits(self):
        fit = self.fit.fit_leading().fit_remainder()
        self.assertAlmostEqual(fit.power, 2.0, places=2)
        self.assertAlmostEqual(fit.remainder_power, 4.0)
        np.testing.assert_allclose(fit.residual, 0.5 * fit.eps**4)
        summary = fit.summary()
        self.assertEqual(summary['name'], 'offset')
        self.assertIsInstance(summary['power'], float)
        self.assertIn('remainder_power', repr(fit))

    def test_csv(self):
        fit = self.fit.fit_leading()
        with generate_tempdir() as tmpdir:
            path = fit.to_csv(
                os.path.join(tmpdir, 'offset.csv'), header={'name': 'offset'})
            script = fit.plot_script(path)
            table = read_table(path)
            self.assertTrue(os.path.exists(script))
            with open(script) as f:
                self.assertIn('offset.csv', f.read())
        self.assertEqual(
            list(table.columns), ['eps', 'measured', 'predicted', 'residual'])
        np.testing.assert_array_equal(table['measured'].values, fit.measured)


if __name__ == "__main__":
    unittest.main()
