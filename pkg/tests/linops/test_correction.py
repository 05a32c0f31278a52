import os
import unittest

import numpy as np

from snpeaks.errors import InsufficientDataError
from snpeaks.geometries import RadialGrid
from snpeaks.groundstate import solve_ground_state
from snpeaks.linops import (LinearizedOperator, invertibility_ladder,
                            solve_correction)
from snpeaks.models import (ConstantPotential, PolarModulation,
                            SpherePotential)
from snpeaks.reduction import PeakAnsatz


class CorrectionTestCase(unittest.TestCase):
    """
    """

    @classmethod
    def setUpClass(cls):
        cls.bundle = solve_ground_state(
            RadialGrid(24.0, 2048), extrapolate=False)
        cls.model = SpherePotential(
            R=1.0, q=1.0, beta=0.5, modulation=PolarModulation())

    def test_constant_potential(self):
        ansatz = PeakAnsatz(0.1, [0, 0, 1], self.bundle, P0=0.5)
        result = solve_correction(ansatz, ConstantPotential(0.5), cells=32)
        self.assertEqual(result.norm_a, 0.0)
        self.assertEqual(result.iterations, 0)
        self.assertFalse(np.any(result.phi.values))

    def test_projected_solve(self):
        ansatz = PeakAnsatz(0.1, [0, 0, 1], self.bundle)
        result = solve_correction(ansatz, self.model, cells=32)
        self.assertLess(result.residual, 1e-8)
        self.assertGreater(result.norm_a, 0)
        self.assertGreater(result.rho, 0)
        self.assertLessEqual(result.rho, result.rho_solution)
        tracked = [t['rho'] for t in result.trace if 'rho' in t]
        # the running minimum never increases
        self.assertTrue(np.all(np.diff(tracked) <= 0))
        self.assertEqual(result.multipliers.shape, (3, ))

        op = LinearizedOperator(ansatz, self.model, result.phi.grid)
        phi = result.phi.values
        # phi lies in the complement of the translation modes
        overlaps = op.Y @ phi.ravel()
        scale = np.linalg.norm(op.Y, axis=1) * np.linalg.norm(phi)
        self.assertTrue(np.all(np.abs(overlaps) < 1e-8 * scale))
        self.assertLess(result.norm_a, 1e-2 * op.norm_a(op.W))

        dic = result.to_dict()
        self.assertEqual(dic['iterations'], result.iterations)
        self.assertIn('c3', dic)
        self.assertEqual(dic['rho_solution'], result.rho_solution)


class InvertibilityLadderTestCase(unittest.TestCase):
    """
    """

    def test_settling(self):
        verdict = invertibility_ladder([0.035, 0.1, 0.0707, 0.05],
                                       [0.425, 0.5, 0.45, 0.43])
        self.assertEqual(verdict['eps'], [0.1, 0.0707, 0.05, 0.035])
        self.assertTrue(verdict['monotone'])
        self.assertTrue(verdict['settled'])
        self.assertTrue(verdict['passed'])
        self.assertAlmostEqual(verdict['changes'][0], 0.1)
        self.assertAlmostEqual(verdict['rho_min'], 0.425)

    def test_collapsing(self):
        verdict = invertibility_ladder([0.1, 0.0707, 0.05, 0.035],
                                       [0.5, 0.4, 0.2, 0.05])
        self.assertFalse(verdict['monotone'])
        self.assertFalse(verdict['settled'])
        self.assertFalse(verdict['passed'])

    def test_not_positive(self):
        verdict = invertibility_ladder([0.1, 0.0707, 0.05],
                                       [0.5, 0.5, float('nan')])
        self.assertFalse(verdict['positive'])
        self.assertFalse(verdict['passed'])

    def test_too_few(self):
        with self.assertRaises(InsufficientDataError):
            invertibility_ladder([0.1, 0.05], [0.5, 0.5])


@unittest.skipUnless(os.environ.get('SNPEAKS_SLOW'), 'slow correction ladder')
class CorrectionLadderTestCase(unittest.TestCase):
    """
    """

    @classmethod
    def setUpClass(cls):
        cls.bundle = solve_ground_state(
            RadialGrid(24.0, 2048), extrapolate=False)
        cls.model = SpherePotential(
            R=1.0, q=1.0, beta=0.5, modulation=PolarModulation())

    def test_pole_ladder(self):
        eps = [0.1, 0.0707, 0.05]
        rho = [
            solve_correction(
                PeakAnsatz(e, [0, 0, 1], self.bundle), self.model,
                cells=32).rho for e in eps
        ]
        verdict = invertibility_ladder(eps, rho)
        self.assertTrue(verdict['positive'])
        self.assertTrue(verdict['settled'], verdict)


if __name__ == "__main__":
    unittest.main()
