import dataclasses
import os
import types
import unittest

import numpy as np

from snpeaks.errors import DegeneracyError, DomainError, InsufficientDataError
from snpeaks.geometries import RadialGrid
from snpeaks.groundstate import solve_ground_state
from snpeaks.models import (ConstantPotential, PolarModulation,
                            RotatedPotential, SpherePotential)
from snpeaks.reduction import (PeakAnsatz, moment_expansion, mu_a_expansion,
                               normal_offset_constant, peak_quadrature,
                               predicted_force, reduced_force,
                               reduction_mu_a_pairs,
                               solve_normal_offset, solve_peak,
                               verify_normal_law, verify_tangential_law)


class AnsatzTestCase(unittest.TestCase):
    """
    """

    @classmethod
    def setUpClass(cls):
        cls.bundle = solve_ground_state(
            RadialGrid(24.0, 2048), extrapolate=False)

    def test_scaling(self):
        ansatz = PeakAnsatz(0.1, [0.1, 0.0, 1.0], self.bundle, P0=0.5)
        self.assertAlmostEqual(ansatz.amplitude, 1.005)
        self.assertAlmostEqual(ansatz.value(ansatz.center)[0],
                               1.005 * self.bundle.U.values[0])
        rule = peak_quadrature(ansatz, 16 * ansatz.epsilon)
        mass = rule.integrate(ansatz.density(rule.points))
        self.assertAlmostEqual(mass / ansatz.mass, 1.0, places=6)
        self.assertAlmostEqual(ansatz.support_radius,
                               24.0 * 0.1 / np.sqrt(1.005))

    def test_gradient(self):
        ansatz = PeakAnsatz(0.2, [0.0, 0.0, 0.0], self.bundle)
        points = np.array([[0.1, 0.05, -0.2], [0.3, 0.0, 0.0]])
        step = 1e-6
        fd = np.stack([(ansatz.value(points + step * e) -
                        ansatz.value(points - step * e)) / (2 * step)
                       for e in np.eye(3)], axis=1)
        np.testing.assert_allclose(ansatz.gradient(points), fd, atol=1e-6)

    def test_invalid(self):
        with self.assertRaises(ValueError):
            PeakAnsatz(0.0, [0, 0, 0], self.bundle)


class ReducedForceTestCase(unittest.TestCase):
    """
    """

    @classmethod
    def setUpClass(cls):
        cls.bundle = solve_ground_state(
            RadialGrid(24.0, 2048), extrapolate=False)
        cls.model = SpherePotential(
            R=1.0, q=1.0, beta=0.5, modulation=PolarModulation())

    def test_constant_potential(self):
        report = reduced_force(ConstantPotential(0.3), [0.2, 0.1, 0.0], 0.1,
                               self.bundle)
        np.testing.assert_array_equal(report.force, np.zeros(3))
        self.assertTrue(np.isnan(report.normal))
        self.assertIsNone(report.tangential)

    def test_moment_expansion(self):
        result = moment_expansion('x0**2 + 3*x1*x2 - x2', [0.3, 0.1, 0.2],
                                  0.1, self.bundle, P0=0.4)
        self.assertLess(result['relative_error'], 1e-5)

    def test_predicted(self):
        z = [0.0, 0.3, 1.05]
        report = reduced_force(self.model, z, 0.05, self.bundle)
        predicted = predicted_force(self.model, z, 0.05, self.bundle)
        self.assertLess(
            np.linalg.norm(report.force - predicted),
            1e-3 * np.linalg.norm(predicted))
        self.assertLess(report.quad_error, 1e-6 * report.magnitude)
        frame_force = np.hypot(report.normal,
                               np.linalg.norm(report.tangential))
        self.assertAlmostEqual(frame_force / report.magnitude, 1.0)
        self.assertIn('F_tau2', report.to_dict())

    def test_singular_point(self):
        with self.assertRaises(DomainError):
            reduced_force(self.model, [0.0, 0.0, 0.05], 0.1, self.bundle)

    def test_rotation_equivariance(self):
        rng = np.random.default_rng(7)
        Q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        if np.linalg.det(Q) < 0:
            Q[:, 0] = -Q[:, 0]
        z = np.array([0.1, 0.2, 1.1])
        report = reduced_force(self.model, z, 0.05, self.bundle)
        rotated = reduced_force(RotatedPotential(self.model, Q), Q @ z, 0.05,
                                self.bundle)
        # the ball rule is not rotated with the potential
        tol = 1e-8 * report.magnitude + report.quad_error + rotated.quad_error
        self.assertLess(np.linalg.norm(rotated.force - Q @ report.force), tol)
        self.assertLess(abs(rotated.normal - report.normal), tol)

    def test_localization(self):
        z = [0.1, 0.2, 1.1]
        inner = reduced_force(self.model, z, 0.05, self.bundle, rho_factor=16)
        outer = reduced_force(self.model, z, 0.05, self.bundle, rho_factor=20)
        self.assertAlmostEqual(outer.rho, 1.0)
        tol = 1e-8 * inner.magnitude + inner.quad_error + outer.quad_error
        self.assertLess(np.linalg.norm(outer.force - inner.force), tol)


class PeakTestCase(unittest.TestCase):
    """
    """

    @classmethod
    def setUpClass(cls):
        cls.bundle = solve_ground_state(
            RadialGrid(24.0, 2048), extrapolate=False)
        cls.model = SpherePotential(
            R=1.0, q=1.0, beta=0.5, modulation=PolarModulation())

    def test_pole(self):
        eps = 0.1
        solution = solve_peak(self.model, eps, [0, 0, 1], self.bundle)
        self.assertTrue(solution.converged)
        self.assertLess(np.linalg.norm(solution.center[:2]), 1e-8)
        constant = normal_offset_constant(self.model, [0, 0, 1], self.bundle)
        self.assertNotEqual(constant, 0.0)
        self.assertAlmostEqual(
            (solution.center[2] - 1) / eps**2 / constant, 1.0, delta=0.2)
        self.assertEqual(solution.trace[0]['iteration'], 0)
        self.assertEqual(solution.to_dict()['iterations'],
                         solution.iterations)

    def test_symmetric_family(self):
        # rotational symmetry leaves the tangential Jacobian singular at
        # the root of the normal force
        symmetric = SpherePotential(R=1.0, q=1.0)
        eps = 0.1
        offset = solve_normal_offset(symmetric, [0, 0, 1], eps, self.bundle)
        constant = normal_offset_constant(symmetric, [0, 0, 1], self.bundle)
        self.assertAlmostEqual(offset / eps**2 / constant, 1.0, delta=0.2)
        with self.assertRaises(DegeneracyError):
            solve_peak(symmetric, eps, [0, 0, 1 + offset + 1e-9],
                       self.bundle)


class MuAExpansionTestCase(unittest.TestCase):
    """
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.bundle = types.SimpleNamespace(a_star=50.0)

    def pairs(self, P0, quartic):
        delta = np.array([0.2, 0.1, 0.05, 0.025])
        a = self.bundle.a_star / delta
        mu = -(1 - P0 * delta**2 + quartic * delta**4) / delta**2
        return list(zip(a, mu))

    def test_expansion(self):
        fit = mu_a_expansion(self.pairs(0.5, 0.3), self.bundle, P0=0.5)
        self.assertTrue(fit.passed)
        self.assertAlmostEqual(fit.details['gamma1_fit'], -0.5, places=6)
        self.assertAlmostEqual(fit.remainder_power, 4.0, places=6)

    def test_wrong_gamma(self):
        fit = mu_a_expansion(self.pairs(0.5, 0.0), self.bundle, P0=0.0)
        self.assertFalse(fit.passed)

    def test_too_few(self):
        with self.assertRaises(InsufficientDataError):
            mu_a_expansion(self.pairs(0.5, 0.3)[:3], self.bundle)

    def test_mass_offset(self):
        # masses 1% off a* leave an intercept that no δ² law absorbs
        pairs = [(1.01 * a, mu) for a, mu in self.pairs(0.5, 0.3)]
        fit = mu_a_expansion(pairs, self.bundle, P0=0.5)
        self.assertFalse(fit.passed)
        self.assertAlmostEqual(fit.details['intercept'], 1.01**-2 - 1,
                               places=6)


class ReductionMuATestCase(unittest.TestCase):
    """
    """

    @classmethod
    def setUpClass(cls):
        cls.bundle = solve_ground_state(
            RadialGrid(24.0, 2048), extrapolate=False)
        cls.model = ConstantPotential(0.7)
        cls.eps = [0.1, 0.0707, 0.05, 0.0354]

    def test_constant_potential(self):
        pairs = reduction_mu_a_pairs(self.model, [0, 0, 0], self.eps,
                                     self.bundle)
        fit = mu_a_expansion(pairs, self.bundle, P0=0.7)
        self.assertLess(abs(fit.details['intercept']), 1e-5)
        self.assertAlmostEqual(fit.details['gamma1_fit'], -0.7, places=3)

    def test_wrong_a_star(self):
        wrong = dataclasses.replace(self.bundle, a_star=1.0)
        pairs = reduction_mu_a_pairs(self.model, [0, 0, 0], self.eps, wrong)
        fit = mu_a_expansion(pairs, wrong, P0=0.7)
        self.assertFalse(fit.passed)
        self.assertGreater(abs(fit.details['intercept']), 0.5)


@unittest.skipUnless(os.environ.get('SNPEAKS_SLOW'), 'slow peak ladders')
class LawsTestCase(unittest.TestCase):
    """
    """

    @classmethod
    def setUpClass(cls):
        cls.bundle = solve_ground_state()
        cls.eps = [0.1, 0.0707, 0.05, 0.0354]

    def test_normal_law(self):
        model = SpherePotential(
            R=1.0, q=1.0, beta=0.5, modulation=PolarModulation())
        fit = verify_normal_law(model, [0, 0, 1], self.eps, self.bundle,
                                workers=4)
        self.assertTrue(fit.passed, fit.summary())
        self.assertEqual(fit.details['mode'], 'quadratic')

    def test_tuned_normal_law(self):
        model = SpherePotential(
            R=1.0, q=1.0, beta=0.5, modulation=PolarModulation(), tuned=True)
        fit = verify_normal_law(model, [0, 0, 1], self.eps, self.bundle,
                                workers=4)
        self.assertEqual(fit.details['mode'], 'quartic')
        self.assertTrue(fit.passed, fit.summary())

    def test_tangential_law(self):
        model = SpherePotential(
            R=1.0, q=1.0, beta=0.5, modulation=PolarModulation())
        fit = verify_tangential_law(model, [0, 0, 1], self.eps, self.bundle,
                                    workers=4)
        self.assertTrue(fit.passed, fit.summary())


if __name__ == "__main__":
    unittest.main()
