import unittest

import numpy as np
import scipy.linalg

from snpeaks.errors import CapabilityError
from snpeaks.geometries import RadialGrid
from snpeaks.groundstate import solve_ground_state
from snpeaks.linops import (EXPECTED_KERNEL, build_Lbar, build_Ltilde,
                            coercivity_bound, kernel_candidates,
                            kernel_report)


class SectorOperatorTestCase(unittest.TestCase):
    """
    """

    @classmethod
    def setUpClass(cls):
        cls.bundle = solve_ground_state(
            RadialGrid(24.0, 2048), extrapolate=False)
        cls.grid = RadialGrid(24.0, 1024)
        cls.psi0, cls.dU = kernel_candidates(cls.bundle.U)

    def test_symmetry(self):
        rng = np.random.default_rng(0)
        for ell in (0, 1, 2):
            op = build_Lbar(ell, self.bundle, self.grid)
            u = op.to_profile(rng.normal(size=op.size))
            w = op.to_profile(rng.normal(size=op.size))
            lhs = op.inner(op.apply(u), w)
            rhs = op.inner(u, op.apply(w))
            self.assertLess(abs(lhs - rhs), 1e-10 * max(abs(lhs), 1.0))
            self.assertTrue(op.symmetric)
        self.assertFalse(build_Ltilde(0, self.bundle, self.grid).symmetric)

    def test_translation_mode(self):
        op = build_Lbar(1, self.bundle)
        self.assertLess(op.relative_residual(self.dU), 1e-6)

    def test_dilation_mode(self):
        op = build_Ltilde(0, self.bundle)
        self.assertLess(op.relative_residual(self.psi0), 1e-5)

    def test_rank_one_term(self):
        for ell in (1, 2, 3):
            np.testing.assert_array_equal(
                build_Lbar(ell, self.bundle, self.grid).matrix,
                build_Ltilde(ell, self.bundle, self.grid).matrix)
        self.assertFalse(
            np.array_equal(
                build_Lbar(0, self.bundle, self.grid).matrix,
                build_Ltilde(0, self.bundle, self.grid).matrix))

    def test_sector_signs(self):
        op = build_Lbar(0, self.bundle, self.grid)
        values = op.eigenvalues(2)
        threshold = 1e-6 * op.spectral_scale
        self.assertLess(values[0], -threshold)
        self.assertGreater(values[1], threshold)
        self.assertGreater(
            build_Lbar(2, self.bundle, self.grid).eigenvalues(1)[0],
            threshold)

    def test_ell_range(self):
        with self.assertRaises(CapabilityError):
            build_Lbar(9, self.bundle)
        with self.assertRaises(CapabilityError):
            build_Ltilde(-1, self.bundle)


class KernelReportTestCase(unittest.TestCase):
    """
    """

    @classmethod
    def setUpClass(cls):
        cls.bundle = solve_ground_state(
            RadialGrid(24.0, 2048), extrapolate=False)
        cls.report = kernel_report(cls.bundle)

    def test_dimensions(self):
        self.assertTrue(self.report.dimensions_match())
        self.assertFalse(self.report.refined)
        for kind, expected in EXPECTED_KERNEL.items():
            dims = self.report.kernel_dimensions[kind]
            self.assertEqual({k: v for k, v in dims.items() if v}, expected)
        self.assertEqual(self.report.kernel_dimensions['Lbar'][0], 0)

    def test_overlaps(self):
        self.assertGreaterEqual(self.report.overlaps[('Lbar', 1)], 0.9999)
        self.assertGreaterEqual(self.report.overlaps[('Ltilde', 1)], 0.9999)
        self.assertGreaterEqual(self.report.overlaps[('Ltilde', 0)], 0.999)
        for value in self.report.overlaps.values():
            self.assertLessEqual(value, 1.0 + 1e-12)

    def test_rows(self):
        keys = {'sector', 'kind', 'index', 'eigenvalue', 'zero_mode',
                'overlap'}
        for row in self.report.rows:
            self.assertEqual(set(row), keys)
        zero_rows = [r for r in self.report.rows if r['zero_mode']]
        self.assertEqual(len(zero_rows), 3)
        self.assertIn('gamma_bar', self.report.summary())

    def test_coercivity(self):
        gamma, gaps = coercivity_bound(self.bundle, ells=(0, 1, 2))
        self.assertGreater(gamma, 0)
        self.assertEqual(gamma, min(gaps.values()))
        self.assertLessEqual(self.report.gamma_bar, gamma + 1e-12)

        # random profiles off the kernel obey |L u| >= gamma |u|
        rng = np.random.default_rng(1)
        for ell in (0, 2):
            op = build_Ltilde(ell, self.bundle, self.report.grid)
            values, vectors = op.eigenpairs(6)
            kernel = vectors[:, np.abs(values) < 1e-6 * op.spectral_scale]
            basis = scipy.linalg.null_space(kernel.T) if kernel.shape[1] \
                else np.eye(op.size)
            samples = basis @ rng.normal(size=(basis.shape[1], 50))
            ratios = np.linalg.norm(op.matrix @ samples, axis=0) / \
                np.linalg.norm(samples, axis=0)
            self.assertTrue(np.all(ratios >= 0.9 * gamma))


if __name__ == "__main__":
    unittest.main()
