# Copyright (c) 2026 snpeaks Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from snpeaks.errors import DiscretizationError
from snpeaks.geometries.radial import RadialGrid
from snpeaks.groundstate.bundle import GroundStateBundle
from snpeaks.linops.sector import (SectorOperator, build_Lbar, build_Ltilde,
                                   kernel_candidates, profile_on)
from snpeaks.utils.logger import logger

__all__ = [
    'KernelReport', 'EXPECTED_KERNEL', 'kernel_report', 'sector_gap',
    'coercivity_bound'
]

# kind -> {ell: dimension}; every other sector must be kernel-free
EXPECTED_KERNEL = {'Lbar': {1: 1}, 'Ltilde': {0: 1, 1: 1}}


@dataclass
class KernelReport:
    """Near-zero spectrum of L̄ and L̃ per sector."""
    grid: RadialGrid
    kernel_tol: float
    rows: List[Dict] = field(default_factory=list)
    kernel_dimensions: Dict[str, Dict[int, int]] = field(default_factory=dict)
    overlaps: Dict[Tuple[str, int], float] = field(default_factory=dict)
    gaps: Dict[Tuple[str, int], float] = field(default_factory=dict)
    refined: bool = False

    @property
    def gamma_bar(self) -> float:
        """Smallest off-kernel gap of L̃ over the sectors."""
        return min(v for (kind, _), v in self.gaps.items() if kind == 'Ltilde')

    def dimensions_match(self) -> bool:
        for kind, expected in EXPECTED_KERNEL.items():
            found = {
                ell: n
                for ell, n in self.kernel_dimensions.get(kind, {}).items()
                if n
            }
            if found != expected:
                return False
        return True

    def summary(self) -> str:
        lines = [
            'kernel report on {} (kernel_tol={:.1e}{})'.format(
                self.grid, self.kernel_tol, ', refined' if self.refined else '')
        ]
        for kind in ('Lbar', 'Ltilde'):
            dims = self.kernel_dimensions.get(kind, {})
            lines.append('  {:6s} kernel dims {}'.format(
                kind, {ell: n for ell, n in dims.items() if n}))
        for (kind, ell), value in sorted(self.overlaps.items()):
            lines.append('  {:6s} l={} zero-mode overlap {:.8f}'.format(
                kind, ell, value))
        lines.append('  gamma_bar = {:.6g}'.format(self.gamma_bar))
        return '\n'.join(lines)


def _overlap(op: SectorOperator, vector: np.ndarray, candidate) -> float:
    c = op.to_vector(candidate)
    return float(
        abs(np.dot(vector, c)) / (np.linalg.norm(vector) * np.linalg.norm(c)))


def sector_gap(op: SectorOperator, kernel: np.ndarray) -> float:
    """
    inf ‖Lv‖/‖v‖ over v orthogonal to the columns of `kernel`, i.e. the
    smallest singular value of L on the orthogonal complement.
    """
    if kernel.shape[1] == 0:
        basis = None
    else:
        basis = scipy.linalg.null_space(kernel.T)
    if op.symmetric:
        values = np.linalg.eigvalsh(op.matrix) if basis is None else \
            np.linalg.eigvalsh(basis.T @ op.matrix @ basis)
        return float(np.min(np.abs(values)))
    restricted = op.matrix if basis is None else op.matrix @ basis
    return float(scipy.linalg.svdvals(restricted).min())


def _analyse(op: SectorOperator, num_eigs: int, kernel_tol: float, psi0, dU):
    values, vectors = op.eigenpairs(num_eigs)
    threshold = kernel_tol * op.spectral_scale
    zero = np.abs(values) < threshold
    rows = []
    overlap = None
    candidate = None
    if op.ell == 0 and op.kind == 'Ltilde':
        candidate = psi0
    elif op.ell == 1:
        candidate = dU
    for i, value in enumerate(values):
        row = {
            'sector': op.ell,
            'kind': op.kind,
            'index': i,
            'eigenvalue': float(value),
            'zero_mode': bool(zero[i]),
            'overlap': float('nan')
        }
        if zero[i] and candidate is not None:
            row['overlap'] = _overlap(op, vectors[:, i], candidate)
            overlap = row['overlap'] if overlap is None else max(
                overlap, row['overlap'])
        rows.append(row)
    kernel = vectors[:, zero]
    return rows, int(zero.sum()), overlap, sector_gap(op, kernel)


def _spurious(report: KernelReport) -> bool:
    for kind, dims in report.kernel_dimensions.items():
        for ell, n in dims.items():
            if n > EXPECTED_KERNEL[kind].get(ell, 0):
                return True
    return False


def _build_report(bundle, grid, ells, kernel_tol, num_eigs) -> KernelReport:
    report = KernelReport(grid=grid, kernel_tol=kernel_tol)
    psi0, dU = kernel_candidates(profile_on(bundle.U, grid))
    for kind, builder in (('Lbar', build_Lbar), ('Ltilde', build_Ltilde)):
        report.kernel_dimensions[kind] = {}
        for ell in ells:
            op = builder(ell, bundle, grid)
            rows, dim, overlap, gap = _analyse(op, num_eigs, kernel_tol, psi0,
                                               dU)
            report.rows.extend(rows)
            report.kernel_dimensions[kind][ell] = dim
            report.gaps[(kind, ell)] = gap
            if overlap is not None:
                report.overlaps[(kind, ell)] = overlap
            logger.debug('{} l={}: eigenvalues {} gap {:.6g}'.format(
                kind, ell, np.round([r['eigenvalue'] for r in rows], 8),
                gap))
    return report


def kernel_report(bundle: GroundStateBundle,
                  grid: Optional[RadialGrid] = None,
                  ells: Sequence[int] = (0, 1, 2, 3, 4),
                  kernel_tol: float = 1e-6,
                  num_eigs: int = 6) -> KernelReport:
    """
    Near-zero eigenvalues (|λ| < kernel_tol·4/h²) of L̄ and L̃ for every
    sector in `ells`, overlaps of the zero modes with ψ0 and U', and the
    off-kernel gap of each sector.

    Extra near-zero modes trigger one refinement of the grid; if they
    persist the discretization is declared unresolved.

    Raises:
        DiscretizationError: spurious near-zero modes after refinement.
    """
    grid = grid or RadialGrid(bundle.grid.R_max, 1024)
    report = _build_report(bundle, grid, ells, kernel_tol, num_eigs)
    if _spurious(report):
        logger.warning('Spurious near-zero modes on {}; refining once'.format(
            grid))
        report = _build_report(bundle, grid.refine(), ells, kernel_tol,
                               num_eigs)
        report.refined = True
        if _spurious(report):
            raise DiscretizationError(
                'Spurious near-zero modes persist on {}: {}'.format(
                    report.grid, report.kernel_dimensions), report.rows)
    logger.info(report.summary())
    return report


def coercivity_bound(bundle: GroundStateBundle,
                     ells: Sequence[int] = (0, 1, 2, 3, 4),
                     grid: Optional[RadialGrid] = None,
                     kernel_tol: float = 1e-6,
                     num_eigs: int = 6) -> Tuple[float, Dict[int, float]]:
    """γ̄ = min over sectors of the off-kernel gap of L̃, and the gaps."""
    grid = grid or RadialGrid(bundle.grid.R_max, 1024)
    psi0, dU = kernel_candidates(profile_on(bundle.U, grid))
    gaps = {}
    for ell in ells:
        op = build_Ltilde(ell, bundle, grid)
        gaps[ell] = _analyse(op, num_eigs, kernel_tol, psi0, dU)[3]
    return min(gaps.values()), gaps
