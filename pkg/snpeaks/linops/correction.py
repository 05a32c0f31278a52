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
from typing import Dict, List, Sequence

import numpy as np
from scipy.sparse.linalg import LinearOperator, minres

from snpeaks.apis.scheduler import FlowScheduler
from snpeaks.errors import (DomainError, IllConditionedError,
                            InsufficientDataError)
from snpeaks.geometries.field import Field3, Field3Grid
from snpeaks.ops.field_ops import (helmholtz_solve, laplacian_7pt,
                                   newton_potential_3d)
from snpeaks.utils.logger import logger
from snpeaks.utils.timer import Timer

__all__ = [
    'CorrectionResult', 'LinearizedOperator', 'solve_correction',
    'invertibility_ladder'
]

SINGULAR_DENSITY = 1e-6
STABILIZATION_TOL = 0.1
CHANGE_SLACK = 1e-3


@dataclass
class CorrectionResult:
    """
    φ solving the projected linearized problem, with ‖φ‖_a, the Lagrange
    multipliers c_j of L_a φ = 𝓛_a + Σ c_j Y_j and two invertibility
    ratios ‖L_a u‖/‖u‖_a: `rho` is the smallest one met along the Krylov
    iterates and their increments, `rho_solution` the one of φ itself.
    """
    phi: Field3
    norm_a: float
    rho: float
    rho_solution: float
    residual: float
    iterations: int
    multipliers: np.ndarray
    rhs_norm: float
    trace: List[Dict] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            'norm_a': self.norm_a,
            'rho': self.rho,
            'rho_solution': self.rho_solution,
            'residual': self.residual,
            'iterations': self.iterations,
            'rhs_norm': self.rhs_norm,
            'c1': float(self.multipliers[0]),
            'c2': float(self.multipliers[1]),
            'c3': float(self.multipliers[2]),
        }


def _grid_points(grid: Field3Grid) -> np.ndarray:
    return np.stack([m.ravel() for m in grid.mesh()], axis=1)


class LinearizedOperator(object):
    """
    The linearization of −ε²Δw + (1 + ε²P)w − (1/8πε²)(|x|⁻¹ * w²)w at
    w = U_{ε,z} on a 3D grid,

        L φ = A φ − (1/8πε²)Φ_W φ − (1/4πε²)(|x|⁻¹ * (Wφ)) W,

    with the metric A = −ε²Δ + (1 + ε²P) of ⟨·,·⟩_a, and the L²-orthogonal
    projection onto E = {u : ⟨u, ∂_jW⟩_a = 0} = {u : ∫u·A∂_jW = 0}.
    """

    def __init__(self, ansatz, potential, grid: Field3Grid):
        self.grid = grid
        self.epsilon = ansatz.epsilon
        self.coupling = 1.0 / (8 * np.pi * self.epsilon**2)

        W = ansatz.field(grid)
        P = potential.value(_grid_points(grid)).reshape(grid.shape)
        finite = np.isfinite(P)
        if not finite.all():
            density = W.values**2
            if density[~finite].max() > SINGULAR_DENSITY * density.max():
                raise DomainError(
                    'Potential is singular where the peak density is not '
                    'negligible on {}'.format(grid))
            # singular nodes carry negligible density
            P = np.where(finite, P, potential.P0)

        self.W = W.values
        self.shift = 1.0 + self.epsilon**2 * P
        self.phi_W = self.coupling * newton_potential_3d(
            W.like(self.W**2)).values
        self.rhs = -self.epsilon**2 * (P - ansatz.P0) * self.W

        Z = ansatz.gradient_fields(grid)
        self.Y = np.stack([self.metric(z).ravel() for z in Z])
        self._gram_inv = np.linalg.inv(self.Y @ self.Y.T)

    @property
    def size(self) -> int:
        return self.W.size

    def metric(self, u: np.ndarray) -> np.ndarray:
        return -self.epsilon**2 * laplacian_7pt(
            u, self.grid.spacing) + self.shift * u

    def apply(self, u: np.ndarray) -> np.ndarray:
        cross = newton_potential_3d(
            Field3(self.grid, self.W * u), check=False).values
        return self.metric(u) - self.phi_W * u \
            - 2 * self.coupling * cross * self.W

    def project(self, flat: np.ndarray) -> np.ndarray:
        return flat - self.Y.T @ (self._gram_inv @ (self.Y @ flat))

    def projected_matvec(self, flat: np.ndarray) -> np.ndarray:
        p = self.project(flat)
        Lp = self.apply(p.reshape(self.grid.shape)).ravel()
        return self.project(Lp) + (flat - p)

    def precondition(self, flat: np.ndarray) -> np.ndarray:
        """(−ε²Δ + 1)⁻¹ by sine transform."""
        out = helmholtz_solve(
            flat.reshape(self.grid.shape),
            self.grid.spacing,
            1.0,
            scale=self.epsilon**2)
        return out.ravel()

    def norm_a(self, u: np.ndarray) -> float:
        return float(
            np.sqrt(
                max(np.sum(u * self.metric(u)), 0.0) *
                self.grid.cell_volume))

    def dual_ratio(self, flat: np.ndarray) -> float:
        """
        ‖L u‖ in the dual of ⟨·,·⟩_a over ‖u‖_a for the projection u of
        `flat`, the preconditioner standing in for A⁻¹; inf for u = 0.
        """
        u = self.project(flat).reshape(self.grid.shape)
        norm = self.norm_a(u)
        if norm == 0:
            return float('inf')
        applied = self.project(self.apply(u).ravel())
        dual = np.sqrt(
            max(applied @ self.precondition(applied), 0.0) *
            self.grid.cell_volume)
        return float(dual / norm)

    def multipliers(self, phi: np.ndarray) -> np.ndarray:
        """c with L φ − 𝓛_a = Σ c_j Y_j in the least-squares sense."""
        defect = (self.apply(phi) - self.rhs).ravel()
        return self._gram_inv @ (self.Y @ defect)


def solve_correction(ansatz,
                     potential,
                     half_width_factor: float = 12.0,
                     cells: int = 64,
                     rtol: float = 1e-10,
                     max_iter: int = 500,
                     log_interval: int = 50) -> CorrectionResult:
    """
    Solve L_a φ = −ε²(P − P0)U_{ε,z} for φ ∈ E_{a,z} by preconditioned
    MINRES on P L P + (I − P) over the box of half-width
    half_width_factor·ε around the peak. MINRES takes the place of a
    projected conjugate gradient: L_a keeps a negative direction on E_{a,z}.

    Raises:
        DomainError: the potential is singular inside the peak.
        IllConditionedError: MINRES stagnated; carries the residual trace.
    """
    grid = Field3Grid.centered(ansatz.center,
                               half_width_factor * ansatz.epsilon, cells)
    op = LinearizedOperator(ansatz, potential, grid)

    b = op.project(op.rhs.ravel())
    rhs_norm = float(np.linalg.norm(b))
    if rhs_norm == 0:
        return CorrectionResult(
            phi=Field3(grid, np.zeros(grid.shape)),
            norm_a=0.0,
            rho=float('nan'),
            rho_solution=float('nan'),
            residual=0.0,
            iterations=0,
            multipliers=np.zeros(3),
            rhs_norm=0.0)

    n = op.size
    A = LinearOperator((n, n), matvec=op.projected_matvec, dtype=np.float64)
    M = LinearOperator((n, n), matvec=op.precondition, dtype=np.float64)

    scheduler = FlowScheduler(
        log_interval=log_interval, check_interval=log_interval // 2 or 1)
    timer = Timer(iters=max_iter)
    trace = []
    krylov = {'previous': None, 'rho': float('inf')}

    def _callback(xk):
        timer.step()
        status = scheduler.step()
        if not (status.do_check or status.do_log):
            return
        residual = float(
            np.linalg.norm(op.projected_matvec(xk) - b) / rhs_norm)
        # increments between checks are dominated by the slowest modes
        candidates = [xk] if krylov['previous'] is None else [
            xk, xk - krylov['previous']
        ]
        krylov['rho'] = min([krylov['rho']] +
                            [op.dual_ratio(c) for c in candidates])
        krylov['previous'] = xk.copy()
        trace.append({
            'iteration': scheduler.cur_iter,
            'residual': residual,
            'rho': krylov['rho']
        })
        if status.do_log:
            logger.iteration('MINRES', scheduler.cur_iter, max_iter, timer.eta,
                             residual=residual)

    x, info = minres(A, b, M=M, rtol=rtol, maxiter=max_iter,
                     callback=_callback)
    residual = float(np.linalg.norm(op.projected_matvec(x) - b) / rhs_norm)
    trace.append({'iteration': scheduler.cur_iter, 'residual': residual})
    if info != 0:
        raise IllConditionedError(
            'MINRES stagnated after {} iterations (residual {:.3e})'.format(
                scheduler.cur_iter, residual), trace)

    phi = op.project(x).reshape(grid.shape)
    norm_a = op.norm_a(phi)
    rho_solution = op.dual_ratio(phi.ravel()) if norm_a > 0 else float('nan')
    rho = min(krylov['rho'], rho_solution) if norm_a > 0 else float('nan')

    result = CorrectionResult(
        phi=Field3(grid, phi),
        norm_a=norm_a,
        rho=rho,
        rho_solution=rho_solution,
        residual=residual,
        iterations=scheduler.cur_iter,
        multipliers=op.multipliers(phi),
        rhs_norm=rhs_norm,
        trace=trace)
    logger.debug('Correction at eps={:.4g}: |phi|_a={:.4e} rho={:.4f} '
                 'iterations={}'.format(ansatz.epsilon, norm_a, rho,
                                        result.iterations))
    return result


def invertibility_ladder(eps: Sequence[float],
                         rho: Sequence[float],
                         tol: float = STABILIZATION_TOL,
                         slack: float = CHANGE_SLACK) -> Dict:
    """
    Stabilization of ϱ(ε) down a ladder: every ϱ is positive and finite,
    the relative changes |ϱ_{k+1} − ϱ_k|/ϱ_k do not grow as ε decreases
    (up to `slack`) and the last one is at most `tol`.

    Raises:
        InsufficientDataError: fewer than three ladder values.
    """
    if len(eps) < 3:
        raise InsufficientDataError(
            'Invertibility ladder needs at least 3 values, got {}'.format(
                len(eps)))
    order = np.argsort(-np.asarray(eps, dtype=np.float64))
    eps = np.asarray(eps, dtype=np.float64)[order]
    rho = np.asarray(rho, dtype=np.float64)[order]
    positive = bool(np.all(np.isfinite(rho)) and np.all(rho > 0))
    changes = np.abs(np.diff(rho)) / np.abs(rho[:-1])
    monotone = bool(np.all(np.diff(changes) <= slack))
    settled = bool(changes[-1] <= tol)
    return {
        'eps': eps.tolist(),
        'rho': rho.tolist(),
        'changes': changes.tolist(),
        'rho_min': float(np.min(rho)),
        'positive': positive,
        'monotone': monotone,
        'settled': settled,
        'passed': positive and monotone and settled,
    }
