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

from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np

from snpeaks.geometries.field import Field3, Field3Grid
from snpeaks.geometries.sphere import ball_rule, sphere_rule
from snpeaks.ops.field_ops import (gradient, laplacian_4th, newton_field_3d,
                                   newton_potential_3d, restrict)
from snpeaks.ops.pair_sums import pair_gradient_sum
from snpeaks.utils.logger import logger

__all__ = [
    'PohozaevReport', 'pohozaev_terms', 'pohozaev_from_solution',
    'direct_c5', 'MARGIN_CELLS'
]

MARGIN_CELLS = 4
ROUNDOFF = 1e-10
SUPPORT_CUTOFF = 1e-12


@dataclass(frozen=True)
class PohozaevReport:
    """
    Local Pohozaev balance on B_ρ(center) for component j of

        −ε²Δũ + (1 + ε²P)ũ = (1/8πε²)Φ_ũ ũ,

    namely ε²∫_B ∂_jP ũ² = C1 + C2 + C3 + C4 + C5 with

        C1 = −2ε²∫_∂B ∂_νũ ∂_jũ        C2 = ε²∫_∂B |∇ũ|² ν_j
        C3 = ∫_∂B (1 + ε²P)ũ² ν_j       C4 = −(1/8πε²)∫_∂B Φ ũ² ν_j
        C5 = (1/8πε²)∫_B ∂_jΦ ũ².
    """
    center: np.ndarray
    rho: float
    j: int
    epsilon: float
    lhs: float
    c1: float
    c2: float
    c3: float
    c4: float
    c5: float
    residual: float
    estimate: float
    residual_coarse: float = float('nan')
    c5_direct: Optional[float] = None

    @property
    def terms(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3, self.c4, self.c5])

    @property
    def balanced(self) -> bool:
        return abs(self.residual) <= self.estimate

    def to_dict(self) -> Dict:
        dic = {
            'c1_center': float(self.center[0]),
            'c2_center': float(self.center[1]),
            'c3_center': float(self.center[2]),
            'rho': self.rho,
            'j': self.j,
            'epsilon': self.epsilon,
            'lhs': self.lhs,
            'C1': self.c1,
            'C2': self.c2,
            'C3': self.c3,
            'C4': self.c4,
            'C5': self.c5,
            'residual': self.residual,
            'estimate': self.estimate,
        }
        if self.c5_direct is not None:
            dic['C5_direct'] = self.c5_direct
        return dic


def _grid_points(grid: Field3Grid) -> np.ndarray:
    return np.stack([m.ravel() for m in grid.mesh()], axis=1)


def _potential_on(model, points: np.ndarray) -> np.ndarray:
    values = model.value(points)
    finite = np.isfinite(values)
    if not finite.all():
        values = np.where(finite, values, model.P0)
    return values


def _evaluate(values: np.ndarray, grid: Field3Grid, model, epsilon: float,
              center: np.ndarray, rho: float, j: int, order: int) -> Dict:
    h = grid.spacing
    eps2 = epsilon**2
    coupling = 1.0 / (8 * np.pi * eps2)
    field = Field3(grid, values)
    density = field.like(values**2)

    grads = np.stack([gradient(values, h, axis) for axis in range(3)])
    phi = newton_potential_3d(density).values
    dphi = -newton_field_3d(density, j, check=False).values

    def sample(array, points):
        return Field3(grid, array).sample(points, order=3)

    # boundary terms
    rule = sphere_rule(order)
    normals = rule.directions
    points = center + rho * normals
    weights = rho**2 * rule.weights
    u_s = sample(values, points)
    g_s = np.stack([sample(g, points) for g in grads], axis=1)
    phi_s = sample(phi, points)
    P_s = _potential_on(model, points)
    nu_j = normals[:, j]
    dnu = np.einsum('ni,ni->n', g_s, normals)

    integrands = {
        'c1': -2 * eps2 * dnu * g_s[:, j],
        'c2': eps2 * np.sum(g_s**2, axis=1) * nu_j,
        'c3': (1 + eps2 * P_s) * u_s**2 * nu_j,
        'c4': -coupling * phi_s * u_s**2 * nu_j,
    }
    out = {k: float(weights @ v) for k, v in integrands.items()}
    magnitude = sum(float(weights @ np.abs(v)) for v in integrands.values())

    # volume terms
    ball = ball_rule(center, rho, epsilon, nodes_per_panel=16, order=31)
    u_b = sample(values, ball.points)
    dP = model.gradient(ball.points)[:, j]
    dP = np.where(np.isfinite(dP), dP, 0.0)
    lhs = eps2 * dP * u_b**2
    c5 = coupling * sample(dphi, ball.points) * u_b**2
    out['lhs'] = float(ball.weights @ lhs)
    out['c5'] = float(ball.weights @ c5)
    magnitude += float(ball.weights @ np.abs(lhs)) + float(
        ball.weights @ np.abs(c5))

    # 4th-order residual of the stationary equation
    P_grid = _potential_on(model, _grid_points(grid)).reshape(grid.shape)
    R = -eps2 * laplacian_4th(values, h) + (1 + eps2 * P_grid) * values \
        - coupling * phi * values
    out['equation'] = float(ball.weights @ sample(R * grads[j], ball.points))
    out['residual'] = out['lhs'] - sum(out['c{}'.format(i)]
                                       for i in range(1, 6))
    out['magnitude'] = magnitude
    return out


def direct_c5(u: Field3, epsilon: float, center, rho: float, j: int,
              cutoff: float = SUPPORT_CUTOFF) -> float:
    """
    C5 by the direct double sum over grid nodes: x in the ball, y over the
    nodes where ũ² exceeds cutoff·max ũ².
    """
    grid = u.grid
    points = _grid_points(grid)
    density = (u.values**2).ravel() * grid.cell_volume
    inside = np.linalg.norm(points - np.asarray(center), axis=1) < rho
    support = density > cutoff * density.max()
    total = pair_gradient_sum(points[inside], density[inside],
                              points[support], density[support], j)
    return -total / (8 * np.pi * epsilon**2)


def pohozaev_terms(u: Field3,
                   model,
                   epsilon: float,
                   center: Sequence[float],
                   rho: float,
                   j: int,
                   a: Optional[float] = None,
                   order: int = 17,
                   cross_check: bool = False) -> PohozaevReport:
    """
    Term-by-term local Pohozaev identity for ũ on B_ρ(center).

    `u` is ũ itself unless `a` is given, in which case it is a normalized
    solution of −Δu + Pu = (a/8π)Φ_u u + μu with ε = (−μ)^{-1/2} and
    ũ = ε²√a·u. Boundary fields come from 4th-order differences sampled by
    cubic splines on a sphere rule of degree `order`; the volume terms use a
    ball rule, with Φ and ∂_jΦ from the padded FFT convolution.

    The estimate adds 2|∫_B R ∂_jũ| (R the 4th-order residual of the
    equation), the change of the residual on the 2h restriction divided by
    3, and a round-off floor.

    Raises:
        GeometryError: the ball has less than four cells of clearance.
    """
    grid = u.grid
    center = np.asarray(center, dtype=np.float64)
    grid.check_ball(center, rho, margin_cells=MARGIN_CELLS)
    values = u.values if a is None else u.values * epsilon**2 * np.sqrt(a)

    fine = _evaluate(values, grid, model, epsilon, center, rho, j, order)
    coarse_grid = grid.coarsen()
    coarse = _evaluate(restrict(values), coarse_grid, model, epsilon, center,
                       rho, j, order)
    estimate = 2 * abs(fine['equation']) + abs(
        coarse['residual'] - fine['residual']) / 3 + ROUNDOFF * fine[
            'magnitude']

    c5_direct = None
    if cross_check:
        c5_direct = direct_c5(Field3(grid, values), epsilon, center, rho, j)

    report = PohozaevReport(
        center=center,
        rho=float(rho),
        j=int(j),
        epsilon=float(epsilon),
        lhs=fine['lhs'],
        c1=fine['c1'],
        c2=fine['c2'],
        c3=fine['c3'],
        c4=fine['c4'],
        c5=fine['c5'],
        residual=fine['residual'],
        estimate=float(estimate),
        residual_coarse=coarse['residual'],
        c5_direct=c5_direct)
    logger.debug('Pohozaev j={} rho={:.4g}: residual={:.3e} estimate={:.3e}'
                 .format(j, rho, report.residual, report.estimate))
    return report


def pohozaev_from_solution(result,
                           model,
                           rho_factor: float = 12.0,
                           j: int = 2,
                           center: Optional[Sequence[float]] = None,
                           **kwargs) -> PohozaevReport:
    """Pohozaev audit of a SolveResult on B_{ρ}(x_a), ρ = rho_factor·ε."""
    if not result.mu < 0:
        raise ValueError('mu must be negative, got {}'.format(result.mu))
    epsilon = 1.0 / np.sqrt(-result.mu)
    center = result.peak if center is None else center
    return pohozaev_terms(result.u, model, epsilon, center,
                          rho_factor * epsilon, j, a=result.a, **kwargs)
