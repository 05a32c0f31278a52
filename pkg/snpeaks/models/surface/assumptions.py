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
from typing import Dict, List

import numpy as np
from scipy.spatial import cKDTree

from snpeaks.models.surface.frame import SurfacePoint, surface_frame
from snpeaks.utils.logger import logger

__all__ = [
    'AssumptionReport', 'CriticalPoint', 'check_assumptions',
    'check_potential_conditions', 'surface_laplacian_derivatives',
    'find_surface_critical_points'
]

GRAD_TOL = 1e-8
DET_TOL = 1e-6


@dataclass(frozen=True)
class AssumptionReport:
    """
    Tangential data of ΔP at a point b0 of Γ.

    `hess_tangent` is the 2×2 block (∂²ΔP/∂τ_l∂τ_j) of the ambient Hessian in
    the tangent frame; b0 is nondegenerate when it is nonsingular.
    `ptilde` adds the curvature term, `hess_tangent` − (∂_νΔP)·diag(κ) with
    κ > 0 on spheres, which is the Hessian of ΔP restricted to Γ.
    """
    point: np.ndarray
    grad_tangent: np.ndarray
    hess_tangent: np.ndarray
    normal_derivative: float
    ptilde: np.ndarray
    is_candidate: bool
    is_nondegenerate: bool
    satisfies_ptilde: bool

    def to_dict(self) -> Dict:
        return {
            'b0': self.point.tolist(),
            'grad_tangent': self.grad_tangent.tolist(),
            'hess_tangent': self.hess_tangent.tolist(),
            'normal_derivative': self.normal_derivative,
            'det_tangent': float(np.linalg.det(self.hess_tangent)),
            'ptilde': self.ptilde.tolist(),
            'det_ptilde': float(np.linalg.det(self.ptilde)),
            'is_candidate': self.is_candidate,
            'is_nondegenerate': self.is_nondegenerate,
            'satisfies_ptilde': self.satisfies_ptilde,
        }


@dataclass(frozen=True)
class CriticalPoint:
    position: np.ndarray
    eigenvalues: np.ndarray

    @property
    def kind(self) -> str:
        if np.all(self.eigenvalues < 0):
            return 'max'
        if np.all(self.eigenvalues > 0):
            return 'min'
        return 'saddle'


def surface_laplacian_derivatives(model, frame: SurfacePoint):
    """(D_τΔP, ambient tangential Hessian, ∂_νΔP, surface Hessian)."""
    p = frame.position
    g = model.laplacian_gradient(p)
    H = model.laplacian_hessian(p)
    T = frame.tangents
    grad_tangent = T @ g
    hess_ambient = T @ H @ T.T
    dnu = float(g @ frame.normal)
    hess_surface = hess_ambient - dnu * np.diag(frame.curvatures)
    return grad_tangent, hess_ambient, dnu, hess_surface


def _nonsingular(matrix: np.ndarray, scale: float, tol: float) -> bool:
    if scale == 0:
        return False
    return abs(np.linalg.det(matrix)) > tol * scale**2


def check_assumptions(model,
                      b0,
                      grad_tol: float = GRAD_TOL,
                      det_tol: float = DET_TOL) -> AssumptionReport:
    """
    Verdicts for b0 ∈ Γ, each determinant compared with det_tol·s², s the
    magnitude of the full Hessian of ΔP at b0:

    - candidate: D_τΔP(b0) = 0 to `grad_tol`;
    - nondegenerate: the tangential block of ∇²ΔP is nonsingular;
    - (P̃): nondegenerate, and the curvature-corrected matrix is nonsingular.
    """
    frame = surface_frame(model, b0)
    grad_tangent, hess_tangent, dnu, ptilde = \
        surface_laplacian_derivatives(model, frame)
    scale = float(np.max(np.abs(model.laplacian_hessian(frame.position))))
    nondegenerate = _nonsingular(hess_tangent, scale, det_tol)
    return AssumptionReport(
        point=frame.position,
        grad_tangent=grad_tangent,
        hess_tangent=hess_tangent,
        normal_derivative=dnu,
        ptilde=ptilde,
        is_candidate=bool(np.max(np.abs(grad_tangent)) < grad_tol),
        is_nondegenerate=nondegenerate,
        satisfies_ptilde=nondegenerate
        and _nonsingular(ptilde, scale, det_tol))


def check_potential_conditions(model, n: int = 200) -> Dict[str, float]:
    """
    Worst-case P − P0, ∂_νP and smallest |∂²_νP| over n points of Γ.
    """
    surface = model.surface
    points = surface.sample(n)
    normals = np.array([surface.normal(p) for p in points])
    values = model.value(points)
    grads = model.gradient(points)
    hess = model.hessian(points)
    d_nu = np.einsum('ni,ni->n', grads, normals)
    d_nunu = np.einsum('ni,nij,nj->n', normals, hess, normals)
    return {
        'value': float(np.max(np.abs(values - model.P0))),
        'normal_derivative': float(np.max(np.abs(d_nu))),
        'normal_second_min': float(np.min(np.abs(d_nunu))),
    }


def find_surface_critical_points(model,
                                 n: int = 2000,
                                 neighbors: int = 12,
                                 tol: float = 1e-12,
                                 max_iter: int = 50) -> List[CriticalPoint]:
    """
    Scan for tangential critical points of ΔP on Γ: sample Γ, keep samples
    whose tangential gradient norm is a local minimum among their nearest
    neighbours, refine each by Riemannian Newton and drop duplicates.
    Degenerate surfaces (singular surface Hessian everywhere) yield [].
    """
    surface = model.surface
    points = surface.sample(n)
    norms = np.empty(n)
    for i, p in enumerate(points):
        frame = surface_frame(model, surface.project(p))
        norms[i] = np.linalg.norm(frame.tangents @ model.laplacian_gradient(
            frame.position))

    tree = cKDTree(points)
    _, idx = tree.query(points, k=neighbors + 1)
    seeds = [
        points[i] for i in range(n) if norms[i] <= norms[idx[i, 1:]].min()
    ]

    scale = max(float(np.max(np.abs(model.laplacian_hessian(points[:16])))),
                1e-300)
    found: List[CriticalPoint] = []
    for seed in seeds:
        p = surface.project(seed)
        converged = False
        for _ in range(max_iter):
            frame = surface_frame(model, p)
            g, _, _, Hs = surface_laplacian_derivatives(model, frame)
            if np.linalg.norm(g) < tol * scale:
                converged = True
                break
            if not _nonsingular(Hs, scale, DET_TOL):
                break
            step = -np.linalg.solve(Hs, g)
            p = surface.project(p + frame.tangents.T @ step)
        if not converged or not _nonsingular(Hs, scale, DET_TOL):
            continue
        eigs = np.linalg.eigvalsh(Hs)
        if any(np.linalg.norm(c.position - p) < 1e-6 * (1 + np.linalg.norm(p))
               for c in found):
            continue
        found.append(CriticalPoint(p, eigs))

    if not found:
        logger.warning('No isolated tangential critical points of ΔP on {}'.
                       format(surface))
    else:
        logger.debug('Surface critical points: {}'.format(
            [(c.position.round(6).tolist(), c.kind) for c in found]))
    return found
