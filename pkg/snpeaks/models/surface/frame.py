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
from typing import Callable, Optional, Tuple

import numpy as np

from snpeaks.errors import CapabilityError, GeometryError

__all__ = [
    'SurfacePoint', 'surface_frame', 'radial_test_function',
    'verify_curvature_identity'
]

POLE_SWITCH = 0.9


@dataclass(frozen=True)
class SurfacePoint:
    """Point of Γ with its adapted orthonormal frame."""
    position: np.ndarray
    normal: np.ndarray
    tangents: np.ndarray  # (2, 3)
    curvatures: np.ndarray  # (2,)

    @property
    def basis(self) -> np.ndarray:
        """Rows τ1, τ2, ν."""
        return np.vstack([self.tangents, self.normal])

    def orthonormality_residual(self) -> float:
        basis = self.basis
        return float(np.max(np.abs(basis @ basis.T - np.eye(3))))


def surface_frame(model, point, tol: float = 1e-10) -> SurfacePoint:
    """
    Frame (ν, τ1, τ2) at a point of Γ. τ1 = a × ν normalized with a = e3,
    switched to e1 when |ν3| > 0.9 so the chart stays regular at the poles.

    Raises:
        CapabilityError: the model has no surface.
        GeometryError: the point is farther than `tol` from Γ.
    """
    surface = model.surface
    if surface is None:
        raise CapabilityError('{} has no critical surface'.format(model))
    point = np.asarray(point, dtype=np.float64)
    distance = surface.distance(point)
    if abs(distance) > tol:
        raise GeometryError(
            'Point {} is {:.3e} away from the surface'.format(
                point.tolist(), distance),
            distance=distance)

    nu = surface.normal(point)
    axis = np.array([1.0, 0.0, 0.0]) if abs(
        nu[2]) > POLE_SWITCH else np.array([0.0, 0.0, 1.0])
    tau1 = np.cross(axis, nu)
    tau1 /= np.linalg.norm(tau1)
    tau2 = np.cross(nu, tau1)
    return SurfacePoint(
        position=surface.project(point),
        normal=nu,
        tangents=np.vstack([tau1, tau2]),
        curvatures=np.asarray(surface.curvatures(point), dtype=np.float64))


def radial_test_function(R: float, power: int = 1,
                         center=(0., 0., 0.)) -> Callable:
    """
    W(x) = (|x − c| − R)^power, returned as x ↦ (∇W, ∇²W). Constant on the
    sphere |x − c| = R.
    """
    c = np.asarray(center, dtype=np.float64)

    def derivatives(x) -> Tuple[np.ndarray, np.ndarray]:
        y = np.asarray(x, dtype=np.float64) - c
        r = np.linalg.norm(y)
        n = y / r
        s = r - R
        d1 = power * s**(power - 1)
        d2 = power * (power - 1) * s**(power - 2) if power > 1 else 0.0
        grad = d1 * n
        hess = d2 * np.outer(n, n) + d1 * (np.eye(3) - np.outer(n, n)) / r
        return grad, hess

    return derivatives


def verify_curvature_identity(model,
                              point,
                              W: Optional[Callable] = None,
                              frame: Optional[SurfacePoint] = None) -> float:
    """
    max over m, l of |∂²W/∂τ_m∂τ_l − (∂W/∂ν)κ_m δ_ml| for W constant on Γ.

    Derivatives of W are taken at `point`; the frame is the one of its
    projection onto Γ, so points off Γ report the defect instead of raising.
    `W` maps x to (∇W, ∇²W); default is the distance to the sphere family's Γ.
    """
    point = np.asarray(point, dtype=np.float64)
    surface = model.surface
    if frame is None:
        frame = surface_frame(model, surface.project(point))
    if W is None:
        W = radial_test_function(np.linalg.norm(frame.position))

    grad, hess = W(point)
    T = frame.tangents
    tangential = T @ hess @ T.T
    expected = float(grad @ frame.normal) * np.diag(frame.curvatures)
    return float(np.max(np.abs(tangential - expected)))
