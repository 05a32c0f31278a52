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

import abc

import numpy as np

from snpeaks.geometries.sphere import fibonacci_sphere

__all__ = ['Surface', 'SphereSurface', 'RotatedSurface']


class Surface(abc.ABC):
    """Closed hypersurface Γ on which P takes its critical value."""

    @abc.abstractmethod
    def distance(self, point: np.ndarray) -> float:
        """Signed distance, positive outside."""

    @abc.abstractmethod
    def project(self, point: np.ndarray) -> np.ndarray:
        """Closest point on Γ."""

    @abc.abstractmethod
    def normal(self, point: np.ndarray) -> np.ndarray:
        """Outward unit normal at the projection of `point`."""

    @abc.abstractmethod
    def curvatures(self, point: np.ndarray) -> np.ndarray:
        """Principal curvatures (κ1, κ2), positive for convex Γ."""

    @abc.abstractmethod
    def sample(self, n: int) -> np.ndarray:
        """n quasi-uniform points of Γ, shape (n, 3)."""


class SphereSurface(Surface):

    def __init__(self, R: float):
        self.R = float(R)

    def distance(self, point):
        return float(np.linalg.norm(point) - self.R)

    def project(self, point):
        point = np.asarray(point, dtype=np.float64)
        return self.R * point / np.linalg.norm(point)

    def normal(self, point):
        point = np.asarray(point, dtype=np.float64)
        return point / np.linalg.norm(point)

    def curvatures(self, point):
        return np.full(2, 1.0 / self.R)

    def sample(self, n):
        return self.R * fibonacci_sphere(n)

    def __repr__(self):
        return 'SphereSurface(R={})'.format(self.R)


class RotatedSurface(Surface):
    """x ∈ Γ' iff rotationᵀx ∈ Γ."""

    def __init__(self, base: Surface, rotation: np.ndarray):
        self.base = base
        self.rotation = np.asarray(rotation, dtype=np.float64)

    def _pull(self, point):
        return self.rotation.T @ np.asarray(point, dtype=np.float64)

    def distance(self, point):
        return self.base.distance(self._pull(point))

    def project(self, point):
        return self.rotation @ self.base.project(self._pull(point))

    def normal(self, point):
        return self.rotation @ self.base.normal(self._pull(point))

    def curvatures(self, point):
        return self.base.curvatures(self._pull(point))

    def sample(self, n):
        return self.base.sample(n) @ self.rotation.T
