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
from typing import Dict, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from snpeaks.apis import manager
from snpeaks.models.surface.base import Surface

__all__ = ['PotentialModel', 'build_potential', 'as_points']


def as_points(points) -> Tuple[np.ndarray, bool]:
    """(n, 3) float array and whether a single point was given."""
    points = np.asarray(points, dtype=np.float64)
    single = points.ndim == 1
    return np.atleast_2d(points), single


class PotentialModel(abc.ABC):
    """
    Trapping potential P with derivatives up to fourth order.

    Evaluators take a point (3,) or points (n, 3) and return the value
    without or with the leading axis. Derivative tensors are symmetric:
    hessian (3, 3), third (3, 3, 3), fourth (3, 3, 3, 3).
    """

    P0 = 0.0

    @property
    def surface(self) -> Optional[Surface]:
        """Γ = {P = P0, ∇P = 0}; None when P has no such surface."""
        return None

    @abc.abstractmethod
    def derivatives(self, points: np.ndarray, order: int) -> np.ndarray:
        """Order-`order` derivative tensor at points (n, 3)."""

    @abc.abstractmethod
    def to_config(self) -> Dict:
        """Constructor arguments including `type`, enough to rebuild."""

    def _evaluate(self, points, order: int) -> np.ndarray:
        pts, single = as_points(points)
        out = self.derivatives(pts, order)
        return out[0] if single else out

    def value(self, points):
        return self._evaluate(points, 0)

    def __call__(self, points):
        return self.value(points)

    def gradient(self, points):
        return self._evaluate(points, 1)

    def hessian(self, points):
        return self._evaluate(points, 2)

    def third(self, points):
        return self._evaluate(points, 3)

    def fourth(self, points):
        return self._evaluate(points, 4)

    def laplacian(self, points):
        return np.trace(self.hessian(points), axis1=-2, axis2=-1)

    def laplacian_gradient(self, points):
        """∂_i ΔP = Σ_k ∂_ikk P"""
        return np.trace(self.third(points), axis1=-2, axis2=-1)

    def laplacian_hessian(self, points):
        """∂_ij ΔP = Σ_k ∂_ijkk P"""
        return np.trace(self.fourth(points), axis1=-2, axis2=-1)

    def singular_points(self) -> np.ndarray:
        """Points (m, 3) where P is not smooth."""
        return np.zeros((0, 3))

    def __reduce__(self):
        return (build_potential, (self.to_config(), ))

    def __repr__(self):
        config = self.to_config()
        name = config.pop('type')
        return '{}({})'.format(
            name, ', '.join('{}={!r}'.format(k, v) for k, v in config.items()))


def build_potential(config: Union[Mapping, PotentialModel]) -> PotentialModel:
    """Rebuild a potential from its config dict, resolving nested configs."""
    if isinstance(config, PotentialModel):
        return config
    config = dict(config)
    component = manager.POTENTIALS[config.pop('type')]
    return component(**config)
