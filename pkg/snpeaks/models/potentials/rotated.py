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

from typing import Mapping, Sequence, Union

import numpy as np

from snpeaks.apis import manager
from snpeaks.models.potentials.base import PotentialModel, build_potential
from snpeaks.models.surface.base import RotatedSurface

__all__ = ['RotatedPotential']

_SUBSCRIPTS = {
    1: 'ia,na->ni',
    2: 'ia,jb,nab->nij',
    3: 'ia,jb,kc,nabc->nijk',
    4: 'ia,jb,kc,ld,nabcd->nijkl',
}


@manager.POTENTIALS.add_component
class RotatedPotential(PotentialModel):
    """P'(x) = P(Qᵀx) for a rotation matrix Q."""

    def __init__(self, base: Union[PotentialModel, Mapping],
                 rotation: Sequence[Sequence[float]]):
        self.base = build_potential(base)
        self.rotation = np.asarray(rotation, dtype=np.float64).reshape(3, 3)
        if not np.allclose(self.rotation @ self.rotation.T, np.eye(3),
                           atol=1e-12):
            raise ValueError('rotation is not orthogonal')
        self.P0 = self.base.P0
        base_surface = self.base.surface
        self._surface = None if base_surface is None else RotatedSurface(
            base_surface, self.rotation)

    @property
    def surface(self):
        return self._surface

    def derivatives(self, points, order):
        pulled = points @ self.rotation
        out = self.base.derivatives(pulled, order)
        if order == 0:
            return out
        Q = self.rotation
        return np.einsum(_SUBSCRIPTS[order], *([Q] * order), out)

    def singular_points(self):
        return self.base.singular_points() @ self.rotation.T

    def to_config(self):
        return {
            'type': 'RotatedPotential',
            'base': self.base.to_config(),
            'rotation': self.rotation.tolist()
        }
