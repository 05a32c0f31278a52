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

import numpy as np

from snpeaks.apis import manager
from snpeaks.models.potentials.base import PotentialModel

__all__ = ['ConstantPotential']


@manager.POTENTIALS.add_component
class ConstantPotential(PotentialModel):
    """P ≡ P0."""

    def __init__(self, P0: float = 0.0):
        self.P0 = float(P0)

    def derivatives(self, points, order):
        n = len(points)
        if order == 0:
            return np.full(n, self.P0)
        return np.zeros((n, ) + (3, ) * order)

    def to_config(self):
        return {'type': 'ConstantPotential', 'P0': self.P0}
