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
from typing import Dict, Mapping, Union

from snpeaks.apis import manager

__all__ = [
    'Modulation', 'ConstantModulation', 'PolarModulation',
    'TiltedModulation', 'build_modulation'
]


class Modulation(abc.ABC):
    """
    Smooth function Y on the unit sphere, written as a symbolic expression
    in the direction cosines (w1, w2, w3).
    """

    @abc.abstractmethod
    def expression(self, w1, w2, w3):
        """sympy expression of Y."""

    @property
    def bound(self) -> float:
        """Upper bound of |Y| on the sphere."""
        return 1.0

    @property
    def params(self) -> Dict[str, float]:
        return {}

    def to_config(self) -> Dict:
        dic = {'type': self.__class__.__name__}
        dic.update(self.params)
        return dic

    def _key(self):
        return (self.__class__.__name__, tuple(sorted(self.params.items())))

    def __eq__(self, other) -> bool:
        return isinstance(other, Modulation) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        params = ', '.join('{}={!r}'.format(k, v)
                           for k, v in sorted(self.params.items()))
        return '{}({})'.format(self.__class__.__name__, params)


@manager.MODULATIONS.add_component
class ConstantModulation(Modulation):
    """Y ≡ 0, the rotationally symmetric family."""

    def expression(self, w1, w2, w3):
        return 0 * w3

    @property
    def bound(self) -> float:
        return 0.0


@manager.MODULATIONS.add_component
class PolarModulation(Modulation):
    """Y = w3; ΔP restricted to the sphere has its critical points at the poles."""

    def expression(self, w1, w2, w3):
        return w3


@manager.MODULATIONS.add_component
class TiltedModulation(Modulation):
    """
    Y = w3 + c·w1·w3. The tangential critical points leave the symmetry
    axis and sit in the x1-x3 plane at sin θ = (√(1 + 8c²) − 1)/(4c).
    """

    def __init__(self, c: float = 0.2):
        if abs(c) >= 1:
            raise ValueError('TiltedModulation needs |c| < 1, got {}'.format(c))
        self.c = float(c)

    def expression(self, w1, w2, w3):
        return w3 + self.c * w1 * w3

    @property
    def bound(self) -> float:
        return 1.0 + 0.5 * abs(self.c)

    @property
    def params(self) -> Dict[str, float]:
        return {'c': self.c}


def build_modulation(config: Union[Modulation, Mapping, None]) -> Modulation:
    if config is None:
        return ConstantModulation()
    if isinstance(config, Modulation):
        return config
    config = dict(config)
    return manager.MODULATIONS[config.pop('type')](**config)
