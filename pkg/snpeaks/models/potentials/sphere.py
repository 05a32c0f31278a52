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

import itertools
from functools import lru_cache
from typing import Dict, Mapping, Optional, Union

import numpy as np
import sympy

from snpeaks.apis import manager
from snpeaks.errors import NormalDegeneracyError
from snpeaks.models.potentials.base import PotentialModel
from snpeaks.models.potentials.modulations import (Modulation,
                                                   build_modulation)
from snpeaks.models.surface.base import SphereSurface
from snpeaks.utils.logger import logger

__all__ = ['SpherePotential', 'make_sphere_family']

MAX_ORDER = 4
_X = sympy.symbols('x0 x1 x2', real=True)
_PARAMS = sympy.symbols('R q beta P0 k', real=True)


class _SymbolicDerivatives(object):
    """
    Lambdified derivatives of one sympy expression in x0, x1, x2 up to
    MAX_ORDER. Only the sorted index tuples are differentiated; tensors are
    filled by symmetry.
    """

    def __init__(self, expr):
        self.functions = {}
        self.index = {}
        previous = {(): expr}
        for order in range(MAX_ORDER + 1):
            combos = list(
                itertools.combinations_with_replacement(range(3), order))
            exprs = {}
            for combo in combos:
                if order == 0:
                    exprs[combo] = expr
                else:
                    exprs[combo] = sympy.diff(previous[combo[:-1]],
                                              _X[combo[-1]])
            previous = exprs
            self.functions[order] = sympy.lambdify(
                _X + _PARAMS, [exprs[c] for c in combos],
                modules='numpy',
                cse=True)
            position = {c: i for i, c in enumerate(combos)}
            if order == 0:
                self.index[order] = 0
            else:
                self.index[order] = np.array([
                    position[tuple(sorted(idx))]
                    for idx in itertools.product(range(3), repeat=order)
                ]).reshape((3, ) * order)

    def __call__(self, points: np.ndarray, params, order: int) -> np.ndarray:
        n = len(points)
        values = self.functions[order](points[:, 0], points[:, 1],
                                       points[:, 2], *params)
        stacked = np.stack([
            np.broadcast_to(np.asarray(v, dtype=np.float64), (n, ))
            for v in values
        ], axis=-1)
        return stacked[:, self.index[order]]


@lru_cache(maxsize=16)
def _sphere_family(modulation: Modulation) -> _SymbolicDerivatives:
    x0, x1, x2 = _X
    R, q, beta, P0, k = _PARAMS
    r = sympy.sqrt(x0**2 + x1**2 + x2**2)
    s = r - R
    Y = modulation.expression(x0 / r, x1 / r, x2 / r)
    expr = P0 + q * s**2 * (1 + k * s) * (1 + beta * Y)
    logger.debug('Deriving sphere family derivatives for {}'.format(
        modulation))
    return _SymbolicDerivatives(expr)


@manager.POTENTIALS.add_component
class SpherePotential(PotentialModel):
    """
    P(x) = P0 + q·s²·(1 + k·s)·(1 + β·Y(x/|x|)),  s = |x| − R,

    so that Γ = {|x| = R}, P = P0 and ∂_νP = 0 on Γ, and
    ∂²_νP = 2q(1 + βY) ≠ 0 there. With `tuned`, k = −2/(3R), which makes
    ∂_νΔP vanish on Γ.

    Args:
        R (float): radius of Γ.
        q (float): normal stiffness, nonzero.
        beta (float): modulation amplitude; |β|·sup|Y| < 1.
        modulation (Modulation|dict): Y on the unit sphere.
        P0 (float): value on Γ.
        k (float): cubic normal coefficient.
        tuned (bool): override k with −2/(3R).
    """

    def __init__(self,
                 R: float = 1.0,
                 q: float = 1.0,
                 beta: float = 0.0,
                 modulation: Union[Modulation, Mapping, None] = None,
                 P0: float = 0.0,
                 k: float = 0.0,
                 tuned: bool = False):
        if R <= 0:
            raise ValueError('R must be positive, got {}'.format(R))
        if q == 0:
            raise NormalDegeneracyError('q = 0 makes P flat across Γ')
        self.modulation = build_modulation(modulation)
        if abs(beta) * self.modulation.bound >= 1:
            raise NormalDegeneracyError(
                '|beta|·sup|Y| = {:.4g} >= 1: ∂²_νP may vanish on Γ'.format(
                    abs(beta) * self.modulation.bound))

        self.R = float(R)
        self.q = float(q)
        self.beta = float(beta)
        self.P0 = float(P0)
        self.tuned = bool(tuned)
        self.k = -2.0 / (3.0 * self.R) if tuned else float(k)
        self._surface = SphereSurface(self.R)
        self._family = _sphere_family(self.modulation)

    @property
    def surface(self) -> SphereSurface:
        return self._surface

    @property
    def params(self):
        return (self.R, self.q, self.beta, self.P0, self.k)

    @property
    def delta(self) -> float:
        """Half-width of the tube W_δ around Γ used for sampling."""
        delta = 0.5 * self.R
        if self.k:
            delta = min(delta, 0.5 / abs(self.k))
        return delta

    def derivatives(self, points, order):
        if order > MAX_ORDER:
            raise ValueError('Derivatives up to order {} only'.format(
                MAX_ORDER))
        return self._family(points, self.params, order)

    def singular_points(self):
        return np.zeros((1, 3))

    def sample_tube(self, n: int, seed: int = 0) -> np.ndarray:
        """n random points with ||x| − R| < δ."""
        rng = np.random.default_rng(seed)
        directions = rng.normal(size=(n, 3))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        radii = self.R + self.delta * rng.uniform(-1, 1, size=n)
        return directions * radii[:, None]

    def to_config(self) -> Dict:
        return {
            'type': 'SpherePotential',
            'R': self.R,
            'q': self.q,
            'beta': self.beta,
            'modulation': self.modulation.to_config(),
            'P0': self.P0,
            'k': self.k,
        }


def make_sphere_family(R: float,
                       q: float,
                       beta: float,
                       Y: Optional[Union[Modulation, Mapping, str]] = None,
                       **kwargs) -> SpherePotential:
    """Sphere family with modulation Y given as object, config or name."""
    if isinstance(Y, str):
        Y = {'type': Y}
    return SpherePotential(R=R, q=q, beta=beta, modulation=Y, **kwargs)
