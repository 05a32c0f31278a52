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
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.spatial.transform import Rotation

__all__ = [
    'SphereRule', 'BallRule', 'sphere_rule', 'ball_rule', 'fibonacci_sphere',
    'random_rotations'
]


@dataclass(frozen=True)
class SphereRule:
    """Directions on S² and weights summing to 4π."""
    directions: np.ndarray
    weights: np.ndarray
    order: int

    def __len__(self):
        return len(self.weights)


@dataclass(frozen=True)
class BallRule:
    """Points and weights integrating over a ball."""
    center: np.ndarray
    radius: float
    points: np.ndarray
    weights: np.ndarray
    offsets: np.ndarray  # points - center

    def __len__(self):
        return len(self.weights)

    def integrate(self, values: np.ndarray) -> np.ndarray:
        return np.tensordot(self.weights, values, axes=(0, 0))


@lru_cache(maxsize=16)
def _sphere_rule(order: int) -> SphereRule:
    n_theta = order // 2 + 1
    n_phi = order + 1
    x, w = leggauss(n_theta)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    sin_theta = np.sqrt(1 - x**2)

    ct, ph = np.meshgrid(x, phi, indexing='ij')
    st = np.meshgrid(sin_theta, phi, indexing='ij')[0]
    directions = np.stack(
        [st * np.cos(ph), st * np.sin(ph), ct], axis=-1).reshape(-1, 3)
    weights = np.repeat(w, n_phi) * (2 * np.pi / n_phi)
    directions.flags.writeable = False
    weights.flags.writeable = False
    return SphereRule(directions, weights, order)


def sphere_rule(order: int = 17) -> SphereRule:
    """
    Product rule: Gauss-Legendre in cos(theta) times the trapezoid rule in
    phi. Integrates spherical polynomials of degree <= order exactly.
    """
    if order < 1:
        raise ValueError('order must be positive')
    return _sphere_rule(int(order))


def ball_rule(center: Sequence[float],
              radius: float,
              scale: Optional[float] = None,
              nodes_per_panel: int = 16,
              order: int = 31) -> BallRule:
    """
    Ball quadrature from radial Gauss-Legendre panels of width at most
    2·scale times a sphere rule. `scale` should be the width of the
    integrand's radial structure (the peak width).
    """
    center = np.asarray(center, dtype=np.float64)
    scale = radius if scale is None else scale
    n_panels = max(1, int(np.ceil(radius / (2 * scale))))
    edges = np.linspace(0, radius, n_panels + 1)
    x, w = leggauss(nodes_per_panel)

    r, wr = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        r.append(lo + half * (x + 1))
        wr.append(half * w)
    r = np.concatenate(r)
    wr = np.concatenate(wr) * r**2

    rule = sphere_rule(order)
    offsets = (r[:, None, None] * rule.directions[None, :, :]).reshape(-1, 3)
    weights = (wr[:, None] * rule.weights[None, :]).reshape(-1)
    return BallRule(center, float(radius), center + offsets, weights, offsets)


def fibonacci_sphere(n: int) -> np.ndarray:
    """Quasi-uniform unit vectors (n, 3)."""
    k = np.arange(n) + 0.5
    z = 1 - 2 * k / n
    phi = np.pi * (1 + 5**0.5) * k
    s = np.sqrt(1 - z**2)
    return np.stack([s * np.cos(phi), s * np.sin(phi), z], axis=-1)


def random_rotations(n: int, seed: int = 0) -> np.ndarray:
    """(n, 3, 3) rotation matrices drawn uniformly."""
    return Rotation.random(n, random_state=seed).as_matrix()
