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

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from snpeaks.geometries.field import Field3, Field3Grid
from snpeaks.groundstate.bundle import GroundStateBundle
from snpeaks.ops.radial_ops import radial_to_field3

__all__ = ['PeakAnsatz']


@dataclass(frozen=True)
class PeakAnsatz:
    """
    U_{ε,z}(x) = (1 + ε²P0)·U(√(1 + ε²P0)·|x − z|/ε), the concentrating
    profile solving −ε²Δw + (1 + ε²P0)w = (1/8πε²)(|x|⁻¹ * w²)w, plus an
    optional correction φ on a 3D grid.
    """
    epsilon: float
    center: np.ndarray
    bundle: GroundStateBundle
    P0: float = 0.0
    correction: Optional[Field3] = None

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError('epsilon must be positive, got {}'.format(
                self.epsilon))
        object.__setattr__(self, 'center',
                           np.asarray(self.center, dtype=np.float64))

    @property
    def amplitude(self) -> float:
        return 1.0 + self.epsilon**2 * self.P0

    @property
    def stretch(self) -> float:
        """Factor mapping |x − z| to the argument of U."""
        return np.sqrt(self.amplitude) / self.epsilon

    @property
    def mass(self) -> float:
        """∫U_{ε,z}² = (1 + ε²P0)^{1/2} ε³ a*"""
        return np.sqrt(self.amplitude) * self.epsilon**3 * self.bundle.a_star

    @property
    def support_radius(self) -> float:
        """|x − z| beyond which the profile is exactly 0."""
        return self.bundle.grid.R_max / self.stretch

    def radial(self, radius: np.ndarray) -> np.ndarray:
        return self.amplitude * self.bundle.U.interpolate(self.stretch *
                                                          np.asarray(radius))

    def radial_derivative(self, radius: np.ndarray) -> np.ndarray:
        return self.amplitude * self.stretch * \
            self.bundle.U.interpolate_derivative(self.stretch *
                                                 np.asarray(radius))

    def value(self, points: np.ndarray) -> np.ndarray:
        offsets = np.atleast_2d(points) - self.center
        return self.radial(np.linalg.norm(offsets, axis=1))

    def gradient(self, points: np.ndarray) -> np.ndarray:
        offsets = np.atleast_2d(points) - self.center
        radius = np.linalg.norm(offsets, axis=1)
        safe = np.where(radius > 0, radius, 1.0)
        scale = np.where(radius > 0,
                         self.radial_derivative(radius) / safe, 0.0)
        return offsets * scale[:, None]

    def total(self, points: np.ndarray) -> np.ndarray:
        """U_{ε,z} + φ at points; φ by cubic interpolation, 0 off its grid."""
        values = self.value(points)
        if self.correction is not None:
            values = values + self.correction.sample(
                np.atleast_2d(points), order=3)
        return values

    def density(self, points: np.ndarray) -> np.ndarray:
        return self.total(points)**2

    def field(self, grid: Field3Grid) -> Field3:
        return radial_to_field3(
            self.bundle.U,
            self.center,
            grid,
            scale=self.stretch,
            amplitude=self.amplitude)

    def gradient_fields(self, grid: Field3Grid) -> np.ndarray:
        """∂_jU_{ε,z} on the grid, shape (3, *grid.shape)."""
        x = grid.mesh()
        offsets = [x[j] - self.center[j] for j in range(3)]
        radius = np.sqrt(sum(o**2 for o in offsets))
        d = self.radial_derivative(radius.ravel()).reshape(grid.shape)
        safe = np.where(radius > 0, radius, 1.0)
        return np.stack(
            [np.where(radius > 0, d * o / safe, 0.0) for o in offsets])

    def with_correction(self, correction: Optional[Field3]) -> 'PeakAnsatz':
        return replace(self, correction=correction)

    def moved(self, center) -> 'PeakAnsatz':
        return replace(self, center=np.asarray(center, dtype=np.float64),
                       correction=None)
