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

from functools import cached_property
from typing import Callable, Union

import numpy as np
from scipy.interpolate import CubicSpline

from snpeaks.errors import GridMismatchError
from snpeaks.utils.common import read_table, read_table_header, write_table

__all__ = ['RadialGrid', 'RadialProfile']


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.float64)
    array.flags.writeable = False
    return array


class RadialGrid(object):
    """
    Uniform radial grid r_i = i·h, i = 0..N, on [0, R_max].

    `weights` integrate f(r) r² dr with the composite trapezoid rule, so
    cumulative integrals are prefix sums.

    Args:
        R_max (float): cutoff radius.
        N (int): number of intervals.
    """

    def __init__(self, R_max: float = 24.0, N: int = 4096):
        if R_max <= 0 or N < 2:
            raise ValueError('Invalid radial grid R_max={}, N={}'.format(
                R_max, N))
        self.R_max = float(R_max)
        self.N = int(N)
        self.h = self.R_max / self.N
        self.nodes = _frozen(np.arange(self.N + 1) * self.h)

        w = np.full(self.N + 1, self.h)
        w[0] = w[-1] = 0.5 * self.h
        self.line_weights = _frozen(w)
        self.weights = _frozen(w * self.nodes**2)

    def __len__(self):
        return self.N + 1

    def __repr__(self):
        return 'RadialGrid(R_max={}, N={})'.format(self.R_max, self.N)

    def __eq__(self, other) -> bool:
        return isinstance(other, RadialGrid) and other.N == self.N \
            and other.R_max == self.R_max

    def __hash__(self):
        return hash((self.R_max, self.N))

    def coarsen(self) -> 'RadialGrid':
        if self.N % 2:
            raise ValueError('Cannot coarsen a grid with odd N')
        return RadialGrid(self.R_max, self.N // 2)

    def refine(self) -> 'RadialGrid':
        return RadialGrid(self.R_max, self.N * 2)

    def integrate(self, values: np.ndarray) -> float:
        """∫₀^R f(r) r² dr"""
        return float(np.dot(self.weights, values))

    def integrate_volume(self, values: np.ndarray) -> float:
        """∫ f(|x|) dx over the ball of radius R_max."""
        return 4 * np.pi * self.integrate(values)

    def profile(self, values: Union[np.ndarray, Callable]) -> 'RadialProfile':
        if callable(values):
            values = values(self.nodes)
        return RadialProfile(self, values)


class RadialProfile(object):
    """
    A scalar function of r sampled on a RadialGrid. Values are read-only.
    """

    def __init__(self, grid: RadialGrid, values: np.ndarray):
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (len(grid), ):
            raise GridMismatchError(
                'Profile has {} values but grid has {} nodes'.format(
                    values.shape, len(grid)))
        if not np.all(np.isfinite(values)):
            raise ValueError('Profile values must be finite')
        self.grid = grid
        self.values = _frozen(values)

    def __repr__(self):
        return 'RadialProfile({}, max={:.6g})'.format(
            self.grid, float(np.max(np.abs(self.values))))

    def _binary(self, other, op) -> 'RadialProfile':
        if isinstance(other, RadialProfile):
            self.check_same_grid(other)
            other = other.values
        return RadialProfile(self.grid, op(self.values, other))

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __mul__(self, other):
        return self._binary(other, np.multiply)

    __rmul__ = __mul__

    def __neg__(self):
        return RadialProfile(self.grid, -self.values)

    def check_same_grid(self, other: 'RadialProfile'):
        if self.grid != other.grid:
            raise GridMismatchError('Grids differ: {} vs {}'.format(
                self.grid, other.grid))

    @property
    def r(self) -> np.ndarray:
        return self.grid.nodes

    @cached_property
    def spline(self) -> CubicSpline:
        # mirror to negative r so the spline sees an even function at 0
        r = np.concatenate([-self.r[:0:-1], self.r])
        v = np.concatenate([self.values[:0:-1], self.values])
        return CubicSpline(r, v)

    def __call__(self, r) -> np.ndarray:
        return self.interpolate(r)

    def interpolate(self, r) -> np.ndarray:
        """Cubic interpolation; exactly 0 beyond R_max."""
        r = np.abs(np.asarray(r, dtype=np.float64))
        out = np.zeros_like(r)
        inside = r <= self.grid.R_max
        out[inside] = self.spline(r[inside])
        return out

    def interpolate_derivative(self, r, nu: int = 1) -> np.ndarray:
        r = np.abs(np.asarray(r, dtype=np.float64))
        out = np.zeros_like(r)
        inside = r <= self.grid.R_max
        out[inside] = self.spline(r[inside], nu)
        return out

    def derivative(self, parity: str = 'even') -> 'RadialProfile':
        """
        f'(r) by 4th-order differences. `parity` says how f extends to r < 0
        ('even' for radial densities, 'odd' for their derivatives).
        """
        f = self.values
        h = self.grid.h
        sign = 1. if parity == 'even' else -1.
        d = np.empty_like(f)
        ext = np.concatenate([sign * f[2:0:-1], f])
        d[:-2] = (ext[:-4] - 8 * ext[1:-3] + 8 * ext[3:-1] - ext[4:]) / (
            12 * h)
        d[-2] = (f[-1] - f[-3]) / (2 * h)
        d[-1] = (3 * f[-1] - 4 * f[-2] + f[-3]) / (2 * h)
        if parity == 'even':
            d[0] = 0.
        return RadialProfile(self.grid, d)

    def laplacian(self) -> 'RadialProfile':
        """f'' + 2f'/r, with 3f''(0) at the origin."""
        r = self.r
        d1 = self.derivative().values
        d2 = self.derivative().derivative('odd').values
        out = np.empty_like(d1)
        out[1:] = d2[1:] + 2 * d1[1:] / r[1:]
        out[0] = 3 * d2[0]
        return RadialProfile(self.grid, out)

    def integral(self, power: int = 0) -> float:
        """∫₀^R r^power f(r) r² dr"""
        return self.grid.integrate(self.values * self.r**power)

    def moment(self, power: int = 0) -> float:
        """∫_{ℝ³} |x|^power f(|x|) dx"""
        return 4 * np.pi * self.integral(power)

    def norm(self) -> float:
        return float(np.sqrt(self.moment_of_square()))

    def moment_of_square(self, power: int = 0) -> float:
        return 4 * np.pi * self.grid.integrate(self.values**2 *
                                               self.r**power)

    def to_csv(self, path: str, name: str = 'value'):
        write_table(
            path, {
                'r': self.r,
                name: self.values
            },
            columns=['r', name],
            header={
                'grid': 'uniform',
                'R_max': repr(self.grid.R_max),
                'N': self.grid.N
            })

    @classmethod
    def from_csv(cls, path: str) -> 'RadialProfile':
        header = read_table_header(path)
        grid = RadialGrid(float(header['R_max']), int(header['N']))
        frame = read_table(path)
        return cls(grid, frame.iloc[:, 1].to_numpy())
