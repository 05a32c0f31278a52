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

from typing import Sequence, Tuple, Union

import numpy as np
import yaml
from scipy import ndimage

from snpeaks.errors import GeometryError, GridMismatchError

__all__ = ['Field3Grid', 'Field3']


class Field3Grid(object):
    """
    Cell-centred uniform 3D grid: node (i, j, k) sits at
    origin + (index + 1/2)·h. Spacing is isotropic; cells per axis are
    powers of two, at least 32.

    Args:
        origin (sequence): lower corner of the box.
        spacing (float): cell size h.
        cells (int|sequence): cells per axis.
    """

    def __init__(self,
                 origin: Sequence[float],
                 spacing: float,
                 cells: Union[int, Sequence[int]],
                 check: bool = True):
        if np.isscalar(cells):
            cells = (int(cells), ) * 3
        self.cells = tuple(int(c) for c in cells)
        self.origin = np.asarray(origin, dtype=np.float64).reshape(3)
        self.spacing = float(spacing)

        if self.spacing <= 0:
            raise ValueError('spacing must be positive')
        if check:
            for c in self.cells:
                if c < 32 or c & (c - 1):
                    raise ValueError(
                        'cells per axis must be a power of two >= 32, got {}'.
                        format(c))

    @classmethod
    def centered(cls,
                 center: Sequence[float],
                 half_width: float,
                 cells: int,
                 check: bool = True) -> 'Field3Grid':
        """Cube [center - half_width, center + half_width]³."""
        center = np.asarray(center, dtype=np.float64)
        spacing = 2.0 * half_width / cells
        return cls(center - half_width, spacing, cells, check=check)

    def __repr__(self):
        return 'Field3Grid(origin={}, spacing={:.6g}, cells={})'.format(
            self.origin.tolist(), self.spacing, self.cells)

    def __eq__(self, other) -> bool:
        return isinstance(other, Field3Grid) and self.cells == other.cells \
            and self.spacing == other.spacing \
            and np.array_equal(self.origin, other.origin)

    def __hash__(self):
        return hash((self.cells, self.spacing, tuple(self.origin)))

    @property
    def shape(self) -> Tuple[int, int, int]:
        return self.cells

    @property
    def cell_volume(self) -> float:
        return self.spacing**3

    @property
    def extents(self) -> np.ndarray:
        return self.spacing * np.asarray(self.cells, dtype=np.float64)

    @property
    def center(self) -> np.ndarray:
        return self.origin + 0.5 * self.extents

    @property
    def upper(self) -> np.ndarray:
        return self.origin + self.extents

    def axes(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return tuple(self.origin[d] + (np.arange(self.cells[d]) + 0.5) *
                     self.spacing for d in range(3))

    def mesh(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return np.meshgrid(*self.axes(), indexing='ij')

    def radius_from(self, center: Sequence[float]) -> np.ndarray:
        x, y, z = self.mesh()
        c = np.asarray(center, dtype=np.float64)
        return np.sqrt((x - c[0])**2 + (y - c[1])**2 + (z - c[2])**2)

    def refine(self) -> 'Field3Grid':
        """Same box, twice the cells per axis."""
        return Field3Grid(self.origin, self.spacing / 2,
                          tuple(2 * c for c in self.cells))

    def coarsen(self) -> 'Field3Grid':
        return Field3Grid(
            self.origin,
            self.spacing * 2,
            tuple(c // 2 for c in self.cells),
            check=False)

    def to_index(self, points: np.ndarray) -> np.ndarray:
        """Fractional node indices of points, shape (3, n)."""
        points = np.atleast_2d(points)
        return ((points - self.origin) / self.spacing - 0.5).T

    def contains_ball(self, center: Sequence[float], radius: float,
                      margin_cells: int = 0) -> bool:
        c = np.asarray(center, dtype=np.float64)
        pad = radius + margin_cells * self.spacing
        return bool(
            np.all(c - pad >= self.origin) and np.all(c + pad <= self.upper))

    def check_ball(self, center: Sequence[float], radius: float,
                   margin_cells: int = 0):
        if not self.contains_ball(center, radius, margin_cells):
            c = np.asarray(center, dtype=np.float64)
            clearance = float(
                min(np.min(c - self.origin), np.min(self.upper - c)) -
                radius)
            raise GeometryError(
                'Ball of radius {:.4g} at {} needs {} cells of clearance in {}'
                .format(radius, c.tolist(), margin_cells, self),
                distance=clearance)

    def to_dict(self) -> dict:
        return {
            'origin': [float(v) for v in self.origin],
            'spacing': self.spacing,
            'cells': list(self.cells)
        }

    @classmethod
    def from_dict(cls, dic: dict) -> 'Field3Grid':
        return cls(dic['origin'], dic['spacing'], dic['cells'], check=False)


class Field3(object):
    """Scalar samples u(x_i) on a Field3Grid."""

    def __init__(self, grid: Field3Grid, values: np.ndarray):
        values = np.asarray(values, dtype=np.float64)
        if values.shape != grid.shape:
            raise GridMismatchError('values {} do not match {}'.format(
                values.shape, grid))
        self.grid = grid
        self.values = values

    def __repr__(self):
        return 'Field3({}, max={:.6g})'.format(self.grid,
                                               float(np.abs(self.values).max()))

    def copy(self) -> 'Field3':
        return Field3(self.grid, self.values.copy())

    def like(self, values: np.ndarray) -> 'Field3':
        return Field3(self.grid, values)

    def check_same_grid(self, other: 'Field3'):
        if self.grid != other.grid:
            raise GridMismatchError('Grids differ: {} vs {}'.format(
                self.grid, other.grid))

    def integral(self) -> float:
        """Midpoint rule over the box."""
        return float(self.values.sum() * self.grid.cell_volume)

    def mass(self) -> float:
        return float(np.sum(self.values**2) * self.grid.cell_volume)

    def dot(self, other: 'Field3') -> float:
        self.check_same_grid(other)
        return float(
            np.sum(self.values * other.values) * self.grid.cell_volume)

    def sample(self, points: np.ndarray, order: int = 1) -> np.ndarray:
        """
        Interpolate at physical points (n, 3); order 1 is trilinear,
        order 3 a cubic spline. Points outside the box get 0.
        """
        coords = self.grid.to_index(points)
        return ndimage.map_coordinates(
            self.values, coords, order=order, mode='constant', cval=0.0)

    def argmax_interpolated(self) -> np.ndarray:
        """Location of the maximum refined by a per-axis parabola."""
        values = self.values
        index = np.array(np.unravel_index(np.argmax(values), values.shape))
        location = self.grid.origin + (index + 0.5) * self.grid.spacing

        for axis in range(3):
            i = index[axis]
            if i == 0 or i == values.shape[axis] - 1:
                continue
            lo, hi = index.copy(), index.copy()
            lo[axis] -= 1
            hi[axis] += 1
            fm, f0, fp = values[tuple(lo)], values[tuple(index)], values[
                tuple(hi)]
            denom = fm - 2 * f0 + fp
            if denom < 0:
                location[axis] += 0.5 * (fm - fp) / denom * self.grid.spacing
        return location

    def save(self, prefix: str):
        """Write `<prefix>.bin` (little-endian float64, C order) and a
        `<prefix>.yml` sidecar."""
        self.values.astype('<f8').tofile(prefix + '.bin')
        meta = self.grid.to_dict()
        meta['dtype'] = '<f8'
        meta['order'] = 'C'
        with open(prefix + '.yml', 'w') as file:
            yaml.safe_dump(meta, file, sort_keys=True)

    @classmethod
    def load(cls, prefix: str) -> 'Field3':
        with open(prefix + '.yml') as file:
            meta = yaml.safe_load(file)
        grid = Field3Grid.from_dict(meta)
        values = np.fromfile(prefix + '.bin', dtype=meta.get('dtype', '<f8'))
        return cls(grid, values.reshape(grid.shape))
