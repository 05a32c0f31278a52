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

from typing import Sequence

import numpy as np

from snpeaks.errors import CapabilityError
from snpeaks.geometries.field import Field3, Field3Grid
from snpeaks.geometries.radial import RadialProfile

__all__ = [
    'ELL_MAX', 'newton_potential_sector', 'sector_kernel_matrix',
    'double_integral_oracle', 'enclosed_mass', 'radial_to_field3'
]

ELL_MAX = 8


def _cumulative_trapezoid(values: np.ndarray, h: float) -> np.ndarray:
    out = np.zeros_like(values)
    out[1:] = np.cumsum(0.5 * h * (values[1:] + values[:-1]))
    return out


def newton_potential_sector(f: RadialProfile,
                            g: RadialProfile,
                            ell: int = 0,
                            ell_max: int = ELL_MAX) -> RadialProfile:
    """
    ℓ-sector radial factor of (1/|x|) * (f·g·Y_ℓm):

        h(r) = 4π/(2ℓ+1) [ r^{-ℓ-1} ∫₀^r s^{ℓ+2} fg ds + r^ℓ ∫_r^∞ s^{1-ℓ} fg ds ]

    by cumulative trapezoid sums in O(N). h(0) is the analytic limit:
    4π∫s·fg ds for ℓ = 0, zero otherwise.
    """
    if ell < 0 or ell > ell_max:
        raise CapabilityError('ell={} outside [0, {}]'.format(ell, ell_max))
    f.check_same_grid(g)

    grid = f.grid
    r = grid.nodes
    h = grid.h
    fg = f.values * g.values

    inner = _cumulative_trapezoid(r**(ell + 2) * fg, h)

    outer_integrand = np.zeros_like(fg)
    outer_integrand[1:] = r[1:]**(1 - ell) * fg[1:]
    if ell <= 1:
        outer_integrand[0] = 0. if ell == 0 else fg[0]
    outer_cum = _cumulative_trapezoid(outer_integrand, h)
    outer = outer_cum[-1] - outer_cum

    out = np.empty_like(fg)
    out[1:] = r[1:]**(-ell - 1) * inner[1:] + r[1:]**ell * outer[1:]
    out[0] = outer[0] if ell == 0 else 0.
    out *= 4 * np.pi / (2 * ell + 1)
    return RadialProfile(grid, out)


def sector_kernel_matrix(r: np.ndarray, ell: int) -> np.ndarray:
    """G_ij = 4π/(2ℓ+1) · min(r_i, r_j)^ℓ / max(r_i, r_j)^{ℓ+1} for r > 0."""
    rmin = np.minimum.outer(r, r)
    rmax = np.maximum.outer(r, r)
    return 4 * np.pi / (2 * ell + 1) * rmin**ell / rmax**(ell + 1)


def double_integral_oracle(f: RadialProfile, g: RadialProfile,
                           ell: int = 0) -> RadialProfile:
    """
    Direct O(N²) evaluation of the sector transform with the two-point
    kernel, used to check `newton_potential_sector`.
    """
    f.check_same_grid(g)
    grid = f.grid
    r = grid.nodes
    fg = f.values * g.values
    out = np.zeros_like(fg)

    w = grid.weights[1:] * fg[1:]
    out[1:] = sector_kernel_matrix(r[1:], ell) @ w
    if ell == 0:
        out[0] = 4 * np.pi * np.dot(grid.line_weights[1:], r[1:] * fg[1:])
    return RadialProfile(grid, out)


def enclosed_mass(density: RadialProfile) -> RadialProfile:
    """m(r) = 4π ∫₀^r s² ρ(s) ds"""
    grid = density.grid
    return RadialProfile(
        grid, 4 * np.pi * _cumulative_trapezoid(
            grid.nodes**2 * density.values, grid.h))


def radial_to_field3(f: RadialProfile,
                     center: Sequence[float],
                     grid: Field3Grid,
                     scale: float = 1.0,
                     amplitude: float = 1.0) -> Field3:
    """
    Samples amplitude·f(scale·|x − center|) on the grid by cubic
    interpolation; exactly 0 where scale·|x − center| > R_max.
    """
    radius = grid.radius_from(center) * scale
    values = f.interpolate(radius.ravel()).reshape(grid.shape)
    return Field3(grid, amplitude * values)
