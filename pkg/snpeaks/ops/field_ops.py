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

from functools import lru_cache
from typing import Tuple

import numpy as np
import scipy.fft as sfft

from snpeaks.errors import TruncationError
from snpeaks.geometries.field import Field3
from snpeaks.utils.logger import logger

__all__ = [
    'CELL_AVERAGE_INV_R', 'laplacian_7pt', 'laplacian_4th', 'gradient',
    'gradient_norm2', 'dirichlet_eigenvalues', 'helmholtz_solve',
    'newton_kernel_fft', 'newton_gradient_kernel_fft', 'convolve_padded',
    'boundary_ratio', 'newton_potential_3d', 'newton_field_3d', 'restrict'
]

# mean of 1/|x| over the unit cube centred at the origin
CELL_AVERAGE_INV_R = 2.380077

WARN_RATIO = 1e-8
FAIL_RATIO = 1e-4


def _shifted(padded: np.ndarray, axis: int, offset: int, pad: int,
             shape) -> np.ndarray:
    idx = [slice(pad, pad + shape[a]) for a in range(3)]
    idx[axis] = slice(pad + offset, pad + offset + shape[axis])
    return padded[tuple(idx)]


def laplacian_7pt(values: np.ndarray, h: float) -> np.ndarray:
    """Second-order Laplacian, zero outside the box."""
    shape = values.shape
    padded = np.pad(values, 1)
    out = -6.0 * values
    for axis in range(3):
        out = out + _shifted(padded, axis, 1, 1, shape) + _shifted(
            padded, axis, -1, 1, shape)
    return out / h**2


def laplacian_4th(values: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order 13-point Laplacian, zero outside the box."""
    shape = values.shape
    padded = np.pad(values, 2)
    out = 3 * (-2.5) * values
    for axis in range(3):
        out = out + (4.0 / 3.0) * (_shifted(padded, axis, 1, 2, shape) +
                                   _shifted(padded, axis, -1, 2, shape)) \
            - (1.0 / 12.0) * (_shifted(padded, axis, 2, 2, shape) +
                              _shifted(padded, axis, -2, 2, shape))
    return out / h**2


def gradient(values: np.ndarray, h: float, axis: int,
             order: int = 4) -> np.ndarray:
    """Central difference ∂_axis, zero outside the box."""
    shape = values.shape
    if order == 2:
        padded = np.pad(values, 1)
        return (_shifted(padded, axis, 1, 1, shape) -
                _shifted(padded, axis, -1, 1, shape)) / (2 * h)
    padded = np.pad(values, 2)
    return (8 * (_shifted(padded, axis, 1, 2, shape) -
                 _shifted(padded, axis, -1, 2, shape)) -
            (_shifted(padded, axis, 2, 2, shape) -
             _shifted(padded, axis, -2, 2, shape))) / (12 * h)


def gradient_norm2(values: np.ndarray, h: float,
                   order: int = 4) -> np.ndarray:
    return sum(gradient(values, h, axis, order)**2 for axis in range(3))


@lru_cache(maxsize=8)
def dirichlet_eigenvalues(shape: Tuple[int, int, int],
                          h: float) -> np.ndarray:
    """Eigenvalues of −Δ_7pt with zero exterior, in DST-I ordering."""
    lams = []
    for n in shape:
        k = np.arange(1, n + 1)
        lams.append(4.0 / h**2 * np.sin(np.pi * k / (2 * (n + 1)))**2)
    out = lams[0][:, None, None] + lams[1][None, :, None] \
        + lams[2][None, None, :]
    out.flags.writeable = False
    return out


def helmholtz_solve(rhs: np.ndarray, h: float, shift,
                    scale: float = 1.0) -> np.ndarray:
    """
    Solves (−scale·Δ_7pt + shift) x = rhs exactly with a type-I sine
    transform; `shift` may be a scalar or an array broadcastable to the
    spectrum.
    """
    lam = dirichlet_eigenvalues(tuple(rhs.shape), float(h))
    coeffs = sfft.dstn(rhs, type=1, norm='ortho')
    coeffs /= scale * lam + shift
    return sfft.idstn(coeffs, type=1, norm='ortho')


def _signed_offsets(n: int, h: float) -> np.ndarray:
    i = np.arange(2 * n)
    d = np.where(i < n, i, i - 2 * n).astype(np.float64)
    d[n] = 0.0
    return d * h


@lru_cache(maxsize=8)
def newton_kernel_fft(shape: Tuple[int, int, int], h: float) -> np.ndarray:
    """
    rfftn of the 1/|d| kernel on the doubled box, times the cell volume.
    The self cell gets the analytic cell average.
    """
    axes = [_signed_offsets(n, h) for n in shape]
    dx, dy, dz = np.meshgrid(*axes, indexing='ij')
    dist = np.sqrt(dx**2 + dy**2 + dz**2)
    kernel = np.zeros_like(dist)
    nonzero = dist > 0
    kernel[nonzero] = h**3 / dist[nonzero]
    kernel[0, 0, 0] = CELL_AVERAGE_INV_R * h**2
    out = sfft.rfftn(kernel)
    out.flags.writeable = False
    return out


@lru_cache(maxsize=8)
def newton_gradient_kernel_fft(shape: Tuple[int, int, int], h: float,
                               axis: int) -> np.ndarray:
    """rfftn of d_axis/|d|³ times the cell volume; zero on the self cell."""
    axes = [_signed_offsets(n, h) for n in shape]
    d = np.meshgrid(*axes, indexing='ij')
    dist = np.sqrt(d[0]**2 + d[1]**2 + d[2]**2)
    kernel = np.zeros_like(dist)
    nonzero = dist > 0
    kernel[nonzero] = h**3 * d[axis][nonzero] / dist[nonzero]**3
    out = sfft.rfftn(kernel)
    out.flags.writeable = False
    return out


def convolve_padded(values: np.ndarray, kernel_fft: np.ndarray) -> np.ndarray:
    """Aperiodic convolution via zero padding to twice the box."""
    shape = values.shape
    padded_shape = tuple(2 * n for n in shape)
    spectrum = sfft.rfftn(values, s=padded_shape)
    full = sfft.irfftn(spectrum * kernel_fft, s=padded_shape)
    return full[:shape[0], :shape[1], :shape[2]]


def boundary_ratio(values: np.ndarray) -> float:
    """max over the box faces of |f| relative to max |f|."""
    peak = float(np.max(np.abs(values)))
    if peak == 0:
        return 0.0
    faces = [
        values[0], values[-1], values[:, 0], values[:, -1], values[:, :, 0],
        values[:, :, -1]
    ]
    return max(float(np.max(np.abs(face))) for face in faces) / peak


def _check_truncation(values: np.ndarray, check: bool):
    if not check:
        return
    ratio = boundary_ratio(values)
    if ratio > FAIL_RATIO:
        raise TruncationError(
            'Density reaches {:.3e} of its peak on the box boundary'.format(
                ratio))
    if ratio > WARN_RATIO:
        logger.warning(
            'Newton potential: density is {:.3e} of its peak on the box '
            'boundary'.format(ratio))


def newton_potential_3d(f: Field3, check: bool = True) -> Field3:
    """
    (1/|x|) * f on the box by Hockney's zero-padded FFT convolution.

    Raises:
        TruncationError: f is not small on the box boundary.
    """
    _check_truncation(f.values, check)
    grid = f.grid
    kernel = newton_kernel_fft(grid.shape, grid.spacing)
    return f.like(convolve_padded(f.values, kernel))


def newton_field_3d(f: Field3, axis: int, check: bool = True) -> Field3:
    """∫ f(y)(x_j − y_j)/|x − y|³ dy, i.e. −∂_j of the Newton potential."""
    _check_truncation(f.values, check)
    grid = f.grid
    kernel = newton_gradient_kernel_fft(grid.shape, grid.spacing, int(axis))
    return f.like(convolve_padded(f.values, kernel))


def restrict(values: np.ndarray, factor: int = 2) -> np.ndarray:
    """Cell-centred coarsening by block averages."""
    n = values.shape
    if any(c % factor for c in n):
        raise ValueError('shape {} not divisible by {}'.format(n, factor))
    view = values.reshape(n[0] // factor, factor, n[1] // factor, factor,
                          n[2] // factor, factor)
    return view.mean(axis=(1, 3, 5))
