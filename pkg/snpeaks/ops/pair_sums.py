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

import numba
import numpy as np

__all__ = ['pair_gradient_sum', 'pair_gradient_partials']


@numba.jit(nopython=True, parallel=True)
def pair_gradient_partials(xs, wx, ys, wy, axis, block):
    """
    Per-block partial sums of

        Σ_i wx_i Σ_k wy_k (x_i − y_k)_axis / |x_i − y_k|³

    over blocks of `block` consecutive x points. Coincident pairs are
    skipped (the odd kernel averages to zero over a cell).
    """
    n = xs.shape[0]
    m = ys.shape[0]
    num_blocks = (n + block - 1) // block
    partials = np.zeros(num_blocks)
    for b in numba.prange(num_blocks):
        acc = 0.0
        stop = min(n, (b + 1) * block)
        for i in range(b * block, stop):
            inner = 0.0
            for k in range(m):
                d0 = xs[i, 0] - ys[k, 0]
                d1 = xs[i, 1] - ys[k, 1]
                d2 = xs[i, 2] - ys[k, 2]
                r2 = d0 * d0 + d1 * d1 + d2 * d2
                if r2 == 0.0:
                    continue
                if axis == 0:
                    dj = d0
                elif axis == 1:
                    dj = d1
                else:
                    dj = d2
                inner += wy[k] * dj / (r2 * np.sqrt(r2))
            acc += wx[i] * inner
        partials[b] = acc
    return partials


def pair_gradient_sum(xs: np.ndarray,
                      wx: np.ndarray,
                      ys: np.ndarray,
                      wy: np.ndarray,
                      axis: int,
                      block: int = 256) -> float:
    """
    Direct O(n·m) double sum of the (x − y)_axis/|x − y|³ kernel. Blocks run
    in parallel; the partials are reduced in block order so the result does
    not depend on the thread count.
    """
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    wx = np.ascontiguousarray(wx, dtype=np.float64)
    wy = np.ascontiguousarray(wy, dtype=np.float64)
    if len(xs) == 0 or len(ys) == 0:
        return 0.0
    partials = pair_gradient_partials(xs, wx, ys, wy, int(axis), int(block))
    total = 0.0
    for value in partials:
        total += value
    return float(total)
