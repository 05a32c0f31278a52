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

import os
from dataclasses import asdict, dataclass
from typing import Dict, Sequence

import numpy as np

from snpeaks.errors import WindowError
from snpeaks.geometries.radial import RadialProfile
from snpeaks.utils.common import read_key_values, write_key_values

__all__ = [
    'MomentTable', 'DecayReport', 'GroundStateBundle', 'moment_table',
    'extract_decay_constant', 'identity_checks'
]


@dataclass(frozen=True)
class MomentTable:
    """Radial moments of U² and the Cartesian moments they induce."""
    M2: float
    M4: float

    @property
    def x2(self) -> float:
        """∫x_l² U²"""
        return self.M2 / 3

    @property
    def x4(self) -> float:
        """∫x_l⁴ U²"""
        return self.M4 / 5

    @property
    def x2y2(self) -> float:
        """∫x_l² x_m² U², l ≠ m"""
        return self.M4 / 15

    def quartic(self, l: int, m: int) -> float:
        return self.x4 if l == m else self.x2y2


@dataclass(frozen=True)
class DecayReport:
    value: float
    variation: float
    window: tuple


@dataclass(frozen=True)
class GroundStateBundle:
    """
    U and the constants the peak expansions consume. Integral constants may
    be Richardson-extrapolated and therefore differ at O(h⁴) from
    quadratures of `U` itself.
    """
    U: RadialProfile
    a_star: float
    lambda0: float
    decay_variation: float
    M2: float
    M4: float
    energy_double: float
    kinetic: float
    U0: float
    residual: float = 0.0
    iterations: int = 0
    mass: float = 1.0
    kernel_scale: float = 1.0

    @property
    def B(self) -> float:
        """(1/3)∫|x|²U²"""
        return self.M2 / 3

    @property
    def moments(self) -> MomentTable:
        return MomentTable(self.M2, self.M4)

    @property
    def grid(self):
        return self.U.grid

    @property
    def coulomb_charge(self) -> float:
        """Far-field coefficient of the self-potential: (1/8π)Φ_U ~ charge/r."""
        return self.a_star / (8 * np.pi)

    def constants(self) -> Dict[str, float]:
        dic = asdict(self)
        dic.pop('U')
        dic['B'] = self.B
        dic['R_max'] = self.grid.R_max
        dic['N'] = self.grid.N
        return dic

    def save(self, dirname: str):
        os.makedirs(dirname, exist_ok=True)
        self.U.to_csv(os.path.join(dirname, 'U.csv'), name='U')
        write_key_values(
            os.path.join(dirname, 'constants.txt'), self.constants())

    @classmethod
    def load(cls, dirname: str) -> 'GroundStateBundle':
        U = RadialProfile.from_csv(os.path.join(dirname, 'U.csv'))
        values = read_key_values(os.path.join(dirname, 'constants.txt'))
        kwargs = {}
        for name, fld in cls.__dataclass_fields__.items():
            if name == 'U' or name not in values:
                continue
            kwargs[name] = int(values[name]) if fld.type in (
                int, 'int') else float(values[name])
        return cls(U=U, **kwargs)


def moment_table(U: RadialProfile) -> MomentTable:
    """M₂ = ∫r²U², M₄ = ∫r⁴U² by radial quadrature."""
    return MomentTable(
        M2=U.moment_of_square(2), M4=U.moment_of_square(4))


def _tail_series(nu: float, terms: int = 3) -> np.ndarray:
    """
    Coefficients a_k of r^ν e^{-r} Σ a_k r^{-k}, the decaying solution of
    v'' − v + (2ν/r) v = 0 with a_0 = 1.
    """
    a = np.zeros(terms)
    a[0] = 1.0
    for k in range(1, terms):
        a[k] = -(nu - k + 1) * (nu - k) * a[k - 1] / (2 * k)
    return a


def extract_decay_constant(U: RadialProfile,
                           window: Sequence[float],
                           coulomb_charge: float = 0.0,
                           min_start: float = 6.0,
                           cutoff_margin: float = 8.0) -> DecayReport:
    """
    λ₀ as the window mean of g(r) = r e^r U(r).

    A nonzero `coulomb_charge` M (the 1/r coefficient of the self-potential)
    bends the tail to U ~ λ₀ r^{ν−1} e^{−r}(1 + a₁/r + a₂/r²), ν = M/2; g
    then divides out r^ν and the series so the window mean is the limit
    constant. With M = 0 g is the plain r e^r U.
    """
    r_lo, r_hi = float(window[0]), float(window[1])
    R_max = U.grid.R_max
    if not (0 < r_lo < r_hi < R_max):
        raise WindowError('Window [{}, {}] must lie inside (0, {})'.format(
            r_lo, r_hi, R_max))
    if r_lo < min_start:
        raise WindowError('Window must start at r >= {}, got {}'.format(
            min_start, r_lo))
    if r_hi > R_max - cutoff_margin:
        raise WindowError(
            'Window end {} is within {} of the cutoff {}; the tail is '
            'contaminated by the boundary'.format(r_hi, cutoff_margin, R_max))

    r = U.r
    mask = (r >= r_lo) & (r <= r_hi)
    rw = r[mask]
    nu = 0.5 * coulomb_charge
    series = np.polyval(_tail_series(nu)[::-1], 1.0 / rw)
    g = rw**(1 - nu) * np.exp(rw) * U.values[mask] / series

    mean = float(np.mean(g))
    variation = float((g.max() - g.min()) / abs(mean))
    return DecayReport(mean, variation, (r_lo, r_hi))


def identity_checks(bundle: GroundStateBundle) -> Dict[str, float]:
    """
    Relative errors of the three integral identities of U:
        ∫(|∇U|² + U²)  = (1/8π) ∬
        ∫(|∇U|² + 3U²) = (5/16π) ∬
        a*·(32π/3) / ∬ = 1
    """
    E = bundle.energy_double
    T = bundle.kinetic
    a = bundle.a_star
    nehari = (T + a) / (E / (8 * np.pi)) - 1
    pohozaev = (T + 3 * a) / (5 * E / (16 * np.pi)) - 1
    ratio = a * (32 * np.pi / 3) / E - 1
    return {
        'nehari': abs(nehari),
        'pohozaev': abs(pohozaev),
        'energy_ratio': abs(ratio)
    }
