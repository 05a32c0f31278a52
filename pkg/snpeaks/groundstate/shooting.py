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

import numpy as np
from scipy.integrate import solve_ivp

from snpeaks.errors import BracketingError, IterationError
from snpeaks.utils.logger import logger

__all__ = ['ShootingResult', 'shooting_ground_state']

R0 = 1e-6


@dataclass(frozen=True)
class ShootingResult:
    """Constants of U recovered from the shooting solution."""
    chi0: float
    lam: float
    a_star: float
    U0: float
    M2: float
    M4: float
    r_end: float

    @property
    def B(self) -> float:
        return self.M2 / 3


def _rhs(r, y):
    V, dV, chi, dchi, _, _, _ = y
    V2 = V * V
    return [
        dV, -2.0 / r * dV - chi * V, dchi, -2.0 / r * dchi - 0.5 * V2,
        r**2 * V2, r**4 * V2, r**6 * V2
    ]


def _crosses_zero(r, y):
    return y[0]


_crosses_zero.terminal = True
_crosses_zero.direction = -1


def _turns_up(r, y):
    return y[1]


_turns_up.terminal = True
_turns_up.direction = 1


def _integrate(chi0: float, r_max: float):
    r0 = R0
    y0 = [
        1 - chi0 * r0**2 / 6, -chi0 * r0 / 3, chi0 - r0**2 / 12, -r0 / 6,
        r0**3 / 3, r0**5 / 5, r0**7 / 7
    ]
    return solve_ivp(
        _rhs, (r0, r_max),
        y0,
        method='DOP853',
        rtol=1e-12,
        atol=1e-14,
        events=[_crosses_zero, _turns_up])


def _classify(sol) -> int:
    """+1 if chi0 is too large (V crosses zero), -1 if too small, 0 if neither."""
    if len(sol.t_events[0]):
        return 1
    if len(sol.t_events[1]):
        return -1
    return 0


def shooting_ground_state(r_max: float = 200.0,
                          rel_tol: float = 1e-15,
                          max_bisections: int = 200) -> ShootingResult:
    """
    Independent ground-state oracle. Writes the Choquard equation as the
    radial system

        −ΔV = χV,   −Δχ = V²/2,   V(0) = 1,  χ(0) = c,

    bisects on c between profiles that cross zero and profiles that turn
    upward, and rescales the separatrix to the unit-frequency form
    U(x) = V(x/√λ)/λ with λ = −χ(∞).
    """
    c_lo, c_hi = 1e-6, 1.0
    if _classify(_integrate(c_lo, r_max)) != -1:
        raise BracketingError('Lower shooting parameter does not undershoot')

    for _ in range(60):
        if _classify(_integrate(c_hi, r_max)) == 1:
            break
        c_lo, c_hi = c_hi, 2 * c_hi
    else:
        raise BracketingError('No overshooting parameter found')

    for it in range(max_bisections):
        c_mid = 0.5 * (c_lo + c_hi)
        kind = _classify(_integrate(c_mid, r_max))
        if kind == 1:
            c_hi = c_mid
        elif kind == -1:
            c_lo = c_mid
        else:
            c_lo = c_hi = c_mid
        if c_hi - c_lo <= rel_tol * c_hi:
            break
    else:
        raise IterationError(
            'Shooting bisection did not converge', residual=c_hi - c_lo)

    sol = _integrate(c_lo, r_max)
    # stop where V is smallest before the separatrix instability sets in
    V = sol.y[0]
    i_end = int(np.argmin(np.abs(V)))
    r_end = sol.t[i_end]
    y_end = sol.y[:, i_end]

    charge = 0.5 * y_end[4]
    chi_inf = y_end[2] - charge / r_end
    lam = -chi_inf
    if lam <= 0:
        raise IterationError(
            'Shooting tail has nonnegative frequency {}'.format(-lam))

    norm_V = 4 * np.pi * y_end[4]
    M2_V = 4 * np.pi * y_end[5]
    M4_V = 4 * np.pi * y_end[6]
    result = ShootingResult(
        chi0=0.5 * (c_lo + c_hi),
        lam=lam,
        a_star=norm_V / np.sqrt(lam),
        U0=1.0 / lam,
        M2=np.sqrt(lam) * M2_V,
        M4=lam**1.5 * M4_V,
        r_end=float(r_end))
    logger.debug('Shooting oracle: chi0={:.15f} lambda={:.12f} a*={:.10f} '
                 'after {} bisections'.format(result.chi0, lam,
                                              result.a_star, it + 1))
    return result
