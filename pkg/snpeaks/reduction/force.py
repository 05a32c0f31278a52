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
from typing import Dict, Optional, Union

import numpy as np
import sympy

from snpeaks.errors import DomainError
from snpeaks.geometries.sphere import BallRule, ball_rule
from snpeaks.groundstate.bundle import GroundStateBundle
from snpeaks.linops.correction import CorrectionResult, solve_correction
from snpeaks.models.surface.frame import surface_frame
from snpeaks.reduction.ansatz import PeakAnsatz

__all__ = [
    'ReducedForceReport', 'reduced_force', 'predicted_force',
    'moment_expansion', 'peak_quadrature', 'RHO_FACTOR'
]

RHO_FACTOR = 16.0
SINGULAR_DENSITY = 1e-6


@dataclass(frozen=True)
class ReducedForceReport:
    """
    F_j(z, ε) = ∫_{B_ρ(z)} ∂_jP·(U_{ε,z} + φ)², its normal/tangential split
    in the frame at the projection of z onto Γ, and a quadrature error
    estimate from a coarser rule.
    """
    center: np.ndarray
    epsilon: float
    rho: float
    force: np.ndarray
    quad_error: float
    normal: float = float('nan')
    tangential: Optional[np.ndarray] = None
    dnu_P: float = float('nan')
    correction: Optional[CorrectionResult] = None

    @property
    def magnitude(self) -> float:
        return float(np.linalg.norm(self.force))

    def to_dict(self) -> Dict:
        dic = {
            'epsilon': self.epsilon,
            'rho': self.rho,
            'z1': float(self.center[0]),
            'z2': float(self.center[1]),
            'z3': float(self.center[2]),
            'F1': float(self.force[0]),
            'F2': float(self.force[1]),
            'F3': float(self.force[2]),
            'F_normal': self.normal,
            'quad_error': self.quad_error,
            'dnu_P': self.dnu_P,
        }
        if self.tangential is not None:
            dic['F_tau1'] = float(self.tangential[0])
            dic['F_tau2'] = float(self.tangential[1])
        if self.correction is not None:
            dic['phi_norm_a'] = self.correction.norm_a
        return dic


def peak_quadrature(ansatz: PeakAnsatz,
                    rho: float,
                    fine: bool = True) -> BallRule:
    """Ball rule around the peak with panels two peak widths wide."""
    width = 1.0 / ansatz.stretch
    if fine:
        return ball_rule(ansatz.center, rho, width, nodes_per_panel=16,
                         order=31)
    return ball_rule(ansatz.center, rho, width, nodes_per_panel=10,
                     order=19)


def _check_singularities(model, ansatz: PeakAnsatz, rho: float):
    singular = np.atleast_2d(model.singular_points())
    if singular.size == 0:
        return
    inside = np.linalg.norm(singular - ansatz.center, axis=1) < rho
    if not inside.any():
        return
    peak = ansatz.amplitude * ansatz.bundle.U.values[0]
    density = ansatz.value(singular[inside])**2
    if density.max() > SINGULAR_DENSITY * peak**2:
        raise DomainError(
            'Ball of radius {:.4g} around {} holds a non-smooth point of {} '
            'where the peak density is {:.3e} of its maximum'.format(
                rho, ansatz.center.tolist(), model,
                density.max() / peak**2))


def _integrate_force(model, ansatz: PeakAnsatz, rule: BallRule) -> np.ndarray:
    grads = model.gradient(rule.points)
    density = ansatz.density(rule.points)
    values = grads * density[:, None]
    if not np.all(np.isfinite(values)):
        raise DomainError('∇P is not finite inside the ball around {}'.format(
            ansatz.center.tolist()))
    return rule.integrate(values)


def reduced_force(model,
                  z,
                  epsilon: float,
                  bundle: GroundStateBundle,
                  use_correction: bool = False,
                  rho_factor: float = RHO_FACTOR,
                  correction_kwargs: Optional[Dict] = None
                  ) -> ReducedForceReport:
    """
    Reduced force of the concentrating ansatz at z.

    Args:
        model: potential with derivatives.
        z: peak center (3,).
        epsilon: concentration parameter ε = 1/√(−μ).
        bundle: ground-state constants and profile.
        use_correction: add φ from `solve_correction` to the ansatz.
        rho_factor: ball radius in units of ε.

    Raises:
        DomainError: a non-smooth point of P sits inside the peak.
    """
    ansatz = PeakAnsatz(epsilon, z, bundle, P0=model.P0)
    rho = rho_factor * epsilon
    _check_singularities(model, ansatz, rho)

    correction = None
    if use_correction:
        correction = solve_correction(ansatz, model,
                                      **(correction_kwargs or {}))
        ansatz = ansatz.with_correction(correction.phi)

    force = _integrate_force(model, ansatz, peak_quadrature(ansatz, rho))
    coarse = _integrate_force(model, ansatz,
                              peak_quadrature(ansatz, rho, fine=False))
    quad_error = float(np.max(np.abs(force - coarse)))

    normal, tangential, dnu_P = float('nan'), None, float('nan')
    if model.surface is not None:
        frame = surface_frame(model, model.surface.project(ansatz.center))
        normal = float(force @ frame.normal)
        tangential = frame.tangents @ force
        dnu_P = float(model.gradient(ansatz.center) @ frame.normal)

    return ReducedForceReport(
        center=ansatz.center,
        epsilon=float(epsilon),
        rho=rho,
        force=force,
        quad_error=quad_error,
        normal=normal,
        tangential=tangential,
        dnu_P=dnu_P,
        correction=correction)


def predicted_force(model, z, epsilon: float,
                    bundle: GroundStateBundle) -> np.ndarray:
    """
    Moment expansion of the reduced force through ε⁵:

        a*ε³(1 + ε²P0)^{1/2} [∇P(z) + ε²B/(2a*(1 + ε²P0)) ∇ΔP(z)].
    """
    z = np.asarray(z, dtype=np.float64)
    amplitude = 1.0 + epsilon**2 * model.P0
    prefactor = bundle.a_star * epsilon**3 * np.sqrt(amplitude)
    shift = epsilon**2 * bundle.B / (2 * bundle.a_star * amplitude)
    return prefactor * (model.gradient(z) + shift *
                        model.laplacian_gradient(z))


_X = sympy.symbols('x0 x1 x2', real=True)


def moment_expansion(G: Union[str, sympy.Expr],
                     z,
                     epsilon: float,
                     bundle: GroundStateBundle,
                     P0: float = 0.0,
                     rho_factor: float = RHO_FACTOR) -> Dict[str, float]:
    """
    ∫G·U²_{ε,z} by ball quadrature against its moment expansion

        (1 + ε²P0)^{1/2}ε³a*·G(z) + (1 + ε²P0)^{-1/2}(ε⁵/6)ΔG(z)·∫|x|²U².

    G is a sympy expression (or string) in x0, x1, x2.
    """
    expr = sympy.sympify(G, locals=dict(zip(('x0', 'x1', 'x2'), _X)))
    lap = sum(sympy.diff(expr, x, 2) for x in _X)
    g = sympy.lambdify(_X, expr, modules='numpy')
    lap_g = sympy.lambdify(_X, lap, modules='numpy')

    ansatz = PeakAnsatz(epsilon, z, bundle, P0=P0)
    rule = peak_quadrature(ansatz, rho_factor * epsilon)
    p = rule.points
    values = np.broadcast_to(g(p[:, 0], p[:, 1], p[:, 2]), (len(p), ))
    quadrature = float(rule.integrate(values * ansatz.density(p)))

    zc = ansatz.center
    amplitude = ansatz.amplitude
    predicted = np.sqrt(amplitude) * epsilon**3 * bundle.a_star * float(
        g(*zc)) + epsilon**5 / (6 * np.sqrt(amplitude)) * float(
            lap_g(*zc)) * bundle.M2
    return {
        'quadrature': quadrature,
        'predicted': float(predicted),
        'relative_error': abs(quadrature - predicted) / abs(predicted)
        if predicted else float('nan'),
    }
