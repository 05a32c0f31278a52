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

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from snpeaks.errors import DomainError, GeometryError
from snpeaks.geometries.radial import RadialProfile
from snpeaks.geometries.sphere import ball_rule
from snpeaks.groundstate.bundle import GroundStateBundle
from snpeaks.models.surface.assumptions import check_assumptions
from snpeaks.ops.radial_ops import enclosed_mass
from snpeaks.reduction.ansatz import PeakAnsatz
from snpeaks.reduction.fit import ExpansionFit, check_ladder
from snpeaks.utils.logger import logger

__all__ = [
    'PeakField', 'two_peak_c5', 'two_peak_C5_probe', 'nonexistence_probe',
    'SLOPE_WINDOW', 'NONEXISTENCE_THRESHOLD'
]

SLOPE_WINDOW = (3.8, 4.2)
CONTROL_MIN_ORDER = 5.0
NONEXISTENCE_THRESHOLD = 0.1
ROUNDOFF = 1e-12


class PeakField(object):
    """
    Density U_{ε,b}² and its Newton field from the shell theorem,

        ∂_j(|x|⁻¹ * U_{ε,b}²)(x) = −m(r)(x − b)_j/r³,  r = |x − b|,

    with m(r) = A²(ε/√A)³·m_U(√A·r/ε) the mass inside radius r.
    """

    def __init__(self, ansatz: PeakAnsatz, mass_U: RadialProfile):
        self.ansatz = ansatz
        self.mass_U = mass_U

    def density(self, points: np.ndarray) -> np.ndarray:
        return self.ansatz.value(points)**2

    def enclosed(self, radius: np.ndarray) -> np.ndarray:
        ansatz = self.ansatz
        s = ansatz.stretch
        # the profile vanishes past R_max, so the enclosed mass saturates
        arg = np.minimum(s * radius, self.mass_U.grid.R_max)
        return ansatz.amplitude**2 / s**3 * self.mass_U.interpolate(arg)

    def field(self, points: np.ndarray, j: int) -> np.ndarray:
        offsets = np.atleast_2d(points) - self.ansatz.center
        radius = np.linalg.norm(offsets, axis=1)
        safe = np.where(radius > 0, radius, 1.0)
        return np.where(radius > 0,
                        -self.enclosed(radius) * offsets[:, j] / safe**3, 0.0)


def _peak_fields(bundle: GroundStateBundle, centers, epsilon: float,
                 P0: float) -> List[PeakField]:
    mass_U = enclosed_mass(bundle.U * bundle.U)
    return [
        PeakField(PeakAnsatz(epsilon, c, bundle, P0), mass_U)
        for c in centers
    ]


def _check_pair(b1: np.ndarray, b2: np.ndarray, rho: float):
    distance = float(np.linalg.norm(b2 - b1))
    if distance == 0:
        raise GeometryError('Probe centers coincide at {}'.format(
            b1.tolist()), distance=0.0)
    if distance < 4 * rho:
        raise GeometryError(
            'Probe centers {} and {} are {:.4g} apart, need at least '
            '4 rho = {:.4g}'.format(b1.tolist(), b2.tolist(), distance,
                                    4 * rho),
            distance=distance)


def two_peak_c5(bundle: GroundStateBundle,
                centers: Sequence,
                epsilon: float,
                rho: float,
                j: int,
                P0: float = 0.0) -> Tuple[float, float]:
    """
    C̃5 = (1/8πε²)∫_{B_ρ(b1)} ∂_jΦ ũ² for the superposition ũ = Σ U_{ε,b_i}
    with the cross terms of ũ² dropped, b1 = centers[0].

    Returns (C̃5, Σ|integrand| weights), the second being the scale the
    round-off floor refers to.
    """
    peaks = _peak_fields(bundle, centers, epsilon, P0)
    ball = ball_rule(peaks[0].ansatz.center, rho, epsilon)
    density = sum(p.density(ball.points) for p in peaks)
    field = sum(p.field(ball.points, j) for p in peaks)
    integrand = density * field / (8 * np.pi * epsilon**2)
    return float(ball.weights @ integrand), float(
        ball.weights @ np.abs(integrand))


def _default_component(b1: np.ndarray, b2: np.ndarray) -> int:
    return int(np.argmax(np.abs(b2 - b1)))


def two_peak_C5_probe(bundle: GroundStateBundle,
                      b1,
                      b2,
                      eps_list: Sequence[float],
                      rho: float = 0.25,
                      j: Optional[int] = None,
                      P0: float = 0.0) -> ExpansionFit:
    """
    Interaction term C̃5 on B_ρ(b1) for the two-peak ansatz across an ε
    ladder, fitted as C*ε⁴.

    `predicted` is the point-mass limit −(a*²A/8π)(b1 − b2)_j/|b1 − b2|³·ε⁴.
    The single-peak control (b2 removed) is evaluated alongside; it must
    decay faster than ε⁴ or stay at round-off. The ansatz carries no
    correction φ.
    """
    check_ladder(eps_list)
    eps = np.asarray(eps_list, dtype=np.float64)
    b1 = np.asarray(b1, dtype=np.float64)
    b2 = np.asarray(b2, dtype=np.float64)
    _check_pair(b1, b2, rho)
    if np.any(eps > rho / 10):
        raise GeometryError(
            'Probe ladder needs eps <= rho/10 = {:.4g}, got max {:.4g}'.format(
                rho / 10, eps.max()))
    j = _default_component(b1, b2) if j is None else int(j)

    measured, control, scale = [], [], []
    for e in eps:
        value, _ = two_peak_c5(bundle, [b1, b2], e, rho, j, P0)
        single, magnitude = two_peak_c5(bundle, [b1], e, rho, j, P0)
        measured.append(value)
        control.append(single)
        scale.append(magnitude)
    measured = np.asarray(measured)
    control = np.asarray(control)

    separation = b1 - b2
    d = np.linalg.norm(separation)
    amplitude = 1 + eps**2 * P0
    predicted = -(bundle.a_star**2 * amplitude / (8 * np.pi)) * \
        separation[j] / d**3 * eps**4

    fit = ExpansionFit(
        name='two_peak_C5', eps=eps, measured=measured, predicted=predicted)
    fit.fit_leading()
    fit.extrapolated = float(np.polyfit(eps**2, measured / eps**4, 1)[1])
    noise = float(np.std(measured / eps**4 - fit.extrapolated))

    control_floor = bool(
        np.all(np.abs(control) <= ROUNDOFF * np.asarray(scale)))
    if control_floor:
        control_power = float('nan')
    else:
        control_power = ExpansionFit('control', eps, control).fit_leading(
        ).power
    control_ok = control_floor or control_power >= CONTROL_MIN_ORDER

    slope_ok = SLOPE_WINDOW[0] <= fit.power <= SLOPE_WINDOW[1]
    nonzero = abs(fit.extrapolated) > 10 * noise
    fit.details.update({
        'b1': b1.tolist(),
        'b2': b2.tolist(),
        'j': j,
        'rho': rho,
        'C_star_point_mass': float(predicted[0] / eps[0]**4),
        'fit_noise': noise,
        'control': control.tolist(),
        'control_power': control_power,
        'control_below_floor': control_floor,
        'ansatz': 'superposition without correction',
    })
    fit.passed = bool(slope_ok and nonzero and control_ok)
    logger.info('Two-peak C5 probe: {} C*={:.6g}'.format(
        fit, fit.extrapolated))
    return fit


def _moment_term(model, bundle: GroundStateBundle, centers, epsilon: float,
                 rho: float, j: int) -> float:
    """ε²∫_{B_ρ(b1)} ∂_jP ũ² for the superposition (cross terms dropped)."""
    ansatzes = [PeakAnsatz(epsilon, c, bundle, model.P0) for c in centers]
    ball = ball_rule(ansatzes[0].center, rho, epsilon)
    density = sum(a.value(ball.points)**2 for a in ansatzes)
    dP = model.gradient(ball.points)[:, j]
    return float(epsilon**2 * (ball.weights @ (dP * density)))


def nonexistence_probe(model,
                       b1,
                       b2,
                       eps_list: Sequence[float],
                       bundle: GroundStateBundle,
                       rho: float = 0.25,
                       j: Optional[int] = None,
                       threshold: float = NONEXISTENCE_THRESHOLD) -> Dict:
    """
    Compares, on B_ρ(b1), the two-peak interaction term C̃5 with the moment
    term ε²∫∂_jP ũ² that a single-peak balance would leave. For a genuine
    two-peak solution both would have to agree to leading order; the ratio
    |C̃5|/|moment term| staying above `threshold` as ε → 0 is the numerical
    trace of the obstruction.

    Raises:
        DomainError: b1 or b2 is not a candidate point of ΔP on Γ or fails
            the (P̃) verdict of check_assumptions.
        GeometryError: the centers coincide or are closer than 4ρ.
    """
    points = []
    for b in (b1, b2):
        report = check_assumptions(model, b)
        if not report.is_candidate:
            raise DomainError(
                '{} is not a tangential critical point of the Laplacian of '
                'P on the surface (|D_tau| = {:.3e})'.format(
                    np.asarray(b).tolist(),
                    float(np.linalg.norm(report.grad_tangent))))
        if not report.satisfies_ptilde:
            raise DomainError(
                '{} is degenerate: det of the tangential block {:.3e}, of '
                'the curvature-corrected matrix {:.3e}'.format(
                    np.asarray(b).tolist(),
                    float(np.linalg.det(report.hess_tangent)),
                    float(np.linalg.det(report.ptilde))))
        points.append(report.point)
    b1, b2 = points

    fit = two_peak_C5_probe(bundle, b1, b2, eps_list, rho, j, model.P0)
    j = fit.details['j']
    eps = fit.eps
    moment = np.array(
        [_moment_term(model, bundle, [b1, b2], e, rho, j) for e in eps])
    ratio = np.abs(fit.measured) / np.maximum(np.abs(moment), 1e-300)

    rows = [{
        'eps': float(e),
        'C5_over_eps4': float(c / e**4),
        'moment_over_eps4': float(m / e**4),
        'ratio': float(r)
    } for e, c, m, r in zip(eps, fit.measured, moment, ratio)]
    verdict = {
        'b1': b1.tolist(),
        'b2': b2.tolist(),
        'j': j,
        'rho': rho,
        'threshold': threshold,
        'C_star': fit.extrapolated,
        'min_ratio': float(ratio.min()),
        'rows': rows,
        'probe': fit,
        'passed': bool(fit.passed and np.all(ratio > threshold)),
    }
    logger.info('Nonexistence probe: min ratio {:.4g} (threshold {}), '
                'C*={:.6g}'.format(ratio.min(), threshold, fit.extrapolated))
    return verdict
