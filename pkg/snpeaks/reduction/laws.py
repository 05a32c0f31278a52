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
from scipy.optimize import brentq

from snpeaks.apis.pipeline import run_jobs
from snpeaks.errors import InsufficientDataError
from snpeaks.groundstate.bundle import GroundStateBundle
from snpeaks.models.surface.assumptions import check_assumptions
from snpeaks.models.surface.frame import surface_frame
from snpeaks.reduction.ansatz import PeakAnsatz
from snpeaks.reduction.fit import (ExpansionFit, check_ladder, fit_power,
                                   richardson)
from snpeaks.reduction.force import (RHO_FACTOR, peak_quadrature,
                                     reduced_force)
from snpeaks.reduction.peak import PeakSolution, solve_peak
from snpeaks.utils.logger import logger

__all__ = [
    'normal_offset_constant', 'solve_peak_ladder', 'solve_normal_offset',
    'verify_normal_law', 'verify_tangential_law', 'mu_a_expansion',
    'reduction_mu_a_pairs'
]

NORMAL_LAW_TOL = 0.05
TANGENTIAL_MIN_ORDER = 1.8
QUARTIC_MIN_ORDER = 3.5
INTERCEPT_TOL = 1e-5
OFFSET_POWER = (1.8, 2.2)


def _noise_floor(values: np.ndarray, floor: float) -> bool:
    return bool(np.max(np.abs(values)) < floor)


def normal_offset_constant(model, b0, bundle: GroundStateBundle) -> float:
    """−(B/2a*)·∂_νΔP(b0)·(∂²_νP(b0))⁻¹"""
    frame = surface_frame(model, b0)
    nu = frame.normal
    dnu_lap = float(model.laplacian_gradient(frame.position) @ nu)
    dnunu = float(nu @ model.hessian(frame.position) @ nu)
    return -bundle.B / (2 * bundle.a_star) * dnu_lap / dnunu


def _peak_job(job) -> PeakSolution:
    model, epsilon, seed, bundle, kwargs = job
    return solve_peak(model, epsilon, seed, bundle, **kwargs)


def solve_peak_ladder(model,
                      eps_list: Sequence[float],
                      seed,
                      bundle: GroundStateBundle,
                      workers: int = 1,
                      **kwargs) -> List[PeakSolution]:
    """solve_peak for every ε, one job per ε, results in ladder order."""
    jobs = [(model, float(eps), np.asarray(seed, dtype=np.float64), bundle,
             kwargs) for eps in eps_list]
    return [r.unwrap() for r in run_jobs(_peak_job, jobs, workers,
                                         'Solving peaks')]


def solve_normal_offset(model,
                        b0,
                        epsilon: float,
                        bundle: GroundStateBundle,
                        rho_factor: float = RHO_FACTOR) -> float:
    """
    Root d of d ↦ F(b0 + dν, ε)·ν along the normal line through b0; used
    when the tangential Jacobian is singular (rotationally symmetric P).
    """
    frame = surface_frame(model, b0)
    nu = frame.normal

    def normal_force(d):
        return reduced_force(model, frame.position + d * nu, epsilon, bundle,
                             rho_factor=rho_factor).normal

    span = 50 * epsilon**2
    limit = getattr(model, 'delta', 0.5)
    while normal_force(-span) * normal_force(span) > 0 and span < limit:
        span *= 2
    return float(brentq(normal_force, -span, span, xtol=1e-15, rtol=1e-13))


def _decompose(model, b0, centers) -> Tuple[np.ndarray, np.ndarray]:
    frame = surface_frame(model, b0)
    offsets = np.asarray(centers) - frame.position
    return offsets @ frame.normal, offsets @ frame.tangents.T


def verify_normal_law(model,
                      b0,
                      eps_list: Sequence[float],
                      bundle: GroundStateBundle,
                      workers: int = 1,
                      tol: float = NORMAL_LAW_TOL,
                      rho_factor: float = RHO_FACTOR) -> ExpansionFit:
    """
    Normal offset d_ν(ε) of the peak from b0 against −(B/2a*)∂_νΔP/∂²_νP·ε².

    The constant is extrapolated from d_ν/ε² over the ladder; when ∂_νΔP
    vanishes at b0 the offset must instead decay at order ≥ 3.5. Without
    a nonsingular (P̃) matrix the normal line search is used alone.
    """
    check_ladder(eps_list)
    eps = np.asarray(eps_list, dtype=np.float64)
    report = check_assumptions(model, b0)
    b0 = report.point
    constant = normal_offset_constant(model, b0, bundle)

    if report.satisfies_ptilde:
        solutions = solve_peak_ladder(
            model, eps, b0, bundle, workers, rho_factor=rho_factor)
        d_nu, drift = _decompose(model, b0,
                                 [s.center for s in solutions])
        converged = all(s.converged for s in solutions)
    else:
        logger.info('b0={} is degenerate; measuring the normal offset by '
                    'line search'.format(b0.tolist()))
        d_nu = np.array([
            solve_normal_offset(model, b0, e, bundle, rho_factor)
            for e in eps
        ])
        drift = np.zeros((len(eps), 2))
        converged = True

    fit = ExpansionFit(
        name='normal_offset',
        eps=eps,
        measured=d_nu,
        predicted=constant * eps**2)
    fit.fit_leading()
    fit.extrapolated = richardson(eps, d_nu / eps**2)
    fit.details.update({
        'b0': b0.tolist(),
        'constant': constant,
        'tangential_drift': np.linalg.norm(drift, axis=1).tolist(),
        'converged': converged,
    })

    dnu_lap = float(
        model.laplacian_gradient(b0) @ surface_frame(model, b0).normal)
    if abs(dnu_lap) <= 1e-10 * max(abs(float(model.laplacian(b0))), 1e-300):
        # tuned family: the ε² term is absent
        fit.details['mode'] = 'quartic'
        fit.passed = converged and (fit.power >= QUARTIC_MIN_ORDER or
                                    _noise_floor(d_nu, 1e-12))
    else:
        ratio = fit.extrapolated / constant
        fit.details.update({'mode': 'quadratic', 'ratio': ratio})
        fit.passed = converged and abs(ratio - 1) <= tol
    fit.fit_remainder()
    logger.info('Normal law: {}'.format(fit))
    return fit


def verify_tangential_law(model,
                          b0,
                          eps_list: Sequence[float],
                          bundle: GroundStateBundle,
                          workers: int = 1,
                          min_order: float = TANGENTIAL_MIN_ORDER,
                          rho_factor: float = RHO_FACTOR) -> ExpansionFit:
    """
    |(D_τΔP)(z*(ε))| along the solved peaks, with its fitted decay order,
    and the order of |z*(ε) − b0| (the peak approaches b0 like ε²).
    Values below round-off (exact symmetry) count as decayed.
    """
    check_ladder(eps_list)
    eps = np.asarray(eps_list, dtype=np.float64)
    report = check_assumptions(model, b0)
    b0 = report.point
    solutions = solve_peak_ladder(
        model, eps, b0, bundle, workers, rho_factor=rho_factor)

    measured = []
    for s in solutions:
        frame = surface_frame(model, model.surface.project(s.center))
        measured.append(
            np.linalg.norm(frame.tangents @ model.laplacian_gradient(
                s.center)))
    measured = np.asarray(measured)
    distance = np.array([np.linalg.norm(s.center - b0) for s in solutions])

    fit = ExpansionFit(name='tangential_lap_gradient', eps=eps,
                       measured=measured)
    floor = 1e-10 * max(np.max(np.abs(model.laplacian_hessian(b0))), 1e-300)
    below = _noise_floor(measured, floor)
    if not below:
        fit.fit_leading()
    offset_power = fit_power(eps, distance)[0] if np.count_nonzero(
        distance) >= 2 else float('nan')
    converged = all(s.converged for s in solutions)
    fit.details.update({
        'b0': b0.tolist(),
        'is_candidate': report.is_candidate,
        'distance': distance.tolist(),
        'offset_power': offset_power,
        'offset_power_ok':
        bool(OFFSET_POWER[0] <= offset_power <= OFFSET_POWER[1]),
        'below_floor': below,
        'converged': converged,
    })
    fit.passed = converged and report.is_candidate and (
        below or fit.power >= min_order) and bool(
            np.all(np.diff(distance[np.argsort(-eps)]) < 0))
    logger.info('Tangential law: {} offset power {:.3f}'.format(
        fit, offset_power))
    return fit


def mu_a_expansion(pairs: Sequence[Tuple[float, float]],
                   bundle: GroundStateBundle,
                   P0: float = 0.0,
                   gamma_tol: float = 0.05,
                   min_order: float = QUARTIC_MIN_ORDER,
                   floor: float = 1e-9,
                   intercept_tol: float = INTERCEPT_TOL) -> ExpansionFit:
    """
    −μ_aδ_a² = 1 + γ₁δ_a² + O(δ_a⁴) with δ_a = a*/a over (a, μ_a) pairs.

    y = −μδ² − 1 is fitted as c₀ + γ₁δ² + cδ⁴. The intercept c₀ measures
    how far the masses are from a*: it must stay below `intercept_tol`.
    γ₁ is compared with −P0 and the remainder after removing c₀ − P0·δ²
    must be of order ≥ 3.5 (or below `floor`).

    Raises:
        InsufficientDataError: fewer than four pairs.
    """
    if len(pairs) < 4:
        raise InsufficientDataError(
            'mu-a expansion needs at least 4 (a, mu) pairs, got {}'.format(
                len(pairs)))
    pairs = sorted(pairs, key=lambda p: -p[0])
    a = np.array([p[0] for p in pairs], dtype=np.float64)
    mu = np.array([p[1] for p in pairs], dtype=np.float64)
    delta = bundle.a_star / a
    y = -mu * delta**2 - 1

    design = np.stack([np.ones_like(delta), delta**2, delta**4], axis=1)
    intercept, gamma1, _ = (float(c) for c in np.linalg.lstsq(
        design, y, rcond=None)[0])
    expected = -P0

    fit = ExpansionFit(
        name='mu_a',
        eps=delta,
        measured=y,
        predicted=intercept + expected * delta**2)
    remainder = fit.residual
    below = _noise_floor(remainder, floor)
    if not below:
        fit.fit_remainder()
    fit.constant = gamma1
    fit.power = 2.0
    fit.details.update({
        'gamma1_fit': gamma1,
        'gamma1_expected': expected,
        'intercept': intercept,
        'remainder_below_floor': below,
        'a': a.tolist(),
        'mu': mu.tolist(),
    })
    gamma_ok = abs(gamma1 - expected) <= gamma_tol * max(abs(expected), 1.0)
    fit.passed = abs(intercept) <= intercept_tol and gamma_ok and (
        below or fit.remainder_power >= min_order)
    logger.info('mu-a expansion: gamma1={:.6g} (expected {:.6g}), '
                'remainder power {:.3f}'.format(gamma1, expected,
                                                fit.remainder_power))
    return fit


def reduction_mu_a_pairs(model,
                         b0,
                         eps_list: Sequence[float],
                         bundle: GroundStateBundle,
                         use_correction: bool = False,
                         workers: int = 1,
                         rho_factor: float = RHO_FACTOR,
                         correction_kwargs: Optional[Dict] = None
                         ) -> List[Tuple[float, float]]:
    """
    (a, μ) along the reduction route: μ = −1/ε² and a = ∫(U_{ε,z} + φ)²/ε⁴
    at the located peak z*(ε) (the normalized solution is that profile
    divided by ε²√a). The mass is integrated from the profile itself, never
    taken from a*.
    """
    if model.surface is not None and check_assumptions(
            model, b0).satisfies_ptilde:
        centers = [
            s.center for s in solve_peak_ladder(
                model, eps_list, b0, bundle, workers, rho_factor=rho_factor)
        ]
    else:
        centers = [np.asarray(b0, dtype=np.float64)] * len(eps_list)

    pairs = []
    for eps, z in zip(eps_list, centers):
        ansatz = PeakAnsatz(eps, z, bundle, P0=model.P0)
        if use_correction:
            report = reduced_force(model, z, eps, bundle,
                                   use_correction=True,
                                   rho_factor=rho_factor,
                                   correction_kwargs=correction_kwargs)
            if report.correction is not None:
                ansatz = ansatz.with_correction(report.correction.phi)
        rule = peak_quadrature(ansatz, rho_factor * eps)
        mass = float(rule.integrate(ansatz.density(rule.points)))
        pairs.append((mass / eps**4, -1.0 / eps**2))
    return pairs
