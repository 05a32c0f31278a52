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

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from snpeaks.apis.scheduler import FlowScheduler
from snpeaks.errors import DegeneracyError
from snpeaks.groundstate.bundle import GroundStateBundle
from snpeaks.reduction.force import RHO_FACTOR, reduced_force
from snpeaks.utils.logger import logger

__all__ = ['PeakSolution', 'solve_peak', 'force_jacobian']

MAX_HALVINGS = 6
CONDITION_TOL = 1e-7


@dataclass
class PeakSolution:
    """Zero of the reduced force z ↦ F(z, ε) with its Newton trace."""
    epsilon: float
    seed: np.ndarray
    center: np.ndarray
    force: np.ndarray
    converged: bool
    iterations: int
    singular_values: np.ndarray
    trace: List[Dict] = field(default_factory=list)

    @property
    def force_norm(self) -> float:
        return float(np.linalg.norm(self.force))

    def to_dict(self) -> Dict:
        return {
            'epsilon': self.epsilon,
            'z1': float(self.center[0]),
            'z2': float(self.center[1]),
            'z3': float(self.center[2]),
            'force_norm': self.force_norm,
            'converged': self.converged,
            'iterations': self.iterations,
        }


def _force(model, z, epsilon, bundle, rho_factor) -> np.ndarray:
    return reduced_force(model, z, epsilon, bundle,
                         rho_factor=rho_factor).force


def force_jacobian(model,
                   z,
                   epsilon: float,
                   bundle: GroundStateBundle,
                   step: Optional[float] = None,
                   rho_factor: float = RHO_FACTOR) -> np.ndarray:
    """Central-difference Jacobian ∂F_i/∂z_j, default step 1e-3·ε."""
    step = 1e-3 * epsilon if step is None else step
    z = np.asarray(z, dtype=np.float64)
    J = np.empty((3, 3))
    for j in range(3):
        e = np.zeros(3)
        e[j] = step
        J[:, j] = (_force(model, z + e, epsilon, bundle, rho_factor) -
                   _force(model, z - e, epsilon, bundle, rho_factor)) / (
                       2 * step)
    return J


def solve_peak(model,
               epsilon: float,
               seed,
               bundle: GroundStateBundle,
               tol_F: Optional[float] = None,
               max_iter: int = 30,
               fd_step: Optional[float] = None,
               rho_factor: float = RHO_FACTOR,
               log_interval: int = 1) -> PeakSolution:
    """
    Damped Newton for F(z, ε) = 0 from `seed`, with a finite-difference
    Jacobian and up to six step halvings whenever |F| grows.

    Non-convergence is not an error: the solution comes back with
    `converged=False` and its trace.

    Raises:
        DegeneracyError: σ_min/σ_max of the Jacobian below 1e-7.
    """
    tol_F = 1e-10 * bundle.a_star * epsilon**3 if tol_F is None else tol_F
    seed = np.asarray(seed, dtype=np.float64)
    z = seed.copy()
    F = _force(model, z, epsilon, bundle, rho_factor)
    trace = [{'iteration': 0, 'z': z.tolist(),
              'force_norm': float(np.linalg.norm(F)), 'halvings': 0}]
    scheduler = FlowScheduler(log_interval=log_interval)
    sigma = np.full(3, np.nan)
    converged = bool(np.linalg.norm(F) < tol_F)

    it = 0
    while not converged and it < max_iter:
        it += 1
        J = force_jacobian(model, z, epsilon, bundle, fd_step, rho_factor)
        U, sigma, Vt = np.linalg.svd(J)
        if sigma[-1] < CONDITION_TOL * sigma[0]:
            raise DegeneracyError(
                'Reduced-force Jacobian at {} is singular: sigma={}'.format(
                    z.tolist(), sigma.tolist()), trace)
        step = -Vt.T @ ((U.T @ F) / sigma)

        norm = np.linalg.norm(F)
        for halvings in range(MAX_HALVINGS + 1):
            candidate = z + step
            F_new = _force(model, candidate, epsilon, bundle, rho_factor)
            if np.linalg.norm(F_new) < norm:
                break
            step = 0.5 * step
        z, F = candidate, F_new

        force_norm = float(np.linalg.norm(F))
        trace.append({'iteration': it, 'z': z.tolist(),
                      'force_norm': force_norm, 'halvings': halvings})
        if scheduler.step().do_log:
            logger.iteration('Newton', it, level=logging.DEBUG, eps=epsilon,
                             force=force_norm, halvings=halvings)
        converged = force_norm < tol_F
        if halvings == MAX_HALVINGS and not converged:
            break

    if not converged:
        logger.warning('Peak Newton at eps={:.4g} stopped after {} '
                       'iterations with |F|={:.3e} (tol {:.3e})'.format(
                           epsilon, it, np.linalg.norm(F), tol_F))
    return PeakSolution(
        epsilon=float(epsilon),
        seed=seed,
        center=z,
        force=F,
        converged=converged,
        iterations=it,
        singular_values=np.asarray(sigma),
        trace=trace)
