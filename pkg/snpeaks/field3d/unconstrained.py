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
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.sparse.linalg import LinearOperator, cg

from snpeaks.apis.pipeline import run_jobs
from snpeaks.apis.scheduler import FlowScheduler
from snpeaks.errors import IterationError, RangeError
from snpeaks.field3d.flow import BOX_FACTOR, HartreeOperator, peak_grid
from snpeaks.geometries.field import Field3
from snpeaks.groundstate.bundle import GroundStateBundle
from snpeaks.ops.field_ops import helmholtz_solve, laplacian_7pt
from snpeaks.reduction.ansatz import PeakAnsatz
from snpeaks.utils.logger import logger

__all__ = ['UnconstrainedResult', 'lambda_to_a', 'sample_a_ladder', 'invert_a']

MIN_LAMBDA = 25.0
PETVIASHVILI_EXPONENT = 1.5  # p/(p − 1) for the cubic nonlinearity


@dataclass
class UnconstrainedResult:
    """
    w_λ solving −Δw + (λ + P)w = (1/8π)(|x|⁻¹ * w²)w and a = ∫w²; the
    normalized pair is u = w/√a with μ = −λ.
    """
    lam: float
    w: Field3
    a: float
    residual: float
    iterations: int
    trace: List[Dict] = field(default_factory=list)

    @property
    def mu(self) -> float:
        return -self.lam

    def normalized(self) -> Field3:
        return self.w.like(self.w.values / np.sqrt(self.a))

    def to_dict(self) -> Dict:
        return {
            'lambda': self.lam,
            'a': self.a,
            'a_over_sqrt_lambda': self.a / np.sqrt(self.lam),
            'mu': self.mu,
            'residual': self.residual,
            'iterations': self.iterations,
        }


def _linear_solve(op: HartreeOperator, lam: float, rhs: np.ndarray,
                  tol: float) -> np.ndarray:
    """(−Δ + λ + P)x = rhs by CG preconditioned with (−Δ + λ)⁻¹."""
    grid = op.grid
    n = rhs.size
    shape = grid.shape

    def matvec(x):
        x = x.reshape(shape)
        return (-laplacian_7pt(x, grid.spacing) + (lam + op.P) * x).ravel()

    def precond(x):
        return helmholtz_solve(x.reshape(shape), grid.spacing, lam).ravel()

    A = LinearOperator((n, n), matvec=matvec, dtype=np.float64)
    M = LinearOperator((n, n), matvec=precond, dtype=np.float64)
    x, info = cg(A, rhs.ravel(), x0=precond(rhs.ravel()), rtol=tol, M=M,
                 maxiter=200)
    if info != 0:
        raise IterationError(
            'Inner CG for -Δ + λ + P did not converge (info={})'.format(info))
    return x.reshape(shape)


def lambda_to_a(model,
                lam: float,
                bundle: GroundStateBundle,
                center: Sequence[float],
                cells: int = 64,
                box_factor: float = BOX_FACTOR,
                tol: float = 1e-10,
                max_iter: int = 300,
                log_interval: int = 20) -> UnconstrainedResult:
    """
    Petviashvili iteration for the unconstrained problem at frequency λ,

        w ← M^{3/2}(−Δ + λ + P)⁻¹N(w),  M = ⟨w, Lw⟩/⟨w, N(w)⟩,

    with N(w) = (1/8π)Φ_w w, seeded with λU(√λ(x − center)) on a box of
    half-width box_factor/√λ. The fixed-point iteration takes the place of
    a gradient flow at fixed λ: the stabilizing factor M removes the
    scaling mode a flow would have to damp.

    Raises:
        ValueError: λ below 25.
        IterationError: no convergence within max_iter.
    """
    if lam < MIN_LAMBDA:
        raise ValueError('lambda must be >= {}, got {}'.format(
            MIN_LAMBDA, lam))
    width = 1.0 / np.sqrt(lam)
    grid = peak_grid(center, width, cells, box_factor)
    op = HartreeOperator(model, grid, 1.0)
    w = PeakAnsatz(width, grid.center, bundle).field(grid).values * lam

    scheduler = FlowScheduler(log_interval=log_interval)
    trace = []
    residual = np.inf
    for it in range(1, max_iter + 1):
        nonlinear = op.potential(w) * w
        Lw = -laplacian_7pt(w, grid.spacing) + (lam + op.P) * w
        residual = float(
            np.max(np.abs(Lw - nonlinear)) / np.max(np.abs(nonlinear)))
        status = scheduler.step()
        if status.record_trace:
            trace.append({'iteration': it, 'residual': residual})
        if status.do_log:
            logger.iteration('Petviashvili', it, level=logging.DEBUG,
                             lam=lam, residual=residual)
        if residual < tol:
            break
        stabilizer = float(np.sum(w * Lw) / np.sum(w * nonlinear))
        w = stabilizer**PETVIASHVILI_EXPONENT * _linear_solve(
            op, lam, nonlinear, min(1e-3, 0.1 * residual))
    else:
        raise IterationError(
            'Petviashvili at lambda={:.6g} stalled'.format(lam),
            residual=residual,
            trace=trace)

    a = float(np.sum(w**2) * grid.cell_volume)
    return UnconstrainedResult(
        lam=float(lam),
        w=Field3(grid, w),
        a=a,
        residual=residual,
        iterations=it,
        trace=trace)


def _a_job(job) -> float:
    model, lam, bundle, center, kwargs = job
    return lambda_to_a(model, lam, bundle, center, **kwargs).a


def sample_a_ladder(model,
                    lambdas: Sequence[float],
                    bundle: GroundStateBundle,
                    center: Sequence[float],
                    workers: int = 1,
                    **kwargs) -> np.ndarray:
    """a(λ) over a λ ladder, one job per λ."""
    jobs = [(model, float(lam), bundle, np.asarray(center, dtype=np.float64),
             kwargs) for lam in lambdas]
    return np.array([
        r.unwrap() for r in run_jobs(_a_job, jobs, workers, 'Sampling a(lambda)')
    ])


def invert_a(model,
             a: float,
             bundle: GroundStateBundle,
             center: Sequence[float],
             lambdas: Sequence[float],
             workers: int = 1,
             rtol: float = 1e-9,
             samples: Optional[np.ndarray] = None,
             **kwargs) -> UnconstrainedResult:
    """
    λ_a with a(λ_a) = a: brackets a over the sampled ladder, then brentq.

    Raises:
        RangeError: a outside the sampled range, or a(λ) not monotone on
            the bracket; carries the (λ, a) samples.
    """
    lambdas = np.sort(np.asarray(lambdas, dtype=np.float64))
    values = sample_a_ladder(model, lambdas, bundle, center, workers, **
                             kwargs) if samples is None else np.asarray(samples)
    table = list(zip(lambdas.tolist(), values.tolist()))
    if np.any(np.diff(values) <= 0):
        logger.warning('a(lambda) is not monotone on {}'.format(table))

    inside = np.nonzero((values[:-1] - a) * (values[1:] - a) <= 0)[0]
    if len(inside) == 0:
        raise RangeError(
            'a={:.8g} is outside the sampled range [{:.8g}, {:.8g}]'.format(
                a, values.min(), values.max()), table)
    i = int(inside[0])
    if values[i] == a:
        return lambda_to_a(model, lambdas[i], bundle, center, **kwargs)

    def f(lam):
        return lambda_to_a(model, lam, bundle, center, **kwargs).a - a

    lam_a = brentq(f, lambdas[i], lambdas[i + 1], rtol=rtol)
    result = lambda_to_a(model, lam_a, bundle, center, **kwargs)
    logger.info('Inverted a={:.8g}: lambda={:.10g} (a error {:.2e})'.format(
        a, lam_a, abs(result.a - a) / a))
    return result
