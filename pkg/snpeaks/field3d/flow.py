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

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from snpeaks.apis.scheduler import FlowScheduler
from snpeaks.errors import FlowDivergenceError, IterationError
from snpeaks.geometries.field import Field3, Field3Grid
from snpeaks.groundstate.bundle import GroundStateBundle
from snpeaks.models.surface.assumptions import find_surface_critical_points
from snpeaks.ops.field_ops import (helmholtz_solve, laplacian_7pt,
                                   newton_potential_3d)
from snpeaks.reduction.ansatz import PeakAnsatz
from snpeaks.utils.logger import logger
from snpeaks.utils.timer import Timer

__all__ = [
    'SolveResult', 'HartreeOperator', 'EnergyMonitor', 'solve_normalized',
    'default_center', 'peak_grid'
]

COUPLING = 1.0 / (8 * np.pi)
BOX_FACTOR = 12.0
RECENTER_FRACTION = 0.25
MAX_RECENTER = 3
MAX_BACKTRACK = 5
ENERGY_WARMUP = 5
ENERGY_SLACK = 1e-10


@dataclass
class SolveResult:
    """Normalized solution u (∫u² = 1) with multiplier μ at interaction a."""
    u: Field3
    mu: float
    a: float
    residual: float
    peak: np.ndarray
    iterations: int
    energy: float
    a_star: float = float('nan')
    energy_rises: int = 0
    energy_rise_max: float = 0.0
    trace: List[Dict] = field(default_factory=list)

    @property
    def delta(self) -> float:
        """δ_a = a*/a"""
        return self.a_star / self.a

    @property
    def grid(self) -> Field3Grid:
        return self.u.grid

    def to_dict(self) -> Dict:
        return {
            'a': self.a,
            'mu': self.mu,
            'delta': self.delta,
            'residual': self.residual,
            'x1': float(self.peak[0]),
            'x2': float(self.peak[1]),
            'x3': float(self.peak[2]),
            'iterations': self.iterations,
            'energy': self.energy,
            'energy_rises': self.energy_rises,
            'energy_rise_max': self.energy_rise_max,
        }


def _grid_points(grid: Field3Grid) -> np.ndarray:
    return np.stack([m.ravel() for m in grid.mesh()], axis=1)


class HartreeOperator(object):
    """
    H_u v = −Δ_7pt v + P v − a·(1/8π)Φ_u v on a grid, Φ_u = |x|⁻¹ * u².
    """

    def __init__(self, model, grid: Field3Grid, a: float):
        self.grid = grid
        self.a = float(a)
        P = model.value(_grid_points(grid)).reshape(grid.shape)
        if not np.all(np.isfinite(P)):
            # the grid straddles a non-smooth point of P; keep its neighbours
            P = np.where(np.isfinite(P), P, np.nanmax(P))
        self.P = P

    def potential(self, u: np.ndarray) -> np.ndarray:
        phi = newton_potential_3d(Field3(self.grid, u**2)).values
        return self.a * COUPLING * phi

    def apply(self, u: np.ndarray, nonlocal_: Optional[np.ndarray] = None
              ) -> np.ndarray:
        nonlocal_ = self.potential(u) if nonlocal_ is None else nonlocal_
        return -laplacian_7pt(u, self.grid.spacing) + (self.P - nonlocal_) * u

    def mass(self, u: np.ndarray) -> float:
        return float(np.sum(u**2) * self.grid.cell_volume)

    def rayleigh(self, u: np.ndarray, nonlocal_: np.ndarray) -> float:
        """μ = ∫(|∇u|² + Pu²) − (a/8π)∬u²u²/|x−y| for ∫u² = 1."""
        return float(
            np.sum(u * self.apply(u, nonlocal_)) * self.grid.cell_volume /
            self.mass(u))

    def energy(self, u: np.ndarray, nonlocal_: np.ndarray) -> float:
        """∫(|∇u|² + Pu²) − (a/16π)∬u²u²/|x−y|"""
        kinetic = np.sum(u * (-laplacian_7pt(u, self.grid.spacing) +
                              self.P * u))
        return float((kinetic - 0.5 * np.sum(nonlocal_ * u**2)) *
                     self.grid.cell_volume)


class EnergyMonitor(object):
    """
    Watches the constrained energy of a flow: after `warmup` steps every
    rise above `slack`·|E| is counted, with the largest relative rise kept.
    `reset` forgets the previous value (after a regrid or a backtrack).
    """

    def __init__(self, warmup: int = ENERGY_WARMUP,
                 slack: float = ENERGY_SLACK):
        self.warmup = warmup
        self.slack = slack
        self.rises = 0
        self.worst = 0.0
        self._previous = None

    @property
    def monotone(self) -> bool:
        return self.rises == 0

    def reset(self):
        self._previous = None

    def update(self, step: int, energy: float) -> bool:
        """Record `energy` at `step`; True when it rose."""
        previous, self._previous = self._previous, energy
        if step <= self.warmup or previous is None:
            return False
        rise = (energy - previous) / max(abs(previous), 1e-300)
        if rise <= self.slack:
            return False
        self.rises += 1
        self.worst = max(self.worst, rise)
        return True


def default_center(model) -> np.ndarray:
    """
    Seed location: the tangential minimum of ΔP on Γ with the smallest ΔP
    (the basin the normalized ground state concentrates in), else the
    origin for models without a surface.
    """
    if model.surface is None:
        return np.zeros(3)
    points = find_surface_critical_points(model)
    if not points:
        return model.surface.sample(1)[0]
    minima = [p for p in points if p.kind == 'min'] or points
    values = [float(model.laplacian(p.position)) for p in minima]
    return minima[int(np.argmin(values))].position


def peak_grid(center: Sequence[float],
              width: float,
              cells: int = 64,
              box_factor: float = BOX_FACTOR) -> Field3Grid:
    """Cube of half-width box_factor·width around center."""
    return Field3Grid.centered(center, box_factor * width, cells)


def _recenter(u: Field3, peak: np.ndarray) -> Field3:
    grid = u.grid
    # move by whole cells so nodes stay aligned
    shift = np.round((peak - grid.center) / grid.spacing) * grid.spacing
    moved = Field3Grid(grid.origin + shift, grid.spacing, grid.cells)
    points = _grid_points(moved)
    return Field3(moved, u.sample(points, order=3).reshape(moved.shape))


def solve_normalized(model,
                     a: float,
                     bundle: GroundStateBundle,
                     grid: Optional[Field3Grid] = None,
                     seed: Optional[Field3] = None,
                     center: Optional[Sequence[float]] = None,
                     cells: int = 64,
                     box_factor: float = BOX_FACTOR,
                     dt_factor: float = 2.0,
                     max_steps: int = 5000,
                     tol: float = 1e-8,
                     log_interval: int = 100) -> SolveResult:
    """
    Mass-constrained gradient flow for

        −Δu + P u = (a/8π)(|x|⁻¹ * u²)u + μu,  ∫u² = 1.

    Each step solves (1/dt − Δ + σ)u* = (1/dt + σ − P + (a/8π)Φ_n + μ_n)u_n
    by a sine transform, with σ = −μ_0 and dt = dt_factor·δ², then
    renormalizes; fixed points are exact discrete eigenfunctions. The seed
    defaults to the peak profile at δ = a*/a around `center`. Rises of the
    constrained energy after the first five steps are counted in
    `energy_rises`.

    Raises:
        FlowDivergenceError: backtracking or re-centering exhausted.
        IterationError: max_steps reached above tolerance.
    """
    delta = bundle.a_star / a
    if grid is None:
        if center is None:
            center = seed.grid.center if seed is not None else \
                default_center(model)
        grid = peak_grid(center, delta, cells, box_factor)
    if seed is None:
        seed = PeakAnsatz(delta, grid.center, bundle).field(grid)
    elif seed.grid != grid:
        seed = Field3(grid, seed.sample(_grid_points(grid),
                                        order=3).reshape(grid.shape))

    op = HartreeOperator(model, grid, a)
    u = seed.values / np.sqrt(op.mass(seed.values))
    nonlocal_ = op.potential(u)
    mu = op.rayleigh(u, nonlocal_)
    sigma = max(-mu, 0.0)
    dt = dt_factor * delta**2

    scheduler = FlowScheduler(log_interval=log_interval, warmup=5)
    timer = Timer(iters=max_steps)
    trace = []
    best = (np.inf, u, nonlocal_, mu)
    backtracks = recenters = 0
    monitor = EnergyMonitor()
    residual = np.inf

    for step in range(1, max_steps + 1):
        rhs = (1.0 / dt + sigma - op.P + nonlocal_ + mu) * u
        u_new = helmholtz_solve(rhs, grid.spacing, 1.0 / dt + sigma)
        u_new /= np.sqrt(op.mass(u_new))
        nonlocal_new = op.potential(u_new)
        mu_new = op.rayleigh(u_new, nonlocal_new)
        residual = float(
            np.max(np.abs(op.apply(u_new, nonlocal_new) - mu_new * u_new)) /
            (abs(mu_new) * np.max(np.abs(u_new))))

        if not np.isfinite(residual) or residual > 1e3 * best[0]:
            backtracks += 1
            if backtracks > MAX_BACKTRACK:
                raise FlowDivergenceError(
                    'Gradient flow diverged at a={:.6g} after {} '
                    'backtracks'.format(a, MAX_BACKTRACK), trace)
            dt *= 0.5
            _, u, nonlocal_, mu = best
            monitor.reset()
            trace.append({'step': step, 'event': 'backtrack', 'dt': dt})
            logger.warning('[Flow] residual blew up; dt halved to '
                           '{:.3e}'.format(dt))
            continue

        u, nonlocal_, mu = u_new, nonlocal_new, mu_new
        if residual < best[0]:
            best = (residual, u, nonlocal_, mu)
        energy = op.energy(u, nonlocal_)

        timer.step()
        status = scheduler.step()
        if monitor.update(step, energy):
            trace.append({'step': step, 'event': 'energy_rise',
                          'energy': energy})
            logger.debug('[Flow] energy rose at step {}'.format(step))
        if status.record_trace:
            trace.append({'step': step, 'mu': mu, 'residual': residual,
                          'energy': energy})
        if status.do_log:
            logger.iteration('Flow', step, max_steps, timer.eta, mu=mu,
                             residual=residual)

        if residual < tol:
            break

        if status.do_check:
            field3 = Field3(grid, u)
            peak = field3.argmax_interpolated()
            if np.max(np.abs(peak - grid.center)) > \
                    RECENTER_FRACTION * 0.5 * grid.extents[0]:
                recenters += 1
                if recenters > MAX_RECENTER:
                    raise FlowDivergenceError(
                        'Peak keeps leaving the box (last at {})'.format(
                            peak.tolist()), trace)
                field3 = _recenter(field3, peak)
                grid = field3.grid
                op = HartreeOperator(model, grid, a)
                u = field3.values / np.sqrt(op.mass(field3.values))
                nonlocal_ = op.potential(u)
                mu = op.rayleigh(u, nonlocal_)
                best = (np.inf, u, nonlocal_, mu)
                monitor.reset()
                trace.append({'step': step, 'event': 'recenter',
                              'center': grid.center.tolist()})
                logger.info('[Flow] re-centred box on {}'.format(
                    grid.center.round(6).tolist()))
    else:
        raise IterationError(
            'Gradient flow at a={:.6g} did not reach tol {:.1e} in {} '
            'steps'.format(a, tol, max_steps),
            residual=residual,
            trace=trace)

    result = Field3(grid, u)
    return SolveResult(
        u=result,
        mu=mu,
        a=float(a),
        residual=residual,
        peak=result.argmax_interpolated(),
        iterations=step,
        energy=op.energy(u, nonlocal_),
        a_star=bundle.a_star,
        energy_rises=monitor.rises,
        energy_rise_max=monitor.worst,
        trace=trace)
