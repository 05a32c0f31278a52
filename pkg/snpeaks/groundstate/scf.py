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
from typing import List, Optional, Tuple

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq

from snpeaks.apis.scheduler import FlowScheduler
from snpeaks.errors import BracketingError, IterationError
from snpeaks.geometries.radial import RadialGrid, RadialProfile
from snpeaks.groundstate.bundle import (GroundStateBundle,
                                        extract_decay_constant)
from snpeaks.ops.radial_ops import newton_potential_sector
from snpeaks.utils.logger import logger
from snpeaks.utils.timer import Timer

__all__ = ['RawGroundState', 'solve_ground_state', 'scf_iterate']

COUPLING = 1.0 / (8 * np.pi)


@dataclass
class RawGroundState:
    """One SCF solve on one grid, before extrapolation."""
    U: RadialProfile
    residual: float
    iterations: int
    kinetic: float
    trace: List[dict] = field(default_factory=list)


def _lowest_pair(diag: np.ndarray, off: np.ndarray,
                 vectors: bool = False) -> Tuple[float, Optional[np.ndarray]]:
    if vectors:
        w, v = eigh_tridiagonal(
            diag, off, select='i', select_range=(0, 0))
        return float(w[0]), v[:, 0]
    w = eigh_tridiagonal(
        diag, off, eigvals_only=True, select='i', select_range=(0, 0))
    return float(w[0]), None


def _normalize(grid: RadialGrid, u: np.ndarray) -> np.ndarray:
    return u / np.sqrt(grid.integrate_volume(u * u))


def _equation_residual(grid: RadialGrid, u: np.ndarray, phi: np.ndarray,
                       mass: float) -> float:
    """max |−v'' + (m − φ)v| over interior nodes, v = r·u."""
    v = grid.nodes * u
    h = grid.h
    lap = (v[2:] - 2 * v[1:-1] + v[:-2]) / h**2
    res = -lap + (mass - phi[1:-1]) * v[1:-1]
    return float(np.max(np.abs(res)))


def _dirichlet_energy(grid: RadialGrid, u: np.ndarray) -> float:
    """4π Σ h((v_{i+1} − v_i)/h)², the form matching the tridiagonal operator."""
    v = grid.nodes * u
    return float(4 * np.pi * np.sum(np.diff(v)**2) / grid.h)


def scf_iterate(grid: RadialGrid,
                tol: float = 1e-10,
                mass: float = 1.0,
                relaxation: float = 0.5,
                max_iter: int = 200,
                init: Optional[np.ndarray] = None,
                log_interval: int = 10) -> RawGroundState:
    """
    Self-consistent-field iteration for

        −ΔU + mass·U = (1/8π)(|x|⁻¹ * U²) U.

    The iterate is a unit-mass shape w; each step freezes φ_w, finds the
    amplitude t for which the lowest eigenvalue of −Δ − t²φ_w equals −mass,
    and mixes the new shape in with the given relaxation.
    """
    if tol <= 0:
        raise ValueError('tol must be positive')

    r = grid.nodes
    h = grid.h
    n = grid.N - 1
    off = np.full(n - 1, -1.0 / h**2)
    kinetic_diag = np.full(n, 2.0 / h**2)

    w = np.exp(-r) if init is None else np.asarray(init, dtype=np.float64)
    w = _normalize(grid, w)

    scheduler = FlowScheduler(log_interval=log_interval)
    timer = Timer(iters=max_iter)
    trace = []
    t = None
    residual = np.inf

    for it in range(1, max_iter + 1):
        w_profile = RadialProfile(grid, w)
        phi_w = COUPLING * newton_potential_sector(w_profile, w_profile,
                                                   0).values

        def lowest(t_):
            return _lowest_pair(kinetic_diag - t_**2 * phi_w[1:-1], off)[0]

        t_hi = t if t is not None else 1.0
        for _ in range(60):
            if lowest(t_hi) <= -mass:
                break
            t_hi *= 2
        else:
            raise BracketingError(
                'Ground eigenvalue never reaches {} (t up to {:.3g})'.format(
                    -mass, t_hi), trace)
        t_lo = t_hi
        while lowest(t_lo) <= -mass:
            t_lo *= 0.5

        t = brentq(lambda t_: lowest(t_) + mass, t_lo, t_hi, xtol=1e-15,
                   rtol=4 * np.finfo(float).eps)

        _, vec = _lowest_pair(kinetic_diag - t**2 * phi_w[1:-1], off, True)
        u_new = np.zeros_like(w)
        u_new[1:-1] = vec / r[1:-1]
        # even extension: u(0) from u(h), u(2h)
        u_new[0] = (4 * u_new[1] - u_new[2]) / 3
        if u_new[len(u_new) // 8] < 0:
            u_new = -u_new
        u_new = _normalize(grid, u_new)

        residual = _equation_residual(grid, t * w, t**2 * phi_w, mass)
        timer.step()
        status = scheduler.step()
        if status.record_trace:
            trace.append({'iteration': it, 't': t, 'residual': residual})
        if status.do_log:
            logger.iteration('SCF', it, max_iter, timer.eta, t=t,
                             residual=residual)

        if residual < tol:
            break

        w = _normalize(grid, (1 - relaxation) * w + relaxation * u_new)
    else:
        raise IterationError(
            'SCF did not converge in {} iterations'.format(max_iter),
            residual=residual,
            trace=trace)

    U = t * w
    return RawGroundState(
        U=RadialProfile(grid, U),
        residual=residual,
        iterations=it,
        kinetic=_dirichlet_energy(grid, U),
        trace=trace)


def _raw_constants(raw: RawGroundState, kernel_scale: float = 1.0) -> dict:
    U = raw.U
    grid = U.grid
    phi = newton_potential_sector(U, U, 0)
    u2 = U.values**2
    return {
        'a_star': grid.integrate_volume(u2),
        'M2': grid.integrate_volume(u2 * grid.nodes**2),
        'M4': grid.integrate_volume(u2 * grid.nodes**4),
        'energy_double': kernel_scale * grid.integrate_volume(u2 * phi.values),
        'kinetic': raw.kinetic,
        'U0': float(U.values[0]),
    }


def solve_ground_state(grid: Optional[RadialGrid] = None,
                       tol: float = 1e-10,
                       mass: float = 1.0,
                       relaxation: float = 0.5,
                       max_iter: int = 200,
                       extrapolate: bool = True,
                       kernel_scale: float = 1.0,
                       decay_window: Tuple[float, float] = (10.0, 14.0)
                       ) -> GroundStateBundle:
    """
    Ground state U of −ΔU + U = (1/8π)(|x|⁻¹ * U²)U and its constants.

    With `extrapolate`, every integral constant is Richardson-extrapolated
    from the solves on `grid` and on its coarsening, removing the O(h²)
    discretization error. `kernel_scale` multiplies the Newton kernel in the
    constant evaluation only; values other than 1 are a self-test mutation.
    """
    grid = grid or RadialGrid()
    raw = scf_iterate(grid, tol, mass, relaxation, max_iter)
    constants = _raw_constants(raw, kernel_scale)

    if extrapolate:
        coarse = scf_iterate(grid.coarsen(), tol, mass, relaxation, max_iter)
        coarse_constants = _raw_constants(coarse, kernel_scale)
        constants = {
            key: (4 * constants[key] - coarse_constants[key]) / 3
            for key in constants
        }

    decay = None
    window_ok = decay_window[1] <= grid.R_max - 8
    if window_ok and mass == 1.0:
        decay = extract_decay_constant(
            raw.U,
            decay_window,
            coulomb_charge=COUPLING * constants['a_star'])

    bundle = GroundStateBundle(
        U=raw.U,
        a_star=constants['a_star'],
        lambda0=decay.value if decay else float('nan'),
        decay_variation=decay.variation if decay else float('nan'),
        M2=constants['M2'],
        M4=constants['M4'],
        energy_double=constants['energy_double'],
        kinetic=constants['kinetic'],
        U0=constants['U0'],
        residual=raw.residual,
        iterations=raw.iterations,
        mass=mass,
        kernel_scale=kernel_scale)
    logger.info('Ground state: a*={:.10f} U0={:.10f} B={:.10f} '
                'residual={:.2e} iters={}'.format(bundle.a_star, bundle.U0,
                                                   bundle.B, bundle.residual,
                                                   bundle.iterations))
    return bundle
