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
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg

from snpeaks.errors import CapabilityError
from snpeaks.geometries.radial import RadialGrid, RadialProfile
from snpeaks.groundstate.bundle import GroundStateBundle
from snpeaks.ops.radial_ops import (ELL_MAX, newton_potential_sector,
                                    sector_kernel_matrix)

__all__ = [
    'SectorOperator', 'build_Lbar', 'build_Ltilde', 'kernel_candidates',
    'profile_on', 'build_sectors'
]

COUPLING = 1.0 / (8 * np.pi)


@dataclass(frozen=True)
class SectorOperator:
    """
    One spherical-harmonic sector of a linearized operator around U.

    The matrix acts on v = r·u at the interior nodes r_1 … r_{N−1}
    (u vanishes at R_max), so that the Euclidean product of v vectors times
    h is ∫ u w r² dr. `kind` is 'Lbar' or 'Ltilde'.
    """
    ell: int
    kind: str
    grid: RadialGrid
    matrix: np.ndarray

    @property
    def symmetric(self) -> bool:
        return self.kind == 'Lbar' or self.ell > 0

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    @property
    def spectral_scale(self) -> float:
        """Spectral radius of the discrete −d²/dr², 4/h²."""
        return 4.0 / self.grid.h**2

    @property
    def radii(self) -> np.ndarray:
        return self.grid.nodes[1:-1]

    def to_vector(self, u: RadialProfile) -> np.ndarray:
        if u.grid != self.grid:
            u = profile_on(u, self.grid)
        return self.radii * u.values[1:-1]

    def to_profile(self, v: np.ndarray) -> RadialProfile:
        values = np.zeros(self.grid.N + 1)
        values[1:-1] = v / self.radii
        if self.ell == 0:
            values[0] = (4 * values[1] - values[2]) / 3
        return RadialProfile(self.grid, values)

    def apply(self, u: RadialProfile) -> RadialProfile:
        return self.to_profile(self.matrix @ self.to_vector(u))

    def inner(self, u: RadialProfile, w: RadialProfile) -> float:
        """∫ u w r² dr over the interior nodes."""
        return float(self.grid.h *
                     np.dot(self.to_vector(u), self.to_vector(w)))

    def residual_norm(self, u: RadialProfile) -> float:
        """‖Lu‖ / ‖u‖."""
        v = self.to_vector(u)
        return float(np.linalg.norm(self.matrix @ v) / np.linalg.norm(v))

    def relative_residual(self, u: RadialProfile) -> float:
        """‖Lu‖ / (spectral scale · ‖u‖)."""
        return self.residual_norm(u) / self.spectral_scale

    def eigenpairs(self, k: int = 6) -> Tuple[np.ndarray, np.ndarray]:
        """
        The k algebraically smallest eigenvalues (real parts for the
        non-symmetric ℓ = 0 block of L̃) and unit eigenvectors as columns.
        """
        k = min(k, self.size)
        if self.symmetric:
            return scipy.linalg.eigh(self.matrix, subset_by_index=[0, k - 1])
        values, vectors = scipy.linalg.eig(self.matrix)
        order = np.argsort(values.real)[:k]
        vectors = vectors[:, order].real
        vectors /= np.linalg.norm(vectors, axis=0, keepdims=True)
        return values[order].real, vectors

    def eigenvalues(self, k: int = 6) -> np.ndarray:
        return self.eigenpairs(k)[0]


def profile_on(u: RadialProfile, grid: RadialGrid) -> RadialProfile:
    """u resampled on another radial grid."""
    if u.grid == grid:
        return u
    return RadialProfile(grid, u.interpolate(grid.nodes))


def kernel_candidates(U: RadialProfile) -> Tuple[RadialProfile, RadialProfile]:
    """Radial parts (ψ0 = 2U + rU', U') of the analytic zero modes."""
    dU = U.derivative()
    psi0 = RadialProfile(U.grid, 2 * U.values + U.r * dU.values)
    return psi0, dU


def _check_ell(ell: int, ell_max: int):
    if ell < 0 or ell > ell_max:
        raise CapabilityError('ell={} outside [0, {}]'.format(ell, ell_max))


def _lbar_matrix(ell: int, U: RadialProfile) -> np.ndarray:
    grid = U.grid
    h = grid.h
    r = grid.nodes[1:-1]
    Ui = U.values[1:-1]
    n = len(r)

    phi = COUPLING * newton_potential_sector(U, U, 0).values[1:-1]
    matrix = np.diag(2.0 / h**2 + ell * (ell + 1) / r**2 + 1.0 - phi)
    off = np.full(n - 1, -1.0 / h**2)
    matrix += np.diag(off, 1) + np.diag(off, -1)

    # −(1/4π)·h_ℓ[U, u]·U in v = r·u form
    ru = r * Ui
    matrix -= h / (4 * np.pi) * ru[:, None] * sector_kernel_matrix(
        r, ell) * ru[None, :]
    return matrix


def build_Lbar(ell: int,
               bundle: GroundStateBundle,
               grid: Optional[RadialGrid] = None,
               ell_max: int = ELL_MAX) -> SectorOperator:
    """
    ℓ-sector of L̄u = −Δu + u − (1/8π)Φ_U u − (1/4π)(|x|⁻¹ * (Uu))U,
    discretized with the same three-point stencil and trapezoid kernel as
    the ground-state solver. `grid` defaults to the bundle's grid.
    """
    _check_ell(ell, ell_max)
    grid = grid or bundle.grid
    U = profile_on(bundle.U, grid)
    return SectorOperator(ell, 'Lbar', grid, _lbar_matrix(ell, U))


def build_Ltilde(ell: int,
                 bundle: GroundStateBundle,
                 grid: Optional[RadialGrid] = None,
                 ell_max: int = ELL_MAX) -> SectorOperator:
    """
    L̃ = L̄ plus, for ℓ = 0, the rank-one mass-constraint term

        u ↦ (1/(4π a*)) U ∫ Φ_U U u,

    which is orthogonal to every ℓ ≥ 1 sector. a* and Φ_U are the discrete
    values on `grid`.
    """
    _check_ell(ell, ell_max)
    grid = grid or bundle.grid
    U = profile_on(bundle.U, grid)
    matrix = _lbar_matrix(ell, U)
    if ell == 0:
        h = grid.h
        r = grid.nodes[1:-1]
        Ui = U.values[1:-1]
        phi = newton_potential_sector(U, U, 0).values[1:-1]
        a_star = grid.integrate_volume(U.values**2)
        matrix = matrix + np.outer(r * Ui, h * r * phi * Ui) / a_star
    return SectorOperator(ell, 'Ltilde', grid, matrix)


def build_sectors(bundle: GroundStateBundle,
                  ells: List[int],
                  grid: Optional[RadialGrid] = None) -> List[SectorOperator]:
    ops = []
    for ell in ells:
        ops.append(build_Lbar(ell, bundle, grid))
        ops.append(build_Ltilde(ell, bundle, grid))
    return ops
