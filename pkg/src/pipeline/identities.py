"""
Numerical checks of the exact identities the imaging predictors rest on
"""

from dataclasses import dataclass
from typing import List

import numpy as np

from src.core.geometry import discretize_curve, gamma1, sample_directions
from src.core.special import bessel_j, circular_moment0, circular_moment1
from src.core.subspace import svd
from src.imaging.functionals import migration_map, music_map
from src.imaging.grid import ImageGrid
from src.models.base import phase_matrix
from src.pipeline.engine import build_model
from src.utils.config import SceneConfig
from src.utils.logger import get_logger

logger = get_logger(__name__)

CHECK_DIRECTIONS = 128
CHECK_OMEGA = 5.0 * np.pi
CHECK_SAMPLES = 100


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    max_deviation: float
    tolerance: float
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


def _unit_disk_samples(count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    radii = np.sqrt(rng.uniform(0.0, 1.0, count))
    angles = rng.uniform(0.0, 2.0 * np.pi, count)
    return np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])


def check_circular_moments(n_directions: int = CHECK_DIRECTIONS, omega: float = CHECK_OMEGA,
                           samples: int = CHECK_SAMPLES, seed: int = 0,
                           tolerance: float = 1e-8) -> List[IdentityCheck]:
    """
    Discrete circular averages against J0 and i (x_hat . xi) J1

    Args:
        n_directions: Number of equispaced directions
        omega: Angular frequency
        samples: Random points drawn uniformly from the unit disk
        seed: Seed for the random generator
        tolerance: Pass threshold on the max deviation

    Returns:
        One check per moment
    """
    dirs = sample_directions(n_directions)
    points = _unit_disk_samples(samples, seed)
    rng = np.random.default_rng(seed + 1)
    angles = rng.uniform(0.0, 2.0 * np.pi, samples)

    zeroth, first = 0.0, 0.0
    for x, angle in zip(points, angles):
        r = float(np.hypot(*x))
        xi = np.array([np.cos(angle), np.sin(angle)])
        zeroth = max(zeroth, abs(circular_moment0(x, omega, dirs) - bessel_j(0, omega * r)))
        projection = float(x @ xi) / r if r > 0 else 0.0
        expected = 1j * projection * bessel_j(1, omega * r)
        first = max(first, abs(circular_moment1(x, xi, omega, dirs) - expected))

    note = f"N={n_directions}, omega={omega:.4f}, {samples} points in the unit disk"
    return [
        IdentityCheck('circular-moment-0', zeroth, tolerance, note),
        IdentityCheck('circular-moment-1', first, tolerance, note),
    ]


def check_gram(wavelength: float = 0.4, n_directions: int = CHECK_DIRECTIONS,
               tolerance: float = 1e-8) -> List[IdentityCheck]:
    """
    Inner products of normalized phase vectors on the discretized thin-inclusion
    curve against J0(w |x_m - x_m'|), plus the matching J1 form
    """
    omega = 2.0 * np.pi / wavelength
    dirs = sample_directions(n_directions)
    geometry = discretize_curve(gamma1(), wavelength / 2.0)

    phases = phase_matrix(geometry.points, omega, dirs)
    offsets = geometry.points[None, :, :] - geometry.points[:, None, :]
    radii = np.hypot(offsets[..., 0], offsets[..., 1])

    gram = phases.conj().T @ phases / n_directions
    zeroth = float(np.max(np.abs(gram - bessel_j(0, omega * radii))))

    weighted = (dirs.vectors @ geometry.normals.T)
    first_form = (phases * weighted).conj().T @ phases / n_directions
    safe = np.where(radii > 0, radii, 1.0)
    projection = np.einsum('jlk,jk->jl', offsets, geometry.normals) / safe
    expected = 1j * np.where(radii > 0, projection, 0.0) * bessel_j(1, omega * radii)
    first = float(np.max(np.abs(first_form - expected)))

    neighbour = abs(bessel_j(0, np.pi))
    note = f"M={geometry.count}, neighbour overlap |J0(pi)| = {neighbour:.4f}"
    return [
        IdentityCheck('gram-j0', zeroth, tolerance, note),
        IdentityCheck('gram-j1', first, tolerance, note),
    ]


def check_migration_identity(resolution: int = 41, tolerance: float = 1e-8) -> IdentityCheck:
    """max |E^-2 / N + E_SM - 1| over uncapped pixels of the thin permittivity scene"""
    cfg = SceneConfig.from_preset('gamma1-eps')
    omega = cfg.omega
    dirs = sample_directions(cfg.n_directions)
    grid = ImageGrid(cfg.grid.x_range, cfg.grid.y_range, resolution, resolution)

    decomposition = svd(build_model(cfg).synthesize(omega, dirs), tau=cfg.tau)
    music = music_map(decomposition, omega, dirs, grid, cfg.cap)
    migration = migration_map(decomposition, omega, dirs, grid)

    uncapped = music.values < music.cap
    residual = music.values[uncapped] ** -2 / dirs.count + migration.values[uncapped] - 1.0
    deviation = float(np.max(np.abs(residual))) if residual.size else 0.0
    note = f"{int(uncapped.sum())} uncapped pixels, signal_dim={decomposition.signal_dim}"
    return IdentityCheck('music-migration', deviation, tolerance, note)


def run_identity_checks() -> List[IdentityCheck]:
    """Run every identity check and log the outcome"""
    checks = check_circular_moments() + check_gram() + [check_migration_identity()]
    for check in checks:
        status = "ok" if check.passed else "FAILED"
        logger.info(
            f"[IMAGE] Identity {check.name}: max deviation {check.max_deviation:.3e} "
            f"(tolerance {check.tolerance:.0e}) {status}"
        )
    return checks
