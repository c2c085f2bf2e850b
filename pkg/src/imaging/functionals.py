"""
Steering vectors, the MUSIC imaging functional and subspace migration

    E(z)    = 1 / |P_noise f(z)|                 raw f_n(z) = exp(i w theta_n . z)
    E_SM(z) = sum_{m <= dim} |U_m^* f_hat(z)|^2  f_hat = f / sqrt(N)

For every uncapped pixel E(z)^-2 / N + E_SM(z) = 1.
"""

from dataclasses import dataclass

import numpy as np

from src.core.geometry import DirectionSet
from src.core.subspace import SubspaceDecomposition, noise_projection_norms, signal_projection_energy
from src.imaging.grid import DEFAULT_CAP, FieldMap, ImageGrid
from src.utils.exceptions import DegenerateSubspaceError, InvalidArgumentError
from src.utils.logger import get_logger

logger = get_logger(__name__)

# Pixels evaluated per block
CHUNK_SIZE = 4096


@dataclass(frozen=True, eq=False)
class SteeringVector:
    """Test vector of incident-wave phases at a search point"""
    components: np.ndarray
    normalized: bool

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.components))


def steering_matrix(points: np.ndarray, omega: float, dirs: DirectionSet,
                    normalized: bool = False) -> np.ndarray:
    """N x P matrix of steering vectors for P search points"""
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    F = np.exp(1j * omega * (dirs.vectors @ points.T))
    if normalized:
        F /= np.sqrt(dirs.count)
    return F


def steering(z, omega: float, dirs: DirectionSet, normalized: bool = False) -> SteeringVector:
    """
    Steering vector f(z) with f_n = exp(i w theta_n . z)

    Args:
        z: Search point
        omega: Angular frequency
        dirs: Incident directions
        normalized: Divide by sqrt(N) to get a unit vector

    Returns:
        SteeringVector
    """
    components = steering_matrix(z, omega, dirs, normalized)[:, 0]
    return SteeringVector(components, normalized)


def _require_noise_space(dec: SubspaceDecomposition, dirs: DirectionSet):
    if dec.size != dirs.count:
        raise InvalidArgumentError(f"decomposition has size {dec.size} but {dirs.count} directions were given")
    if dec.signal_dim >= dec.size:
        raise DegenerateSubspaceError(
            f"signal dimension {dec.signal_dim} fills all {dec.size} directions; noise space is empty"
        )


def _chunks(count: int):
    for start in range(0, count, CHUNK_SIZE):
        yield slice(start, min(start + CHUNK_SIZE, count))


def music_map(dec: SubspaceDecomposition, omega: float, dirs: DirectionSet, grid: ImageGrid,
              cap: float = DEFAULT_CAP) -> FieldMap:
    """
    MUSIC map E(z) = 1/|P_noise f(z)| with raw steering vectors

    Pixels where |P_noise f| < 1/cap take the value cap.
    """
    if not cap > 0:
        raise InvalidArgumentError(f"cap must be positive, got {cap}")
    _require_noise_space(dec, dirs)

    points = grid.points()
    values = np.empty(len(points))
    for block in _chunks(len(points)):
        norms = noise_projection_norms(dec, steering_matrix(points[block], omega, dirs))
        with np.errstate(divide='ignore'):
            values[block] = np.where(norms < 1.0 / cap, cap, 1.0 / norms)

    field_map = FieldMap(grid, values.reshape(grid.shape), 'music', cap)
    logger.info(
        f"[IMAGE] MUSIC map {grid.nx}x{grid.ny}: max={field_map.values.max():.4g}, "
        f"cap hits={field_map.cap_hits()}"
    )
    return field_map


def migration_map(dec: SubspaceDecomposition, omega: float, dirs: DirectionSet,
                  grid: ImageGrid) -> FieldMap:
    """Subspace migration E_SM(z) with unit-norm steering vectors, values in [0, 1]"""
    _require_noise_space(dec, dirs)

    points = grid.points()
    values = np.empty(len(points))
    for block in _chunks(len(points)):
        values[block] = signal_projection_energy(
            dec, steering_matrix(points[block], omega, dirs, normalized=True)
        )

    logger.info(f"[IMAGE] Migration map {grid.nx}x{grid.ny}: max={values.max():.4g}")
    return FieldMap(grid, values.reshape(grid.shape), 'migration')
