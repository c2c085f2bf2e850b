"""
Closed-form Bessel predictors of the MUSIC and subspace-migration maps

With d = z - x_m, r = |d|, z_hat = d / r:

    S0(z) = sum_m J0(w r)^2
    S1(z) = sum_m (z_hat . w_m)^2 J1(w r)^2

    MUSIC     E(z)    ~ (1/sqrt(N)) (1 - S0 - S1)^(-1/2)
    migration E_SM(z) ~ S0 + S1

Permittivity, sound-soft and small-eps kinds use S0 only; permeability,
sound-hard and small-mu kinds use S1 only; combined kinds use both. The
weight w_m is t + n for thin inclusions, n for sound-hard arcs and e1 + e2
for small inclusions. The "frame-sum" variant replaces (z_hat . (a + b))^2 by
(z_hat . a)^2 + (z_hat . b)^2.

Combined kinds also accept sign='plus', which evaluates the MUSIC bracket
as 1 - S0 + S1 instead of 1 - S0 - S1.
"""

from typing import Tuple

import numpy as np

from src.core.geometry import SceneGeometry
from src.core.special import bessel_j
from src.imaging.grid import DEFAULT_CAP, FieldMap, ImageGrid
from src.utils.exceptions import InvalidArgumentError
from src.utils.logger import get_logger

logger = get_logger(__name__)

PREDICTOR_KINDS = ('eps', 'mu', 'eps-mu', 'tm', 'te', 'small-eps', 'small-mu', 'small-eps-mu')
VARIANTS = ('as-written', 'frame-sum')
SIGNS = ('minus', 'plus')
COMBINED_KINDS = ('eps-mu', 'small-eps-mu')

_ZEROTH_ORDER = {'eps', 'eps-mu', 'tm', 'small-eps', 'small-eps-mu'}
_FIRST_ORDER = {'mu', 'eps-mu', 'te', 'small-mu', 'small-eps-mu'}

E1 = np.array([1.0, 0.0])
E2 = np.array([0.0, 1.0])


def _validate(kind: str, variant: str):
    if kind not in PREDICTOR_KINDS:
        raise InvalidArgumentError(f"unknown predictor kind '{kind}', expected one of {PREDICTOR_KINDS}")
    if variant not in VARIANTS:
        raise InvalidArgumentError(f"unknown predictor variant '{variant}', expected one of {VARIANTS}")


def _frame_vectors(kind: str, geom: SceneGeometry) -> Tuple[np.ndarray, ...]:
    """Per-point vectors whose (summed) projections weight the J1 terms"""
    count = geom.count
    if kind == 'te':
        return (geom.normals,)
    if kind.startswith('small'):
        return np.tile(E1, (count, 1)), np.tile(E2, (count, 1))
    return geom.tangents, geom.normals


def bessel_sums(kind: str, geom: SceneGeometry, omega: float, points: np.ndarray,
                variant: str = 'as-written') -> Tuple[np.ndarray, np.ndarray]:
    """
    S0 and S1 at every search point

    Args:
        kind: Predictor kind
        geom: Points x_m with their frames
        omega: Angular frequency
        points: (P, 2) search points
        variant: 'as-written' or 'frame-sum'

    Returns:
        (S0, S1), each of shape (P,)
    """
    _validate(kind, variant)
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    offsets = points[:, None, :] - geom.points[None, :, :]
    radii = np.hypot(offsets[..., 0], offsets[..., 1])

    s0 = np.zeros(len(points))
    s1 = np.zeros(len(points))

    if kind in _ZEROTH_ORDER:
        s0 = np.sum(bessel_j(0, omega * radii) ** 2, axis=1)

    if kind in _FIRST_ORDER:
        safe = np.where(radii > 0, radii, 1.0)
        directions = np.where(radii[..., None] > 0, offsets / safe[..., None], 0.0)
        frames = _frame_vectors(kind, geom)
        if variant == 'as-written':
            weight = np.einsum('pmk,mk->pm', directions, sum(frames)) ** 2
        else:
            weight = sum(np.einsum('pmk,mk->pm', directions, frame) ** 2 for frame in frames)
        s1 = np.sum(weight * bessel_j(1, omega * radii) ** 2, axis=1)

    return s0, s1


def predictor_map(kind: str, geom: SceneGeometry, omega: float, n_directions: int, grid: ImageGrid,
                  variant: str = 'as-written', cap: float = DEFAULT_CAP, sign: str = 'minus') -> FieldMap:
    """
    Pixelwise closed-form MUSIC prediction (1/sqrt(N)) (1 - S0 - S1)^(-1/2)

    The bracket is clamped below at 1 / (N cap^2), so blow-up pixels take the
    value cap. With sign='plus' (combined kinds only) the bracket is
    1 - S0 + S1.
    """
    if n_directions < 2:
        raise InvalidArgumentError(f"number of directions must be >= 2, got {n_directions}")
    if not cap > 0:
        raise InvalidArgumentError(f"cap must be positive, got {cap}")
    if sign not in SIGNS:
        raise InvalidArgumentError(f"unknown predictor sign '{sign}', expected one of {SIGNS}")
    if sign == 'plus' and kind not in COMBINED_KINDS:
        raise InvalidArgumentError(f"sign 'plus' applies to {COMBINED_KINDS} only, got '{kind}'")

    s0, s1 = bessel_sums(kind, geom, omega, grid.points(), variant)
    floor = 1.0 / (n_directions * cap ** 2)
    bracket = 1.0 - s0 - s1 if sign == 'minus' else 1.0 - s0 + s1
    clamped = bracket <= floor
    values = np.where(clamped, cap, 1.0 / np.sqrt(n_directions * np.where(clamped, 1.0, bracket)))
    values = np.minimum(values, cap)

    field_map = FieldMap(grid, values.reshape(grid.shape), f'predictor-{kind}', cap)
    logger.info(
        f"[IMAGE] Predictor {kind} ({variant}, {sign}) {grid.nx}x{grid.ny}: "
        f"max={field_map.values.max():.4g}, cap hits={field_map.cap_hits()}"
    )
    return field_map


def migration_predictor_map(kind: str, geom: SceneGeometry, omega: float, grid: ImageGrid,
                            variant: str = 'as-written') -> FieldMap:
    """Closed-form subspace migration prediction S0 + S1"""
    s0, s1 = bessel_sums(kind, geom, omega, grid.points(), variant)
    logger.info(f"[IMAGE] Migration predictor {kind} ({variant}) {grid.nx}x{grid.ny}")
    return FieldMap(grid, (s0 + s1).reshape(grid.shape), f'migration-{kind}')
