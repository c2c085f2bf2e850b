"""
Map comparison, exclusion masks and peak finding
"""

from dataclasses import asdict, dataclass
from typing import Callable, List, Optional, Union

import numpy as np
from scipy import ndimage

from src.imaging.grid import FieldMap, ImageGrid
from src.utils.exceptions import InvalidArgumentError

Mask = Union[np.ndarray, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class MapComparison:
    """Deviation of map b from reference map a over unmasked pixels"""
    median_relative_deviation: float
    max_relative_deviation: float
    argmax_distance: float
    pixels: int

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class Peak:
    x: float
    y: float
    value: float

    @property
    def point(self) -> np.ndarray:
        return np.array([self.x, self.y])


def exclusion_mask(grid: ImageGrid, points: np.ndarray, radius: float) -> np.ndarray:
    """True for pixels closer than radius to any of the points"""
    pixels = grid.points()
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    distances = np.hypot(
        pixels[:, None, 0] - points[None, :, 0],
        pixels[:, None, 1] - points[None, :, 1],
    )
    return (distances.min(axis=1) < radius).reshape(grid.shape)


def _resolve_mask(grid: ImageGrid, mask: Optional[Mask]) -> np.ndarray:
    if mask is None:
        return np.zeros(grid.shape, dtype=bool)
    if callable(mask):
        return np.asarray(mask(grid.points()), dtype=bool).reshape(grid.shape)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != grid.shape:
        raise InvalidArgumentError(f"mask shape {mask.shape} does not match grid {grid.shape}")
    return mask


def compare_maps(a: FieldMap, b: FieldMap, mask: Optional[Mask] = None) -> MapComparison:
    """
    Relative deviation |b - a| / |a| over pixels not excluded by mask

    Args:
        a: Reference map
        b: Map under test (same grid)
        mask: Boolean array or predicate on (P, 2) pixel centers; True excludes

    Returns:
        MapComparison
    """
    if a.grid != b.grid:
        raise InvalidArgumentError("maps are defined on different grids")

    keep = ~_resolve_mask(a.grid, mask)
    if not np.any(keep):
        raise InvalidArgumentError("mask excludes every pixel")

    ref, other = a.values[keep], b.values[keep]
    difference = np.abs(other - ref)
    scale = np.abs(ref)
    with np.errstate(divide='ignore', invalid='ignore'):
        relative = np.where(scale > 0, difference / np.where(scale > 0, scale, 1.0),
                            np.where(difference > 0, np.inf, 0.0))

    pixels = a.grid.points()[keep.ravel()]
    argmax_distance = float(np.hypot(*(pixels[np.argmax(ref)] - pixels[np.argmax(other)])))

    return MapComparison(
        median_relative_deviation=float(np.median(relative)),
        max_relative_deviation=float(np.max(relative)),
        argmax_distance=argmax_distance,
        pixels=int(keep.sum()),
    )


def find_peaks(field_map: FieldMap, count: Optional[int] = None) -> List[Peak]:
    """
    Local maxima over 3x3 neighbourhoods, largest first

    Pixels inside perfectly flat neighbourhoods are not peaks.
    """
    values = field_map.values
    upper = ndimage.maximum_filter(values, size=3, mode='nearest')
    lower = ndimage.minimum_filter(values, size=3, mode='nearest')
    rows, cols = np.nonzero((values == upper) & (values > lower))

    order = np.argsort(-values[rows, cols], kind='stable')
    xs, ys = field_map.grid.xs, field_map.grid.ys
    peaks = [Peak(float(xs[rows[k]]), float(ys[cols[k]]), float(values[rows[k], cols[k]])) for k in order]
    return peaks if count is None else peaks[:count]


def distance_to_peaks(peaks: List[Peak], point) -> float:
    """Distance from point to the nearest peak (inf when there are none)"""
    if not peaks:
        return float('inf')
    locations = np.array([peak.point for peak in peaks])
    return float(np.min(np.hypot(*(locations - np.asarray(point, dtype=float)).T)))
