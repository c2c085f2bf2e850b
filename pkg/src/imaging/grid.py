"""
Search grids and the real-valued maps evaluated on them
"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from src.utils.exceptions import InvalidArgumentError

DEFAULT_CAP = 1e6

MAP_KINDS = (
    'music', 'migration',
    'predictor-eps', 'predictor-mu', 'predictor-eps-mu', 'predictor-tm', 'predictor-te',
    'predictor-small-eps', 'predictor-small-mu', 'predictor-small-eps-mu',
    'migration-eps', 'migration-mu', 'migration-eps-mu', 'migration-tm', 'migration-te',
    'migration-small-eps', 'migration-small-mu', 'migration-small-eps-mu',
)


@dataclass(frozen=True)
class ImageGrid:
    """Uniform rectangular grid of search points z (pixel centers include the edges)"""
    x_range: Tuple[float, float] = (-1.0, 1.0)
    y_range: Tuple[float, float] = (-1.0, 1.0)
    nx: int = 128
    ny: int = 128

    def __post_init__(self):
        if int(self.nx) != self.nx or int(self.ny) != self.ny or self.nx < 2 or self.ny < 2:
            raise InvalidArgumentError(f"grid needs nx, ny >= 2, got {self.nx} x {self.ny}")
        x_range = (float(self.x_range[0]), float(self.x_range[1]))
        y_range = (float(self.y_range[0]), float(self.y_range[1]))
        if not (x_range[0] < x_range[1] and y_range[0] < y_range[1]):
            raise InvalidArgumentError(f"grid ranges must be increasing, got {x_range} x {y_range}")
        object.__setattr__(self, 'x_range', x_range)
        object.__setattr__(self, 'y_range', y_range)
        object.__setattr__(self, 'nx', int(self.nx))
        object.__setattr__(self, 'ny', int(self.ny))

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x_range[0], self.x_range[1], self.nx)

    @property
    def ys(self) -> np.ndarray:
        return np.linspace(self.y_range[0], self.y_range[1], self.ny)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nx, self.ny

    @property
    def cell_size(self) -> float:
        """Largest pixel pitch"""
        dx = (self.x_range[1] - self.x_range[0]) / (self.nx - 1)
        dy = (self.y_range[1] - self.y_range[0]) / (self.ny - 1)
        return max(dx, dy)

    def points(self) -> np.ndarray:
        """Pixel centers as a (nx * ny, 2) array in row-major (x outer, y inner) order"""
        X, Y = np.meshgrid(self.xs, self.ys, indexing='ij')
        return np.column_stack([X.ravel(), Y.ravel()])

    def translated(self, offset: Sequence[float]) -> 'ImageGrid':
        dx, dy = float(offset[0]), float(offset[1])
        return ImageGrid(
            (self.x_range[0] + dx, self.x_range[1] + dx),
            (self.y_range[0] + dy, self.y_range[1] + dy),
            self.nx, self.ny,
        )


@dataclass(frozen=True, eq=False)
class FieldMap:
    """Real image over a grid; values[i, j] belongs to (xs[i], ys[j])"""
    grid: ImageGrid
    values: np.ndarray
    kind: str
    cap: float = DEFAULT_CAP

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(self.grid.shape)
        if self.kind not in MAP_KINDS:
            raise InvalidArgumentError(f"unknown map kind '{self.kind}'")
        if not self.cap > 0:
            raise InvalidArgumentError(f"cap must be positive, got {self.cap}")
        if not np.all(np.isfinite(values)):
            raise InvalidArgumentError(f"{self.kind} map contains non-finite values")
        if np.any(values > self.cap):
            raise InvalidArgumentError(f"{self.kind} map exceeds its cap {self.cap}")
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    def cap_hits(self) -> int:
        return int(np.count_nonzero(self.values >= self.cap))

    def value_at(self, point: Sequence[float]) -> float:
        """Value of the pixel nearest to point"""
        i = int(np.argmin(np.abs(self.grid.xs - point[0])))
        j = int(np.argmin(np.abs(self.grid.ys - point[1])))
        return float(self.values[i, j])
