"""
Supporting curves, direction sets and arc-length discretization

Curves are parametric maps [a, b] -> R^2. The named presets reproduce the
thin-inclusion curve gamma1 and the crack Gamma2 exactly; straight segments
and dense polylines cover everything else.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, optimize

from src.utils.exceptions import DomainError, InvalidArgumentError, InvalidGeometryError
from src.utils.logger import get_logger

logger = get_logger(__name__)

FRAME_TOLERANCE = 1e-12
ARC_LENGTH_RTOL = 1e-10


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


def rotate_left(vector: np.ndarray) -> np.ndarray:
    """Rotate planar vectors by +90 degrees (last axis holds x, y)"""
    vector = np.asarray(vector, dtype=float)
    return np.stack([-vector[..., 1], vector[..., 0]], axis=-1)


@dataclass(frozen=True, eq=False)
class DirectionSet:
    """N unit incident directions spread over the full circle"""
    vectors: np.ndarray

    def __post_init__(self):
        vectors = _frozen(self.vectors)
        if vectors.ndim != 2 or vectors.shape[1] != 2:
            raise InvalidArgumentError(f"directions must have shape (N, 2), got {vectors.shape}")
        object.__setattr__(self, 'vectors', vectors)

    @property
    def count(self) -> int:
        return self.vectors.shape[0]

    def __len__(self) -> int:
        return self.count


def sample_directions(n: int) -> DirectionSet:
    """
    Equispaced directions theta_n = (cos 2n pi/N, sin 2n pi/N), n = 1..N

    Args:
        n: Number of directions (at least 2)

    Returns:
        DirectionSet
    """
    if int(n) != n or n < 2:
        raise InvalidArgumentError(f"number of directions must be an integer >= 2, got {n}")
    n = int(n)
    angles = 2.0 * np.pi * np.arange(1, n + 1) / n
    return DirectionSet(np.column_stack([np.cos(angles), np.sin(angles)]))


@dataclass(frozen=True, eq=False)
class CurveSpec:
    """Parametric supporting curve on the parameter domain [a, b]"""
    kind: str
    domain: Tuple[float, float]
    evaluator: Callable[[float], np.ndarray]
    derivative: Callable[[float], np.ndarray]
    tangent_override: Optional[Callable[[float], np.ndarray]] = None
    breakpoints: Tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        a, b = float(self.domain[0]), float(self.domain[1])
        if not a < b:
            raise InvalidGeometryError(f"curve domain must satisfy a < b, got [{a}, {b}]")
        object.__setattr__(self, 'domain', (a, b))

    def contains(self, s: float) -> bool:
        a, b = self.domain
        slack = 1e-12 * max(1.0, abs(a), abs(b))
        return a - slack <= s <= b + slack

    def clip(self, s: float) -> float:
        a, b = self.domain
        return min(max(float(s), a), b)

    def speed(self, s: float) -> float:
        return float(np.hypot(*self.derivative(s)))


@dataclass(frozen=True)
class CurveFrame:
    """Point on a curve with its unit tangent and left normal"""
    point: np.ndarray
    tangent: np.ndarray
    normal: np.ndarray


def gamma1() -> CurveSpec:
    """Thin-inclusion curve (x + 0.2, x^3 + x^2 - 0.3), -0.5 <= x <= 0.5"""
    return CurveSpec(
        kind='gamma1',
        domain=(-0.5, 0.5),
        evaluator=lambda x: np.array([x + 0.2, x ** 3 + x ** 2 - 0.3]),
        derivative=lambda x: np.array([1.0, 3.0 * x ** 2 + 2.0 * x]),
    )


def gamma2() -> CurveSpec:
    """Crack (x, cos(x pi/2)/2 + sin(x pi/2)/5 - cos(3x pi/2)/10), -1 <= x <= 1"""
    def evaluator(x):
        return np.array([
            x,
            0.5 * np.cos(0.5 * np.pi * x) + 0.2 * np.sin(0.5 * np.pi * x)
            - 0.1 * np.cos(1.5 * np.pi * x),
        ])

    def derivative(x):
        return np.array([
            1.0,
            -0.25 * np.pi * np.sin(0.5 * np.pi * x) + 0.1 * np.pi * np.cos(0.5 * np.pi * x)
            + 0.15 * np.pi * np.sin(1.5 * np.pi * x),
        ])

    return CurveSpec(kind='gamma2', domain=(-1.0, 1.0), evaluator=evaluator, derivative=derivative)


def line(start: Sequence[float] = (0.0, 0.0), end: Sequence[float] = (1.0, 0.0)) -> CurveSpec:
    """Straight segment from start (s = 0) to end (s = 1)"""
    p0 = np.asarray(start, dtype=float)
    p1 = np.asarray(end, dtype=float)
    delta = p1 - p0
    return CurveSpec(
        kind='line',
        domain=(0.0, 1.0),
        evaluator=lambda s: p0 + s * delta,
        derivative=lambda s: delta.copy(),
    )


def polyline(points: Sequence[Sequence[float]]) -> CurveSpec:
    """
    Dense polyline through the given vertices, parameterized by vertex index

    Tangents come from central differences at the vertices, interpolated
    linearly between them and renormalized.
    """
    vertices = np.asarray(points, dtype=float)
    if vertices.ndim != 2 or vertices.shape[1] != 2 or len(vertices) < 2:
        raise InvalidGeometryError("polyline needs at least two (x, y) vertices")

    last = len(vertices) - 1
    vertex_tangents = np.gradient(vertices, axis=0)

    def segment(s):
        k = min(int(np.floor(s)), last - 1)
        return k, s - k

    def evaluator(s):
        k, frac = segment(s)
        return vertices[k] + frac * (vertices[k + 1] - vertices[k])

    def derivative(s):
        k, _ = segment(s)
        return vertices[k + 1] - vertices[k]

    def tangent(s):
        k, frac = segment(s)
        blend = (1.0 - frac) * vertex_tangents[k] + frac * vertex_tangents[k + 1]
        norm = np.hypot(*blend)
        if norm == 0.0:
            blend, norm = derivative(s), np.hypot(*derivative(s))
        return blend / norm

    return CurveSpec(
        kind='polyline',
        domain=(0.0, float(last)),
        evaluator=evaluator,
        derivative=derivative,
        tangent_override=tangent,
        breakpoints=tuple(float(k) for k in range(1, last)),
    )


CURVE_PRESETS = {
    'gamma1': gamma1,
    'gamma2': gamma2,
    'line': line,
}


def curve_preset(name: str) -> CurveSpec:
    """Look up a named curve preset ("gamma1", "gamma2", "line")"""
    try:
        return CURVE_PRESETS[name]()
    except KeyError:
        raise InvalidArgumentError(
            f"unknown curve preset '{name}', expected one of {sorted(CURVE_PRESETS)}"
        ) from None


def eval_curve(spec: CurveSpec, s: float) -> CurveFrame:
    """
    Evaluate point, unit tangent and left normal at parameter s

    Args:
        spec: Curve to evaluate
        s: Parameter inside spec.domain

    Returns:
        CurveFrame
    """
    if not np.isfinite(s) or not spec.contains(s):
        raise DomainError(f"parameter {s} outside curve domain {spec.domain}")
    s = spec.clip(s)

    if spec.tangent_override is not None:
        tangent = np.asarray(spec.tangent_override(s), dtype=float)
    else:
        velocity = np.asarray(spec.derivative(s), dtype=float)
        speed = np.hypot(*velocity)
        if speed == 0.0:
            raise InvalidGeometryError(f"curve '{spec.kind}' is singular at s={s}")
        tangent = velocity / speed

    point = np.asarray(spec.evaluator(s), dtype=float)
    return CurveFrame(point=point, tangent=tangent, normal=rotate_left(tangent))


def arc_length(spec: CurveSpec, s: Optional[float] = None) -> float:
    """Arc length from the start of the domain to s (whole curve by default)"""
    a, b = spec.domain
    upper = b if s is None else spec.clip(s)
    if upper <= a:
        return 0.0
    inner = [p for p in spec.breakpoints if a < p < upper]
    value, _ = integrate.quad(
        spec.speed, a, upper,
        epsabs=0.0, epsrel=ARC_LENGTH_RTOL, limit=400,
        points=inner or None,
    )
    return float(value)


@dataclass(frozen=True, eq=False)
class SceneGeometry:
    """Discretized supporting curve: one point per segment with its frame"""
    points: np.ndarray
    tangents: np.ndarray
    normals: np.ndarray
    curve_length: float
    spacing: float

    def __post_init__(self):
        points = _frozen(self.points).reshape(-1, 2)
        tangents = _frozen(self.tangents).reshape(-1, 2)
        normals = _frozen(self.normals).reshape(-1, 2)

        if len(points) == 0:
            raise InvalidGeometryError("scene geometry must contain at least one point")
        if tangents.shape != points.shape or normals.shape != points.shape:
            raise InvalidGeometryError("points, tangents and normals must have matching shapes")
        if not self.curve_length > 0 or not self.spacing > 0:
            raise InvalidGeometryError("curve length and spacing must be positive")

        if not np.all(np.isfinite(points)):
            raise InvalidGeometryError("scene geometry points must be finite")

        # np.max propagates NaN, so broken frames fail the comparison below
        unit_defect = np.max(np.abs(np.concatenate([
            np.hypot(tangents[:, 0], tangents[:, 1]) - 1.0,
            np.hypot(normals[:, 0], normals[:, 1]) - 1.0,
            np.sum(tangents * normals, axis=1),
        ])))
        if not unit_defect <= FRAME_TOLERANCE:
            raise InvalidGeometryError(f"tangent/normal frames not orthonormal (defect {unit_defect:.2e})")

        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'tangents', tangents)
        object.__setattr__(self, 'normals', normals)
        object.__setattr__(self, 'curve_length', float(self.curve_length))
        object.__setattr__(self, 'spacing', float(self.spacing))

    @property
    def count(self) -> int:
        return self.points.shape[0]

    @property
    def segment_length(self) -> float:
        """length(gamma) / M, the quadrature weight of each point"""
        return self.curve_length / self.count

    @classmethod
    def from_points(cls, points, tangents=None, curve_length: Optional[float] = None,
                    spacing: Optional[float] = None) -> 'SceneGeometry':
        """
        Build a geometry from explicit points (e.g. inclusion centers)

        Tangents default to e1; normals are always the left rotation.
        """
        points = np.asarray(points, dtype=float).reshape(-1, 2)
        if tangents is None:
            tangents = np.tile([1.0, 0.0], (len(points), 1))
        tangents = np.asarray(tangents, dtype=float).reshape(-1, 2)
        norms = np.hypot(tangents[:, 0], tangents[:, 1])
        if not np.all(np.isfinite(norms) & (norms > 0)):
            raise InvalidGeometryError("tangents must be finite and nonzero")
        tangents = tangents / norms[:, None]
        if curve_length is None:
            curve_length = len(points) * (spacing or 1.0)
        if spacing is None:
            spacing = curve_length / len(points)
        return cls(points, tangents, rotate_left(tangents), curve_length, spacing)

    def translated(self, offset: Sequence[float]) -> 'SceneGeometry':
        return SceneGeometry(
            self.points + np.asarray(offset, dtype=float),
            self.tangents, self.normals, self.curve_length, self.spacing,
        )


def discretize_curve(spec: CurveSpec, spacing: float) -> SceneGeometry:
    """
    Place M = max(1, round(L / spacing)) points at the arc-length midpoints
    (m - 1/2) L / M of M equal segments

    Args:
        spec: Curve to discretize
        spacing: Target segment length (nominally half a wavelength)

    Returns:
        SceneGeometry
    """
    if not np.isfinite(spacing) or spacing <= 0:
        raise InvalidArgumentError(f"spacing must be positive, got {spacing}")

    total = arc_length(spec)
    if not total > 0:
        raise InvalidGeometryError(f"curve '{spec.kind}' has zero length")

    count = max(1, int(round(total / spacing)))
    a, b = spec.domain
    targets = (np.arange(1, count + 1) - 0.5) * total / count

    frames = []
    for target in targets:
        s = optimize.brentq(lambda u: arc_length(spec, u) - target, a, b, xtol=1e-14, rtol=1e-14)
        frames.append(eval_curve(spec, s))

    geometry = SceneGeometry(
        points=np.array([f.point for f in frames]),
        tangents=np.array([f.tangent for f in frames]),
        normals=np.array([f.normal for f in frames]),
        curve_length=total,
        spacing=spacing,
    )
    logger.info(f"[GEOM ] Discretized {spec.kind}: length={total:.6f}, M={count}, spacing={spacing:.4f}")
    return geometry
