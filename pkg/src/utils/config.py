"""
Scene configuration for the imaging pipeline

A scene document is YAML with flat keys plus nested `geometry` and `grid`
blocks:

    preset: gamma1-eps        # optional starting point, other keys override
    model: thin               # thin | small | crack-soft | crack-hard
    wavelength: 0.4
    n_directions: 24
    eps: 5.0
    mu: 1.0
    h: 0.02
    geometry:
      curve: gamma1           # gamma1 | gamma2 | line | polyline
      # start: [0, 0]; end: [1, 0]       (line)
      # points: [[x, y], ...]            (polyline)
      # inclusions: [{center: [x, y], radius: 0.1, area: 3.14159, eps: 5, mu: 1, tensor: [[..], [..]]}]
    grid: {x_range: [-1, 1], y_range: [-1, 1], nx: 128, ny: 128}
    signal_dim: null
    tau: 0.01
    noise_level: 0.0
    seed: 0
    cap: 1.0e6
    variant: as-written       # as-written | frame-sum
    strengths: null
    output_dir: output
    formats: [csv, pgm]
"""

import copy
import os
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import yaml

from src.utils.exceptions import SceneParseError
from src.utils.logger import get_logger

logger = get_logger(__name__)

MODELS = ('thin', 'small', 'crack-soft', 'crack-hard')
CURVES = ('gamma1', 'gamma2', 'line', 'polyline')
VARIANTS = ('as-written', 'frame-sum')
FORMATS = ('csv', 'pgm')

TOP_LEVEL_KEYS = {
    'name', 'preset', 'model', 'wavelength', 'n_directions', 'eps', 'mu', 'h',
    'geometry', 'grid', 'signal_dim', 'tau', 'noise_level', 'seed', 'cap',
    'variant', 'strengths', 'output_dir', 'formats',
}
GEOMETRY_KEYS = {'curve', 'start', 'end', 'points', 'inclusions'}
GRID_KEYS = {'x_range', 'y_range', 'nx', 'ny'}
INCLUSION_KEYS = {'center', 'radius', 'area', 'tensor', 'eps', 'mu'}

THREE_DISKS = [[-0.7, -0.5], [0.7, -0.5], [0.0, 0.7]]

PRESETS: Dict[str, Dict[str, Any]] = {
    'gamma1-eps': {
        'model': 'thin', 'wavelength': 0.4, 'n_directions': 24,
        'eps': 5.0, 'mu': 1.0, 'h': 0.02, 'geometry': {'curve': 'gamma1'},
    },
    'gamma1-mu': {
        'model': 'thin', 'wavelength': 0.4, 'n_directions': 24,
        'eps': 1.0, 'mu': 5.0, 'h': 0.02, 'geometry': {'curve': 'gamma1'},
    },
    'gamma1-eps-mu': {
        'model': 'thin', 'wavelength': 0.4, 'n_directions': 24,
        'eps': 5.0, 'mu': 5.0, 'h': 0.02, 'geometry': {'curve': 'gamma1'},
    },
    'gamma2-soft': {
        'model': 'crack-soft', 'wavelength': 0.4, 'n_directions': 40,
        'geometry': {'curve': 'gamma2'},
    },
    'gamma2-hard': {
        'model': 'crack-hard', 'wavelength': 0.4, 'n_directions': 40,
        'geometry': {'curve': 'gamma2'},
    },
    'small-eps': {
        'model': 'small', 'wavelength': 0.4, 'n_directions': 24,
        'geometry': {'inclusions': [
            {'center': c, 'radius': 0.1, 'area': float(np.pi), 'eps': 5.0} for c in THREE_DISKS
        ]},
    },
    'small-mu': {
        'model': 'small', 'wavelength': 0.4, 'n_directions': 24,
        'geometry': {'inclusions': [
            {'center': c, 'radius': 0.1, 'area': float(np.pi), 'mu': 5.0} for c in THREE_DISKS
        ]},
    },
}


@dataclass
class ContrastConfig:
    """Thin-inclusion material settings"""
    eps: float = 1.0
    mu: float = 1.0
    h: float = 0.02


@dataclass
class InclusionConfig:
    """One small inclusion; mu without tensor selects the disk tensor"""
    center: Tuple[float, float]
    radius: float = 0.1
    area: float = float(np.pi)
    eps: float = 1.0
    mu: Optional[float] = None
    tensor: Optional[List[List[float]]] = None


@dataclass
class GeometryConfig:
    """Exactly one geometry source: a curve or a list of inclusions"""
    curve: Optional[str] = None
    start: Tuple[float, float] = (0.0, 0.0)
    end: Tuple[float, float] = (1.0, 0.0)
    points: Optional[List[Tuple[float, float]]] = None
    inclusions: List[InclusionConfig] = field(default_factory=list)


@dataclass
class GridConfig:
    """Search grid settings"""
    x_range: Tuple[float, float] = (-1.0, 1.0)
    y_range: Tuple[float, float] = (-1.0, 1.0)
    nx: int = 128
    ny: int = 128


@dataclass
class NoiseConfig:
    """Additive noise settings"""
    level: float = 0.0
    seed: int = 0


@dataclass
class OutputConfig:
    """Where and how maps are written"""
    directory: str = "output"
    formats: List[str] = field(default_factory=lambda: list(FORMATS))


@dataclass
class SceneConfig:
    """Main scene configuration"""
    name: str = "scene"
    model: str = "thin"
    wavelength: float = 0.4
    n_directions: int = 24
    contrast: ContrastConfig = field(default_factory=ContrastConfig)
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    signal_dim: Optional[int] = None
    tau: float = 0.01
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    cap: float = 1e6
    variant: str = "as-written"
    strengths: Optional[List[float]] = None
    output: OutputConfig = field(default_factory=OutputConfig)

    @property
    def omega(self) -> float:
        """Angular frequency 2 pi / lambda"""
        return 2.0 * np.pi / self.wavelength

    @property
    def spacing(self) -> float:
        """Curve segmentation length lambda / 2"""
        return 0.5 * self.wavelength

    @classmethod
    def from_file(cls, config_path: str) -> 'SceneConfig':
        """
        Load a scene from a YAML file

        Args:
            config_path: Path to the scene document

        Returns:
            SceneConfig instance
        """
        if not os.path.exists(config_path):
            raise SceneParseError(f"scene file {config_path} not found")
        with open(config_path, 'r') as f:
            text = f.read()
        config = parse_scene(text)
        if config.name == "scene":
            config.name = os.path.splitext(os.path.basename(config_path))[0]
        logger.info(f"[CONF ] Scene loaded from {config_path}")
        return config

    @classmethod
    def from_preset(cls, preset_name: str) -> 'SceneConfig':
        """Build a scene from a named preset"""
        return parse_scene(yaml.safe_dump({'preset': preset_name}))

    def to_document(self) -> Dict[str, Any]:
        """Flat document form accepted by parse_scene"""
        geometry: Dict[str, Any] = {}
        if self.geometry.curve is not None:
            geometry['curve'] = self.geometry.curve
            if self.geometry.curve == 'line':
                geometry['start'] = list(self.geometry.start)
                geometry['end'] = list(self.geometry.end)
            if self.geometry.curve == 'polyline':
                geometry['points'] = [list(p) for p in self.geometry.points]
        else:
            geometry['inclusions'] = [
                {k: (list(v) if isinstance(v, tuple) else v) for k, v in asdict(incl).items() if v is not None}
                for incl in self.geometry.inclusions
            ]

        return {
            'name': self.name,
            'model': self.model,
            'wavelength': self.wavelength,
            'n_directions': self.n_directions,
            'eps': self.contrast.eps,
            'mu': self.contrast.mu,
            'h': self.contrast.h,
            'geometry': geometry,
            'grid': {
                'x_range': list(self.grid.x_range),
                'y_range': list(self.grid.y_range),
                'nx': self.grid.nx,
                'ny': self.grid.ny,
            },
            'signal_dim': self.signal_dim,
            'tau': self.tau,
            'noise_level': self.noise.level,
            'seed': self.noise.seed,
            'cap': self.cap,
            'variant': self.variant,
            'strengths': self.strengths,
            'output_dir': self.output.directory,
            'formats': list(self.output.formats),
        }

    def to_file(self, config_path: str):
        """
        Save the scene to a YAML file

        Args:
            config_path: Path to save the scene document
        """
        directory = os.path.dirname(config_path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(config_path, 'w') as f:
            yaml.safe_dump(self.to_document(), f, default_flow_style=False, sort_keys=False)
        logger.info(f"[CONF ] Scene saved to {config_path}")


def list_presets() -> List[str]:
    return sorted(PRESETS)


def _number(doc: Dict[str, Any], key: str, positive: bool = True, integer: bool = False):
    value = doc[key]
    if isinstance(value, str):
        # YAML 1.1 reads exponents without a sign (1e6) as strings
        try:
            value = float(value)
        except ValueError:
            raise SceneParseError(f"expected a number, got {value!r}", key) from None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SceneParseError(f"expected a number, got {value!r}", key)
    if not np.isfinite(value):
        raise SceneParseError(f"expected a finite number, got {value!r}", key)
    if integer and int(value) != value:
        raise SceneParseError(f"expected an integer, got {value!r}", key)
    if positive and not value > 0:
        raise SceneParseError(f"must be positive, got {value!r}", key)
    return int(value) if integer else float(value)


def _pair(value, key: str) -> Tuple[float, float]:
    try:
        first, second = (float(v) for v in value)
    except (TypeError, ValueError):
        raise SceneParseError(f"expected a pair of numbers, got {value!r}", key) from None
    return first, second


def _unknown(keys, allowed, prefix: str = ""):
    for key in keys:
        if key not in allowed:
            raise SceneParseError("unknown key", f"{prefix}{key}")


def _parse_inclusion(raw: Any, index: int) -> InclusionConfig:
    where = f"geometry.inclusions[{index}]"
    if not isinstance(raw, dict) or 'center' not in raw:
        raise SceneParseError("inclusion needs a center", where)
    _unknown(raw, INCLUSION_KEYS, f"{where}.")
    incl = InclusionConfig(center=_pair(raw['center'], f"{where}.center"))
    for key in ('radius', 'area', 'eps', 'mu'):
        if raw.get(key) is not None:
            setattr(incl, key, _number(raw, key))
    if raw.get('tensor') is not None:
        tensor = np.asarray(raw['tensor'], dtype=float)
        if tensor.shape != (2, 2):
            raise SceneParseError("tensor must be a 2x2 matrix", f"{where}.tensor")
        incl.tensor = tensor.tolist()
    return incl


def _parse_geometry(raw: Any) -> GeometryConfig:
    if not isinstance(raw, dict) or not raw:
        raise SceneParseError("no geometry given", 'geometry')
    _unknown(raw, GEOMETRY_KEYS, 'geometry.')

    has_curve = raw.get('curve') is not None
    has_inclusions = bool(raw.get('inclusions'))
    if has_curve == has_inclusions:
        raise SceneParseError("exactly one of curve or inclusions is required", 'geometry')

    geometry = GeometryConfig()
    if has_inclusions:
        if not isinstance(raw['inclusions'], list):
            raise SceneParseError("expected a list", 'geometry.inclusions')
        geometry.inclusions = [_parse_inclusion(item, k) for k, item in enumerate(raw['inclusions'])]
        return geometry

    curve = raw['curve']
    if curve not in CURVES:
        raise SceneParseError(f"unknown curve {curve!r}, expected one of {CURVES}", 'geometry.curve')
    geometry.curve = curve
    if curve == 'line':
        geometry.start = _pair(raw.get('start', geometry.start), 'geometry.start')
        geometry.end = _pair(raw.get('end', geometry.end), 'geometry.end')
    if curve == 'polyline':
        points = raw.get('points')
        if not isinstance(points, list) or len(points) < 2:
            raise SceneParseError("polyline needs at least two points", 'geometry.points')
        geometry.points = [_pair(p, 'geometry.points') for p in points]
    return geometry


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if key == 'grid' and isinstance(value, dict) and isinstance(merged.get('grid'), dict):
            merged['grid'] = {**merged['grid'], **value}
        else:
            merged[key] = value
    return merged


def parse_scene(text: str) -> SceneConfig:
    """
    Parse and validate a scene document

    Args:
        text: YAML scene document

    Returns:
        SceneConfig with defaults filled in
    """
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise SceneParseError(f"malformed scene document: {e}") from e

    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise SceneParseError("scene document must be a mapping")
    _unknown(doc, TOP_LEVEL_KEYS)

    preset = doc.get('preset')
    if preset is not None:
        if preset not in PRESETS:
            raise SceneParseError(f"unknown preset {preset!r}, expected one of {list_presets()}", 'preset')
        doc = _merge({'name': preset, **PRESETS[preset]}, {k: v for k, v in doc.items() if k != 'preset'})

    if 'geometry' not in doc:
        raise SceneParseError("no geometry given", 'geometry')

    config = SceneConfig()
    if doc.get('name') is not None:
        config.name = str(doc['name'])

    if 'model' in doc:
        if doc['model'] not in MODELS:
            raise SceneParseError(f"unknown model {doc['model']!r}, expected one of {MODELS}", 'model')
        config.model = doc['model']

    if 'wavelength' in doc:
        config.wavelength = _number(doc, 'wavelength')
    if 'n_directions' in doc:
        config.n_directions = _number(doc, 'n_directions', integer=True)
        if config.n_directions < 2:
            raise SceneParseError("at least 2 directions are required", 'n_directions')

    for key in ('eps', 'mu', 'h'):
        if key in doc:
            setattr(config.contrast, key, _number(doc, key))

    config.geometry = _parse_geometry(doc['geometry'])
    if config.model == 'small' and config.geometry.curve is not None:
        raise SceneParseError("model 'small' needs inclusions, not a curve", 'geometry')
    if config.model != 'small' and config.geometry.curve is None:
        raise SceneParseError(f"model '{config.model}' needs a curve", 'geometry')

    grid = doc.get('grid') or {}
    if not isinstance(grid, dict):
        raise SceneParseError("expected a mapping", 'grid')
    _unknown(grid, GRID_KEYS, 'grid.')
    if 'x_range' in grid:
        config.grid.x_range = _pair(grid['x_range'], 'grid.x_range')
    if 'y_range' in grid:
        config.grid.y_range = _pair(grid['y_range'], 'grid.y_range')
    for key in ('nx', 'ny'):
        if key in grid:
            setattr(config.grid, key, _number(grid, key, integer=True))
            if getattr(config.grid, key) < 2:
                raise SceneParseError("at least 2 pixels are required", f"grid.{key}")

    if doc.get('signal_dim') is not None:
        config.signal_dim = _number(doc, 'signal_dim', positive=False, integer=True)
        if config.signal_dim < 0:
            raise SceneParseError("must be non-negative", 'signal_dim')
    if 'tau' in doc:
        config.tau = _number(doc, 'tau')
        if not config.tau < 1:
            raise SceneParseError("must lie in (0, 1)", 'tau')
    if 'noise_level' in doc:
        config.noise.level = _number(doc, 'noise_level', positive=False)
        if config.noise.level < 0:
            raise SceneParseError("must be non-negative", 'noise_level')
    if 'seed' in doc:
        config.noise.seed = _number(doc, 'seed', positive=False, integer=True)
    if 'cap' in doc:
        config.cap = _number(doc, 'cap')

    if 'variant' in doc:
        if doc['variant'] not in VARIANTS:
            raise SceneParseError(f"unknown variant {doc['variant']!r}, expected one of {VARIANTS}", 'variant')
        config.variant = doc['variant']

    if doc.get('strengths') is not None:
        strengths = doc['strengths']
        if not isinstance(strengths, list):
            raise SceneParseError("expected a list of positive numbers", 'strengths')
        config.strengths = [_number({'strengths': s}, 'strengths') for s in strengths]

    if doc.get('output_dir') is not None:
        config.output.directory = str(doc['output_dir'])
    if 'formats' in doc:
        formats = doc['formats']
        if not isinstance(formats, list) or any(f not in FORMATS for f in formats):
            raise SceneParseError(f"formats must be a list drawn from {FORMATS}", 'formats')
        config.output.formats = list(formats)

    logger.info(f"[CONF ] Parsed scene '{config.name}': model={config.model}, "
                f"lambda={config.wavelength}, N={config.n_directions}")
    return config


def load_scene(path: Optional[str] = None, preset: Optional[str] = None) -> SceneConfig:
    """
    Load a scene from a file, a preset, or both (file keys override the preset)

    Args:
        path: Optional scene document path
        preset: Optional preset name

    Returns:
        SceneConfig instance
    """
    if path is None and preset is None:
        raise SceneParseError("either a scene file or a preset is required")
    if path is None:
        return SceneConfig.from_preset(preset)
    if preset is None:
        return SceneConfig.from_file(path)

    if not os.path.exists(path):
        raise SceneParseError(f"scene file {path} not found")
    with open(path, 'r') as f:
        doc = yaml.safe_load(f) or {}
    if not isinstance(doc, dict):
        raise SceneParseError("scene document must be a mapping")
    doc['preset'] = preset
    return parse_scene(yaml.safe_dump(doc))
