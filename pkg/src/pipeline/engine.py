"""
Scene engine: synthesize, decompose, image, predict, compare, export
"""

import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from src.core.geometry import curve_preset, discretize_curve, line, polyline, sample_directions
from src.core.subspace import SubspaceDecomposition, svd
from src.imaging.analysis import MapComparison, Peak, compare_maps, exclusion_mask, find_peaks
from src.imaging.functionals import migration_map, music_map
from src.imaging.grid import FieldMap, ImageGrid
from src.imaging.predictors import COMBINED_KINDS, VARIANTS, migration_predictor_map, predictor_map
from src.models.base import BaseScatteringModel, MsrMatrix, add_noise
from src.models.crack import CrackModel
from src.models.small_inclusion import SmallInclusion, SmallInclusionModel, disk_polarization_tensor
from src.models.thin_inclusion import MaterialContrast, ThinInclusionModel
from src.pipeline.export import CSV_FLOAT_FORMAT, export_map
from src.utils.config import SceneConfig
from src.utils.exceptions import ImagingError
from src.utils.logger import get_logger

logger = get_logger(__name__)

# Kinds whose J1 term depends on the predictor variant
VARIANT_SENSITIVE = {'mu', 'eps-mu', 'small-mu', 'small-eps-mu'}


def build_model(cfg: SceneConfig) -> BaseScatteringModel:
    """Instantiate the scattering model a scene describes"""
    if cfg.model == 'small':
        inclusions = []
        for incl in cfg.geometry.inclusions:
            if incl.tensor is not None:
                tensor = np.asarray(incl.tensor, dtype=float)
            elif incl.mu is not None:
                tensor = disk_polarization_tensor(incl.mu, incl.area)
            else:
                tensor = None
            inclusions.append(SmallInclusion(incl.center, incl.radius, incl.area, tensor, incl.eps))
        return SmallInclusionModel(inclusions)

    curve = cfg.geometry.curve
    if curve == 'line':
        spec = line(cfg.geometry.start, cfg.geometry.end)
    elif curve == 'polyline':
        spec = polyline(cfg.geometry.points)
    else:
        spec = curve_preset(curve)
    geometry = discretize_curve(spec, cfg.spacing)

    if cfg.model == 'thin':
        contrast = MaterialContrast(cfg.contrast.eps, cfg.contrast.mu, cfg.contrast.h)
        return ThinInclusionModel(geometry, contrast)
    bc = 'sound-soft' if cfg.model == 'crack-soft' else 'sound-hard'
    return CrackModel(geometry, bc, cfg.strengths)


def build_grid(cfg: SceneConfig) -> ImageGrid:
    return ImageGrid(cfg.grid.x_range, cfg.grid.y_range, cfg.grid.nx, cfg.grid.ny)


@dataclass
class RunReport:
    """Statistics of one scene run"""
    scene: str
    model: str
    wavelength: float
    omega: float
    n_directions: int
    points: int
    singular_values: List[float]
    signal_dim: int
    noise_dim: int
    noise_level: float
    hypotheses_met: bool
    model_parameters: Dict[str, Any] = field(default_factory=dict)
    cap_hits: Dict[str, int] = field(default_factory=dict)
    comparisons: Dict[str, MapComparison] = field(default_factory=dict)
    peaks: List[Peak] = field(default_factory=list)
    files: List[str] = field(default_factory=list)

    def to_dict(self):
        return {
            'scene': self.scene,
            'model': self.model,
            'wavelength': self.wavelength,
            'omega': self.omega,
            'n_directions': self.n_directions,
            'points': self.points,
            'signal_dim': self.signal_dim,
            'noise_dim': self.noise_dim,
            'noise_level': self.noise_level,
            'hypotheses_met': self.hypotheses_met,
            'model_parameters': dict(self.model_parameters),
            'singular_values': list(self.singular_values),
            'cap_hits': dict(self.cap_hits),
            'comparisons': {k: v.to_dict() for k, v in self.comparisons.items()},
            'peaks': [(p.x, p.y, p.value) for p in self.peaks],
            'files': list(self.files),
        }


class ImagingEngine:
    """Runs the MUSIC pipeline for one scene"""

    def __init__(self, config: SceneConfig):
        """
        Initialize engine

        Args:
            config: Validated scene configuration
        """
        self.config = config
        self.model: Optional[BaseScatteringModel] = None
        self.msr: Optional[MsrMatrix] = None
        self.decomposition: Optional[SubspaceDecomposition] = None
        self.maps: Dict[str, FieldMap] = {}
        self.report: Optional[RunReport] = None

        logger.info(f"[SCENE] Engine initialized for scene '{config.name}'")

    def run(self) -> RunReport:
        """
        Run the pipeline without writing artifacts

        Returns:
            RunReport
        """
        cfg = self.config
        try:
            return self._run(cfg)
        except ImagingError as e:
            logger.error(f"[SCENE] Scene '{cfg.name}' failed: {type(e).__name__}: {e}")
            raise type(e)(f"scene '{cfg.name}': {e}") from e

    def _run(self, cfg: SceneConfig) -> RunReport:
        omega = cfg.omega
        dirs = sample_directions(cfg.n_directions)
        grid = build_grid(cfg)

        self.model = build_model(cfg)
        geometry = self.model.scene_geometry
        hypotheses_met = self.model.check_hypotheses(dirs.count)

        logger.info(
            f"[SCENE] Running '{cfg.name}': model={cfg.model}, lambda={cfg.wavelength}, "
            f"omega={omega:.5f}, N={dirs.count}, M={geometry.count}"
        )

        self.msr = add_noise(self.model.synthesize(omega, dirs), cfg.noise.level, cfg.noise.seed)
        self.decomposition = svd(self.msr, signal_dim=cfg.signal_dim, tau=cfg.tau)

        self.maps = {
            'music': music_map(self.decomposition, omega, dirs, grid, cfg.cap),
            'migration': migration_map(self.decomposition, omega, dirs, grid),
        }

        mask = exclusion_mask(grid, geometry.points, cfg.wavelength / 4.0)
        comparisons: Dict[str, MapComparison] = {}
        for kind in self.model.predictor_kinds():
            variants = VARIANTS if kind in VARIANT_SENSITIVE else (cfg.variant,)
            for variant in variants:
                label = f"predictor-{kind}" if variant == cfg.variant else f"predictor-{kind}-{variant}"
                prediction = predictor_map(kind, geometry, omega, dirs.count, grid, variant, cfg.cap)
                self.maps[label] = prediction
                comparisons[f"music-vs-{label}"] = compare_maps(self.maps['music'], prediction, mask)

            if kind in COMBINED_KINDS:
                label = f"predictor-{kind}-plus"
                prediction = predictor_map(kind, geometry, omega, dirs.count, grid, cfg.variant, cfg.cap, 'plus')
                self.maps[label] = prediction
                comparisons[f"music-vs-{label}"] = compare_maps(self.maps['music'], prediction, mask)

            migration_label = f"migration-{kind}"
            self.maps[migration_label] = migration_predictor_map(kind, geometry, omega, grid, cfg.variant)
            comparisons[f"migration-vs-{migration_label}"] = compare_maps(
                self.maps['migration'], self.maps[migration_label], mask
            )

        self.report = RunReport(
            scene=cfg.name,
            model=cfg.model,
            wavelength=cfg.wavelength,
            omega=omega,
            n_directions=dirs.count,
            points=geometry.count,
            singular_values=[float(s) for s in self.decomposition.singular_values],
            signal_dim=self.decomposition.signal_dim,
            noise_dim=self.decomposition.noise_dim,
            noise_level=cfg.noise.level,
            model_parameters=self.model.get_parameters(),
            hypotheses_met=hypotheses_met,
            cap_hits={label: m.cap_hits() for label, m in self.maps.items()},
            comparisons=comparisons,
            peaks=find_peaks(self.maps['music'], geometry.count),
        )

        logger.info(f"[SCENE] Scene '{cfg.name}' completed: signal_dim={self.report.signal_dim}")
        return self.report

    def get_results_summary(self) -> str:
        """Get a formatted summary of the last run"""
        if self.report is None:
            return "No scene results available"

        r = self.report
        leading = ', '.join(f"{s:.4e}" for s in r.singular_values[:max(r.signal_dim, 1) + 2])
        lines = [
            "=== Scene Results Summary ===",
            f"Scene: {r.scene} ({r.model})",
            f"Wavelength: {r.wavelength}  omega: {r.omega:.5f}",
            f"Directions: {r.n_directions}  Points: {r.points}  Noise: {r.noise_level}",
            f"Hypothesis N > kM met: {r.hypotheses_met}",
            "Model parameters: " + ', '.join(f"{k}={v}" for k, v in r.model_parameters.items()),
            "",
            "Subspace:",
            f"  Signal dimension: {r.signal_dim}",
            f"  Noise dimension: {r.noise_dim}",
            f"  Leading singular values: {leading}",
            "",
            "Cap hits:",
        ]
        lines += [f"  {label}: {hits}" for label, hits in r.cap_hits.items()]
        lines += ["", "Comparisons (|b - a| / |a|, pixels beyond lambda/4 of x_m):"]
        for label, c in r.comparisons.items():
            lines.append(
                f"  {label}: median={c.median_relative_deviation:.4f}, "
                f"max={c.max_relative_deviation:.4f}, argmax distance={c.argmax_distance:.4f}"
            )
        lines += ["", "Top MUSIC peaks:"]
        lines += [f"  ({p.x:+.4f}, {p.y:+.4f}) value={p.value:.4g}" for p in r.peaks]
        return "\n".join(lines)

    def save_results(self, directory: Optional[str] = None) -> List[str]:
        """
        Write maps, singular values and the summary

        Args:
            directory: Output directory (defaults to the scene's output_dir)

        Returns:
            Paths written
        """
        if self.report is None:
            logger.warning("[SCENE] No results to save")
            return []

        directory = directory or self.config.output.directory
        os.makedirs(directory, exist_ok=True)
        written = []

        for label, field_map in self.maps.items():
            for fmt in self.config.output.formats:
                path = os.path.join(directory, f"{label}.{fmt}")
                export_map(field_map, path, fmt)
                written.append(path)

        sigma_path = os.path.join(directory, "singular_values.csv")
        pd.DataFrame({
            'index': np.arange(1, len(self.report.singular_values) + 1),
            'sigma': self.report.singular_values,
        }).to_csv(sigma_path, index=False, float_format=CSV_FLOAT_FORMAT)
        written.append(sigma_path)

        summary_path = os.path.join(directory, "summary.txt")
        with open(summary_path, 'w') as f:
            f.write(self.get_results_summary() + "\n")
        written.append(summary_path)

        self.report.files = written
        logger.info(f"[SCENE] Results saved to {directory}")
        return written


def run_scene(cfg: SceneConfig, write: bool = True, directory: Optional[str] = None) -> RunReport:
    """
    Run a scene end to end

    Args:
        cfg: Scene configuration
        write: Write maps and summary to disk
        directory: Override for the output directory

    Returns:
        RunReport
    """
    engine = ImagingEngine(cfg)
    report = engine.run()
    if write:
        engine.save_results(directory)
    return report
