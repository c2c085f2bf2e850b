"""
Tests for the scene engine
"""

import os
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from src.models.crack import CrackModel
from src.models.small_inclusion import SmallInclusionModel
from src.models.thin_inclusion import ThinInclusionModel
from src.pipeline.engine import ImagingEngine, build_grid, build_model, run_scene
from src.utils.config import SceneConfig, load_scene
from src.utils.exceptions import DegenerateSubspaceError

SCENE_DIR = Path(__file__).resolve().parents[1] / 'config'


class TestBuildModel:

    def test_thin(self):
        model = build_model(SceneConfig.from_preset('gamma1-eps'))
        assert isinstance(model, ThinInclusionModel)
        assert model.scene_geometry.count == 6

    def test_crack(self):
        model = build_model(SceneConfig.from_preset('gamma2-hard'))
        assert isinstance(model, CrackModel)
        assert model.predictor_kinds() == ['te']

    def test_small_with_disk_tensor(self):
        model = build_model(SceneConfig.from_preset('small-mu'))
        assert isinstance(model, SmallInclusionModel)
        assert model.predictor_kinds() == ['small-mu']
        assert model.scene_geometry.count == 3

    def test_graded_line_crack(self):
        cfg = load_scene(str(SCENE_DIR / 'scenes' / 'line-crack.yaml'))
        model = build_model(cfg)
        assert model.scene_geometry.count == len(cfg.strengths) == 6

    def test_grid(self, small_scene):
        assert build_grid(small_scene).shape == (48, 48)


SHIPPED_SCENES = [SCENE_DIR / 'config.yaml', *sorted((SCENE_DIR / 'scenes').glob('*.yaml'))]


@pytest.mark.parametrize("path", SHIPPED_SCENES, ids=lambda p: p.name)
def test_shipped_scenes_parse(path):
    cfg = load_scene(str(path))
    assert build_model(cfg).scene_geometry.count >= 1


class TestImagingEngine:

    def test_run_reports_subspace_and_peaks(self, small_scene):
        report = ImagingEngine(small_scene).run()
        assert report.signal_dim == 6
        assert report.points == 6
        assert len(report.singular_values) == 24
        assert len(report.peaks) == 6
        assert report.hypotheses_met
        assert set(report.comparisons) == {'music-vs-predictor-eps', 'migration-vs-migration-eps'}
        assert report.to_dict()['comparisons']['music-vs-predictor-eps']['pixels'] > 0

    def test_save_results(self, small_scene, tmp_path):
        report = run_scene(small_scene, directory=str(tmp_path))
        names = sorted(os.path.basename(p) for p in report.files)
        assert names == sorted([
            'music.csv', 'music.pgm', 'migration.csv', 'migration.pgm',
            'predictor-eps.csv', 'predictor-eps.pgm', 'migration-eps.csv', 'migration-eps.pgm',
            'singular_values.csv', 'summary.txt',
        ])

        sigma = pd.read_csv(tmp_path / 'singular_values.csv')
        assert list(sigma.columns) == ['index', 'sigma']
        assert np.all(np.diff(sigma['sigma']) <= 0)
        assert (tmp_path / 'summary.txt').read_text().startswith("=== Scene Results Summary ===")

    def test_csv_only(self, small_scene, tmp_path):
        small_scene.output.formats = ['csv']
        report = run_scene(small_scene, directory=str(tmp_path))
        assert not any(p.endswith('.pgm') for p in report.files)

    def test_no_write(self, small_scene, tmp_path):
        small_scene.output.directory = str(tmp_path / 'unused')
        report = run_scene(small_scene, write=False)
        assert report.files == []
        assert not (tmp_path / 'unused').exists()

    def test_permeability_compares_both_variants(self, small_scene):
        cfg = SceneConfig.from_preset('gamma1-mu')
        cfg.grid = small_scene.grid
        engine = ImagingEngine(cfg)
        report = engine.run()

        assert report.cap_hits['music'] == 0
        assert {'music-vs-predictor-mu', 'music-vs-predictor-mu-frame-sum',
                'migration-vs-migration-mu'} <= set(report.comparisons)
        assert 'predictor-mu-frame-sum' in engine.maps

    def test_combined_kind_reports_plus_sign(self, small_scene):
        cfg = SceneConfig.from_preset('gamma1-eps-mu')
        cfg.grid = small_scene.grid
        engine = ImagingEngine(cfg)
        report = engine.run()

        assert {'music-vs-predictor-eps-mu', 'music-vs-predictor-eps-mu-frame-sum',
                'music-vs-predictor-eps-mu-plus'} <= set(report.comparisons)
        assert 'predictor-eps-mu-plus' in engine.maps
        assert 'predictor-eps-mu-plus' in report.cap_hits

    def test_noise_dimension_and_model_parameters(self, small_scene):
        engine = ImagingEngine(small_scene)
        report = engine.run()
        assert report.noise_dim == 18
        assert report.signal_dim + report.noise_dim == len(report.singular_values)
        assert report.model_parameters == {'eps': 5.0, 'mu': 1.0, 'h': 0.02, 'M': 6}
        assert report.to_dict()['noise_dim'] == 18

        summary = engine.get_results_summary()
        assert "Noise dimension: 18" in summary
        assert "Model parameters: eps=5.0, mu=1.0, h=0.02, M=6" in summary

    def test_noisy_runs_are_deterministic(self, small_scene, tmp_path):
        small_scene.noise.level = 0.01
        small_scene.noise.seed = 3
        small_scene.output.formats = ['csv']
        run_scene(small_scene, directory=str(tmp_path / 'first'))
        run_scene(small_scene, directory=str(tmp_path / 'second'))

        for name in ('music.csv', 'migration.csv', 'singular_values.csv'):
            assert (tmp_path / 'first' / name).read_bytes() == (tmp_path / 'second' / name).read_bytes()

    def test_errors_carry_scene_name(self, small_scene):
        small_scene.signal_dim = 24
        with pytest.raises(DegenerateSubspaceError, match="scene 'gamma1-eps'"):
            ImagingEngine(small_scene).run()

    def test_summary_before_run(self, small_scene):
        engine = ImagingEngine(small_scene)
        assert engine.get_results_summary() == "No scene results available"
        assert engine.save_results() == []
