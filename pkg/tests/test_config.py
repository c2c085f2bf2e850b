"""
Tests for scene documents, presets and their validation
"""

import numpy as np
import pytest
import yaml

from src.utils.config import PRESETS, SceneConfig, list_presets, load_scene, parse_scene
from src.utils.exceptions import ConfigurationError, SceneParseError


def scene_text(**overrides):
    doc = {'model': 'thin', 'geometry': {'curve': 'gamma1'}}
    doc.update(overrides)
    return yaml.safe_dump(doc)


class TestPresets:

    def test_names(self):
        assert list_presets() == sorted(PRESETS)
        assert {'gamma1-eps', 'gamma1-mu', 'gamma2-soft', 'gamma2-hard', 'small-eps', 'small-mu'} <= set(PRESETS)

    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_every_preset_parses(self, name):
        config = SceneConfig.from_preset(name)
        assert config.name == name
        assert config.wavelength == 0.4

    def test_gamma1_eps(self):
        config = SceneConfig.from_preset('gamma1-eps')
        assert config.model == 'thin'
        assert config.contrast.eps == 5.0
        assert config.contrast.mu == 1.0
        assert config.n_directions == 24
        assert config.omega == pytest.approx(15.70796, abs=1e-5)
        assert config.spacing == pytest.approx(0.2)

    def test_crack_uses_forty_directions(self):
        assert SceneConfig.from_preset('gamma2-soft').n_directions == 40

    def test_small_inclusions(self):
        config = SceneConfig.from_preset('small-mu')
        assert config.model == 'small'
        assert len(config.geometry.inclusions) == 3
        assert all(incl.mu == 5.0 for incl in config.geometry.inclusions)

    def test_unknown_preset(self):
        with pytest.raises(SceneParseError) as exc:
            SceneConfig.from_preset('gamma3')
        assert exc.value.key == 'preset'


class TestParseScene:

    def test_defaults(self):
        config = parse_scene(scene_text())
        assert config.grid.nx == 128
        assert config.tau == 0.01
        assert config.signal_dim is None
        assert config.variant == 'as-written'
        assert config.output.formats == ['csv', 'pgm']

    def test_empty_document(self):
        with pytest.raises(SceneParseError) as exc:
            parse_scene("")
        assert exc.value.key == 'geometry'
        assert str(exc.value).startswith("geometry:")

    def test_unknown_key(self):
        with pytest.raises(SceneParseError) as exc:
            parse_scene(scene_text(colour='red'))
        assert exc.value.key == 'colour'

    @pytest.mark.parametrize("value", [0, -0.4, "long"])
    def test_wavelength_must_be_positive(self, value):
        with pytest.raises(SceneParseError) as exc:
            parse_scene(scene_text(wavelength=value))
        assert exc.value.key == 'wavelength'

    @pytest.mark.parametrize("literal", ["1e6", "1.0e6", "1.0e+6", "1000000"])
    def test_exponent_literals(self, literal):
        config = parse_scene(f"model: thin\ngeometry: {{curve: gamma1}}\ncap: {literal}\n")
        assert config.cap == 1e6

    @pytest.mark.parametrize("literal", [".nan", ".inf", "'many'"])
    def test_non_finite_or_text_cap(self, literal):
        with pytest.raises(SceneParseError) as exc:
            parse_scene(f"model: thin\ngeometry: {{curve: gamma1}}\ncap: {literal}\n")
        assert exc.value.key == 'cap'

    def test_boolean_is_not_a_number(self):
        with pytest.raises(SceneParseError):
            parse_scene(scene_text(wavelength=True))

    def test_malformed_yaml(self):
        with pytest.raises(SceneParseError):
            parse_scene("geometry: [unclosed")

    def test_parse_errors_are_configuration_errors(self):
        with pytest.raises(ConfigurationError):
            parse_scene(scene_text(model='sphere'))

    def test_grid_override(self):
        config = parse_scene(scene_text(grid={'nx': 64, 'x_range': [-2, 2]}))
        assert config.grid.nx == 64
        assert config.grid.ny == 128
        assert config.grid.x_range == (-2.0, 2.0)

    def test_unknown_grid_key(self):
        with pytest.raises(SceneParseError) as exc:
            parse_scene(scene_text(grid={'nz': 3}))
        assert exc.value.key == 'grid.nz'

    def test_curve_and_inclusions_are_exclusive(self):
        geometry = {'curve': 'gamma1', 'inclusions': [{'center': [0, 0]}]}
        with pytest.raises(SceneParseError) as exc:
            parse_scene(scene_text(geometry=geometry))
        assert exc.value.key == 'geometry'

    def test_small_model_needs_inclusions(self):
        with pytest.raises(SceneParseError):
            parse_scene(scene_text(model='small'))

    def test_inclusion_errors(self):
        missing_center = {'inclusions': [{'radius': 0.1}]}
        with pytest.raises(SceneParseError) as exc:
            parse_scene(scene_text(model='small', geometry=missing_center))
        assert exc.value.key == 'geometry.inclusions[0]'

        bad_tensor = {'inclusions': [{'center': [0, 0], 'tensor': [[1, 0, 0]]}]}
        with pytest.raises(SceneParseError) as exc:
            parse_scene(scene_text(model='small', geometry=bad_tensor))
        assert exc.value.key == 'geometry.inclusions[0].tensor'

    def test_inclusion_tensor(self):
        geometry = {'inclusions': [{'center': [0.1, 0.2], 'tensor': [[2, 0], [0, 3]], 'eps': 4}]}
        config = parse_scene(scene_text(model='small', geometry=geometry))
        incl = config.geometry.inclusions[0]
        assert incl.center == (0.1, 0.2)
        np.testing.assert_array_equal(incl.tensor, [[2.0, 0.0], [0.0, 3.0]])
        assert incl.eps == 4.0

    def test_line_endpoints(self):
        config = parse_scene(scene_text(geometry={'curve': 'line', 'start': [0, 0], 'end': [1, 1]}))
        assert config.geometry.end == (1.0, 1.0)

    def test_polyline_needs_two_points(self):
        with pytest.raises(SceneParseError) as exc:
            parse_scene(scene_text(geometry={'curve': 'polyline', 'points': [[0, 0]]}))
        assert exc.value.key == 'geometry.points'

    @pytest.mark.parametrize("tau", [0, 1, 1.5])
    def test_tau_range(self, tau):
        with pytest.raises(SceneParseError) as exc:
            parse_scene(scene_text(tau=tau))
        assert exc.value.key == 'tau'

    def test_signal_dim_zero_is_allowed(self):
        assert parse_scene(scene_text(signal_dim=0)).signal_dim == 0

    def test_unknown_variant_and_format(self):
        with pytest.raises(SceneParseError):
            parse_scene(scene_text(variant='sideways'))
        with pytest.raises(SceneParseError):
            parse_scene(scene_text(formats=['png']))

    def test_strengths(self):
        assert parse_scene(scene_text(model='crack-soft', strengths=[1, 2])).strengths == [1.0, 2.0]
        with pytest.raises(SceneParseError):
            parse_scene(scene_text(model='crack-soft', strengths=[1, -2]))


class TestLoadScene:

    def test_file_round_trip(self, tmp_path):
        original = SceneConfig.from_preset('small-eps')
        original.noise.level = 0.01
        original.noise.seed = 9
        path = tmp_path / 'scenes' / 'disks.yaml'
        original.to_file(str(path))

        loaded = SceneConfig.from_file(str(path))
        assert loaded.to_document() == original.to_document()

    def test_name_defaults_to_file_stem(self, tmp_path):
        path = tmp_path / 'my-scene.yaml'
        path.write_text(scene_text())
        assert load_scene(str(path)).name == 'my-scene'

    def test_file_overrides_preset(self, tmp_path):
        path = tmp_path / 'override.yaml'
        path.write_text(yaml.safe_dump({'n_directions': 32, 'grid': {'nx': 40}}))
        config = load_scene(str(path), preset='gamma1-mu')
        assert config.n_directions == 32
        assert config.grid.nx == 40
        assert config.contrast.mu == 5.0

    def test_missing_file(self, tmp_path):
        with pytest.raises(SceneParseError):
            load_scene(str(tmp_path / 'absent.yaml'))

    def test_nothing_given(self):
        with pytest.raises(SceneParseError):
            load_scene()
