"""
Tests for CSV and PGM map export
"""

import numpy as np
import pytest

from src.imaging.grid import FieldMap, ImageGrid
from src.pipeline.export import PGM_MAXVAL, export_map, load_map_csv, map_to_frame, pgm_bytes
from src.utils.exceptions import ExportError, InvalidArgumentError


def unit_grid(nx=2, ny=2):
    return ImageGrid((0.0, 1.0), (0.0, 1.0), nx, ny)


def pgm_pixels(data: bytes):
    magic, size, maxval, body = data.split(b'\n', 3)
    width, height = (int(v) for v in size.split())
    return magic, int(maxval), np.frombuffer(body, dtype='>u2').reshape(height, width)


class TestCsv:

    def test_zero_map(self, tmp_path):
        path = tmp_path / 'zeros.csv'
        export_map(FieldMap(unit_grid(), np.zeros((2, 2)), 'migration'), str(path), 'csv')

        lines = path.read_text().splitlines()
        assert lines[0] == 'x,y,value'
        assert len(lines) == 5
        assert all(line.split(',')[2] == '0' for line in lines[1:])

    def test_row_major_order(self):
        frame = map_to_frame(FieldMap(unit_grid(2, 3), np.arange(6.0).reshape(2, 3), 'music'))
        assert list(frame['x']) == [0.0, 0.0, 0.0, 1.0, 1.0, 1.0]
        assert list(frame['y']) == [0.0, 0.5, 1.0, 0.0, 0.5, 1.0]
        assert list(frame['value']) == [0.0, 1.0, 2.0, 3.0, 4.0, 5.0]

    def test_round_trip_is_bit_identical(self, tmp_path):
        rng = np.random.default_rng(1)
        grid = ImageGrid((-1.0, 1.0), (-0.5, 0.5), 9, 7)
        original = FieldMap(grid, rng.uniform(0.0, 3.0, grid.shape) / 7.0, 'music')
        path = tmp_path / 'music.csv'
        export_map(original, str(path))

        loaded = load_map_csv(str(path))
        np.testing.assert_array_equal(loaded.values, original.values)
        assert loaded.grid.shape == grid.shape

    def test_wrong_header(self, tmp_path):
        path = tmp_path / 'other.csv'
        path.write_text('a,b\n1,2\n')
        with pytest.raises(ExportError):
            load_map_csv(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ExportError):
            load_map_csv(str(tmp_path / 'absent.csv'))


class TestPgm:

    def test_constant_map_is_all_zero(self):
        magic, maxval, pixels = pgm_pixels(pgm_bytes(FieldMap(unit_grid(3, 4), np.full((3, 4), 2.5), 'music')))
        assert magic == b'P5'
        assert maxval == PGM_MAXVAL
        assert pixels.shape == (4, 3)
        assert np.all(pixels == 0)

    def test_min_max_scaling_and_orientation(self):
        values = np.array([[0.0, 1.0], [2.0, 4.0]])
        _, _, pixels = pgm_pixels(pgm_bytes(FieldMap(unit_grid(), values, 'music')))
        # Top row is the largest y, left column the smallest x
        expected = np.rint(np.array([[1.0, 4.0], [0.0, 2.0]]) / 4.0 * PGM_MAXVAL)
        np.testing.assert_array_equal(pixels, expected)

    def test_file_written(self, tmp_path):
        path = tmp_path / 'maps' / 'music.pgm'
        field_map = FieldMap(unit_grid(), np.eye(2), 'music')
        export_map(field_map, str(path), 'pgm')
        assert path.read_bytes() == pgm_bytes(field_map)


class TestExportErrors:

    def test_unknown_format(self, tmp_path):
        with pytest.raises(InvalidArgumentError):
            export_map(FieldMap(unit_grid(), np.zeros((2, 2)), 'music'), str(tmp_path / 'x.png'), 'png')

    def test_unwritable_destination(self, tmp_path):
        blocker = tmp_path / 'file'
        blocker.write_text('not a directory')
        with pytest.raises(ExportError):
            export_map(FieldMap(unit_grid(), np.zeros((2, 2)), 'music'), str(blocker / 'map.csv'))
