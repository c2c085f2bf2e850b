"""
Map export to CSV (exact decimals) and 16-bit binary PGM heatmaps
"""

import os

import numpy as np
import pandas as pd

from src.imaging.grid import DEFAULT_CAP, FieldMap, ImageGrid
from src.utils.exceptions import ExportError, InvalidArgumentError
from src.utils.logger import get_logger

logger = get_logger(__name__)

EXPORT_FORMATS = ('csv', 'pgm')

# 17 significant digits round-trip every double
CSV_FLOAT_FORMAT = '%.17g'
PGM_MAXVAL = 65535


def map_to_frame(field_map: FieldMap) -> pd.DataFrame:
    """One row per pixel in row-major order (x outer, y inner)"""
    points = field_map.grid.points()
    return pd.DataFrame({
        'x': points[:, 0],
        'y': points[:, 1],
        'value': field_map.values.ravel(),
    })


def pgm_bytes(field_map: FieldMap) -> bytes:
    """
    Binary P5 image, 16-bit big-endian, min-max scaled

    The top image row is the largest y. A constant map scales to all zeros.
    """
    values = field_map.values.T[::-1]
    low, high = float(values.min()), float(values.max())
    if high > low:
        scaled = np.rint((values - low) / (high - low) * PGM_MAXVAL)
    else:
        scaled = np.zeros_like(values)
    height, width = values.shape
    header = f"P5\n{width} {height}\n{PGM_MAXVAL}\n".encode('ascii')
    return header + scaled.astype('>u2').tobytes()


def export_map(field_map: FieldMap, path: str, fmt: str = 'csv'):
    """
    Write a map to disk

    Args:
        field_map: Map to export
        path: Destination file
        fmt: 'csv' or 'pgm'
    """
    if fmt not in EXPORT_FORMATS:
        raise InvalidArgumentError(f"unknown export format '{fmt}', expected one of {EXPORT_FORMATS}")

    try:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        if fmt == 'csv':
            map_to_frame(field_map).to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
        else:
            with open(path, 'wb') as f:
                f.write(pgm_bytes(field_map))
    except OSError as e:
        logger.error(f"[EXPRT] Failed to write {path}: {e}")
        raise ExportError(f"failed to write {path}: {e}") from e

    logger.info(f"[EXPRT] Wrote {field_map.kind} map to {path}")


def load_map_csv(path: str, kind: str = 'music', cap: float = DEFAULT_CAP) -> FieldMap:
    """
    Read a map written by export_map(..., 'csv')

    Args:
        path: CSV file with header x,y,value
        kind: Map kind to attach
        cap: Cap to attach

    Returns:
        FieldMap with bit-identical values
    """
    try:
        frame = pd.read_csv(path, float_precision='round_trip')
    except (OSError, pd.errors.ParserError) as e:
        raise ExportError(f"failed to read {path}: {e}") from e

    if list(frame.columns) != ['x', 'y', 'value']:
        raise ExportError(f"{path} does not have the header x,y,value")

    xs = np.unique(frame['x'].to_numpy())
    ys = np.unique(frame['y'].to_numpy())
    grid = ImageGrid((xs[0], xs[-1]), (ys[0], ys[-1]), len(xs), len(ys))
    return FieldMap(grid, frame['value'].to_numpy().reshape(grid.shape), kind, cap)
