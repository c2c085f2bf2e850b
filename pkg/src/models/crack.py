"""
Perfectly conducting crack (arc) model

Data follow the singular-vector factorization of the crack MSR matrix:
    sound-soft (TM): u_m = [exp(i w theta_n . x_m)]_n
    sound-hard (TE): u_m = [(theta_n . n(x_m)) exp(i w theta_n . x_m)]_n
    K = sum_m s_m u_m u_m^T
"""

from typing import List, Optional, Sequence

import numpy as np

from src.core.geometry import DirectionSet, SceneGeometry
from src.models.base import BaseScatteringModel, MsrMatrix, phase_matrix
from src.utils.exceptions import InvalidArgumentError
from src.utils.logger import get_logger

logger = get_logger(__name__)

BOUNDARY_CONDITIONS = ('sound-soft', 'sound-hard')


def crack_vectors(geom: SceneGeometry, bc: str, omega: float, dirs: DirectionSet) -> np.ndarray:
    """N x M matrix whose columns are the model vectors u_m"""
    if bc not in BOUNDARY_CONDITIONS:
        raise InvalidArgumentError(f"boundary condition must be one of {BOUNDARY_CONDITIONS}, got '{bc}'")
    phases = phase_matrix(geom.points, omega, dirs)
    if bc == 'sound-hard':
        return (dirs.vectors @ geom.normals.T) * phases
    return phases


def msr_crack(geom: SceneGeometry, bc: str, omega: float, dirs: DirectionSet,
              strengths: Optional[Sequence[float]] = None) -> MsrMatrix:
    """
    Synthesize the crack MSR matrix from its factorized form

    Args:
        geom: Discretized crack
        bc: 'sound-soft' or 'sound-hard'
        omega: Angular frequency
        dirs: Incident directions
        strengths: Positive weights s_m, one per point (default all 1)

    Returns:
        Symmetric MsrMatrix tagged 'crack-soft' or 'crack-hard'
    """
    if not omega > 0:
        raise InvalidArgumentError(f"omega must be positive, got {omega}")
    if strengths is None or len(strengths) == 0:
        weights = np.ones(geom.count)
    else:
        weights = np.asarray(strengths, dtype=float)
        if weights.shape != (geom.count,):
            raise InvalidArgumentError(
                f"expected {geom.count} strengths (one per point), got {len(strengths)}"
            )
        if np.any(weights <= 0):
            raise InvalidArgumentError("crack strengths must be positive")

    vectors = crack_vectors(geom, bc, omega, dirs)
    K = (vectors * weights) @ vectors.T
    K = 0.5 * (K + K.T)

    tag = 'crack-soft' if bc == 'sound-soft' else 'crack-hard'
    logger.info(f"[SYNTH] Crack MSR ({bc}): N={dirs.count}, M={geom.count}")
    return MsrMatrix(K, tag, omega, {'M': geom.count})


class CrackModel(BaseScatteringModel):
    """Sound-soft or sound-hard arc"""

    def __init__(self, geometry: SceneGeometry, bc: str = 'sound-soft',
                 strengths: Optional[Sequence[float]] = None, **params):
        if bc not in BOUNDARY_CONDITIONS:
            raise InvalidArgumentError(f"boundary condition must be one of {BOUNDARY_CONDITIONS}, got '{bc}'")
        super().__init__(name="Crack", bc=bc, M=geometry.count, **params)
        self.geometry = geometry
        self.bc = bc
        self.strengths = None if strengths is None else list(strengths)

    @property
    def scene_geometry(self) -> SceneGeometry:
        return self.geometry

    def synthesize(self, omega: float, dirs: DirectionSet) -> MsrMatrix:
        return msr_crack(self.geometry, self.bc, omega, dirs, self.strengths)

    def predictor_kinds(self) -> List[str]:
        return ['tm'] if self.bc == 'sound-soft' else ['te']
