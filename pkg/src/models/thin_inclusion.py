"""
Thin electromagnetic inclusion model

Far-field data of a tubular inclusion of half-thickness h around a supporting
curve, with the o(h) remainder dropped and the curve integral realized as the
M-point sum over the discretized curve:

    K_jl = h C (L/M) sum_m [ 2(1/mu - 1)(theta_j.t)(theta_l.t)
                            + 2(1 - mu)(theta_j.n)(theta_l.n) + (eps - 1) ]
                          exp(i w (theta_j + theta_l) . x_m)
"""

from dataclasses import dataclass
from typing import List

import numpy as np

from src.core.geometry import DirectionSet, SceneGeometry
from src.models.base import BaseScatteringModel, MsrMatrix, far_field_constant, phase_matrix
from src.utils.exceptions import InvalidArgumentError
from src.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class MaterialContrast:
    """Permittivity/permeability of the inclusion against a unit background"""
    eps: float
    mu: float
    h: float
    eps0: float = 1.0
    mu0: float = 1.0

    def __post_init__(self):
        for name in ('eps', 'mu', 'h'):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise InvalidArgumentError(f"{name} must be positive, got {value}")
        if self.eps0 != 1.0 or self.mu0 != 1.0:
            raise InvalidArgumentError("background eps0 and mu0 are fixed to 1")

    @property
    def has_permittivity_contrast(self) -> bool:
        return self.eps != self.eps0

    @property
    def has_permeability_contrast(self) -> bool:
        return self.mu != self.mu0

    @property
    def tangent_weight(self) -> float:
        """Eigenvalue of M(x) along t(x)"""
        return 2.0 * (1.0 / self.mu - 1.0)

    @property
    def normal_weight(self) -> float:
        """Eigenvalue of M(x) along n(x)"""
        return 2.0 * (1.0 - self.mu)


def msr_thin(geom: SceneGeometry, mat: MaterialContrast, omega: float,
             dirs: DirectionSet) -> MsrMatrix:
    """
    Synthesize the thin-inclusion MSR matrix

    Args:
        geom: Discretized supporting curve
        mat: Material contrast and half-thickness
        omega: Angular frequency
        dirs: Incident directions (observation directions are their negatives)

    Returns:
        Symmetric MsrMatrix tagged 'thin'
    """
    if not omega > 0:
        raise InvalidArgumentError(f"omega must be positive, got {omega}")

    phases = phase_matrix(geom.points, omega, dirs)
    tangential = (dirs.vectors @ geom.tangents.T) * phases
    normal = (dirs.vectors @ geom.normals.T) * phases

    K = (mat.eps - 1.0) * (phases @ phases.T)
    if mat.has_permeability_contrast:
        K = K + mat.tangent_weight * (tangential @ tangential.T)
        K = K + mat.normal_weight * (normal @ normal.T)
    K = mat.h * far_field_constant(omega) * geom.segment_length * K
    K = 0.5 * (K + K.T)

    logger.info(
        f"[SYNTH] Thin inclusion MSR: N={dirs.count}, M={geom.count}, "
        f"eps={mat.eps}, mu={mat.mu}, h={mat.h}"
    )
    return MsrMatrix(K, 'thin', omega, {'h': mat.h, 'M': geom.count, 'eps': mat.eps, 'mu': mat.mu})


class ThinInclusionModel(BaseScatteringModel):
    """Thin inclusion around a discretized supporting curve"""

    def __init__(self, geometry: SceneGeometry, contrast: MaterialContrast, **params):
        super().__init__(
            name="ThinInclusion",
            eps=contrast.eps,
            mu=contrast.mu,
            h=contrast.h,
            M=geometry.count,
            **params
        )
        self.geometry = geometry
        self.contrast = contrast

        # eps, mu and combined predictors need N > M, 2M, 3M
        self.direction_factor = (
            int(contrast.has_permittivity_contrast) + 2 * int(contrast.has_permeability_contrast)
        ) or 1

    @property
    def scene_geometry(self) -> SceneGeometry:
        return self.geometry

    def synthesize(self, omega: float, dirs: DirectionSet) -> MsrMatrix:
        return msr_thin(self.geometry, self.contrast, omega, dirs)

    def predictor_kinds(self) -> List[str]:
        eps, mu = self.contrast.has_permittivity_contrast, self.contrast.has_permeability_contrast
        if eps and mu:
            return ['eps-mu']
        if mu:
            return ['mu']
        return ['eps']
