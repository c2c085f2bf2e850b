"""
Small electromagnetic inclusions x_m + r B_m

    K_jl = C sum_m r_m^2 |B_m| [ theta_j . A(x_m) . theta_l + (eps_m - eps0) ]
                              exp(i w (theta_j + theta_l) . x_m)
"""

from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Sequence

import numpy as np

from src.core.geometry import DirectionSet, SceneGeometry
from src.models.base import BaseScatteringModel, MsrMatrix, far_field_constant, phase_matrix
from src.utils.exceptions import InvalidArgumentError
from src.utils.logger import get_logger

logger = get_logger(__name__)

SYMMETRY_TOLERANCE = 1e-12


def disk_polarization_tensor(mu: float, area: float = np.pi) -> np.ndarray:
    """Isotropic tensor 2|B|(mu - 1)/(mu + 1) I of a disk-shaped inclusion"""
    if mu <= 0:
        raise InvalidArgumentError(f"mu must be positive, got {mu}")
    return 2.0 * area * (mu - 1.0) / (mu + 1.0) * np.eye(2)


@dataclass(frozen=True, eq=False)
class SmallInclusion:
    """One small inclusion: center, diameter scale, shape area and tensor"""
    center: np.ndarray
    radius: float
    area: float = np.pi
    tensor: Optional[np.ndarray] = None
    eps: float = 1.0

    def __post_init__(self):
        center = np.asarray(self.center, dtype=float).reshape(2)
        tensor = np.zeros((2, 2)) if self.tensor is None else np.asarray(self.tensor, dtype=float)

        if not self.radius > 0:
            raise InvalidArgumentError(f"inclusion radius must be positive, got {self.radius}")
        if not self.area > 0:
            raise InvalidArgumentError(f"inclusion area must be positive, got {self.area}")
        if not self.eps > 0:
            raise InvalidArgumentError(f"inclusion eps must be positive, got {self.eps}")
        if tensor.shape != (2, 2) or np.max(np.abs(tensor - tensor.T)) > SYMMETRY_TOLERANCE:
            raise InvalidArgumentError("polarization tensor must be a symmetric 2x2 matrix")

        object.__setattr__(self, 'center', center)
        object.__setattr__(self, 'tensor', tensor)

    @property
    def has_permittivity_contrast(self) -> bool:
        return self.eps != 1.0

    @property
    def has_permeability_contrast(self) -> bool:
        return bool(np.any(self.tensor != 0.0))


def _warn_if_crowded(incls: Sequence[SmallInclusion], omega: float):
    half_wavelength = np.pi / omega
    for first, second in combinations(incls, 2):
        distance = float(np.hypot(*(first.center - second.center)))
        if distance < half_wavelength:
            logger.warning(
                f"[SYNTH] Inclusions at {first.center} and {second.center} are {distance:.4f} apart, "
                f"closer than half a wavelength ({half_wavelength:.4f})"
            )


def msr_small(incls: Sequence[SmallInclusion], omega: float, dirs: DirectionSet) -> MsrMatrix:
    """
    Synthesize the small-inclusion MSR matrix

    Args:
        incls: Inclusions (non-empty)
        omega: Angular frequency
        dirs: Incident directions

    Returns:
        Symmetric MsrMatrix tagged 'small'
    """
    if not incls:
        raise InvalidArgumentError("at least one small inclusion is required")
    if not omega > 0:
        raise InvalidArgumentError(f"omega must be positive, got {omega}")
    _warn_if_crowded(incls, omega)

    theta = dirs.vectors
    K = np.zeros((dirs.count, dirs.count), dtype=complex)
    for incl in incls:
        phase = phase_matrix(incl.center, omega, dirs)[:, 0]
        response = theta @ incl.tensor @ theta.T + (incl.eps - 1.0)
        K += incl.radius ** 2 * incl.area * response * np.outer(phase, phase)
    K = far_field_constant(omega) * K

    radii = sorted({incl.radius for incl in incls})
    logger.info(f"[SYNTH] Small inclusion MSR: N={dirs.count}, M={len(incls)}, r={radii}")
    return MsrMatrix(K, 'small', omega, {'r': radii[0] if len(radii) == 1 else radii, 'M': len(incls)})


class SmallInclusionModel(BaseScatteringModel):
    """Well-separated small inclusions"""

    def __init__(self, inclusions: Sequence[SmallInclusion], **params):
        if not inclusions:
            raise InvalidArgumentError("at least one small inclusion is required")
        super().__init__(name="SmallInclusions", M=len(inclusions), **params)
        self.inclusions = list(inclusions)

        eps = any(incl.has_permittivity_contrast for incl in self.inclusions)
        mu = any(incl.has_permeability_contrast for incl in self.inclusions)
        self.direction_factor = (int(eps) + 2 * int(mu)) or 1

    @property
    def scene_geometry(self) -> SceneGeometry:
        centers = np.array([incl.center for incl in self.inclusions])
        return SceneGeometry.from_points(centers)

    def synthesize(self, omega: float, dirs: DirectionSet) -> MsrMatrix:
        return msr_small(self.inclusions, omega, dirs)

    def predictor_kinds(self) -> List[str]:
        eps = any(incl.has_permittivity_contrast for incl in self.inclusions)
        mu = any(incl.has_permeability_contrast for incl in self.inclusions)
        if eps and mu:
            return ['small-eps-mu']
        if mu:
            return ['small-mu']
        return ['small-eps']
