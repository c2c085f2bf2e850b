"""
Base scattering model and the MSR matrix container shared by all models
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np

from src.core.geometry import DirectionSet, SceneGeometry
from src.utils.exceptions import InvalidArgumentError
from src.utils.logger import get_logger

logger = get_logger(__name__)

MODEL_KINDS = ('thin', 'small', 'crack-soft', 'crack-hard')


def far_field_constant(omega: float) -> complex:
    """Prefactor w^2 (1 + i) / (4 sqrt(w pi)) of the far-field expansions"""
    return omega ** 2 * (1 + 1j) / (4.0 * np.sqrt(omega * np.pi))


def phase_matrix(points: np.ndarray, omega: float, dirs: DirectionSet) -> np.ndarray:
    """N x M matrix of exp(i w theta_n . x_m)"""
    return np.exp(1j * omega * (dirs.vectors @ np.asarray(points, dtype=float).reshape(-1, 2).T))


@dataclass(frozen=True, eq=False)
class MsrMatrix:
    """Multistatic response matrix with its provenance"""
    K: np.ndarray
    model: str
    omega: float
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        K = np.array(self.K, dtype=complex)
        if K.ndim != 2 or K.shape[0] != K.shape[1]:
            raise InvalidArgumentError(f"MSR matrix must be square, got shape {K.shape}")
        if self.model not in MODEL_KINDS:
            raise InvalidArgumentError(f"unknown model tag '{self.model}'")
        if not self.omega > 0:
            raise InvalidArgumentError(f"omega must be positive, got {self.omega}")
        K.setflags(write=False)
        object.__setattr__(self, 'K', K)

    @property
    def size(self) -> int:
        return self.K.shape[0]

    def symmetry_defect(self) -> float:
        """||K - K^T|| / ||K|| (unconjugated transpose)"""
        norm = np.linalg.norm(self.K)
        return float(np.linalg.norm(self.K - self.K.T) / norm) if norm > 0 else 0.0

    def with_matrix(self, K: np.ndarray, **metadata) -> 'MsrMatrix':
        return MsrMatrix(K, self.model, self.omega, {**self.metadata, **metadata})


def add_noise(msr: MsrMatrix, level: float, seed: int) -> MsrMatrix:
    """
    Add symmetric complex Gaussian noise scaled by level * ||K||_F / N

    Args:
        msr: Clean MSR matrix
        level: Relative noise level (>= 0)
        seed: Seed for the random generator

    Returns:
        Noisy MSR matrix, symmetrized as (X + X^T) / 2
    """
    if not np.isfinite(level) or level < 0:
        raise InvalidArgumentError(f"noise level must be non-negative, got {level}")
    if level == 0:
        return msr

    n = msr.size
    rng = np.random.default_rng(seed)
    gaussian = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    scale = level * np.linalg.norm(msr.K) / n
    noisy = msr.K + scale * gaussian

    logger.info(f"[SYNTH] Added noise level={level} seed={seed} to {n}x{n} MSR matrix")
    return msr.with_matrix(0.5 * (noisy + noisy.T), noise_level=level, seed=seed)


class BaseScatteringModel(ABC):
    """Abstract base class for all MSR data models"""

    # Predictors assume N > factor * M
    direction_factor: int = 1

    def __init__(self, name: str, **params):
        """
        Initialize model

        Args:
            name: Model name
            **params: Model parameters
        """
        self.name = name
        self.params = params
        logger.info(f"[SYNTH] Initialized model: {self.name} with params: {params}")

    @abstractmethod
    def synthesize(self, omega: float, dirs: DirectionSet) -> MsrMatrix:
        """
        Build the MSR matrix for the given frequency and directions

        Args:
            omega: Angular frequency 2 pi / lambda
            dirs: Incident (and observation) directions

        Returns:
            MsrMatrix
        """
        pass

    @property
    @abstractmethod
    def scene_geometry(self) -> SceneGeometry:
        """Points (and frames) the imaging predictors are evaluated against"""
        pass

    @abstractmethod
    def predictor_kinds(self) -> List[str]:
        """Closed-form predictor kinds that describe this model's MUSIC map"""
        pass

    def check_hypotheses(self, n_directions: int) -> bool:
        """Warn when N <= factor * M; the predictors assume N is large"""
        needed = self.direction_factor * self.scene_geometry.count
        if n_directions <= needed:
            logger.warning(
                f"[SYNTH] {self.name}: N={n_directions} does not exceed {needed} "
                f"({self.direction_factor}M); closed-form predictors may not apply"
            )
            return False
        return True

    def get_parameters(self) -> Dict[str, Any]:
        return self.params.copy()

    def __str__(self):
        return f"Model(name={self.name}, params={self.params})"

    def __repr__(self):
        return self.__str__()
