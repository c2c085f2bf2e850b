"""
Singular value decomposition of MSR matrices and noise-subspace projections
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from src.models.base import MsrMatrix
from src.utils.exceptions import InvalidArgumentError, NumericalError
from src.utils.logger import get_logger

logger = get_logger(__name__)

DEFAULT_TAU = 0.01


@dataclass(frozen=True, eq=False)
class SubspaceDecomposition:
    """K = U diag(sigma) V^*, with the leading signal_dim columns of U as signal space"""
    singular_values: np.ndarray
    U: np.ndarray
    V: np.ndarray
    signal_dim: int

    def __post_init__(self):
        n = self.U.shape[0]
        if not 0 <= self.signal_dim <= n:
            raise InvalidArgumentError(f"signal_dim must lie in [0, {n}], got {self.signal_dim}")
        for name in ('singular_values', 'U', 'V'):
            getattr(self, name).setflags(write=False)

    @property
    def size(self) -> int:
        return self.U.shape[0]

    @property
    def signal_space(self) -> np.ndarray:
        return self.U[:, :self.signal_dim]

    @property
    def noise_dim(self) -> int:
        return self.size - self.signal_dim

    def with_signal_dim(self, signal_dim: int) -> 'SubspaceDecomposition':
        return SubspaceDecomposition(self.singular_values, self.U, self.V, int(signal_dim))

    def reconstruct(self) -> np.ndarray:
        return (self.U * self.singular_values) @ self.V.conj().T


def _phase_fix(U: np.ndarray, V: np.ndarray):
    """Make the largest-magnitude entry of every U_m real positive (V follows)"""
    rows = np.argmax(np.abs(U), axis=0)
    pivots = U[rows, np.arange(U.shape[1])]
    magnitudes = np.abs(pivots)
    phases = np.where(magnitudes > 0, pivots / np.where(magnitudes > 0, magnitudes, 1.0), 1.0)
    return U * phases.conj(), V * phases.conj()


def estimate_signal_dim(sigma: Sequence[float], tau: float = DEFAULT_TAU) -> int:
    """
    Largest m with sigma_m >= tau * sigma_1

    Args:
        sigma: Singular values in descending order
        tau: Relative threshold in (0, 1)

    Returns:
        Estimated signal-space dimension (0 for an all-zero spectrum)
    """
    if not 0 < tau < 1:
        raise InvalidArgumentError(f"threshold tau must lie in (0, 1), got {tau}")
    values = np.asarray(sigma, dtype=float)
    if values.size == 0:
        return 0
    if np.any(np.diff(values) > 0):
        raise InvalidArgumentError("singular values must be sorted in descending order")
    if values[0] <= 0:
        return 0
    return int(np.count_nonzero(values >= tau * values[0]))


def svd(K: Union[MsrMatrix, np.ndarray], signal_dim: Optional[int] = None,
        tau: float = DEFAULT_TAU) -> SubspaceDecomposition:
    """
    Full SVD of the MSR matrix with a deterministic phase convention

    Args:
        K: MSR matrix (or raw square array)
        signal_dim: Fixed signal dimension; estimated with tau when omitted
        tau: Threshold for estimate_signal_dim

    Returns:
        SubspaceDecomposition
    """
    matrix = K.K if isinstance(K, MsrMatrix) else np.asarray(K, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidArgumentError(f"expected a square matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise InvalidArgumentError("MSR matrix has non-finite entries")

    try:
        U, sigma, Vh = np.linalg.svd(matrix, full_matrices=True)
    except np.linalg.LinAlgError as e:
        raise NumericalError(f"SVD did not converge: {e}") from e

    U, V = _phase_fix(U, Vh.conj().T)

    if signal_dim is None:
        signal_dim = estimate_signal_dim(sigma, tau)
    elif not 0 <= signal_dim <= matrix.shape[0]:
        raise InvalidArgumentError(f"signal_dim must lie in [0, {matrix.shape[0]}], got {signal_dim}")

    logger.info(
        f"[SVD  ] N={matrix.shape[0]}, sigma_1={sigma[0]:.4e}, signal_dim={signal_dim}"
    )
    return SubspaceDecomposition(sigma, U, V, int(signal_dim))


def noise_projection_norms(dec: SubspaceDecomposition, F: np.ndarray) -> np.ndarray:
    """
    |P_noise f| for every column f of F, computed in factored form

    The residual f - U_s (U_s^* f) is formed explicitly; the N x N projector
    is never materialized.
    """
    F = np.asarray(F, dtype=complex)
    if F.shape[0] != dec.size:
        raise InvalidArgumentError(f"expected vectors of length {dec.size}, got {F.shape[0]}")
    signal = dec.signal_space
    if signal.shape[1] == 0:
        return np.linalg.norm(F, axis=0)
    residual = F - signal @ (signal.conj().T @ F)
    return np.linalg.norm(residual, axis=0)


def noise_projection_norm(dec: SubspaceDecomposition, f: np.ndarray) -> float:
    """
    |(I - sum_{m <= signal_dim} U_m U_m^*) f|

    Args:
        dec: Decomposition with its signal dimension
        f: Complex vector of length N

    Returns:
        Non-negative norm
    """
    f = np.asarray(f, dtype=complex)
    if f.ndim != 1 or f.shape[0] != dec.size:
        raise InvalidArgumentError(f"expected a vector of length {dec.size}, got shape {f.shape}")
    return float(noise_projection_norms(dec, f[:, None])[0])


def signal_projection_energy(dec: SubspaceDecomposition, F: np.ndarray) -> np.ndarray:
    """sum_{m <= signal_dim} |U_m^* f|^2 for every column f of F"""
    F = np.asarray(F, dtype=complex)
    if F.shape[0] != dec.size:
        raise InvalidArgumentError(f"expected vectors of length {dec.size}, got {F.shape[0]}")
    coefficients = dec.signal_space.conj().T @ F
    return np.sum(np.abs(coefficients) ** 2, axis=0)
