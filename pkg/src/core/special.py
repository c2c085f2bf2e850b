"""
Bessel functions J0, J1 and discrete circular averages over direction sets

For equispaced directions and N large enough,
    (1/N) sum_n exp(i w theta_n . x)           -> J0(w|x|)
    (1/N) sum_n (theta_n . xi) exp(i w theta_n . x) -> i (x/|x| . xi) J1(w|x|)
"""

from typing import Union

import numpy as np
from scipy import special

from src.core.geometry import DirectionSet
from src.utils.exceptions import InvalidArgumentError

ArrayLike = Union[float, np.ndarray]

SUPPORTED_ORDERS = (0, 1)
UNIT_TOLERANCE = 1e-12


def bessel_j(p: int, x: ArrayLike) -> ArrayLike:
    """
    Bessel function of the first kind of order 0 or 1

    Args:
        p: Order (0 or 1)
        x: Real argument(s), finite

    Returns:
        J_p(x), same shape as x
    """
    if p not in SUPPORTED_ORDERS:
        raise InvalidArgumentError(f"only Bessel orders {SUPPORTED_ORDERS} are supported, got {p}")
    values = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(values)):
        raise InvalidArgumentError("Bessel argument must be finite")
    result = special.j0(values) if p == 0 else special.j1(values)
    return float(result) if np.ndim(result) == 0 else result


def _phases(x, omega: float, dirs: DirectionSet) -> np.ndarray:
    return np.exp(1j * omega * (dirs.vectors @ np.asarray(x, dtype=float)))


def circular_moment0(x, omega: float, dirs: DirectionSet) -> complex:
    """(1/N) sum_n exp(i w theta_n . x), summed exactly"""
    return complex(np.mean(_phases(x, omega, dirs)))


def circular_moment1(x, xi, omega: float, dirs: DirectionSet) -> complex:
    """(1/N) sum_n (theta_n . xi) exp(i w theta_n . x) for a unit vector xi"""
    xi = np.asarray(xi, dtype=float)
    if abs(np.hypot(*xi) - 1.0) > UNIT_TOLERANCE:
        raise InvalidArgumentError(f"xi must be a unit vector, |xi| = {np.hypot(*xi)}")
    weights = dirs.vectors @ xi
    return complex(np.mean(weights * _phases(x, omega, dirs)))


def resolution_profile(p: int, omega: float, radius: ArrayLike) -> ArrayLike:
    """
    Single-point blow-up profile |1 - J_p(w r)^2|^-1

    Order 0 diverges at r = 0 (returned as inf); order 1 stays bounded.
    """
    jp = bessel_j(p, omega * np.asarray(radius, dtype=float))
    with np.errstate(divide='ignore'):
        return 1.0 / np.abs(1.0 - np.square(jp))
