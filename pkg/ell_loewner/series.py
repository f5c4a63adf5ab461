"""Truncated power series in w = 1/z.

A series of order N is stored as a length N+1 numpy array whose entry k is
the coefficient of w^k. Products and compositions drop everything above w^N.
"""
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .constants import MAX_SERIES_ORDER
from .errors import DomainError


def truncated_mul(a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    """a * b truncated at w^order."""
    product = np.convolve(a, b)[:order + 1]
    if product.size < order + 1:
        product = np.pad(product, (0, order + 1 - product.size))
    return product


def powers(u: np.ndarray, order: int, count: int) -> List[np.ndarray]:
    """[u, u^2, ..., u^count], each truncated at w^order."""
    result = [np.asarray(u, dtype=complex)[:order + 1]]
    for _ in range(count - 1):
        result.append(truncated_mul(result[-1], u, order))
    return result


def compose(taylor: Sequence[complex], u: np.ndarray, order: int) -> np.ndarray:
    """sum_{m>=1} taylor[m-1] * u^m truncated at w^order.

    u must have no constant term, so u^m starts at w^m and terms with
    m > order never contribute.
    """
    u = np.asarray(u, dtype=complex)
    if u[0] != 0:
        raise DomainError("composition needs a series without constant term")
    result = np.zeros(order + 1, dtype=complex)
    count = min(len(taylor), order)
    if count == 0:
        return result
    for coefficient, power in zip(taylor[:count], powers(u, order, count)):
        result += coefficient * power
    return result


@dataclass(frozen=True)
class LaurentTailSeries:
    """u(z) = c_1/z + c_2/z^2 + ... + c_N/z^N."""
    coeffs: Tuple[complex, ...]

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coeffs)
        object.__setattr__(self, 'coeffs', coeffs)
        if not coeffs:
            raise DomainError("a Laurent tail needs at least one coefficient")
        if len(coeffs) > MAX_SERIES_ORDER:
            raise DomainError(f"series order {len(coeffs)} exceeds the cap {MAX_SERIES_ORDER}")
        if not all(np.isfinite(c.real) and np.isfinite(c.imag) for c in coeffs):
            raise DomainError("series coefficients must be finite")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def padded(self) -> np.ndarray:
        """Coefficients as a length N+1 array with a zero constant term."""
        return np.concatenate(([0j], np.asarray(self.coeffs, dtype=complex)))

    def conjugate(self) -> 'LaurentTailSeries':
        return LaurentTailSeries(tuple(c.conjugate() for c in self.coeffs))

    def truncated(self, order: int) -> 'LaurentTailSeries':
        if not 1 <= order <= self.order:
            raise DomainError(f"cannot truncate a series of order {self.order} to {order}")
        return LaurentTailSeries(self.coeffs[:order])

    def scaled(self, factor: complex) -> 'LaurentTailSeries':
        return LaurentTailSeries(tuple(factor * c for c in self.coeffs))

    def evaluate(self, z: complex) -> complex:
        """u(z) by Horner in 1/z."""
        w = 1 / complex(z)
        value = 0j
        for c in reversed(self.coeffs):
            value = (value + c) * w
        return value
