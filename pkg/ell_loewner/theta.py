"""Jacobi theta functions theta_a(u|tau), a = 1..4, evaluated by q-series.

Conventions (q = exp(i*pi*tau)):

    theta_1(u) = 2 sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1) pi u)
    theta_2(u) = 2 sum_{n>=0} q^{(n+1/2)^2} cos((2n+1) pi u)
    theta_3(u) = 1 + 2 sum_{n>=1} q^{n^2} cos(2 n pi u)
    theta_4(u) = 1 + 2 sum_{n>=1} (-1)^n q^{n^2} cos(2 n pi u)

Arguments are reduced by u -> u - m - n*tau before summation and the
quasi-periodicity prefactor is reapplied exactly, including for derivatives.
"""
import cmath
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import List, Tuple

import numpy as np

from .constants import (
    DEFAULT_POLE_GUARD,
    DEFAULT_Y_MIN,
    MAX_PUBLIC_DU_ORDER,
    PURELY_IMAGINARY_TOL,
    SERIES_RELATIVE_THRESHOLD,
    SERIES_TERM_CAP,
)
from .errors import DomainError, PoleError, TruncationError

THETA_INDICES = (1, 2, 3, 4)

# Signs picked up under u -> u + 1 and u -> u + tau
_PERIOD_SIGNS = {1: (-1, -1), 2: (-1, 1), 3: (1, 1), 4: (1, -1)}

# Zero of theta_a in the fundamental cell as (real offset, tau offset)
_ZERO_OFFSETS = {1: (0.0, 0.0), 2: (0.5, 0.0), 3: (0.5, 0.5), 4: (0.0, 0.5)}


@dataclass(frozen=True)
class ModularParam:
    """Modular parameter tau with Im(tau) >= y_min."""
    tau: complex
    purely_imaginary: bool = False
    y_min: float = DEFAULT_Y_MIN

    def __post_init__(self):
        tau = complex(self.tau)
        object.__setattr__(self, 'tau', tau)
        if not (math.isfinite(tau.real) and math.isfinite(tau.imag)):
            raise DomainError(f"tau must be finite, got {tau}")
        if tau.imag < self.y_min:
            raise DomainError(f"Im(tau) = {tau.imag:g} is below y_min = {self.y_min:g}")
        if self.purely_imaginary and abs(tau.real) >= PURELY_IMAGINARY_TOL:
            raise DomainError(f"tau = {tau} is flagged purely imaginary but Re(tau) = {tau.real:g}")

    @classmethod
    def imaginary(cls, y: float, y_min: float = DEFAULT_Y_MIN) -> 'ModularParam':
        """tau = i*y."""
        return cls(complex(0.0, y), purely_imaginary=True, y_min=y_min)

    @property
    def y(self) -> float:
        return self.tau.imag

    @property
    def nome(self) -> complex:
        return cmath.exp(1j * math.pi * self.tau)

    def halved(self) -> 'ModularParam':
        """tau/2 with the same flags; raises DomainError if it leaves the band."""
        return ModularParam(self.tau / 2, self.purely_imaginary, self.y_min)


@dataclass(frozen=True)
class ModularPoint:
    """Argument (u, tau) of every theta-level function."""
    u: complex
    tau: ModularParam

    def __post_init__(self):
        u = complex(self.u)
        object.__setattr__(self, 'u', u)
        if not (math.isfinite(u.real) and math.isfinite(u.imag)):
            raise DomainError(f"u must be finite, got {u}")

    def shifted(self, du: complex) -> 'ModularPoint':
        return ModularPoint(self.u + du, self.tau)


def check_index(a: int) -> int:
    if a not in THETA_INDICES:
        raise DomainError(f"theta index must be one of {THETA_INDICES}, got {a!r}")
    return a


@lru_cache(maxsize=256)
def _coefficients(a: int, tau: complex, tau_derivative: bool) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Series coefficients, frequencies and log-magnitudes for a fixed tau."""
    n = np.arange(SERIES_TERM_CAP, dtype=float)
    m = n + 0.5 if a in (1, 2) else n + 1.0
    k = 2.0 * math.pi * m
    coef = 2.0 * np.exp(1j * math.pi * tau * m * m)
    log_mag = math.log(2.0) - math.pi * tau.imag * m * m
    if a == 1:
        coef = coef * (-1.0) ** n
    elif a == 4:
        coef = -coef * (-1.0) ** n
    if tau_derivative:
        coef = coef * (1j * math.pi * m * m)
        log_mag = log_mag + np.log(math.pi * m * m)
    return coef, k, log_mag


def _term_count(a: int, u0: complex, tau: complex, order: int, tau_derivative: bool) -> int:
    """Number of terms needed: stop once the next term bound drops below
    SERIES_RELATIVE_THRESHOLD times the accumulated magnitude."""
    _, k, log_mag = _coefficients(a, tau, tau_derivative)
    log_bound = log_mag + order * np.log(k) + k * abs(u0.imag)
    bound = np.exp(np.minimum(log_bound, 700.0))
    scale = 1.0 if (a in (3, 4) and order == 0 and not tau_derivative) else 0.0
    accumulated = scale + np.concatenate(([0.0], np.cumsum(bound)[:-1]))
    below = np.nonzero(bound[1:] < SERIES_RELATIVE_THRESHOLD * accumulated[1:])[0]
    if below.size == 0:
        raise TruncationError(
            f"theta_{a} series did not converge within {SERIES_TERM_CAP} terms (tau={tau}, u={u0})"
        )
    return int(below[0]) + 1


def _series_derivatives(a: int, u0: complex, tau: complex, order: int,
                        tau_derivative: bool = False) -> List[complex]:
    """u-derivatives 0..order of the q-series at a reduced argument."""
    count = _term_count(a, u0, tau, order, tau_derivative)
    coef, k, _ = _coefficients(a, tau, tau_derivative)
    coef, k = coef[:count], k[:count]
    arg = k * u0
    sin, cos = np.sin(arg), np.cos(arg)
    if a == 1:
        cycle = (sin, cos, -sin, -cos)
    else:
        cycle = (cos, -sin, -cos, sin)
    values = []
    k_power = np.ones_like(k)
    for d in range(order + 1):
        values.append(complex(np.sum(coef * k_power * cycle[d % 4])))
        k_power = k_power * k
    if a in (3, 4) and not tau_derivative:
        values[0] += 1.0
    return values


def reduce_argument(u: complex, tau: complex) -> Tuple[complex, int, int]:
    """Return (u0, m, n) with u = u0 + m + n*tau, |Im u0| <= Im tau / 2, |Re u0| <= 1/2."""
    n = int(round(u.imag / tau.imag))
    w = u - n * tau
    m = int(round(w.real))
    return w - m, m, n


def _prefactor(a: int, u0: complex, tau: complex, m: int, n: int) -> complex:
    s_one, s_tau = _PERIOD_SIGNS[a]
    sign = (s_one ** (m % 2)) * (s_tau ** (n % 2))
    try:
        return sign * cmath.exp(-1j * math.pi * n * n * tau - 2j * math.pi * n * u0)
    except OverflowError:
        raise DomainError(f"quasi-period factor overflows: u is {n} periods tau away from the fundamental cell")


def theta_derivatives(a: int, u: complex, tau: ModularParam, order: int = 0) -> List[complex]:
    """All u-derivatives 0..order of theta_a(u|tau).

    Args:
        a: Theta index in {1, 2, 3, 4}
        u: Complex argument
        tau: Modular parameter
        order: Highest derivative order (no cap)

    Returns:
        List of length order + 1
    """
    check_index(a)
    if order < 0:
        raise DomainError(f"derivative order must be >= 0, got {order}")
    t = tau.tau
    u0, m, n = reduce_argument(complex(u), t)
    base = _series_derivatives(a, u0, t, order)
    if m == 0 and n == 0:
        return base
    factor = _prefactor(a, u0, t, m, n)
    w = -2j * math.pi * n
    values = [
        factor * sum(comb(d, j) * w ** (d - j) * base[j] for j in range(d + 1))
        for d in range(order + 1)
    ]
    if not all(cmath.isfinite(v) for v in values):
        raise DomainError(f"theta_{a} overflows at u = {complex(u):.6g}, tau = {t:.6g}")
    return values


def theta_eval(a: int, p: ModularPoint, du_order: int = 0) -> complex:
    """d^du_order/du^du_order theta_a(u|tau) at p."""
    if not 0 <= du_order <= MAX_PUBLIC_DU_ORDER:
        raise DomainError(f"du_order must be in [0, {MAX_PUBLIC_DU_ORDER}], got {du_order}")
    return theta_derivatives(a, p.u, p.tau, du_order)[du_order]


def theta_tau_derivative(a: int, p: ModularPoint) -> complex:
    """Partial tau-derivative of theta_a at fixed u, term by term."""
    check_index(a)
    t = p.tau.tau
    u0, m, n = reduce_argument(p.u, t)
    dtau = _series_derivatives(a, u0, t, 0, tau_derivative=True)[0]
    if m == 0 and n == 0:
        return dtau
    base = _series_derivatives(a, u0, t, 1)
    factor = _prefactor(a, u0, t, m, n)
    return factor * (1j * math.pi * n * n * base[0] - n * base[1] + dtau)


def zero_distance(a: int, u: complex, tau: ModularParam) -> float:
    """Distance from u to the zero lattice of theta_a."""
    check_index(a)
    t = tau.tau
    re_off, tau_off = _ZERO_OFFSETS[a]
    w, _, _ = reduce_argument(complex(u) - re_off - tau_off * t, t)
    return min(abs(w - (i + j * t)) for i in (-1, 0, 1) for j in (-1, 0, 1))


def guard(a: int, u: complex, tau: ModularParam, pole_guard: float = DEFAULT_POLE_GUARD) -> None:
    """Raise PoleError when u lies within pole_guard of a zero of theta_a."""
    distance = zero_distance(a, u, tau)
    if distance < pole_guard:
        raise PoleError(
            f"u = {complex(u):.6g} is {distance:.3g} from a zero of theta_{a} (guard {pole_guard:g})",
            argument=complex(u), distance=distance,
        )


def theta_log_derivative(a: int, p: ModularPoint, pole_guard: float = DEFAULT_POLE_GUARD) -> complex:
    """E^(a)(u) = theta_a'(u) / theta_a(u)."""
    guard(a, p.u, p.tau, pole_guard)
    value, slope = theta_derivatives(a, p.u, p.tau, 1)
    return slope / value


def theta_log_derivatives(a: int, u: complex, tau: ModularParam, order: int,
                          pole_guard: float = DEFAULT_POLE_GUARD) -> List[complex]:
    """E^(a) and its u-derivatives 0..order.

    Uses theta' = E * theta, so theta^(k+1) = sum_j C(k, j) E^(j) theta^(k-j).
    """
    guard(a, u, tau, pole_guard)
    f = theta_derivatives(a, u, tau, order + 1)
    h: List[complex] = []
    for k in range(order + 1):
        acc = f[k + 1] - sum(comb(k, j) * h[j] * f[k - j] for j in range(k))
        h.append(acc / f[0])
    return h


@lru_cache(maxsize=256)
def theta_constants(tau: ModularParam) -> Tuple[complex, complex, complex]:
    """theta_2(0), theta_3(0), theta_4(0)."""
    values = tuple(theta_derivatives(a, 0j, tau, 0)[0] for a in (2, 3, 4))
    logging.debug(f"theta constants at tau={tau.tau}: {values}")
    return values
