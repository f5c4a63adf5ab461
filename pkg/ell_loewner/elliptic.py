"""The S-function layer.

S(u) = log(theta_1(u) / theta_4(u)), E^(a) = d/du log theta_a and
E = E^(1) + E^(4), plus residual evaluators for the identities linking
S', the partial tau-derivative S-dot and E^(2).
"""
import cmath
import logging
import math
from dataclasses import dataclass
from typing import Dict, List

from .constants import DEFAULT_POLE_GUARD, S_PRIME_FORMS
from .errors import DomainError
from .theta import (
    ModularParam,
    ModularPoint,
    guard,
    theta_constants,
    theta_derivatives,
    theta_log_derivative,
    theta_log_derivatives,
)

FOUR_PI_I = 4j * math.pi


@dataclass(frozen=True)
class SValue:
    """S, S' and S-dot at one point; s is the principal-branch logarithm."""
    s: complex
    s_prime: complex
    s_dot: complex


def normalized_residual(lhs: complex, rhs: complex, *terms: complex) -> float:
    """|lhs - rhs| / (1 + largest magnitude among lhs, rhs and terms)."""
    scale = max([abs(lhs), abs(rhs)] + [abs(t) for t in terms])
    return abs(lhs - rhs) / (1.0 + scale)


def pi2_theta4_fourth(tau: ModularParam) -> complex:
    """pi^2 * theta_4(0)^4."""
    return math.pi ** 2 * theta_constants(tau)[2] ** 4


def s_eval(p: ModularPoint, pole_guard: float = DEFAULT_POLE_GUARD) -> SValue:
    """S, S' = E^(1) - E^(4) and S-dot via the heat relation."""
    guard(1, p.u, p.tau, pole_guard)
    guard(4, p.u, p.tau, pole_guard)
    t1 = theta_derivatives(1, p.u, p.tau, 2)
    t4 = theta_derivatives(4, p.u, p.tau, 2)
    return SValue(
        s=cmath.log(t1[0] / t4[0]),
        s_prime=t1[1] / t1[0] - t4[1] / t4[0],
        s_dot=(t1[2] / t1[0] - t4[2] / t4[0]) / FOUR_PI_I,
    )


def s_prime(p: ModularPoint, form: str = "log_derivative",
            pole_guard: float = DEFAULT_POLE_GUARD) -> complex:
    """S'(u) in one of three forms.

    log_derivative is the definition E^(1) - E^(4). closed_form uses
    pi theta_4(0)^2 theta_2 theta_3 / (theta_1 theta_4); printed uses the
    theta_1 theta_2 denominator and exists so the identity suites can be
    shown to reject it.
    """
    if form == "log_derivative":
        return (theta_log_derivative(1, p, pole_guard)
                - theta_log_derivative(4, p, pole_guard))
    if form not in S_PRIME_FORMS:
        raise DomainError(f"unknown S' form {form!r}; expected one of {S_PRIME_FORMS}")
    guard(1, p.u, p.tau, pole_guard)
    th4_0 = theta_constants(p.tau)[2]
    t1, t2, t3, t4 = (theta_derivatives(a, p.u, p.tau, 0)[0] for a in (1, 2, 3, 4))
    if form == "closed_form":
        guard(4, p.u, p.tau, pole_guard)
        return math.pi * th4_0 ** 2 * t2 * t3 / (t1 * t4)
    guard(2, p.u, p.tau, pole_guard)
    return math.pi * th4_0 ** 2 * t2 * t3 / (t1 * t2)


def s_derivatives(u: complex, tau: ModularParam, count: int,
                  pole_guard: float = DEFAULT_POLE_GUARD) -> List[complex]:
    """[S', S'', ..., S^(count)]."""
    e1 = theta_log_derivatives(1, u, tau, count - 1, pole_guard)
    e4 = theta_log_derivatives(4, u, tau, count - 1, pole_guard)
    return [a - b for a, b in zip(e1, e4)]


def e_derivatives(u: complex, tau: ModularParam, count: int,
                  pole_guard: float = DEFAULT_POLE_GUARD) -> List[complex]:
    """[E, E', ..., E^(count-1)] with E = E^(1) + E^(4)."""
    e1 = theta_log_derivatives(1, u, tau, count - 1, pole_guard)
    e4 = theta_log_derivatives(4, u, tau, count - 1, pole_guard)
    return [a + b for a, b in zip(e1, e4)]


def e_combined(p: ModularPoint, pole_guard: float = DEFAULT_POLE_GUARD) -> complex:
    """E(u) = E^(1)(u|tau) + E^(4)(u|tau)."""
    return theta_log_derivative(1, p, pole_guard) + theta_log_derivative(4, p, pole_guard)


def e_two(p: ModularPoint, pole_guard: float = DEFAULT_POLE_GUARD) -> complex:
    """E^(2)(u)."""
    return theta_log_derivative(2, p, pole_guard)


def identity_residual_ss2(p: ModularPoint, s_prime_form: str = "log_derivative",
                          pole_guard: float = DEFAULT_POLE_GUARD) -> float:
    """4 pi i S-dot = 2 S' E^(2) + pi^2 theta_4(0)^4."""
    lhs = FOUR_PI_I * s_eval(p, pole_guard).s_dot
    product = 2.0 * s_prime(p, s_prime_form, pole_guard) * e_two(p, pole_guard)
    constant = pi2_theta4_fourth(p.tau)
    return normalized_residual(lhs, product + constant, product, constant)


def identity_residual_ss3(x1: complex, x2: complex, tau: ModularParam,
                          s_prime_form: str = "log_derivative",
                          pole_guard: float = DEFAULT_POLE_GUARD) -> float:
    """S'(x1-x2)(-E(x1) + E(x2) + 2E^(2)(x1-x2)) + pi^2 theta_4(0)^4 = S'(x1) S'(x2)."""
    diff = ModularPoint(x1 - x2, tau)
    p1, p2 = ModularPoint(x1, tau), ModularPoint(x2, tau)
    bracket = (-e_combined(p1, pole_guard) + e_combined(p2, pole_guard)
               + 2.0 * e_two(diff, pole_guard))
    product = s_prime(diff, s_prime_form, pole_guard) * bracket
    constant = pi2_theta4_fourth(tau)
    rhs = s_prime(p1, s_prime_form, pole_guard) * s_prime(p2, s_prime_form, pole_guard)
    return normalized_residual(product + constant, rhs, product, constant)


def total_s_derivative(p: ModularPoint, dtau_u: complex, s_prime_form: str = "log_derivative",
                       pole_guard: float = DEFAULT_POLE_GUARD) -> complex:
    """dS(u)/dtau along a path with du/dtau = dtau_u, using the S-dot identity."""
    sp = s_prime(p, s_prime_form, pole_guard)
    return (sp * (FOUR_PI_I * dtau_u + 2.0 * e_two(p, pole_guard))
            + pi2_theta4_fourth(p.tau)) / FOUR_PI_I


def landen_residual(p: ModularPoint, pole_guard: float = DEFAULT_POLE_GUARD) -> float:
    """E(u|tau) against E^(1)(u|tau/2), both from independent q-series."""
    half = ModularPoint(p.u, p.tau.halved())
    lhs = e_combined(p, pole_guard)
    rhs = theta_log_derivative(1, half, pole_guard)
    return normalized_residual(lhs, rhs)


def s_prime_form_residuals(p: ModularPoint, pole_guard: float = DEFAULT_POLE_GUARD) -> Dict[str, float]:
    """How well each closed form matches E^(1) - E^(4) at p."""
    reference = s_prime(p, "log_derivative", pole_guard)
    residuals = {}
    for form in ("closed_form", "printed"):
        value = s_prime(p, form, pole_guard)
        residuals[form] = normalized_residual(value, reference)
    logging.debug(f"S' closed forms at u={p.u:.6g}, tau={p.tau.tau}: {residuals}")
    return residuals
