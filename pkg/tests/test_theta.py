"""Tests for the theta kernel."""
import cmath
import math
import unittest

import mpmath
from hypothesis import given, settings, strategies as st

from ell_loewner.errors import DomainError, PoleError
from ell_loewner.theta import (
    ModularParam,
    ModularPoint,
    guard,
    reduce_argument,
    theta_constants,
    theta_derivatives,
    theta_eval,
    theta_log_derivative,
    theta_log_derivatives,
    theta_tau_derivative,
    zero_distance,
)

mpmath.mp.dps = 30

taus = st.builds(complex, st.floats(-0.5, 0.5), st.floats(0.3, 3.0))
fractions = st.floats(-0.5, 0.5)
indices = st.sampled_from([1, 2, 3, 4])


def oracle(a: int, u: complex, tau: complex, order: int = 0) -> complex:
    """mpmath.jtheta in the argument z = pi u, rescaled to d/du."""
    q = mpmath.exp(1j * mpmath.pi * mpmath.mpc(tau))
    value = mpmath.jtheta(a, mpmath.pi * mpmath.mpc(u), q, derivative=order)
    return complex(value * mpmath.pi ** order)


def close(value: complex, reference: complex, scale: float = 1.0) -> float:
    return abs(value - reference) / max(scale, abs(reference), 1.0)


class TestThetaValues(unittest.TestCase):
    """Test cases for q-series evaluation."""

    def test_theta3_at_i(self):
        value = theta_eval(3, ModularPoint(0j, ModularParam(1j)))
        self.assertAlmostEqual(value.real, 1.0864348112133080, places=14)
        self.assertEqual(value.imag, 0.0)

    def test_theta1_vanishes_at_origin(self):
        self.assertEqual(theta_eval(1, ModularPoint(0j, ModularParam(1j))), 0j)

    @settings(max_examples=60, deadline=None)
    @given(indices, fractions, fractions, taus)
    def test_matches_jtheta_in_cell(self, a, x, s, tau):
        u = complex(x, s * tau.imag)
        value = theta_eval(a, ModularPoint(u, ModularParam(tau)))
        self.assertLess(close(value, oracle(a, u, tau)), 1e-12)

    @settings(max_examples=40, deadline=None)
    @given(indices, fractions, fractions, taus, st.integers(-2, 2), st.integers(-1, 1))
    def test_matches_jtheta_after_reduction(self, a, x, s, tau, m, n):
        u = complex(x, s * tau.imag) + m + n * tau
        value = theta_eval(a, ModularPoint(u, ModularParam(tau)))
        reference = oracle(a, u, tau)
        self.assertLess(close(value, reference), 1e-11)

    @settings(max_examples=30, deadline=None)
    @given(indices, fractions, fractions, taus, st.integers(1, 4))
    def test_derivatives_match_jtheta(self, a, x, s, tau, order):
        u = complex(x, s * tau.imag)
        values = theta_derivatives(a, u, ModularParam(tau), order)
        self.assertEqual(len(values), order + 1)
        reference = oracle(a, u, tau, order)
        self.assertLess(close(values[order], reference, (2 * math.pi) ** order), 1e-11)

    def test_reduce_argument(self):
        tau = 0.2 + 1.3j
        u = 0.1 + 0.2j + 3 - 2 * tau
        u0, m, n = reduce_argument(u, tau)
        self.assertEqual((m, n), (3, -2))
        self.assertAlmostEqual(abs(u0 - (0.1 + 0.2j)), 0.0, places=13)
        self.assertLessEqual(abs(u0.imag), tau.imag / 2)


class TestThetaIdentities(unittest.TestCase):
    """Test cases for classical identities."""

    @settings(max_examples=30, deadline=None)
    @given(taus)
    def test_theta1_prime(self, tau):
        p = ModularParam(tau)
        th2, th3, th4 = theta_constants(p)
        slope = theta_derivatives(1, 0j, p, 1)[1]
        self.assertLess(close(slope, math.pi * th2 * th3 * th4), 1e-12)

    @settings(max_examples=30, deadline=None)
    @given(taus)
    def test_jacobi_quartic(self, tau):
        th2, th3, th4 = theta_constants(ModularParam(tau))
        self.assertLess(close(th3 ** 4, th2 ** 4 + th4 ** 4), 1e-12)

    @settings(max_examples=30, deadline=None)
    @given(indices, fractions, fractions, taus)
    def test_heat_equation(self, a, x, s, tau):
        p = ModularPoint(complex(x, s * tau.imag), ModularParam(tau))
        second = theta_eval(a, p, 2)
        dtau = theta_tau_derivative(a, p)
        self.assertLess(close(4j * math.pi * dtau, second), 1e-11)

    def test_heat_equation_outside_cell(self):
        tau = ModularParam(0.1 + 0.9j)
        p = ModularPoint(0.3 + 0.2j + 1 + tau.tau, tau)
        for a in (1, 2, 3, 4):
            with self.subTest(a=a):
                self.assertLess(close(4j * math.pi * theta_tau_derivative(a, p), theta_eval(a, p, 2)), 1e-11)

    @settings(max_examples=30, deadline=None)
    @given(indices, fractions, fractions, taus)
    def test_parity(self, a, x, s, tau):
        p = ModularParam(tau)
        u = complex(x, s * tau.imag)
        sign = -1 if a == 1 else 1
        self.assertLess(close(theta_eval(a, ModularPoint(-u, p)), sign * theta_eval(a, ModularPoint(u, p))), 1e-13)

    def test_quasi_periodicity(self):
        tau = ModularParam(0.15 + 0.8j)
        t = tau.tau
        u = 0.23 - 0.11j
        signs = {1: (-1, -1), 2: (-1, 1), 3: (1, 1), 4: (1, -1)}
        for a, (s_one, s_tau) in signs.items():
            with self.subTest(a=a):
                value = theta_eval(a, ModularPoint(u, tau))
                shifted = theta_eval(a, ModularPoint(u + 1, tau))
                self.assertLess(close(shifted, s_one * value), 1e-13)
                factor = s_tau * cmath.exp(-1j * math.pi * t - 2j * math.pi * u)
                self.assertLess(close(theta_eval(a, ModularPoint(u + t, tau)), factor * value), 1e-12)

    def test_log_derivatives(self):
        tau = ModularParam(1.1j)
        u = 0.21 + 0.13j
        for a in (1, 2, 3, 4):
            with self.subTest(a=a):
                f = theta_derivatives(a, u, tau, 3)
                h = theta_log_derivatives(a, u, tau, 2)
                self.assertLess(close(h[0], f[1] / f[0]), 1e-13)
                self.assertLess(close(h[1], (f[2] * f[0] - f[1] ** 2) / f[0] ** 2), 1e-12)
                expected = (f[3] / f[0] - 3 * f[2] * f[1] / f[0] ** 2 + 2 * (f[1] / f[0]) ** 3)
                self.assertLess(close(h[2], expected), 1e-11)
                self.assertLess(close(theta_log_derivative(a, ModularPoint(u, tau)), h[0]), 1e-14)


class TestDomain(unittest.TestCase):
    """Test cases for argument checks and the pole guard."""

    def test_modular_param_band(self):
        with self.assertRaises(DomainError):
            ModularParam(0.01j)
        with self.assertRaises(DomainError):
            ModularParam(-1j)
        with self.assertRaises(DomainError):
            ModularParam(complex(float('nan'), 1.0))
        with self.assertRaises(DomainError):
            ModularParam(0.1 + 1j, purely_imaginary=True)
        self.assertEqual(ModularParam.imaginary(2.0).tau, 2j)
        self.assertTrue(ModularParam.imaginary(2.0).purely_imaginary)

    def test_halved(self):
        self.assertEqual(ModularParam(1j).halved().tau, 0.5j)
        with self.assertRaises(DomainError):
            ModularParam(0.06j).halved()

    def test_nome(self):
        self.assertAlmostEqual(ModularParam(1j).nome.real, math.exp(-math.pi), places=15)

    def test_bad_index_and_order(self):
        p = ModularPoint(0.1, ModularParam(1j))
        with self.assertRaises(DomainError):
            theta_eval(5, p)
        with self.assertRaises(DomainError):
            theta_eval(1, p, 5)
        with self.assertRaises(DomainError):
            theta_derivatives(1, 0.1, ModularParam(1j), -1)
        with self.assertRaises(DomainError):
            ModularPoint(complex(math.inf, 0), ModularParam(1j))

    def test_overflow_far_from_cell(self):
        tau = ModularParam(1j)
        for a in (1, 2, 3, 4):
            with self.subTest(a=a):
                with self.assertRaises(DomainError):
                    theta_derivatives(a, 1000j, tau, 1)
        with self.assertRaises(DomainError):
            theta_tau_derivative(3, ModularPoint(-1000j, tau))

    def test_zero_distance(self):
        tau = ModularParam(0.2 + 1.0j)
        self.assertAlmostEqual(zero_distance(1, 2 + tau.tau, tau), 0.0, places=12)
        self.assertAlmostEqual(zero_distance(2, 0.5, tau), 0.0, places=12)
        self.assertAlmostEqual(zero_distance(3, 0.5 + 0.5 * tau.tau, tau), 0.0, places=12)
        self.assertAlmostEqual(zero_distance(4, 0.5 * tau.tau - 1, tau), 0.0, places=12)
        self.assertAlmostEqual(zero_distance(1, 0.01j, tau), 0.01, places=12)

    def test_guard(self):
        tau = ModularParam(1j)
        with self.assertRaises(PoleError) as cm:
            guard(1, 1 + 1e-5, tau)
        self.assertLess(cm.exception.distance, 1e-3)
        guard(1, 0.1, tau)
        with self.assertRaises(PoleError):
            theta_log_derivative(4, ModularPoint(0.5j + 1e-4, tau))


if __name__ == '__main__':
    unittest.main()
