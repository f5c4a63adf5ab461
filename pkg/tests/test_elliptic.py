"""Tests for the S-function layer."""
import cmath
import unittest

from hypothesis import assume, given, settings, strategies as st

from ell_loewner.elliptic import (
    e_combined,
    e_derivatives,
    identity_residual_ss2,
    identity_residual_ss3,
    landen_residual,
    normalized_residual,
    s_derivatives,
    s_eval,
    s_prime,
    s_prime_form_residuals,
    total_s_derivative,
)
from ell_loewner.errors import DomainError, PoleError
from ell_loewner.theta import ModularParam, ModularPoint, theta_derivatives

GUARD = 2e-2

taus = st.builds(complex, st.floats(-0.5, 0.5), st.floats(0.3, 3.0))
fractions = st.floats(-0.5, 0.5)


def point(x: float, s: float, tau: complex) -> ModularPoint:
    return ModularPoint(complex(x, s * tau.imag), ModularParam(tau))


def log_ratio(u: complex, tau: complex) -> complex:
    p = ModularParam(tau)
    return cmath.log(theta_derivatives(1, u, p)[0] / theta_derivatives(4, u, p)[0])


class TestSPrime(unittest.TestCase):
    """Test cases for S' and its forms."""

    @settings(max_examples=50, deadline=None)
    @given(fractions, fractions, taus)
    def test_closed_form_matches_definition(self, x, s, tau):
        p = point(x, s, tau)
        try:
            residuals = s_prime_form_residuals(p, GUARD)
        except PoleError:
            assume(False)
        self.assertLess(residuals['closed_form'], 1e-12)

    def test_printed_form_disagrees(self):
        p = ModularPoint(0.2 + 0.1j, ModularParam(1j))
        self.assertGreater(s_prime_form_residuals(p)['printed'], 1e-3)

    def test_unknown_form(self):
        with self.assertRaises(DomainError):
            s_prime(ModularPoint(0.2, ModularParam(1j)), "guess")

    def test_matches_finite_difference(self):
        tau = 0.1 + 0.9j
        u = 0.23 + 0.07j
        h = 1e-5
        fd = (log_ratio(u + h, tau) - log_ratio(u - h, tau)) / (2 * h)
        value = s_eval(ModularPoint(u, ModularParam(tau))).s_prime
        self.assertLess(abs(value - fd) / abs(value), 1e-8)

    def test_s_dot_matches_finite_difference(self):
        tau = 0.1 + 0.9j
        u = 0.23 + 0.07j
        h = 1e-5
        fd = (log_ratio(u, tau + h) - log_ratio(u, tau - h)) / (2 * h)
        value = s_eval(ModularPoint(u, ModularParam(tau))).s_dot
        self.assertLess(abs(value - fd) / max(abs(value), 1.0), 1e-8)

    def test_s_is_principal_log(self):
        p = ModularPoint(0.3 + 0.05j, ModularParam(1.2j))
        value = s_eval(p)
        self.assertAlmostEqual(abs(cmath.exp(value.s) - theta_derivatives(1, p.u, p.tau)[0]
                                   / theta_derivatives(4, p.u, p.tau)[0]), 0.0, places=13)
        self.assertLessEqual(abs(value.s.imag), cmath.pi)

    def test_pole_guard(self):
        with self.assertRaises(PoleError):
            s_eval(ModularPoint(1e-5, ModularParam(1j)))
        with self.assertRaises(PoleError):
            s_prime(ModularPoint(0.5j, ModularParam(1j)))


class TestDerivativeTowers(unittest.TestCase):
    """Test cases for the S and E derivative lists."""

    def test_lengths_and_first_entries(self):
        tau = ModularParam(1.3j)
        u = 0.17 - 0.2j
        s = s_derivatives(u, tau, 4)
        e = e_derivatives(u, tau, 4)
        self.assertEqual(len(s), 4)
        self.assertEqual(len(e), 4)
        self.assertLess(abs(s[0] - s_prime(ModularPoint(u, tau))), 1e-13)
        self.assertLess(abs(e[0] - e_combined(ModularPoint(u, tau))), 1e-13)

    def test_towers_match_finite_differences(self):
        tau = ModularParam(0.05 + 1.1j)
        u = 0.31 + 0.12j
        h = 1e-5
        s = s_derivatives(u, tau, 3)
        e = e_derivatives(u, tau, 3)
        for k in range(2):
            s_fd = (s_derivatives(u + h, tau, 3)[k] - s_derivatives(u - h, tau, 3)[k]) / (2 * h)
            e_fd = (e_derivatives(u + h, tau, 3)[k] - e_derivatives(u - h, tau, 3)[k]) / (2 * h)
            self.assertLess(abs(s[k + 1] - s_fd) / max(abs(s[k + 1]), 1.0), 1e-7)
            self.assertLess(abs(e[k + 1] - e_fd) / max(abs(e[k + 1]), 1.0), 1e-7)


class TestIdentities(unittest.TestCase):
    """Test cases for the exact identities and their residuals."""

    @settings(max_examples=50, deadline=None)
    @given(fractions, fractions, taus)
    def test_s_dot_identity(self, x, s, tau):
        try:
            residual = identity_residual_ss2(point(x, s, tau), pole_guard=GUARD)
        except PoleError:
            assume(False)
        self.assertLess(residual, 1e-10)

    @settings(max_examples=50, deadline=None)
    @given(fractions, fractions, fractions, fractions, taus)
    def test_addition_identity(self, x1, s1, x2, s2, tau):
        p = ModularParam(tau)
        try:
            residual = identity_residual_ss3(complex(x1, s1 * tau.imag), complex(x2, s2 * tau.imag), p,
                                             pole_guard=GUARD)
        except PoleError:
            assume(False)
        self.assertLess(residual, 1e-10)

    def test_printed_form_breaks_identities(self):
        tau = ModularParam(0.9j)
        self.assertGreater(identity_residual_ss2(ModularPoint(0.21 + 0.1j, tau), "printed"), 1e-6)
        self.assertGreater(identity_residual_ss3(0.21 + 0.1j, -0.17 + 0.05j, tau, "printed"), 1e-6)

    def test_closed_form_keeps_identities(self):
        tau = ModularParam(0.9j)
        self.assertLess(identity_residual_ss2(ModularPoint(0.21 + 0.1j, tau), "closed_form"), 1e-10)
        self.assertLess(identity_residual_ss3(0.21 + 0.1j, -0.17 + 0.05j, tau, "closed_form"), 1e-10)

    def test_total_derivative_along_path(self):
        tau0 = 0.05 + 1.0j
        u0 = 0.27 + 0.11j
        c = 0.3 - 0.2j
        h = 1e-5
        fd = (log_ratio(u0 + c * h, tau0 + h) - log_ratio(u0 - c * h, tau0 - h)) / (2 * h)
        value = total_s_derivative(ModularPoint(u0, ModularParam(tau0)), c)
        self.assertLess(abs(value - fd) / max(abs(value), 1.0), 1e-8)

    @settings(max_examples=40, deadline=None)
    @given(fractions, fractions, taus)
    def test_landen(self, x, s, tau):
        try:
            residual = landen_residual(point(x, s, tau), GUARD)
        except PoleError:
            assume(False)
        self.assertLess(residual, 1e-11)

    def test_normalized_residual(self):
        self.assertEqual(normalized_residual(1.0, 1.0), 0.0)
        self.assertEqual(normalized_residual(3.0, 1.0), 0.5)
        self.assertEqual(normalized_residual(1.0, 0.0, 9.0), 0.1)


if __name__ == '__main__':
    unittest.main()
