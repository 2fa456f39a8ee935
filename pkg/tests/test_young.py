import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from src.dyadic.cube import Cube
from src.errors import ConfigError, ValidationError
from src.signal.exponents import ExponentConfig
from src.signal.grid_function import GridFunction
from src.young.bp_condition import IN_BP, NOT_IN_BP, bp_check, numeric_certificate
from src.young.bumps import parse_young, tau, tau_functions, thm_b_bumps, thm_d_bumps, thm_e_bumps
from src.young.orlicz import (
    holder_pair_check,
    monotone_comparison,
    orlicz_norm,
    orlicz_norm_prime,
)
from src.young.young_function import YoungFunction

FAMILY = [
    YoungFunction.power(2.0),
    YoungFunction.power(3.0),
    YoungFunction.logbump(2.0, 1.0),
    YoungFunction.llogl(1.0),
    YoungFunction.expl(),
    YoungFunction.explpow(0.5),
    YoungFunction.reverselogbump(3.0, 2.0),
]
UNIT = Cube((0.0,), 1.0)


def _random_function(seed, level=3):
    rng = np.random.default_rng(seed)
    return GridFunction(rng.random(2 ** (1 + 1 + level)) * 3.0, 1, 1, level)


class TestYoungFunctions(unittest.TestCase):
    def test_family_members_are_valid(self):
        for phi in FAMILY + [YoungFunction.explpow(2.0)]:
            self.assertTrue(phi.is_valid(), str(phi))

    def test_inverse(self):
        samples = np.geomspace(1e-6, 1e6, 25)
        for phi in FAMILY:
            np.testing.assert_allclose(phi(phi.inverse(samples)), samples, rtol=1e-10, err_msg=str(phi))

    def test_not_superlinear(self):
        with self.assertRaises(ValidationError):
            YoungFunction.power(1.0)
        with self.assertRaises(ValidationError):
            YoungFunction.reverselogbump(1.0, 0.5)

    def test_power_associate_closed_form(self):
        bar = YoungFunction.power(2.0).associate()
        self.assertAlmostEqual(bar(2.0), 1.0, places=12)
        p = 3.0
        q = p / (p - 1.0)
        bar = YoungFunction.power(p).associate()
        for s in (0.5, 1.0, 5.0):
            self.assertAlmostEqual(bar(s), s ** q / (q * p ** (q / p)), places=12)

    def test_logbump_associate_matches_grid_search(self):
        phi = YoungFunction.logbump(2.0, 1.0)
        bar = phi.associate()
        t = np.linspace(0.0, 20.0, 400001)
        for s in (0.5, 1.0, 5.0):
            self.assertAlmostEqual(bar(s), float(np.max(s * t - phi(t))), places=6)

    def test_bracket_law(self):
        samples = np.geomspace(1e-6, 1e6, 13)
        for phi in FAMILY:
            bar = phi.associate()
            for t in samples:
                product = phi.inverse(t) * bar.inverse(t)
                self.assertGreaterEqual(product, t * (1 - 1e-8), f"{phi} at {t}")
                self.assertLessEqual(product, 2 * t * (1 + 1e-8), f"{phi} at {t}")

    def test_associate_growth_signature(self):
        self.assertEqual(YoungFunction.power(3.0).associate().growth, (1.5, 0.0))
        r, s = YoungFunction.logbump(2.0, 1.0).associate().growth
        self.assertEqual((r, s), (2.0, -1.0))
        self.assertIsNone(YoungFunction.llogl(2.0).associate().growth)
        self.assertTrue(YoungFunction.llogl(2.0).associate().exponential_growth)


class TestOrliczNorms(unittest.TestCase):
    def test_constant(self):
        f = GridFunction.constant(2.0, 1, 1, 4)
        self.assertAlmostEqual(orlicz_norm(f, UNIT, YoungFunction.power(2.0)), 2.0, places=10)
        phi = YoungFunction.logbump(2.0, 1.0)
        self.assertAlmostEqual(orlicz_norm(f, UNIT, phi), 2.0 / phi.inverse(1.0), places=10)

    def test_indicator_power(self):
        chi = GridFunction.indicator(Cube((0.0,), 0.25), 1, 1, 4)
        self.assertAlmostEqual(orlicz_norm(chi, UNIT, YoungFunction.power(2.0)), 0.5, places=10)

    def test_indicator_llogl_against_dense_scan(self):
        chi = GridFunction.indicator(Cube((0.0,), 0.5), 1, 1, 4)
        lam = np.linspace(0.05, 5.0, 495001)
        profile = 0.5 * (1.0 / lam) * np.log(np.e + 1.0 / lam)
        scanned = lam[np.argmax(profile <= 1.0)]
        self.assertAlmostEqual(orlicz_norm(chi, UNIT, YoungFunction.llogl(1.0)), scanned, places=4)

    def test_zero_function(self):
        zero = GridFunction.zeros(1, 1, 3)
        self.assertEqual(orlicz_norm(zero, UNIT, YoungFunction.power(2.0)), 0.0)
        self.assertEqual(orlicz_norm_prime(zero, UNIT, YoungFunction.power(2.0)), 0.0)

    def test_zero_volume_cube(self):
        with self.assertRaises(ValueError):
            orlicz_norm(GridFunction.zeros(2, 1, 2), Cube((0.0, 0.0), 1e-200), YoungFunction.expl())

    def test_kr_functional_of_constant(self):
        f = GridFunction.constant(1.5, 1, 1, 4)
        self.assertAlmostEqual(orlicz_norm_prime(f, UNIT, YoungFunction.power(2.0)), 3.0, places=8)

    @given(seed=st.integers(0, 10_000), index=st.integers(0, len(FAMILY) - 1), corner=st.floats(-2.0, 1.0))
    @settings(max_examples=60, deadline=None)
    def test_norm_equivalence(self, seed, index, corner):
        f = _random_function(seed)
        cube = Cube((corner,), 0.75)
        phi = FAMILY[index]
        norm = orlicz_norm(f, cube, phi)
        prime = orlicz_norm_prime(f, cube, phi)
        self.assertGreaterEqual(prime, norm * (1 - 1e-8))
        self.assertLessEqual(prime, 2 * norm * (1 + 1e-8))

    def test_norm_equivalence_thousand_draws(self):
        rng = np.random.default_rng(1000)
        for draw in range(1000):
            f = _random_function(int(rng.integers(0, 10_000)))
            cube = Cube((float(rng.uniform(-2.0, 1.0)),), float(rng.uniform(0.1, 1.0)))
            phi = FAMILY[int(rng.integers(0, len(FAMILY)))]
            norm = orlicz_norm(f, cube, phi)
            prime = orlicz_norm_prime(f, cube, phi)
            self.assertGreaterEqual(prime, norm * (1 - 1e-8), f"draw {draw}: {phi}")
            self.assertLessEqual(prime, 2 * norm * (1 + 1e-8), f"draw {draw}: {phi}")

    @given(seed=st.integers(0, 10_000), scale=st.floats(0.01, 100.0), index=st.integers(0, len(FAMILY) - 1))
    @settings(max_examples=40, deadline=None)
    def test_homogeneity(self, seed, scale, index):
        f = _random_function(seed)
        phi = FAMILY[index]
        cube = Cube((-1.0,), 1.5)
        self.assertAlmostEqual(orlicz_norm(scale * f, cube, phi) / (scale * orlicz_norm(f, cube, phi)), 1.0, places=9)

    def test_exponential_power_identity(self):
        b = _random_function(5, level=4)
        cube = Cube((-1.5,), 2.0)
        oscillation = abs(b - b.average(cube))
        reference = orlicz_norm(oscillation, cube, YoungFunction.expl())
        for xi in (0.5, 2.0, 3.0):
            lifted = orlicz_norm(oscillation.power(xi), cube, YoungFunction.explpow(xi)) ** (1.0 / xi)
            self.assertAlmostEqual(lifted / reference, 1.0, places=9)

    def test_monotone_comparison(self):
        chi = GridFunction.indicator(Cube((0.0,), 0.25), 1, 1, 4)
        ratio = monotone_comparison(chi, UNIT, YoungFunction.power(2.0), YoungFunction.power(3.0))
        self.assertAlmostEqual(ratio, 0.25 ** (1.0 / 6.0), places=9)


class TestHolderPair(unittest.TestCase):
    def test_constants(self):
        one = GridFunction.constant(1.0, 1, 1, 3)
        lhs, rhs = holder_pair_check(one, one, UNIT, YoungFunction.power(2.0))
        self.assertAlmostEqual(lhs, 1.0, places=12)
        self.assertLessEqual(lhs, rhs * (1 + 1e-9))

    def test_indicators(self):
        theta = 0.25
        chi = GridFunction.indicator(Cube((0.0,), theta), 1, 1, 4)
        lhs, rhs = holder_pair_check(chi, chi, UNIT, YoungFunction.power(2.0))
        self.assertAlmostEqual(lhs, theta, places=12)
        self.assertAlmostEqual(rhs, theta, places=9)

    @given(
        seed=st.integers(0, 10_000),
        index=st.integers(0, 3),
        corner=st.floats(-2.0, 1.0),
    )
    @settings(max_examples=25, deadline=None)
    def test_random_draws(self, seed, index, corner):
        f = _random_function(seed)
        g = _random_function(seed + 1)
        cube = Cube((corner,), 0.9)
        lhs, rhs = holder_pair_check(f, g, cube, FAMILY[index])
        self.assertLessEqual(lhs, rhs * (1 + 1e-9))

    def test_thousand_draws(self):
        rng = np.random.default_rng(1001)
        for draw in range(1000):
            seed = int(rng.integers(0, 10_000))
            f, g = _random_function(seed), _random_function(seed + 1)
            cube = Cube((float(rng.uniform(-2.0, 1.0)),), float(rng.uniform(0.1, 1.0)))
            psi = FAMILY[int(rng.integers(0, 4))]
            lhs, rhs = holder_pair_check(f, g, cube, psi)
            self.assertLessEqual(lhs, rhs * (1 + 1e-9), f"draw {draw}: {psi}")


class TestBpCondition(unittest.TestCase):
    def test_power_below_p(self):
        result = bp_check(YoungFunction.power(1.5), 2.0)
        self.assertEqual(result.verdict, IN_BP)
        self.assertEqual(result.certificate.verdict, IN_BP)

    def test_power_at_p(self):
        result = bp_check(YoungFunction.power(2.0), 2.0)
        self.assertEqual(result.verdict, NOT_IN_BP)
        self.assertEqual(result.certificate.verdict, NOT_IN_BP)

    def test_tau_is_in_bp(self):
        phi = tau(3.0, 0.5)
        self.assertEqual(phi.params, (3.0, 2.0))
        self.assertTrue(bp_check(phi, 3.0).in_bp)
        self.assertEqual(numeric_certificate(phi, 3.0).verdict, IN_BP)

    def test_exponential_growth(self):
        self.assertEqual(bp_check(YoungFunction.expl(), 2.0, numeric=False).verdict, NOT_IN_BP)

    def test_bump_associates(self):
        cfg = ExponentConfig(alpha=0.5, p1=1.8, p2=1.8, q=1.0)
        bumps = thm_d_bumps(cfg)
        self.assertTrue(bp_check(bumps.phi1.associate(), cfg.p1, numeric=False).in_bp)
        plain = YoungFunction.power(cfg.p1_prime).associate()
        self.assertFalse(bp_check(plain, cfg.p1, numeric=False).in_bp)

    def test_symbolic_and_numeric_routes_agree(self):
        fractional = ExponentConfig(alpha=0.5, p1=3.0, p2=3.0, q=1.0)
        tau1, _ = tau_functions(fractional, "thmA")
        cfg = ExponentConfig(alpha=0.5, p1=8.0, p2=6.0, q=4.0, r=2.0, N=1, m=1, delta=1.5)
        tau_1, tau_2, tau_q = tau_functions(cfg, "thmB")
        cases = [
            (YoungFunction.power(1.5), 2.0, IN_BP),
            (YoungFunction.power(2.0), 2.0, NOT_IN_BP),
            (YoungFunction.power(3.0), 2.0, NOT_IN_BP),
            (YoungFunction.logbump(1.5, 3.0), 2.0, IN_BP),
            (YoungFunction.logbump(2.0, 1.5), 2.0, NOT_IN_BP),
            (YoungFunction.reverselogbump(2.0, 0.25), 2.0, NOT_IN_BP),
            (YoungFunction.llogl(1.0), 2.0, IN_BP),
            (YoungFunction.expl(), 2.0, NOT_IN_BP),
            (tau1, fractional.p1, IN_BP),
            (tau_1, cfg.p1 / cfg.r, IN_BP),
            (tau_2, cfg.p2 / cfg.s, IN_BP),
            (tau_q, cfg.q_prime, IN_BP),
        ]
        for phi, p, expected in cases:
            result = bp_check(phi, p)
            self.assertEqual(result.method, "symbolic", str(phi))
            self.assertEqual(result.verdict, expected, f"{phi} in B_{p:g}")
            self.assertEqual(result.certificate.verdict, expected, f"{phi} in B_{p:g}")

    def test_requires_p_above_one(self):
        with self.assertRaises(ValidationError):
            bp_check(YoungFunction.power(2.0), 1.0)


class TestBumps(unittest.TestCase):
    def test_grammar(self):
        self.assertEqual(parse_young("power(2)"), YoungFunction.power(2.0))
        self.assertEqual(parse_young("logbump(r=2.0,s=1.5)"), YoungFunction.logbump(2.0, 1.5))
        self.assertEqual(parse_young(" logbump(2, s=1.5) "), YoungFunction.logbump(2.0, 1.5))
        self.assertEqual(parse_young("expl"), YoungFunction.expl())
        self.assertEqual(str(YoungFunction.logbump(2.0, 1.5)), "logbump(r=2,s=1.5)")

    def test_grammar_errors(self):
        for text in ("gauss(1)", "power(p=2,q=3)", "logbump(2)", "power(x)", "power(0.5)"):
            with self.assertRaises(ConfigError):
                parse_young(text, line=4)
        with self.assertRaises(ConfigError) as caught:
            parse_young("gauss(1)", line=7)
        self.assertEqual(caught.exception.line, 7)

    def test_commutator_bumps(self):
        cfg = ExponentConfig(alpha=0.5, p1=4.0, p2=4.0, q=3.0, r=2.0, N=1, m=1)
        bumps = thm_b_bumps(cfg)
        self.assertEqual(bumps.phi1.params, (2.0, 5.5))
        self.assertEqual(bumps.phi2.params, (2.0, 1.5))
        self.assertEqual(bumps.psi.params, (3.0, 5.5))
        plain = thm_e_bumps(cfg)
        self.assertEqual(plain.phi1.params, (2.0, 1.5))
        self.assertEqual(plain.psi.params, (3.0, 2.5))

    def test_tau_functions(self):
        cfg = ExponentConfig(alpha=0.5, p1=3.0, p2=3.0, q=1.0)
        tau1, tau2 = tau_functions(cfg, "thmA")
        self.assertEqual(tau1.params, (3.0, 2.0))
        self.assertEqual(tau1, tau2)


if __name__ == '__main__':
    unittest.main()
