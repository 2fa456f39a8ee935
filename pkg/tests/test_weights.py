import math
import unittest

import numpy as np

from src.errors import HypothesisViolation, NoReverseHolder, ResourceLimitError, ValidationError
from src.signal.exponents import ExponentConfig
from src.signal.families import clipped_log, sign_function, step_function
from src.signal.grid_function import GridFunction
from src.weights.bmo import bmo_norm, john_nirenberg_check
from src.weights.bump_conditions import WeightTriple, bump_constant
from src.weights.cube_scan import CubeScan
from src.weights.muckenhoupt import (
    ainfty_reverse_holder,
    ap_constant,
    apq_consequences,
    apq_constant,
    doubling_table,
)
from src.young.bumps import thm_e_bumps

L0, L = 1, 5


def _power(a, half_width_level=L0, level=L):
    return GridFunction.power_weight(a, 1, half_width_level, level)


def _ones(half_width_level=L0, level=L):
    return GridFunction.constant(1.0, 1, half_width_level, level)


def _drift(a, b):
    return abs(a - b) / abs(b)


class TestCubeScan(unittest.TestCase):
    def test_contained_cubes(self):
        scan = CubeScan(1, L0, L)
        W = 2.0 ** L0
        self.assertGreater(len(scan), 0)
        self.assertTrue(np.all(scan.sides > 0))
        self.assertTrue(np.all(scan.corners[:, 0] >= -W))
        self.assertTrue(np.all(scan.corners[:, 0] + scan.sides <= W + 1e-12))
        self.assertEqual(sorted(set(scan.scales.tolist())), list(range(-L0, L + 1)))

    def test_intersecting_cubes(self):
        scan = CubeScan(1, L0, L, contained=False)
        W = 2.0 ** L0
        self.assertTrue(np.all(scan.corners[:, 0] < W))
        self.assertTrue(np.all(scan.corners[:, 0] + scan.sides > -W))
        self.assertGreater(len(scan), len(CubeScan(1, L0, L)))

    def test_random_cubes_are_seeded(self):
        first = CubeScan(1, L0, L, random_count=50, seed=3)
        second = CubeScan(1, L0, L, random_count=50, seed=3)
        np.testing.assert_array_equal(first.corners, second.corners)
        self.assertEqual(len(first) - len(first.mesh_only()), 50)

    def test_threads_match_sequential(self):
        f = sign_function(1, L0, L)
        func = lambda cube: abs(f.average(cube))
        sequential = CubeScan(1, L0, L).map_cubes(func)
        threaded = CubeScan(1, L0, L, threads=3).map_cubes(func)
        np.testing.assert_array_equal(sequential, threaded)

    def test_pointwise_max(self):
        f = _ones()
        scan = CubeScan.for_function(f)
        np.testing.assert_allclose(scan.pointwise_max(scan.sides, f), 2.0 ** L0)

    def test_enlarging_the_scan_never_decreases(self):
        w = _power(0.5, level=6)
        coarse = CubeScan(1, L0, 6, levels=range(0, 3))
        full = CubeScan(1, L0, 6)
        self.assertLessEqual(float(ap_constant(w, 2.0, coarse)), float(ap_constant(w, 2.0, full)) + 1e-12)

    def test_resource_limit(self):
        with self.assertRaises(ResourceLimitError):
            CubeScan(2, 3, 6, density=0)

    def test_record(self):
        constant = ap_constant(_ones(), 2.0, CubeScan(1, L0, L))
        record = constant.to_record(kind="A_p")
        self.assertEqual(record["kind"], "A_p")
        self.assertIn("argmax", record)
        self.assertEqual(record["scan_size"], constant.scan_size)


class TestMuckenhoupt(unittest.TestCase):
    def test_constant_weight(self):
        scan = CubeScan(1, L0, L)
        for p in (1.0, 1.5, 2.0, 3.0):
            self.assertAlmostEqual(float(ap_constant(_ones(), p, scan)), 1.0, places=10)

    def test_power_weight_inside_window_is_stable(self):
        values = []
        for half_width_level in (1, 2, 3):
            w = _power(0.5, half_width_level)
            values.append(float(ap_constant(w, 2.0, CubeScan.for_function(w))))
        self.assertGreaterEqual(values[0], 4.0 / 3.0 - 1e-9)
        self.assertLess(values[0], 1.6)
        for a, b in zip(values, values[1:]):
            self.assertLess(_drift(b, a), 0.02)

    def test_power_weight_outside_window_diverges(self):
        w = _power(1.5)
        self.assertTrue(math.isinf(float(ap_constant(w, 2.0, CubeScan.for_function(w)))))

    def test_a1(self):
        w = _power(-0.5)
        value = float(ap_constant(w, 1.0, CubeScan.for_function(w)))
        self.assertGreater(value, 1.0)
        self.assertTrue(math.isfinite(value))

    def test_nonpositive_weight(self):
        with self.assertRaises(ValidationError):
            ap_constant(GridFunction.zeros(1, L0, L), 2.0, CubeScan(1, L0, L))

    def test_reverse_holder_constant_weight(self):
        m, C = ainfty_reverse_holder(_ones(), CubeScan(1, L0, L))
        self.assertEqual(m, 2.0)
        self.assertAlmostEqual(C, 1.0, places=10)

    def test_reverse_holder_power_weight(self):
        w = _power(0.5)
        m, C = ainfty_reverse_holder(w, CubeScan.for_function(w))
        self.assertGreater(m, 1.0)
        self.assertLessEqual(C, 10.0)

    def test_reverse_holder_imbalanced_weight(self):
        blank = GridFunction.zeros(1, 1, 4)
        w = blank.like(np.where(blank.centers() > 0, 1.0, 1e-12))
        scan = CubeScan.for_function(w, density=0)
        # worst cube holds one heavy cell out of 32
        m, C = ainfty_reverse_holder(w, scan)
        self.assertEqual(m, 2.0)
        self.assertAlmostEqual(C, math.sqrt(32.0), places=5)
        with self.assertRaises(NoReverseHolder):
            ainfty_reverse_holder(w, scan, bound=1.1)

    def test_reverse_holder_fails_off_l1loc(self):
        w = _power(-1.5)
        with self.assertRaises(NoReverseHolder):
            ainfty_reverse_holder(w, CubeScan.for_function(w))

    def test_doubling_table(self):
        scan = CubeScan(1, L0, L)
        table = doubling_table(_ones(), scan)
        np.testing.assert_allclose(table["kappa"], table["eta"], atol=1e-9)
        power = doubling_table(_power(0.5), scan)
        self.assertTrue(np.all(power["kappa"] >= power["eta"] - 1e-12))
        self.assertTrue(np.all(power["kappa"] < 1.0))
        self.assertTrue(np.all(np.diff(power["kappa"]) > 0))

    def test_apq_constant(self):
        cfg = ExponentConfig(p1=4.0, p2=4.0)
        scan = CubeScan(1, L0, L)
        self.assertAlmostEqual(float(apq_constant(_ones(), _ones(), cfg, scan)), 1.0, places=10)
        w1, w2 = _power(0.2), _power(0.3)
        self.assertTrue(math.isfinite(float(apq_constant(w1, w2, cfg, scan))))
        consequences = apq_consequences(w1, w2, cfg, scan)
        self.assertEqual(set(consequences), {"product", "w1", "w2"})
        for constant in consequences.values():
            self.assertTrue(constant.finite)
            self.assertGreaterEqual(float(constant), 1.0 - 1e-9)


class TestBumpConstants(unittest.TestCase):
    def setUp(self):
        self.scan = CubeScan(1, L0, L)
        self.ones = WeightTriple(_ones(), _ones(), _ones())

    def test_onevec_constant_weights(self):
        cfg = ExponentConfig(p1=4.0, p2=4.0)
        self.assertAlmostEqual(float(bump_constant("onevec", self.ones, cfg, self.scan)), 1.0, places=10)

    def test_eq91_constant_weights(self):
        cfg = ExponentConfig(alpha=0.25, p1=4.0, p2=4.0, r=2.0, sobolev=True)
        self.assertAlmostEqual(cfg.q, 4.0)
        self.assertAlmostEqual(float(bump_constant("eq91", self.ones, cfg, self.scan)), 1.0, places=10)

    def test_power_bump_at_the_endpoint(self):
        cfg = ExponentConfig(p1=2.0, p2=4.0, r=2.0)
        self.assertAlmostEqual(float(bump_constant("eq21", self.ones, cfg, self.scan)), 1.0, places=10)

    def test_one_weight_example_is_scale_stable(self):
        values = []
        for half_width_level in (1, 2):
            w1, w2 = _power(-0.5, half_width_level), _power(0.5, half_width_level)
            cfg = ExponentConfig(p1=4.0, p2=4.0).with_natural_pair()
            weights = WeightTriple.one_weight(w1, w2, cfg.q, cfg.p1, cfg.p2)
            scan = CubeScan.for_function(w1)
            eq21 = float(bump_constant("eq21", weights, cfg, scan))
            self.assertAlmostEqual(eq21, float(bump_constant("onevec", weights, cfg, scan)), places=9)
            values.append(eq21)
        self.assertTrue(math.isfinite(values[0]))
        self.assertLess(_drift(values[1], values[0]), 0.10)

    def test_holder_bump_constant_weights(self):
        cfg = ExponentConfig(alpha=0.25, p1=4.0, p2=4.0, r=2.0, sobolev=True)
        bumps = thm_e_bumps(cfg)
        expected = (
            1.0 / bumps.psi.inverse(1.0)
            * (1.0 / bumps.phi1.inverse(1.0)) ** 0.5
            * (1.0 / bumps.phi2.inverse(1.0)) ** 0.5
        )
        self.assertAlmostEqual(float(bump_constant("thmE", self.ones, cfg, self.scan)), expected, places=8)

    def test_fractional_bump_with_q_one(self):
        cfg = ExponentConfig(alpha=0.5, p1=1.8, p2=1.8, q=1.0)
        constant = bump_constant("thmD", self.ones, cfg, self.scan)
        self.assertTrue(constant.finite)
        # positive prefactor exponent: the largest cubes dominate
        self.assertGreater(constant.per_scale[-L0], constant.per_scale[L])

    def test_commutator_bump(self):
        cfg = ExponentConfig(alpha=0.5, p1=1.8, p2=1.8, q=1.0, N=1, m=1)
        self.assertTrue(bump_constant("thmA", self.ones, cfg, self.scan).finite)
        cfg = ExponentConfig(alpha=0.5, p1=4.0, p2=4.0, q=3.0, r=2.0, N=1, m=1)
        self.assertTrue(bump_constant("thmB", self.ones, cfg, self.scan).finite)

    def test_hypothesis_violation(self):
        cfg = ExponentConfig(alpha=0.5, p1=2.0, p2=4.0, q=3.0, r=2.0)
        with self.assertRaises(HypothesisViolation) as caught:
            bump_constant("thmE", self.ones, cfg, self.scan)
        self.assertIn("p1 > r", str(caught.exception))

    def test_unknown_kind(self):
        with self.assertRaises(ValidationError):
            bump_constant("thmZ", self.ones, ExponentConfig(), self.scan)

    def test_stein_weiss_balanced_is_dilation_invariant(self):
        cfg = ExponentConfig(alpha=0.5, p1=4.0, p2=4.0)
        weights = WeightTriple.stein_weiss(0.2, 0.15, 0.15, cfg, 1, L0, 6)
        constant = bump_constant("steinweiss", weights, cfg, CubeScan(1, L0, 6))
        coarse = [constant.per_scale[j] for j in (-1, 0, 1, 2)]
        for value in coarse[1:]:
            self.assertLess(_drift(value, coarse[0]), 0.10)

    def test_stein_weiss_unbalanced_grows_with_scale(self):
        cfg = ExponentConfig(alpha=0.5, p1=4.0, p2=4.0)
        weights = WeightTriple.stein_weiss(0.1, 0.1, 0.1, cfg, 1, L0, 6)
        constant = bump_constant("eq105", weights, cfg, CubeScan(1, L0, 6))
        ratio = constant.per_scale[-1] / constant.per_scale[0]
        self.assertAlmostEqual(ratio, 2.0 ** 0.2, places=6)


class TestBMO(unittest.TestCase):
    def test_constant(self):
        scan = CubeScan(1, L0, L)
        self.assertEqual(float(bmo_norm(GridFunction.constant(2.5, 1, L0, L), scan)), 0.0)

    def test_sign_and_step(self):
        scan = CubeScan(1, L0, L)
        self.assertAlmostEqual(float(bmo_norm(sign_function(1, L0, L), scan)), 1.0, places=10)
        self.assertAlmostEqual(float(bmo_norm(step_function(1, L0, L), scan)), 0.5, places=10)

    def test_clipped_log_is_stable(self):
        reference = float(bmo_norm(clipped_log(1, 1, 5), CubeScan(1, 1, 5)))
        wider = float(bmo_norm(clipped_log(1, 2, 5), CubeScan(1, 2, 5)))
        finer = float(bmo_norm(clipped_log(1, 1, 6), CubeScan(1, 1, 6)))
        self.assertLess(_drift(wider, reference), 0.05)
        self.assertLess(_drift(finer, reference), 0.05)

    def test_john_nirenberg_zero(self):
        result = john_nirenberg_check(GridFunction.zeros(1, L0, L), CubeScan(1, L0, L))
        self.assertEqual(result.ratio.value, 0.0)

    def test_john_nirenberg_sign(self):
        result = john_nirenberg_check(sign_function(1, L0, L), CubeScan(1, L0, L))
        self.assertAlmostEqual(result.ratio.value, 1.0 / math.log(2.0), places=8)
        self.assertGreaterEqual(result.exp_constant, 1.0)
        self.assertTrue(result.within_bound)
        self.assertIn("c_n", result.to_record())

    def test_john_nirenberg_log_refinement(self):
        coarse = john_nirenberg_check(clipped_log(1, 1, 5), CubeScan(1, 1, 5))
        fine = john_nirenberg_check(clipped_log(1, 1, 6), CubeScan(1, 1, 6))
        self.assertTrue(coarse.within_bound)
        self.assertLess(_drift(fine.ratio.value, coarse.ratio.value), 0.10)


if __name__ == '__main__':
    unittest.main()
