import json
import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from src.dyadic.cube import Cube
from src.dyadic.grid import DyadicGrid
from src.errors import ValidationError
from src.signal.exponents import ExponentConfig
from src.signal.grid_function import GridFunction
from src.sparse.selection import ROOT_MARGIN, SelectedCube, SparseFamily, cz_select
from src.sparse.sums import (
    SparseTerms,
    geometric_collapse,
    sparse_sum,
    sparse_sum_by_disjoint_sets,
    subtree_weight_sum,
)
from src.weights.cube_scan import CubeScan
from src.young.orlicz import orlicz_norm
from src.young.young_function import YoungFunction

STRUCTURAL = ("disjoint", "maximal", "carved_disjoint")


def _draw(seed, level=5, zeros=0.3):
    blank = GridFunction.zeros(1, 0, level)
    rng = np.random.default_rng(seed)
    values = rng.random(blank.values.shape) * (rng.random(blank.values.shape) > zeros)
    return blank.like(values)


def _indicator():
    return GridFunction.indicator(Cube((0.0,), 1.0), 1, 1, 6)


def _brute_force(f, g, a, grid, k):
    """Maximal cubes with F > a^k, found by enumerating every cube of every level."""
    W = f.half_width
    top = -(f.half_width_level + ROOT_MARGIN)
    values, ancestors, chosen = {}, {}, set()
    for level in range(top, f.level + 1):
        for cube in grid.cubes_meeting(level, (-W,), (W,)):
            key = (level, cube.address.coords)
            values[key] = abs(f).average(cube) * abs(g).average(cube)
            if level == top:
                ancestors[key] = 0.0
                continue
            up = grid.parent(cube)
            up_key = (level - 1, up.address.coords)
            ancestors[key] = max(ancestors[up_key], values[up_key])
            if values[key] > a ** k and ancestors[key] <= a ** k:
                chosen.add((cube.corner[0], cube.side))
    return chosen


class TestSelection(unittest.TestCase):
    def test_zero_input_gives_empty_family(self):
        f = GridFunction.zeros(1, 0, 5)
        family = cz_select(f, _draw(1), None, None, 4.0, DyadicGrid.standard(1))
        self.assertTrue(family.empty)
        self.assertIsNone(family.k_range)
        terms = SparseTerms.generic(1.0, [(f, None, 1.0)])
        self.assertEqual(sparse_sum(family, ExponentConfig(), terms), 0.0)

    def test_indicator_selection(self):
        f = _indicator()
        family = cz_select(f, f, None, None, 4.0, DyadicGrid.standard(1))
        self.assertEqual(family.k_range, (-4, -1))
        expected = {-1: (0.0, 1.0), -2: (0.0, 2.0), -3: (0.0, 4.0), -4: (0.0, 8.0)}
        for k, (corner, side) in expected.items():
            cubes = family.cubes(k)
            self.assertEqual(len(cubes), 1)
            self.assertEqual(cubes[0].cube.corner, (corner,))
            self.assertEqual(cubes[0].cube.side, side)
        self.assertEqual(family.cubes(-1)[0].carved_ratio, 1.0)
        for k in (-4, -3, -2):
            self.assertEqual(family.cubes(k)[0].carved_ratio, 0.5)
        report = family.check_invariants()
        for key in STRUCTURAL + ("sparse",):
            self.assertTrue(report[key], key)

    def test_indicator_with_large_base(self):
        f = _indicator()
        family = cz_select(f, f, None, None, 64.0, DyadicGrid.standard(1))
        self.assertEqual(family.k_range, (-1, -1))
        self.assertEqual(len(family), 1)
        self.assertTrue(all(c.carved_ratio >= 0.5 for c in family))

    @settings(max_examples=15, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_matches_brute_force(self, seed):
        f, g = _draw(seed, level=4, zeros=0.0), _draw(seed + 1, level=4, zeros=0.0)
        grid = DyadicGrid.standard(1)
        family = cz_select(f, g, None, None, 2.0, grid)
        lo, hi = family.k_range
        for k in range(lo, hi + 1):
            found = {(c.cube.corner[0], c.cube.side) for c in family.cubes(k)}
            self.assertEqual(found, _brute_force(f, g, 2.0, grid, k), k)
        self.assertEqual(_brute_force(f, g, 2.0, grid, hi + 1), set())

    @settings(max_examples=20, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_invariants_on_random_draws(self, seed):
        f, g = _draw(seed), _draw(seed + 7)
        grid = DyadicGrid.standard(1)
        for family in (
            cz_select(f, g, None, None, 64.0, grid),
            cz_select(f, g, YoungFunction.power(2.0), YoungFunction.power(2.0), 8.0, grid),
            cz_select(f, g, None, None, 64.0, grid, alpha=0.5, include_volume_factor=True),
        ):
            if family.empty:
                continue
            report = family.check_invariants()
            for key in STRUCTURAL + ("sparse",):
                self.assertTrue(report[key], key)

    def test_invariants_over_five_hundred_draws(self):
        grid = DyadicGrid.standard(1)
        power = YoungFunction.power(2.0)
        rng = np.random.default_rng(500)
        for draw in range(500):
            seed = int(rng.integers(0, 100_000))
            f, g = _draw(seed), _draw(seed + 7)
            for a, phi in ((2.0 ** 6, None), (2.0 ** 3, power)):
                family = cz_select(f, g, phi, phi, a, grid)
                if family.empty:
                    continue
                report = family.check_invariants()
                for key in STRUCTURAL + ("sparse",):
                    self.assertTrue(report[key], f"draw {draw}, a = {a:g}: {key}")

    @settings(max_examples=8, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_orlicz_and_shifted_selections_are_maximal(self, seed):
        f, g = _draw(seed, level=4), _draw(seed + 3, level=4)
        llogl = YoungFunction.llogl(1)
        family = cz_select(f, g, llogl, llogl, 64.0, DyadicGrid.standard(1))
        if not family.empty:
            report = family.check_invariants()
            for key in STRUCTURAL:
                self.assertTrue(report[key], key)
        shifted = cz_select(f, g, None, None, 64.0, DyadicGrid.from_label("t1", 1))
        if not shifted.empty:
            report = shifted.check_invariants()
            for key in ("disjoint", "maximal", "sparse"):
                self.assertTrue(report[key], key)

    def test_omega_is_the_level_set_of_the_walk(self):
        f, g = _draw(11), _draw(12)
        family = cz_select(f, g, None, None, 4.0, DyadicGrid.standard(1))
        walk = family.walk
        scan = CubeScan.from_arrays(f, walk.corners, walk.sides, walk.levels)
        sup = scan.pointwise_max(walk.values, f)
        lo, hi = family.k_range
        for k in range(lo, hi + 1):
            np.testing.assert_array_equal(family.omega_mask(k), sup > 4.0 ** k)

    def test_bands_and_containing_cubes(self):
        f = _indicator()
        grid = DyadicGrid.standard(1)
        family = cz_select(f, f, None, None, 4.0, grid)
        self.assertEqual(family.band_of(1.0 / 64.0), -4)
        self.assertEqual(family.band_of(1.0), -1)
        with self.assertRaises(ValueError):
            family.band_of(0.0)
        inside = family.containing_cube(grid.cube_at(1, (0.25,)), -2)
        self.assertEqual(inside.cube.side, 2.0)
        self.assertIsNone(family.containing_cube(grid.cube_at(0, (1.5,)), -1))

    def test_every_walked_cube_sits_in_its_band_cube(self):
        f, g = _draw(21), _draw(22)
        grid = DyadicGrid.standard(1)
        family = cz_select(f, g, None, None, 4.0, grid)
        walk = family.walk
        lo, hi = family.k_range
        for index in np.flatnonzero(walk.values > 0):
            k = family.band_of(walk.values[index])
            if k < lo or walk.parents[index] < 0:
                continue
            side = float(walk.sides[index])
            cube = grid.cube_at(int(walk.levels[index]), (float(walk.corners[index][0]) + side / 2.0,))
            self.assertIsNotNone(family.containing_cube(cube, k))

    def test_rejects_bad_inputs(self):
        f = _draw(0)
        grid = DyadicGrid.standard(1)
        with self.assertRaises(ValidationError):
            cz_select(f, f, None, None, 1.0, grid)
        with self.assertRaises(ValidationError):
            cz_select(-f, f, None, None, 4.0, grid)
        with self.assertRaises(ValidationError):
            cz_select(f, _draw(0, level=6), None, None, 4.0, grid)

    def test_json_dump(self):
        f = _indicator()
        family = cz_select(f, f, None, None, 64.0, DyadicGrid.standard(1))
        record = json.loads(family.to_json())
        self.assertEqual(
            set(record), {"a", "alpha", "grid", "include_volume_factor", "k_range", "levels"}
        )
        self.assertEqual(record["grid"], "t0")
        self.assertEqual(record["k_range"], [-1, -1])
        (cube,) = record["levels"]["-1"]
        self.assertEqual(cube["corner"], [0.0])
        self.assertEqual(cube["side"], 4.0)
        self.assertEqual(cube["carved_ratio"], 1.0)
        self.assertEqual(cube["address"]["level"], -2)


class TestSparseSums(unittest.TestCase):
    def test_single_cube_sum_is_the_term_product(self):
        f, g = _draw(5, zeros=0.0), _draw(6, zeros=0.0)
        grid = DyadicGrid.standard(1)
        cube = grid.cube_at(1, (0.25,))
        family = SparseFamily(grid, 4.0, f, levels={0: [SelectedCube(0, cube, 1.0, cube.volume)]})
        llogl = YoungFunction.llogl(1)
        terms = SparseTerms.generic(1.5, [(f, llogl, 2.0), (g, None, 1.0)])
        expected = cube.volume ** 1.5 * orlicz_norm(f, cube, llogl) ** 2.0 * abs(g).average(cube)
        total = sparse_sum(family, ExponentConfig(), terms)
        self.assertAlmostEqual(total / expected, 1.0, places=12)
        self.assertEqual(sparse_sum_by_disjoint_sets(family, ExponentConfig(), terms), total)

    def test_disjoint_set_sum_is_comparable(self):
        f, g = _draw(31), _draw(32)
        family = cz_select(f, g, None, None, 64.0, DyadicGrid.standard(1))
        terms = SparseTerms.generic(1.0, [(f, None, 1.0), (g, None, 1.0)])
        total = sparse_sum(family, ExponentConfig(), terms)
        carved = sparse_sum_by_disjoint_sets(family, ExponentConfig(), terms)
        self.assertLessEqual(carved, total * (1 + 1e-12))
        self.assertGreaterEqual(carved, 0.5 * total * (1 - 1e-12))

    def test_fractional_terms(self):
        f, g = _draw(41), _draw(42)
        u = _draw(43, zeros=0.0) + 0.5
        cfg = ExponentConfig(alpha=0.5, p1=1.5, p2=1.5, N=2, m=1)
        self.assertLess(cfg.q, 1.0)
        llogl = YoungFunction.llogl(1)
        family = cz_select(f, g, llogl, llogl, 64.0, DyadicGrid.standard(1))
        total = sparse_sum(family, cfg, SparseTerms.thm_a(f, g, u, cfg))
        self.assertTrue(np.isfinite(total))
        self.assertGreater(total, 0.0)

    def test_fractional_terms_need_q_below_one(self):
        f = _draw(0)
        with self.assertRaises(ValidationError):
            SparseTerms.thm_a(f, f, f, ExponentConfig(alpha=0.5))

    def test_terms_validation(self):
        f = _draw(0)
        with self.assertRaises(ValidationError):
            SparseTerms.generic(1.0, [])
        with self.assertRaises(ValidationError):
            SparseTerms.generic(1.0, [(f, None, 0.0)])
        with self.assertRaises(ValidationError):
            SparseTerms.generic(1.0, [(f, None, 1.0), (_draw(0, level=6), None, 1.0)])


class TestGeometricCollapse(unittest.TestCase):
    def test_subtree_sum_matches_closed_form(self):
        for alpha in (0.25, 0.5, 0.75):
            for q in (0.5, 1.0, 2.0):
                closed = geometric_collapse(alpha, q)
                self.assertAlmostEqual(subtree_weight_sum(alpha, q), closed, places=10)
                self.assertAlmostEqual(
                    subtree_weight_sum(alpha, q, dimension=2, grid=DyadicGrid.standard(2)),
                    closed,
                    places=10,
                )

    def test_needs_positive_decay(self):
        with self.assertRaises(ValidationError):
            geometric_collapse(0.0, 1.0)
        with self.assertRaises(ValidationError):
            subtree_weight_sum(0.5, 0.0)


if __name__ == '__main__':
    unittest.main()
