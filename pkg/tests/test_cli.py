import io
import json
import os
import sqlite3
import tempfile
import unittest
from contextlib import redirect_stdout
from pathlib import Path
from unittest import mock

import numpy as np
import pandas as pd

from src.cli.commands import EXIT_NUMERIC, EXIT_OK, EXIT_VALIDATION, main
from src.cli.config import FIXTURES_ENV, SHIPPED_FIXTURES, ExperimentConfig, resolve_fixture
from src.errors import ConfigError, ValidationError
from src.signal.grid_function import GridFunction
from src.signal.serialization import save_csv
from src.verify.report import CSV_COLUMNS

SMALL = """
[exponents]
p1 = 4
p2 = 4

[mesh]
L0 = 1
L = 4
refine = 2
"""


def _run(argv):
    buffer = io.StringIO()
    with redirect_stdout(buffer):
        code = main(argv)
    return code, buffer.getvalue()


class TestExperimentConfig(unittest.TestCase):
    def test_shipped_fixtures_round_trip(self):
        paths = sorted(SHIPPED_FIXTURES.glob("*.cfg"))
        self.assertGreaterEqual(len(paths), 5)
        for path in paths:
            config = ExperimentConfig.load(path)
            again = ExperimentConfig.parse(config.emit())
            self.assertEqual(config, again, path.name)
            self.assertEqual(again.emit(), config.emit())

    def test_errors_name_the_line(self):
        cases = {
            "[exponents]\np1 = 4\nbogus line\n": 3,
            "[nosuch]\n": 1,
            "# comment\n[mesh]\nL0 = 1\nwidth = 3\n": 4,
            "[exponents]\np1 = four\n": 2,
            "p1 = 4\n": 1,
            "[bumps]\nphi1 = cube(2)\nphi2 = power(2)\n": 2,
            "[weights]\nu = gaussian\n": 2,
            "[mesh]\nL = 5\nL = 6\n": 3,
        }
        for text, line in cases.items():
            with self.assertRaises(ConfigError) as ctx:
                ExperimentConfig.parse(text)
            self.assertEqual(ctx.exception.line, line, text)
            self.assertTrue(str(ctx.exception).startswith(f"line {line}: "))

    def test_exponents_are_revalidated(self):
        with self.assertRaises(ConfigError) as ctx:
            ExperimentConfig.parse("\n[exponents]\nn = 1\nalpha = 2\n")
        self.assertEqual(ctx.exception.line, 2)

    def test_ladder_and_overrides(self):
        config = ExperimentConfig.parse("[mesh]\nL = 5\nrefine = 3\n")
        self.assertEqual(config.ladder(), [5, 6, 7])
        self.assertEqual(config.with_overrides(refine=2).ladder(), [5, 6])
        self.assertEqual(config.with_overrides(seed=9).seed, 9)
        self.assertEqual(config.ladder(), [5, 6, 7])

    def test_defaults_and_alias(self):
        config = ExperimentConfig.parse("[experiment]\ntheorem = thmG\n")
        self.assertEqual(config.theorem, "thmG-weak")
        self.assertEqual(config.exponents.p1, 2.0)
        self.assertEqual(config.family_kind, "indicator")
        with self.assertRaises(ConfigError):
            ExperimentConfig.parse("[experiment]\ntheorem = thmZ\n")

    def test_one_weight_triple(self):
        config = ExperimentConfig.parse(SMALL + "\n[weights]\nw1 = power(-1.5)\nw2 = power(0.5)\n")
        weights = config.weight_triple(4)
        self.assertAlmostEqual(weights.u.power_exponent, -0.5, places=12)
        self.assertEqual(config.power_exponents("w1", "w2"), [-1.5, 0.5])

    def test_commutator_symbols(self):
        config = ExperimentConfig.parse(SMALL + "\n[commutator]\nsymbols = sign, log\nslots = 2, 1\n")
        spec = config.commutator_spec(4)
        self.assertEqual((spec.N, spec.m), (2, 1))
        self.assertEqual(spec.slots, [1, 2])
        with self.assertRaises(ConfigError):
            ExperimentConfig.parse("[commutator]\nsymbols = sign, log\nslots = 1\n")


class TestFixtureResolution(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.weight = GridFunction.power_weight(0.3, 1, 1, 4)
        save_csv(self.weight, Path(self.tmp.name) / "w.csv")

    def tearDown(self):
        self.tmp.cleanup()

    def test_environment_path(self):
        with mock.patch.dict(os.environ, {FIXTURES_ENV: self.tmp.name}):
            self.assertEqual(resolve_fixture("w.csv"), Path(self.tmp.name) / "w.csv")
            config = ExperimentConfig.parse(SMALL + "\n[weights]\nu = file:w.csv\n")
            finer = config.weight("u", 5)
        np.testing.assert_allclose(finer.values, np.repeat(self.weight.values, 2))

    def test_config_directory(self):
        config = ExperimentConfig.parse(SMALL + "\n[weights]\nu = file:w.csv\n", base_dir=self.tmp.name)
        np.testing.assert_allclose(config.weight("u", 4).values, self.weight.values)
        coarser = config.weight("u", 3)
        np.testing.assert_allclose(coarser.values, self.weight.values.reshape(-1, 2).mean(axis=1))

    def test_missing(self):
        with mock.patch.dict(os.environ, {FIXTURES_ENV: self.tmp.name}):
            with self.assertRaises(ValidationError):
                resolve_fixture("absent.csv")


class TestCommands(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def _config(self, text, name="run.cfg"):
        path = self.dir / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    def test_orlicz_indicator(self):
        code, output = _run(["orlicz", "--phi", "power(2)", "--indicator", "0.25"])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(output.strip(), "0.5")

    def test_sparse_on_indicator_fixture(self):
        out = self.dir / "family.json"
        code, _ = _run(["sparse", "--a", "64", "--grid", "t0", "--config", "indicator.cfg", "--out", str(out)])
        self.assertEqual(code, EXIT_OK)
        family = json.loads(out.read_text())
        self.assertEqual(family["grid"], "t0")
        self.assertTrue(family["invariants"]["sparse"])
        ratios = [cube["carved_ratio"] for cubes in family["levels"].values() for cube in cubes]
        self.assertTrue(ratios)
        self.assertTrue(all(ratio >= 0.5 for ratio in ratios))

    def test_verify_weak_type_fixture(self):
        out = self.dir / "g.json"
        code, output = _run(["verify", "--theorem", "thmG", "--config", "g.cfg", "--out", str(out)])
        self.assertEqual(code, EXIT_OK)
        report = json.loads(out.read_text())
        self.assertEqual(report["theorem"], "thmG-weak")
        self.assertIn("sufficiency", report["sections"])
        self.assertIn("necessity", report["sections"])
        self.assertIn("thmG-weak", output)

    def test_verify_is_deterministic_and_archived(self):
        config = self._config(SMALL)
        first, second, db = self.dir / "a.json", self.dir / "b.json", self.dir / "runs.db"
        for out in (first, second):
            code, _ = _run(["verify", "--theorem", "BM-onevec", "--config", config, "--out", str(out), "--archive", str(db)])
            self.assertEqual(code, EXIT_OK)
        self.assertEqual(first.read_bytes(), second.read_bytes())
        with sqlite3.connect(db) as conn:
            self.assertEqual(conn.execute("SELECT COUNT(*) FROM reports").fetchone()[0], 1)
            self.assertEqual(conn.execute("SELECT COUNT(*) FROM runs").fetchone()[0], 2)

    def test_sweep_csv(self):
        config = self._config(SMALL)
        out = self.dir / "sweep.csv"
        code, _ = _run(["sweep", "--theorems", "BM-onevec", "--widths", "1,2", "--config", config,
                        "--out", str(out), "--format", "csv"])
        self.assertEqual(code, EXIT_OK)
        table = pd.read_csv(out)
        self.assertEqual(list(table.columns), list(CSV_COLUMNS))
        self.assertEqual(len(table), 4)

    def test_validation_exit(self):
        # p = 2 is outside the range 1/2 < p <= q <= 1
        self.assertEqual(_run(["verify", "--theorem", "thmD", "--config", "indicator.cfg"])[0], EXIT_VALIDATION)
        broken = self._config("[exponents]\np1 = 4\nnot a line\n")
        self.assertEqual(_run(["verify", "--theorem", "thmE", "--config", broken])[0], EXIT_VALIDATION)
        self.assertEqual(_run(["verify", "--config", str(self.dir / "absent.cfg")])[0], EXIT_VALIDATION)

    def test_numeric_exit(self):
        outside = self._config(SMALL + "\n[family]\nkind = indicator\ncubes = 5:1\n")
        self.assertEqual(_run(["verify", "--theorem", "BM-onevec", "--config", outside])[0], EXIT_NUMERIC)

    def test_unknown_subcommand(self):
        with self.assertRaises(SystemExit) as ctx:
            with redirect_stdout(io.StringIO()), mock.patch("sys.stderr", io.StringIO()):
                main(["integrate"])
        self.assertEqual(ctx.exception.code, 2)

if __name__ == '__main__':
    unittest.main()
