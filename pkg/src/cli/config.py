# "src/cli/config.py"

## The `ExperimentConfig` class, the line-oriented experiment file behind every subcommand:
## - `[section]` headers, `key = value` lines, `#` comment lines, blank lines ignored
## - parse() keeps each value's 1-based line so errors point at the offending line
## - emit() writes the canonical text (fixed section and key order); parse(emit(c)) == c
## - exponents are revalidated at load; weight, symbol, bump and family specs are checked
##   before any grid is built
## - fixture paths resolve against $BIFRAC_FIXTURES, then the config's directory, then the
##   shipped fixtures/ directory
## It also exposes what `verify_theorem` reads from an experiment: the exponents, the
## refinement ladder, weights, test pairs, scans, commutator symbols and bumps per level.

import logging
import os
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Optional

import numpy as np

from ..dyadic.cube import Cube
from ..errors import ConfigError, ValidationError
from ..operators.commutators import CommutatorSpec
from ..signal.exponents import THEOREMS, ExponentConfig
from ..signal.families import FAMILY_KINDS, clipped_log, family_manifest, make_test_family, sign_function, step_function
from ..signal.grid_function import GridFunction
from ..signal.serialization import load_any
from ..verify.ratios import pair_family
from ..verify.steinweiss import SECTION10_WIDTHS
from ..weights.bump_conditions import WeightTriple
from ..weights.cube_scan import CubeScan
from ..young.bumps import BumpSelection, parse_young

logger = logging.getLogger(__name__)

FIXTURES_ENV = "BIFRAC_FIXTURES"
SHIPPED_FIXTURES = Path(__file__).resolve().parents[2] / "fixtures"

SECTIONS = {
    "experiment": ("theorem", "seed", "label"),
    "exponents": ("n", "alpha", "p1", "p2", "q", "r", "s", "N", "m", "delta", "sobolev"),
    "mesh": ("L0", "L", "refine", "scan_density", "random_cubes", "widths"),
    "weights": ("u", "v1", "v2", "w1", "w2"),
    "bumps": ("phi1", "phi2", "psi"),
    "family": ("kind", "count", "seed", "cubes", "exponents", "support", "block_level", "pairing"),
    "commutator": ("symbols", "slots"),
    "steinweiss": ("beta", "gamma1", "gamma2"),
    "output": ("path", "format"),
}
THEOREM_ALIASES = {"thmG": "thmG-weak"}
OUTPUT_FORMATS = ("json", "csv")
SYMBOL_KINDS = {"log": clipped_log, "sign": sign_function, "step": step_function}
MESH_DEFAULTS = {"L0": 1, "L": 6, "refine": 2, "scan_density": 4, "random_cubes": 0}

_HEADER = re.compile(r"^\[([a-z]+)\]$")
_POWER = re.compile(r"^power\(\s*([-+0-9.eE]+)\s*\)$")
_INTEGER_KEYS = {"n", "N", "m", "seed", "L0", "L", "refine", "scan_density", "random_cubes", "count", "block_level"}


def resolve_fixture(name, base_dir=None):
    """First existing match of `name` along $BIFRAC_FIXTURES, the config directory, fixtures/."""
    path = Path(name)
    if path.is_absolute():
        if path.exists():
            return path
        raise ValidationError(f"fixture {name} does not exist")
    search = [Path(entry) for entry in os.environ.get(FIXTURES_ENV, "").split(os.pathsep) if entry]
    search += [Path(base_dir)] if base_dir is not None else []
    search += [Path.cwd(), SHIPPED_FIXTURES]
    for directory in search:
        candidate = directory / path
        if candidate.exists():
            logger.debug("fixture %s resolved to %s", name, candidate)
            return candidate
    raise ValidationError(f"fixture {name} not found (searched {', '.join(str(d) for d in search)})")


def _resample(f, level):
    """Piecewise-constant f on the mesh of `level`: finer cells repeat, coarser cells average."""
    if f.level == level:
        return f
    factor = 2 ** abs(level - f.level)
    values = f.values
    for axis in range(f.dimension):
        if level > f.level:
            values = np.repeat(values, factor, axis=axis)
        else:
            shape = values.shape[:axis] + (values.shape[axis] // factor, factor) + values.shape[axis + 1:]
            values = values.reshape(shape).mean(axis=axis + 1)
    return GridFunction(values, f.dimension, f.half_width_level, level)


def _cube_list(text, dimension, line):
    """`corner[,corner]:side; ...` as Cubes."""
    cubes = []
    for item in filter(None, (chunk.strip() for chunk in text.split(";"))):
        corner, _, side = item.partition(":")
        try:
            coords = tuple(float(c) for c in corner.split(","))
            cube = Cube(coords * (dimension if len(coords) == 1 else 1), float(side))
        except ValueError as exc:
            raise ConfigError(f"bad cube {item!r}: {exc}", line) from None
        if cube.dimension != dimension:
            raise ConfigError(f"cube {item!r} does not have dimension {dimension}", line)
        cubes.append(cube)
    return cubes


def _number_list(text, line, kind=float):
    try:
        return [kind(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise ConfigError(f"expected a comma-separated list of numbers, got {text!r}", line) from None


@dataclass
class ExperimentConfig:
    values: Dict[str, Dict[str, str]] = field(default_factory=dict)
    lines: Dict[tuple, int] = field(default_factory=dict, compare=False, repr=False)
    base_dir: Optional[Path] = field(default=None, compare=False)
    threads: int = field(default=1, compare=False)

    def __post_init__(self):
        for section, entries in self.values.items():
            if section not in SECTIONS:
                raise ConfigError(f"unknown section [{section}]", self._line(section))
            for key in entries:
                if key not in SECTIONS[section]:
                    raise ConfigError(f"unknown key {key!r} in [{section}]", self._line(section, key))
        self._validate()

    # -- parsing and emitting -------------------------------------------------------------------

    @classmethod
    def parse(cls, text, base_dir=None):
        values, lines, section = {}, {}, None
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            header = _HEADER.match(line)
            if header:
                section = header.group(1)
                if section not in SECTIONS:
                    raise ConfigError(f"unknown section [{section}]", number)
                if section in values:
                    raise ConfigError(f"section [{section}] appears twice", number)
                values[section] = {}
                lines[(section,)] = number
                continue
            if section is None:
                raise ConfigError("key outside of any section", number)
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or not key or not value:
                raise ConfigError(f"expected 'key = value', got {line!r}", number)
            if key not in SECTIONS[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}]", number)
            if key in values[section]:
                raise ConfigError(f"key {key!r} set twice in [{section}]", number)
            values[section][key] = value
            lines[(section, key)] = number
        return cls(values, lines, Path(base_dir) if base_dir is not None else None)

    @classmethod
    def load(cls, path):
        path = Path(path)
        if not path.exists():
            path = resolve_fixture(str(path))
        logger.info("loading experiment %s", path)
        return cls.parse(path.read_text(encoding="utf-8"), base_dir=path.parent)

    @classmethod
    def default(cls):
        return cls({})

    def emit(self):
        blocks = []
        for section, keys in SECTIONS.items():
            entries = self.values.get(section)
            if entries is None:
                continue
            body = [f"{key} = {entries[key]}" for key in keys if key in entries]
            blocks.append("\n".join([f"[{section}]"] + body))
        return "\n\n".join(blocks) + "\n"

    def with_overrides(self, seed=None, refine=None, theorem=None, half_width_level=None, threads=None):
        values = {section: dict(entries) for section, entries in self.values.items()}
        for section, key, value in (
            ("experiment", "seed", seed),
            ("mesh", "refine", refine),
            ("experiment", "theorem", theorem),
            ("mesh", "L0", half_width_level),
        ):
            if value is not None:
                values.setdefault(section, {})[key] = str(value)
        return replace(self, values=values, threads=threads if threads is not None else self.threads)

    # -- raw access -----------------------------------------------------------------------------

    def _line(self, section, key=None):
        return self.lines.get((section, key) if key else (section,))

    def _raw(self, section, key, default=None):
        return self.values.get(section, {}).get(key, default)

    def _typed(self, section, key, default=None):
        raw = self._raw(section, key)
        if raw is None:
            return default
        line = self._line(section, key)
        if key == "sobolev":
            if raw.lower() not in ("true", "false"):
                raise ConfigError(f"sobolev must be true or false, got {raw!r}", line)
            return raw.lower() == "true"
        try:
            return int(raw) if key in _INTEGER_KEYS else float(raw)
        except ValueError:
            kind = "an integer" if key in _INTEGER_KEYS else "a number"
            raise ConfigError(f"{key} must be {kind}, got {raw!r}", line) from None

    def _validate(self):
        theorem = self._raw("experiment", "theorem")
        if theorem is not None and THEOREM_ALIASES.get(theorem, theorem) not in THEOREMS:
            raise ConfigError(f"unknown theorem id {theorem!r}", self._line("experiment", "theorem"))
        options = {key: self._typed("exponents", key) for key in SECTIONS["exponents"]}
        try:
            self._exponents = ExponentConfig(**{k: v for k, v in options.items() if v is not None})
        except ValidationError as exc:
            raise ConfigError(str(exc), self._line("exponents")) from None
        for key in MESH_DEFAULTS:
            self._typed("mesh", key)
        if self.refine < 1:
            raise ConfigError("refine must be at least 1", self._line("mesh", "refine"))
        for key in ("u", "v1", "v2", "w1", "w2"):
            self._check_weight_spec(key)
        self._bumps = self._parse_bumps()
        self._check_family()
        self._check_commutator()
        for key in SECTIONS["steinweiss"]:
            self._typed("steinweiss", key)
        fmt = self._raw("output", "format")
        if fmt is not None and fmt not in OUTPUT_FORMATS:
            raise ConfigError(f"output format must be json or csv, got {fmt!r}", self._line("output", "format"))

    def _check_weight_spec(self, key):
        spec = self._raw("weights", key)
        if spec is None or spec == "one" or _POWER.match(spec) or spec.startswith("file:"):
            return
        raise ConfigError(f"weight {key} must be power(a), one or file:<path>, got {spec!r}", self._line("weights", key))

    def _parse_bumps(self):
        entries = self.values.get("bumps")
        if not entries:
            return None
        parsed = {key: parse_young(text, self._line("bumps", key)) for key, text in entries.items()}
        if "phi1" not in parsed or "phi2" not in parsed:
            raise ConfigError("[bumps] needs phi1 and phi2", self._line("bumps"))
        return BumpSelection(parsed["phi1"], parsed["phi2"], parsed.get("psi"))

    def _check_family(self):
        kind = self.family_kind
        if kind not in FAMILY_KINDS or kind == "thmG-necessity":
            raise ConfigError(f"unknown family kind {kind!r}", self._line("family", "kind"))
        if self.pairing not in ("all", "diagonal"):
            raise ConfigError(f"pairing must be all or diagonal, got {self.pairing!r}", self._line("family", "pairing"))
        self.family_params()

    def _check_commutator(self):
        entries = self.values.get("commutator")
        if entries is None:
            return
        if "symbols" not in entries or "slots" not in entries:
            raise ConfigError("[commutator] needs symbols and slots", self._line("commutator"))
        symbols = [s.strip() for s in entries["symbols"].split(",")]
        slots = _number_list(entries["slots"], self._line("commutator", "slots"), int)
        if len(symbols) != len(slots):
            raise ConfigError("every commutator symbol needs exactly one slot", self._line("commutator", "slots"))
        for symbol in symbols:
            if symbol not in SYMBOL_KINDS and not symbol.startswith("file:"):
                raise ConfigError(f"unknown symbol {symbol!r}", self._line("commutator", "symbols"))

    # -- experiment ------------------------------------------------------------------------------

    @property
    def theorem(self):
        theorem = self._raw("experiment", "theorem")
        return THEOREM_ALIASES.get(theorem, theorem)

    @property
    def label(self):
        return self._raw("experiment", "label", "")

    @property
    def seed(self):
        return self._typed("experiment", "seed", 0)

    @property
    def exponents(self):
        return self._exponents

    @property
    def half_width_level(self):
        return self._typed("mesh", "L0", MESH_DEFAULTS["L0"])

    @property
    def level(self):
        return self._typed("mesh", "L", MESH_DEFAULTS["L"])

    @property
    def refine(self):
        return self._typed("mesh", "refine", MESH_DEFAULTS["refine"])

    @property
    def widths(self):
        raw = self._raw("mesh", "widths")
        if raw is None:
            return list(SECTION10_WIDTHS)
        return _number_list(raw, self._line("mesh", "widths"), int)

    def ladder(self):
        return [self.level + k for k in range(self.refine)]

    def mesh(self, level=None):
        return (self.exponents.n, self.half_width_level, self.level if level is None else level)

    def scan(self, f):
        return CubeScan.for_function(
            f,
            density=self._typed("mesh", "scan_density", MESH_DEFAULTS["scan_density"]),
            random_count=self._typed("mesh", "random_cubes", MESH_DEFAULTS["random_cubes"]),
            seed=self.seed,
            threads=self.threads,
        )

    # -- weights -----------------------------------------------------------------------------

    def load_grid(self, name, level):
        f = load_any(resolve_fixture(name, self.base_dir))
        if (f.dimension, f.half_width_level) != (self.exponents.n, self.half_width_level):
            raise ValidationError(f"fixture {name} lives on a different box than the experiment")
        return _resample(f, level)

    def weight(self, key, level):
        spec = self._raw("weights", key, "one")
        mesh = self.mesh(level)
        if spec == "one":
            return GridFunction.constant(1.0, *mesh)
        power = _POWER.match(spec)
        if power:
            return GridFunction.power_weight(float(power.group(1)), *mesh)
        return self.load_grid(spec[len("file:"):], level)

    def weight_triple(self, level):
        entries = self.values.get("weights", {})
        if "w1" in entries or "w2" in entries:
            cfg = self.exponents
            return WeightTriple.one_weight(self.weight("w1", level), self.weight("w2", level), cfg.q, cfg.p1, cfg.p2)
        return WeightTriple(self.weight("u", level), self.weight("v1", level), self.weight("v2", level))

    def power_exponents(self, *keys):
        exponents = []
        for key in keys:
            spec = self._raw("weights", key, "one")
            power = _POWER.match(spec)
            if spec == "one":
                exponents.append(0.0)
            elif power:
                exponents.append(float(power.group(1)))
            else:
                raise ValidationError(f"weight {key} must be a power weight here, got {spec!r}")
        return exponents

    @property
    def bumps(self):
        return self._bumps

    @property
    def steinweiss(self):
        if "steinweiss" not in self.values:
            return None
        missing = [key for key in SECTIONS["steinweiss"] if key not in self.values["steinweiss"]]
        if missing:
            raise ConfigError(f"[steinweiss] is missing {', '.join(missing)}", self._line("steinweiss"))
        return {key: self._typed("steinweiss", key) for key in SECTIONS["steinweiss"]}

    # -- test family -----------------------------------------------------------------------------

    @property
    def family_kind(self):
        return self._raw("family", "kind", "indicator")

    @property
    def pairing(self):
        return self._raw("family", "pairing", "all")

    @property
    def family_seed(self):
        return self._typed("family", "seed", self.seed)

    def family_params(self):
        kind, n = self.family_kind, self.exponents.n
        params = {}
        for key in ("count", "block_level"):
            value = self._typed("family", key)
            if value is not None:
                params[key] = value
        cubes = self._raw("family", "cubes")
        if cubes is not None:
            params["cubes"] = _cube_list(cubes, n, self._line("family", "cubes"))
        exponents = self._raw("family", "exponents")
        if exponents is not None:
            params["exponents"] = _number_list(exponents, self._line("family", "exponents"))
        support = self._raw("family", "support")
        if support is not None:
            line = self._line("family", "support")
            params["support"] = _cube_list(support, n, line)[0] if kind == "random-nonnegative" else self._typed("family", "support")
        return params or None

    def family_members(self, level):
        return make_test_family(self.family_kind, self.family_params(), self.family_seed, *self.mesh(level))

    def pairs(self, level):
        return pair_family(self.family_members(level), self.pairing)

    def family_manifest(self, level):
        return family_manifest(self.family_kind, self.family_params(), self.family_seed, *self.mesh(level))

    # -- commutator ------------------------------------------------------------------------------

    def commutator_spec(self, level):
        entries = self.values.get("commutator")
        if entries is None:
            return None
        mesh = self.mesh(level)
        symbols = []
        for name in (s.strip() for s in entries["symbols"].split(",")):
            symbols.append(self.load_grid(name[len("file:"):], level) if name.startswith("file:") else SYMBOL_KINDS[name](*mesh))
        slots = _number_list(entries["slots"], self._line("commutator", "slots"), int)
        return CommutatorSpec(symbols, slots)

    # -- output ----------------------------------------------------------------------------------

    @property
    def output_path(self):
        return self._raw("output", "path")

    @property
    def output_format(self):
        return self._raw("output", "format", "json")


# Example use case
if __name__ == "__main__":
    config = ExperimentConfig.parse(
        "[experiment]\ntheorem = thmE\n\n[exponents]\nalpha = 0.5\np1 = 4\np2 = 4\nr = 1.5\n\n"
        "[weights]\nu = power(0.2)\nv1 = power(0.3)\nv2 = power(-0.2)\n"
    )
    print(config.emit())
    print(config.exponents, config.ladder())
