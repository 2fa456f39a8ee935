# "src/cli/commands.py"

## The `bifrac` command line: one argparse subcommand per lab operation.
## - orlicz, bi-alpha, maximal, commutator: evaluate one object on the configured mesh
## - weights: a bump, A_p, A_infinity or John-Nirenberg constant of the configured weights
## - sparse: the Calderón-Zygmund selection of the first configured pair, written as JSON
## - verify: a TheoremReport for one theorem id (or the designed one-weight set)
## - sweep: verify over several theorems and box widths, one CSV row per resolution
## Every subcommand shares --config, --out, --format, --seed, --threads, --refine and
## --archive. Exit status is 0 on success, 2 on a validation failure and 3 on a numeric one.

import argparse
import json
import logging
from pathlib import Path

import pandas as pd

from ..analysis.report_export import ReportExporter
from ..db.database import ReportArchive
from ..dyadic.cube import Cube
from ..dyadic.grid import DyadicGrid
from ..errors import LabError, NumericFailure, ValidationError
from ..operators.bilinear import bi_alpha
from ..operators.commutators import commutator_direct, commutator_kernel
from ..operators.maximal import m_orlicz_alpha
from ..signal.grid_function import GridFunction
from ..signal.serialization import save_csv
from ..sparse.selection import cz_select
from ..verify.report import jsonable
from ..verify.theorems import one_weight_equivalence, verify_theorem
from ..weights.bmo import john_nirenberg_check
from ..weights.bump_conditions import BUMP_KINDS, bump_constant
from ..weights.muckenhoupt import ainfty_reverse_holder, ap_constant
from ..young.bumps import parse_young
from ..young.orlicz import orlicz_norm, orlicz_norm_prime
from .config import THEOREM_ALIASES, ExperimentConfig
from .logging_config import configure_logging, print_line, print_table

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3

WEIGHT_KINDS = BUMP_KINDS + ("ap", "ainfty", "bmo")


# -- output ------------------------------------------------------------------------------------


def _target(args, config):
    return args.out or config.output_path, args.format or config.output_format


def _write(args, config, record, table=None, field=None):
    """JSON record, or CSV of `table` (a DataFrame) / `field` (a GridFunction)."""
    path, fmt = _target(args, config)
    if path is None:
        return None
    if fmt == "csv":
        if field is not None:
            save_csv(field, path)
        else:
            frame = table if table is not None else pd.DataFrame([{k: v for k, v in record.items() if not isinstance(v, (dict, list))}])
            frame.to_csv(path, index=False, na_rep="")
    else:
        Path(path).write_text(json.dumps(jsonable(record), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info("wrote %s", path)
    return path


def _archive(args, config, reports):
    if not args.archive:
        return []
    archive = ReportArchive(args.archive)
    try:
        ids = [archive.save_report(report) for report in reports]
        archive.save_run(args.command, config.emit(), EXIT_OK, ids)
    finally:
        archive.close()
    return ids


def _first_pair(config):
    return config.pairs(config.level)[0]


def _field_record(name, field, **extra):
    return {
        "operator": name,
        "mesh": {"n": field.dimension, "L0": field.half_width_level, "L": field.level},
        "max": float(field.values.max()),
        "integral": field.total_integral(),
        "values": field.values.tolist(),
        **extra,
    }


# -- subcommands -------------------------------------------------------------------------------


def run_orlicz(args, config):
    phi = parse_young(args.phi)
    n = config.exponents.n
    cube = Cube((0.0,) * n, 1.0)
    if args.indicator is not None:
        if not 0 < args.indicator <= 1:
            raise ValidationError(f"--indicator is the measure |E|/|Q| in (0, 1], got {args.indicator}")
        f = GridFunction.indicator(Cube((0.0,) * n, args.indicator ** (1.0 / n)), *config.mesh())
    else:
        f = config.family_members(config.level)[0]
    norm = orlicz_norm(f, cube, phi)
    record = {"phi": str(phi), "cube": cube.to_dict(), "luxemburg": norm, "kr": orlicz_norm_prime(f, cube, phi)}
    _write(args, config, record)
    print_line(f"{norm:.6g}")
    return EXIT_OK


def _alpha(args, config):
    return args.alpha if args.alpha is not None else config.exponents.alpha


def run_bi_alpha(args, config):
    f, g = _first_pair(config)
    alpha = _alpha(args, config)
    field = bi_alpha(f, g, alpha, config.threads)
    record = _field_record("bi-alpha", field, alpha=alpha)
    _write(args, config, record, field=field)
    print_line(f"BI_{alpha:g}: max {record['max']:.6g}, integral {record['integral']:.6g}")
    return EXIT_OK


def run_maximal(args, config):
    f, g = _first_pair(config)
    alpha = _alpha(args, config)
    bumps = config.bumps
    phi, psi = (bumps.phi1, bumps.phi2) if bumps is not None else (None, None)
    grid = DyadicGrid.from_label(args.grid, f.dimension) if args.dyadic else None
    field = m_orlicz_alpha(f, g, phi, psi, alpha, grid=grid, threads=config.threads)
    record = _field_record("maximal", field, alpha=alpha, grid=grid.label if grid else "scan")
    _write(args, config, record, field=field)
    print_line(f"M_{alpha:g}: max {record['max']:.6g}")
    return EXIT_OK


def run_commutator(args, config):
    spec = config.commutator_spec(config.level)
    if spec is None:
        raise ValidationError("the commutator subcommand needs a [commutator] section")
    f, g = _first_pair(config)
    alpha = _alpha(args, config)
    route = commutator_kernel if args.route == "kernel" else commutator_direct
    field = route(spec, f, g, alpha, config.threads)
    record = _field_record("commutator", field, alpha=alpha, route=args.route, **spec.to_dict())
    _write(args, config, record, field=field)
    print_line(f"commutator N={spec.N} m={spec.m} ({args.route}): max |.| {float(abs(field).values.max()):.6g}")
    return EXIT_OK


def run_weights(args, config):
    cfg = config.exponents
    kind = args.kind
    if kind == "bmo":
        spec = config.commutator_spec(config.level)
        if spec is None:
            raise ValidationError("--kind bmo reads the symbols of the [commutator] section")
        records = [john_nirenberg_check(b, config.scan(b)).to_record() for b in spec.symbols]
        record = {"kind": kind, "symbols": records}
        value = max(entry["bmo"] for entry in records)
    else:
        weights = config.weight_triple(config.level)
        scan = config.scan(weights.u)
        if kind == "ap":
            record = ap_constant(weights.u, cfg.p, scan).to_record(kind=kind, p=cfg.p)
            value = record["constant"]
        elif kind == "ainfty":
            m, value = ainfty_reverse_holder(weights.u, scan)
            record = {"kind": kind, "exponent": m, "constant": value}
        else:
            record = bump_constant(kind, weights, cfg, scan, config.bumps).to_record(kind=kind, weights=weights.to_dict())
            value = record["constant"]
    _write(args, config, record)
    print_line(f"{kind} = {value:.6g}")
    return EXIT_OK


def run_sparse(args, config):
    f, g = _first_pair(config)
    n = f.dimension
    a = args.a if args.a is not None else 2.0 ** (2 * n + 4)
    bumps = config.bumps
    phi, psi = (bumps.phi1, bumps.phi2) if bumps is not None else (None, None)
    grid = DyadicGrid.from_label(args.grid, n)
    family = cz_select(
        f, g, phi, psi, a, grid, alpha=config.exponents.alpha, include_volume_factor=args.volume_factor
    )
    invariants = family.check_invariants()
    record = {**family.to_dict(), "invariants": invariants}
    _write(args, config, record)
    print_line(
        f"{len(family)} cubes on {grid.label}, k in {family.k_range}, "
        f"min |E|/|Q| = {invariants['min_carved_ratio']}"
    )
    return EXIT_OK


def _theorem(name):
    return THEOREM_ALIASES.get(name, name)


def run_verify(args, config):
    if args.designed_set:
        rows = one_weight_equivalence(
            half_width_level=config.half_width_level, levels=config.ladder(), threads=config.threads
        )
        table = pd.DataFrame([{k: v for k, v in row.items() if k not in ("constants", "ratios")} for row in rows])
        _write(args, config, {"one_weight_equivalence": rows}, table=table)
        print_line(f"one-weight equivalence: {sum(row['agrees'] for row in rows)}/{len(rows)} pairs agree")
        return EXIT_OK
    theorem = _theorem(args.theorem or config.theorem or "")
    if not theorem:
        raise ValidationError("no theorem given (use --theorem or [experiment] theorem)")
    report = verify_theorem(theorem, config)
    exporter = ReportExporter([report])
    path, fmt = _target(args, config)
    if path is not None and fmt == "json":
        Path(path).write_text(report.to_json() + "\n", encoding="utf-8")
        logger.info("wrote %s", path)
    else:
        _write(args, config, report.to_dict(), table=exporter.rows_table())
    _archive(args, config, [report])
    print_line(report.summary())
    return EXIT_OK


def run_sweep(args, config):
    theorems = [_theorem(t.strip()) for t in (args.theorems or config.theorem or "").split(",") if t.strip()]
    if not theorems:
        raise ValidationError("no theorem to sweep (use --theorems or [experiment] theorem)")
    widths = [int(w) for w in args.widths.split(",")] if args.widths else [config.half_width_level]
    reports = []
    for L0 in widths:
        scaled = config.with_overrides(half_width_level=L0)
        for theorem in theorems:
            reports.append(verify_theorem(theorem, scaled))
    exporter = ReportExporter(reports)
    path, fmt = _target(args, config)
    if path is not None and fmt == "json":
        exporter.to_json(path)
    elif path is not None:
        exporter.to_csv(path)
    _archive(args, config, reports)
    print_table("sweep", exporter.summary_table())
    print_line(f"sweep: {len(reports)} reports, {sum(r.passed for r in reports)} passed")
    return EXIT_OK


COMMANDS = {
    "orlicz": run_orlicz,
    "bi-alpha": run_bi_alpha,
    "maximal": run_maximal,
    "commutator": run_commutator,
    "weights": run_weights,
    "sparse": run_sparse,
    "verify": run_verify,
    "sweep": run_sweep,
}


# -- parser ------------------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="experiment file (resolved along $BIFRAC_FIXTURES)")
    common.add_argument("--out", help="artifact path")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--seed", type=int)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--refine", type=int, help="run the ladder L, L+1, ..., L+K-1")
    common.add_argument("--archive", help="sqlite file collecting the produced reports")
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("--quiet", action="store_true")

    parser = argparse.ArgumentParser(prog="bifrac", description="Weighted estimates for bilinear fractional integrals")
    sub = parser.add_subparsers(dest="command", required=True)

    orlicz = sub.add_parser("orlicz", parents=[common], help="Luxemburg and KR norms on the unit cube")
    orlicz.add_argument("--phi", default="power(2)", help='Young function, e.g. "llogl(1)"')
    orlicz.add_argument("--indicator", type=float, help="norm of chi_E with |E| = value inside Q = [0, 1)^n")

    bi = sub.add_parser("bi-alpha", parents=[common], help="BI_alpha of the first family pair")
    bi.add_argument("--alpha", type=float)

    maximal = sub.add_parser("maximal", parents=[common], help="M_{phi,psi,alpha} of the first family pair")
    maximal.add_argument("--alpha", type=float)
    maximal.add_argument("--dyadic", action="store_true", help="dyadic cubes of one grid only")
    maximal.add_argument("--grid", default="t0")

    commutator = sub.add_parser("commutator", parents=[common], help="iterated commutator of BI_alpha")
    commutator.add_argument("--alpha", type=float)
    commutator.add_argument("--route", choices=("kernel", "direct"), default="kernel")

    weights = sub.add_parser("weights", parents=[common], help="weight condition constants")
    weights.add_argument("--kind", choices=WEIGHT_KINDS, default="eq21")

    sparse = sub.add_parser("sparse", parents=[common], help="Calderón-Zygmund sparse selection")
    sparse.add_argument("--a", type=float, help="selection base, default 2^(2n+4)")
    sparse.add_argument("--grid", default="t0")
    sparse.add_argument("--volume-factor", action="store_true", help="select on |Q|^(alpha/n) avg f avg g")

    verify = sub.add_parser("verify", parents=[common], help="TheoremReport for one theorem")
    verify.add_argument("--theorem")
    verify.add_argument("--designed-set", action="store_true", help="the one-weight pass/fail set")

    sweep = sub.add_parser("sweep", parents=[common], help="verify over theorems and box widths")
    sweep.add_argument("--theorems", help="comma-separated theorem ids")
    sweep.add_argument("--widths", help="comma-separated L0 values")
    return parser


def _load_config(args):
    config = ExperimentConfig.load(args.config) if args.config else ExperimentConfig.default()
    return config.with_overrides(seed=args.seed, refine=args.refine, threads=args.threads)


def main(argv=None):
    args = build_parser().parse_args(argv)
    configure_logging(-1 if args.quiet else args.verbose)
    try:
        config = _load_config(args)
        return COMMANDS[args.command](args, config)
    except NumericFailure as exc:
        logger.error("numeric failure: %s", exc)
        return EXIT_NUMERIC
    except (LabError, ValueError) as exc:
        logger.error("invalid input: %s", exc)
        return EXIT_VALIDATION


# Example use case
if __name__ == "__main__":
    main(["orlicz", "--phi", "power(2)", "--indicator", "0.25"])
