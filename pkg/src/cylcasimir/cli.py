"""Command-line front end.

Subcommands
-----------
compute      one record per boundary condition
sweep        records over a log-spaced radius or plasma-frequency grid
convergence  per-order contributions and partial sums
materials    the built-in material table

Exit codes: 0 success, 2 usage error, 3 numerical non-convergence.
"""
import argparse
from concurrent.futures import ProcessPoolExecutor
import csv
from dataclasses import asdict, dataclass, fields
import io
import json
import logging
import math
import os
import sys

import numpy as np

from .errors import CasimirError, QuadratureError, UnknownMaterialError
from .integrands import IntegrandKind
from .pressure import (
    Geometry, MaterialSpec, builtin_materials, cutoff_from_material,
    force_per_unit, get_material, resolve_c, stress_difference,
)
from .quadrature import QuadConfig, SumConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NONCONVERGED = 3
OUTPUT_DIR_ENV = "CYLCASIMIR_OUTPUT_DIR"


@dataclass
class OutputRecord:
    bc: str
    material: str
    a_meters: float
    omega_p: float
    x_cutoff: float
    sigma: float
    force_coeff: float
    si_force: float
    m_used: int
    converged: bool
    tail_estimate: float


RECORD_FIELDS = [f.name for f in fields(OutputRecord)]


class UsageError(Exception):
    pass


def _fmt_machine(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    if v is None:
        return ""
    return str(v)


def _fmt_human(v):
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return format(v, ".6g")
    if v is None:
        return "-"
    return str(v)


def records_to_csv(records, columns=RECORD_FIELDS):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in records:
        d = r if isinstance(r, dict) else asdict(r)
        w.writerow([_fmt_machine(d[c]) for c in columns])
    return buf.getvalue()


def records_from_csv(text):
    """Parse CSV written by ``records_to_csv`` back into OutputRecords."""
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        out.append(OutputRecord(
            bc=row["bc"], material=row["material"],
            a_meters=float(row["a_meters"]), omega_p=float(row["omega_p"]),
            x_cutoff=float(row["x_cutoff"]), sigma=float(row["sigma"]),
            force_coeff=float(row["force_coeff"]),
            si_force=float(row["si_force"]) if row["si_force"] else None,
            m_used=int(row["m_used"]), converged=row["converged"] == "true",
            tail_estimate=float(row["tail_estimate"])))
    return out


def records_to_human(records, columns=RECORD_FIELDS):
    rows = [[_fmt_human((r if isinstance(r, dict) else asdict(r))[c]) for c in columns]
            for r in records]
    widths = [max(len(c), *(len(row[i]) for row in rows)) if rows else len(c)
              for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in rows]
    return "\n".join(lines) + "\n"


def _positive_float(s):
    v = float(s)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {s}")
    return v


def _nonneg_int(s):
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {s}")
    return v


def _range_spec(s):
    try:
        lo, hi, n = s.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:n, got {s}") from None
    if not (lo > 0 and hi >= lo and n >= 1):
        raise argparse.ArgumentTypeError("range needs 0 < lo <= hi and n >= 1")
    return lo, hi, n


def _common_options(p):
    src = p.add_mutually_exclusive_group()
    src.add_argument("--material", help="built-in material name (gold, silver)")
    src.add_argument("--omega-p", type=_positive_float,
                     help="plasma frequency in rad/s")
    p.add_argument("--radius", type=_positive_float,
                   help="shell radius in metres (default 1e-7)")
    p.add_argument("--bc", choices=["dirichlet", "neumann", "both"],
                   help="boundary condition (default both; never summed)")
    p.add_argument("--c", help="speed of light in m/s, or 'codata'/'rounded' "
                   "(rounded = 3e8; default codata)")
    p.add_argument("--m-max", type=_nonneg_int,
                   help="highest azimuthal order summed (default 1000)")
    p.add_argument("--rel-tol", type=_positive_float,
                   help="relative quadrature tolerance (default 1e-9)")
    p.add_argument("--tail-threshold", type=float,
                   help="early-stop ratio |last order| / |partial sum|; "
                   "0 forces exactly m-max orders (default 1e-6)")
    p.add_argument("--format", choices=["json", "csv", "human"],
                   help="output format (default json)")
    p.add_argument("--output", help="write to FILE instead of stdout; relative "
                   f"paths are placed under ${OUTPUT_DIR_ENV} when set")
    p.add_argument("--config", help="file of key=value lines mirroring the "
                   "flags; flags override the file")


DEFAULTS = {
    "radius": 1e-7, "bc": "both", "c": "codata", "m_max": 1000,
    "rel_tol": 1e-9, "tail_threshold": 1e-6, "format": "json",
    "workers": 1,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cylcasimir",
        description="Cutoff-regularised Casimir stress on a conducting "
                    "cylindrical shell (Dirichlet and Neumann, reported separately).")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    parser.commands = sub.choices

    p = sub.add_parser("compute", help="single computation")
    _common_options(p)

    p = sub.add_parser("sweep", help="log-spaced sweep over radius or omega_p")
    _common_options(p)
    grid = p.add_mutually_exclusive_group()
    grid.add_argument("--radius-range", type=_range_spec, metavar="LO:HI:N")
    grid.add_argument("--omega-p-range", type=_range_spec, metavar="LO:HI:N")
    p.add_argument("--workers", type=_nonneg_int,
                   help="worker processes for grid points (default 1)")

    p = sub.add_parser("convergence", help="per-order contributions and partial sums")
    _common_options(p)

    p = sub.add_parser("materials", help="list built-in materials")
    p.add_argument("--format", choices=["json", "csv", "human"])
    p.add_argument("--output")
    p.add_argument("--config")
    return parser


def read_config(path):
    """key=value pairs; '#' starts a comment; keys may use - or _."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            k, v = line.split("=", 1)
            out[k.strip().lstrip("-").replace("-", "_")] = v.strip()
    return out


def _merge_config(parser, args):
    actions = {a.dest: a for a in parser.commands[args.command]._actions}
    if args.config:
        cfg = read_config(args.config)
        source_given = getattr(args, "material", None) or getattr(args, "omega_p", None)
        for key, raw in cfg.items():
            if key not in actions or key == "config":
                raise UsageError(f"unknown config key {key!r}")
            if key in ("material", "omega_p") and source_given:
                continue
            if getattr(args, key) is not None:
                continue
            conv = actions[key].type or str
            try:
                val = conv(raw)
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise UsageError(f"bad config value for {key}: {exc}") from None
            if actions[key].choices and val not in actions[key].choices:
                raise UsageError(f"bad config value for {key}: {raw}")
            setattr(args, key, val)
        if getattr(args, "material", None) and getattr(args, "omega_p", None):
            raise UsageError("config gives both material and omega-p")
    for key, val in DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, val)
    return args


def _configs(args):
    return (QuadConfig(rel_tol=args.rel_tol),
            SumConfig(m_max=args.m_max, tail_rel_threshold=args.tail_threshold))


def _material(args):
    if args.material is not None:
        return get_material(args.material)
    if args.omega_p is not None:
        return MaterialSpec("custom", args.omega_p)
    raise UsageError("give exactly one of --material or --omega-p")


def _bcs(args):
    return ["dirichlet", "neumann"] if args.bc == "both" else [args.bc]


def compute_record(bc, mat, a, c, qcfg, scfg):
    """One OutputRecord; a quadrature failure yields a NaN record."""
    geom = Geometry(a)
    cut = cutoff_from_material(mat, geom, c)
    try:
        res = force_per_unit(stress_difference(bc, cut, qcfg, scfg), geom)
    except QuadratureError as exc:
        logger.warning("%s at a=%g, omega_p=%g failed: %s", bc, a, mat.omega_p, exc)
        nan = float("nan")
        return OutputRecord(bc, mat.name, a, mat.omega_p, cut.x_cutoff, nan, nan,
                            nan, 0, False, nan)
    return OutputRecord(
        bc=bc, material=mat.name, a_meters=a, omega_p=mat.omega_p,
        x_cutoff=cut.x_cutoff, sigma=res.sigma, force_coeff=res.force_coeff,
        si_force=res.si_force, m_used=res.m_used, converged=res.converged,
        tail_estimate=res.tail_estimate)


def _compute_task(task):
    return compute_record(*task)


def _emit_records(records, fmt, lines=False):
    if fmt == "csv":
        return records_to_csv(records)
    if fmt == "human":
        return records_to_human(records)
    dicts = [asdict(r) for r in records]
    if lines:
        return "".join(json.dumps(d) + "\n" for d in dicts)
    return json.dumps(dicts[0] if len(dicts) == 1 else dicts, indent=2) + "\n"


def cmd_compute(args):
    mat = _material(args)
    c = resolve_c(args.c)
    qcfg, scfg = _configs(args)
    records = [compute_record(bc, mat, args.radius, c, qcfg, scfg) for bc in _bcs(args)]
    return records, _emit_records(records, args.format)


def sweep_tasks(args):
    c = resolve_c(args.c)
    qcfg, scfg = _configs(args)
    if args.omega_p_range is not None:
        lo, hi, n = args.omega_p_range
        mats = [MaterialSpec("custom", w) for w in np.logspace(np.log10(lo), np.log10(hi), n)]
        radii = [args.radius] * n
    else:
        mat = _material(args)
        if args.radius_range is not None:
            lo, hi, n = args.radius_range
            radii = [float(r) for r in np.logspace(np.log10(lo), np.log10(hi), n)]
        else:
            radii = [args.radius]
        mats = [mat] * len(radii)
    return [(bc, m, float(a), c, qcfg, scfg)
            for m, a in zip(mats, radii) for bc in _bcs(args)]


def cmd_sweep(args):
    tasks = sweep_tasks(args)
    if args.workers and args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            records = list(pool.map(_compute_task, tasks))
    else:
        records = [_compute_task(t) for t in tasks]
    return records, _emit_records(records, args.format, lines=True)


CONVERGENCE_FIELDS = ["bc", "family", "m", "contribution", "order_sum", "running_total"]


def convergence_rows(res):
    """Rows of per-order data for every family in a PressureResult.

    ``order_sum`` is the plain sum of contributions over 1..m (0 at m = 0);
    ``running_total`` is contribution(0) + 2 * order_sum.
    """
    rows = []
    for kind, osr in res.convergence.items():
        acc = 0.0
        c0 = 0.0
        for m, c in osr.per_m:
            if m == 0:
                c0 = c
            else:
                acc += c
            rows.append({"bc": res.bc.value, "family": IntegrandKind(kind).value,
                         "m": m, "contribution": c, "order_sum": acc,
                         "running_total": c0 + 2.0 * acc})
    return rows


def cmd_convergence(args):
    mat = _material(args)
    c = resolve_c(args.c)
    qcfg, scfg = _configs(args)
    geom = Geometry(args.radius)
    cut = cutoff_from_material(mat, geom, c)
    rows = []
    converged = True
    for bc in _bcs(args):
        res = stress_difference(bc, cut, qcfg, scfg)
        converged &= res.converged
        rows.extend(convergence_rows(res))
    if args.format == "csv":
        text = records_to_csv(rows, CONVERGENCE_FIELDS)
    elif args.format == "human":
        text = records_to_human(rows, CONVERGENCE_FIELDS)
    else:
        text = "".join(json.dumps(r) + "\n" for r in rows)
    return converged, text


def cmd_materials(args):
    rows = [{"name": m.name, "omega_p": m.omega_p} for m in builtin_materials()]
    fmt = args.format or "json"
    if fmt == "csv":
        return records_to_csv(rows, ["name", "omega_p"])
    if fmt == "human":
        return records_to_human(rows, ["name", "omega_p"])
    return json.dumps(rows, indent=2) + "\n"


def _write(text, output):
    if output is None:
        sys.stdout.write(text)
        return
    outdir = os.environ.get(OUTPUT_DIR_ENV)
    if outdir and not os.path.isabs(output):
        output = os.path.join(outdir, output)
    with open(output, "w") as fh:
        fh.write(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "materials":
            if args.config:
                args = _merge_config(parser, args)
            _write(cmd_materials(args), args.output)
            return EXIT_OK
        args = _merge_config(parser, args)
        if args.command == "convergence":
            converged, text = cmd_convergence(args)
            _write(text, args.output)
            return EXIT_OK if converged else EXIT_NONCONVERGED
        cmd = cmd_compute if args.command == "compute" else cmd_sweep
        records, text = cmd(args)
    except (UsageError, UnknownMaterialError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) else exc
        parser.error(str(msg))
    except CasimirError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    _write(text, args.output)
    return EXIT_OK if all(r.converged for r in records) else EXIT_NONCONVERGED


if __name__ == "__main__":
    sys.exit(main())
