"""Command-line front end: self-test suites, model scans and region evaluation.

Exit codes: 0 when every enabled check passes, 1 on a failed check (a JSON
failure record goes to stderr), 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Sequence

import numpy as np

from . import suites
from .causal1d import describe
from .modular import SCHEMA
from .regionexpr import RegionSyntaxError, eval_region
from .scalarmodel import PositionModel, RapidityModel, checks
from .scalarmodel.calibration import EPS_LATTICE
from .suites import SuiteResult


def load_config(path: str) -> Dict[str, str]:
    """Flat `key = value` file; '#' starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for n, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{n}: expected key = value")
            k, v = (s.strip() for s in line.split("=", 1))
            out[k.replace("-", "_")] = v
    return out


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("MODLOC_THREADS", "1")))
    except ValueError:
        return 1


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def render_csv(results: Sequence[SuiteResult], with_suite: bool = False) -> str:
    extra: List[str] = []
    for r in results:
        for k in r.extra:
            if k not in extra:
                extra.append(k)
    head = ["schema"] + (["suite"] if with_suite else []) + ["parameter", "value", "bound", "pass"] + extra
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(head)
    for r in results:
        for row in r.rows:
            line = [SCHEMA] + ([r.name] if with_suite else []) + [
                _fmt(row["parameter"]), _fmt(row["value"]), _fmt(row["bound"]), _fmt(row["ok"])]
            line += [_fmt(row.get(k, "")) for k in extra]
            w.writerow(line)
    return buf.getvalue()


def _failure_record(command: str, results: Sequence[SuiteResult]) -> str:
    fails = []
    for r in results:
        for row in r.failures:
            fails.append({"suite": r.name, "parameter": _fmt(row["parameter"]),
                          "value": row["value"] if isinstance(row["value"], (int, float)) else _fmt(row["value"]),
                          "bound": row["bound"] if isinstance(row["bound"], (int, float)) else _fmt(row["bound"])})
    return json.dumps({"schema": SCHEMA, "command": command, "status": "fail", "failures": fails}, sort_keys=True)


def _emit(args, results: Sequence[SuiteResult], with_suite: bool = False) -> int:
    text = render_csv(results, with_suite)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if all(r.ok for r in results):
        return 0
    sys.stderr.write(_failure_record(args.command, results) + "\n")
    return 1


def _position(args) -> PositionModel:
    a = args.a if args.a is not None else 0.05 / args.m
    return PositionModel(args.N, a, args.m)


# -- subcommands --------------------------------------------------------------------


def cmd_gleason(args) -> int:
    if args.dim < 2 or args.dim % 2:
        raise ValueError("--dim must be a positive even number")
    return _emit(args, [suites.gleason_suite(args.dim // 2, args.samples, args.seed)])


def cmd_lattice(args) -> int:
    res = [suites.lattice_suite(args.n_max, args.samples, args.seed),
           suites.defect_suite(args.samples, args.seed),
           suites.causal_suite(min(args.samples, 100), 10_000, args.seed)]
    return _emit(args, res, with_suite=True)


def cmd_modular(args) -> int:
    res = suites.modular_suite(range(args.n_min, args.n_max + 1), args.samples, args.seed)
    return _emit(args, [res])


def cmd_region(args) -> int:
    O = eval_region(args.expr)
    out = O.to_json() if args.json else describe(O)
    sys.stdout.write(out + "\n")
    return 0


def cmd_cluster_scan(args) -> int:
    pm = _position(args)
    ds = np.linspace(args.dmin, args.dmax, args.steps)
    with ThreadPoolExecutor(_threads()) as ex:
        res = checks.cluster_scan(pm, ds, args.length, args.slack, mapper=ex.map)
    return _emit(args, [res])


def cmd_commutator(args) -> int:
    return _emit(args, [checks.commutator_scan(_position(args), args.samples, args.seed)])


def cmd_audit(args) -> int:
    return _emit(args, [checks.observable_audit(_position(args))])


def cmd_nw(args) -> int:
    return _emit(args, [checks.nw_compare(_position(args), n_iter=args.n_iter)])


def cmd_bgl(args) -> int:
    rm = RapidityModel(args.M, args.Theta, args.m, args.kappa_max)
    return _emit(args, [checks.bgl_wedge(rm)])


# -- parser ----------------------------------------------------------------------------


def _common(p, seed=True):
    p.add_argument("--config", help="flat key = value file with option defaults")
    p.add_argument("--output", "-o", help="write CSV here instead of stdout")
    if seed:
        p.add_argument("--seed", type=int, default=0)


def _model_opts(p):
    p.add_argument("--N", type=int, default=1024)
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--a", type=float, default=None, help="lattice spacing (default 0.05/m)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="modloc", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("gleason", help="symplectic Gleason measure self-test")
    _common(p)
    p.add_argument("--dim", type=int, default=8)
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(func=cmd_gleason)

    p = sub.add_parser("lattice-selftest", help="real-subspace lattice, defect and causal invariants")
    _common(p)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("modular", help="Tomita round-trip suite")
    _common(p)
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--samples", type=int, default=100)
    p.set_defaults(func=cmd_modular)

    p = sub.add_parser("region", help="evaluate a region expression")
    p.add_argument("expr")
    p.add_argument("--json", action="store_true", help="print the box list even for points")
    p.add_argument("--config", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("cluster-scan", help="cluster bound distance sweep")
    _common(p)
    _model_opts(p)
    p.add_argument("--dmin", type=float, default=2.0, help="in units of 1/m")
    p.add_argument("--dmax", type=float, default=6.0)
    p.add_argument("--steps", type=int, default=9)
    p.add_argument("--length", type=float, default=None, help="interval length (default 1/m)")
    p.add_argument("--slack", type=float, default=EPS_LATTICE)
    p.set_defaults(func=cmd_cluster_scan)

    p = sub.add_parser("commutator", help="commutator function at spacelike and timelike points")
    _common(p)
    _model_opts(p)
    p.add_argument("--samples", type=int, default=100)
    p.set_defaults(func=cmd_commutator)

    p = sub.add_parser("observable-audit", help="observable axioms for local subspaces")
    _common(p)
    _model_opts(p)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("nw-compare", help="Newton-Wigner against modular localization")
    _common(p)
    _model_opts(p)
    p.add_argument("--n-iter", type=int, default=200)
    p.set_defaults(func=cmd_nw)

    p = sub.add_parser("bgl-wedge", help="rapidity-model wedge residual report")
    _common(p)
    p.add_argument("--M", type=int, default=512)
    p.add_argument("--Theta", type=float, default=12.0)
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--kappa-max", type=float, default=8.0)
    p.set_defaults(func=cmd_bgl)
    ap.commands = dict(sub.choices)
    return ap


def _apply_config(ap, args, path: str):
    """Config values become subcommand defaults; explicit flags still win."""
    cfg = load_config(path)
    dests = {name: {a.dest for a in p._actions} for name, p in ap.commands.items()}
    everywhere = set().union(*dests.values())
    unknown = sorted(set(cfg) - everywhere)
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(unknown)}")
    mine = {k: v for k, v in cfg.items() if k in dests[args.command]}
    ap.commands[args.command].set_defaults(**mine)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        if getattr(args, "config", None):
            _apply_config(ap, args, args.config)
            args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    except (ValueError, OSError) as e:
        sys.stderr.write(f"modloc: {e}\n")
        return 2
    try:
        return args.func(args)
    except RegionSyntaxError as e:
        sys.stderr.write(f"modloc: syntax error: {e}\n")
        return 2
    except (ValueError, OSError) as e:
        sys.stderr.write(f"modloc: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
