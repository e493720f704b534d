"""Command-line front end.

Subcommands:

* ``run``      -- simulate a scenario, writing fields.csv, summary.txt and
                  contour figures into an existing output directory;
* ``riemann``  -- print the wave fan and interface flux of a single Riemann
                  problem (states given as ``rho,eta`` with eta in km/h);
* ``compare``  -- wave-count table of both models over state pairs;
* ``validate`` -- check a config file and its model constants.

Exit codes: 0 success, 1 usage/configuration error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import bwgpb, report, riemann, scenarios
from .bwgpb import BwgpbState, DEFAULT_PARAMS, compare_wave_counts, free_state
from .godunov import InstabilityError, run as run_sim
from .model import State, validate_params
from .riemann import WaveKind
from .scenarios import ScenarioConfig, builtin_scenario, load_config

USAGE_ERROR = 1
NUMERICAL_ERROR = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _parse_state(text: str) -> State:
    try:
        rho_s, eta_s = text.split(",")
        return State(float(rho_s), float(eta_s))
    except ValueError:
        raise SystemExit(USAGE_ERROR)


def _scenario_from_args(args) -> ScenarioConfig:
    if args.builtin:
        cfg = builtin_scenario(args.builtin)
    elif args.config:
        cfg = load_config(args.config)
    else:
        print("error: give a config file or --builtin", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)
    updates = {}
    if args.cells is not None:
        updates["n_cells"] = args.cells
    if args.cfl_mode is not None:
        updates["cfl_mode"] = args.cfl_mode
    if args.courant is not None:
        updates["courant"] = args.courant
    if args.t_final is not None:
        updates["t_final"] = args.t_final
    if args.out is not None:
        updates["out_dir"] = args.out
    if updates:
        from dataclasses import replace
        cfg = replace(cfg, **updates)
    return cfg


def cmd_run(args) -> int:
    try:
        cfg = _scenario_from_args(args)
        params = scenarios.model_params(cfg)
        issues = validate_params(params)
        if issues:
            for issue in issues:
                print(f"invalid model: {issue}", file=sys.stderr)
            return USAGE_ERROR
        out_dir = Path(cfg.out_dir)
        if not out_dir.is_dir():
            print(f"error: output directory {out_dir} does not exist",
                  file=sys.stderr)
            return USAGE_ERROR
        sim = scenarios.build_sim(cfg)
        policy = scenarios.cfl_policy(cfg)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR

    t0 = time.perf_counter()
    try:
        result = run_sim(sim, cfg.t_final, policy,
                         snapshot_every=cfg.snapshot_every,
                         workers=args.workers)
    except InstabilityError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR
    wall = time.perf_counter() - t0

    report.write_fields_csv(out_dir / "fields.csv", result, sim.grid, params)
    report.write_summary(out_dir / "summary.txt", result, sim.grid, params,
                         wall)
    if not args.no_plots:
        report.write_contours(out_dir, result, sim.grid, params)
    print(f"wrote {out_dir / 'fields.csv'} "
          f"({len(result.snapshots)} snapshots, {result.n_steps} steps, "
          f"{wall:.2f} s)")
    return 0


def _riemann_params(args):
    # Raw km/h units: speeds print on the familiar scale.
    if args.params:
        cfg = load_config(args.params)
    else:
        cfg = builtin_scenario(args.params_builtin)
    return scenarios.model_params(cfg, si=False)


def cmd_riemann(args) -> int:
    u_l = _parse_state(args.left)
    u_r = _parse_state(args.right)
    try:
        p = _riemann_params(args)
        issues = validate_params(p)
        if issues:
            for issue in issues:
                print(f"invalid model: {issue}", file=sys.stderr)
            return USAGE_ERROR
        fan = riemann.solve(u_l, u_r, p)
        flux = riemann.godunov_flux(u_l, u_r, p)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR

    if args.format == "csv":
        print("kind,rho_l,eta_l,rho_r,eta_r,speed_head,speed_tail")
        for w in fan.waves:
            print(f"{w.kind.value},{w.left.rho:.9g},{w.left.eta:.9g},"
                  f"{w.right.rho:.9g},{w.right.eta:.9g},"
                  f"{w.head_speed:.9g},{w.tail_speed:.9g}")
        print(f"flux,{flux[0]:.9g},{flux[1]:.9g}")
        return 0

    if not fan.waves:
        print("no waves")
    for w in fan.waves:
        if isinstance(w.speed, tuple):
            speed = f"speeds {w.speed[0]:.6g} .. {w.speed[1]:.6g}"
        else:
            speed = f"speed {w.speed:.6g}"
        print(f"{w.kind.value}: ({w.left.rho:.6g}, {w.left.eta:.6g}) -> "
              f"({w.right.rho:.6g}, {w.right.eta:.6g}), {speed}")
    middles = [w.right for w in fan.waves[:-1]]
    for m in middles:
        print(f"middle state: ({m.rho:.6g}, {m.eta:.6g})")
    print(f"interface flux: ({flux[0]:.6g}, {flux[1]:.6g})")
    return 0


def _demo_pairs():
    cmr = [(State(0.2, 24.0), State(0.9, 117.0))]
    bw = [
        (free_state(0.19, DEFAULT_PARAMS), BwgpbState(0.8, 0.16)),   # case 1
        (free_state(0.52, DEFAULT_PARAMS), BwgpbState(0.78, 0.2)),   # case 2
    ]
    return cmr, bw


def _load_pairs(path):
    cmr, bw = [], []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or line.startswith("model"):
                continue
            model, *vals = [part.strip() for part in line.split(",")]
            rho_l, aux_l, rho_r, aux_r = map(float, vals)
            if model == "cmr":
                cmr.append((State(rho_l, aux_l), State(rho_r, aux_r)))
            elif model == "bwgpb":
                bw.append((BwgpbState(rho_l, aux_l), BwgpbState(rho_r, aux_r)))
            else:
                raise ValueError(f"unknown model {model!r}")
    return cmr, bw


def cmd_compare(args) -> int:
    try:
        cmr_pairs, bw_pairs = (_load_pairs(args.pairs) if args.pairs
                               else _demo_pairs())
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR

    cfg = builtin_scenario("es1")
    cmr_params = scenarios.model_params(cfg, si=False)
    failures = 0
    print("model,rho_l,aux_l,rho_r,aux_r,n_waves")
    try:
        rows = compare_wave_counts(cmr_pairs, bw_pairs, cmr_params,
                                   DEFAULT_PARAMS)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR
    for row in rows:
        print(f"{row.model},{row.rho_l:.9g},{row.aux_l:.9g},"
              f"{row.rho_r:.9g},{row.aux_r:.9g},{row.n_waves}")
        bound = 2 if row.model == "cmr" else 3
        if row.n_waves > bound:
            print(f"FAILURE: {row.model} fan has {row.n_waves} waves "
                  f"(bound {bound})", file=sys.stderr)
            failures += 1
    return NUMERICAL_ERROR if failures else 0


def cmd_validate(args) -> int:
    try:
        cfg = load_config(args.config)
        params = scenarios.model_params(cfg)
        issues = validate_params(params)
        scenarios.initial_profiles(cfg)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    for issue in issues:
        print(f"violation: {issue}")
    if issues:
        return USAGE_ERROR
    print("ok")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="twophase",
                     description="Two-phase traffic model toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate a scenario")
    p_run.add_argument("config", nargs="?", help="scenario config file")
    p_run.add_argument("--builtin", choices=scenarios.BUILTIN_NAMES)
    p_run.add_argument("--cells", type=int)
    p_run.add_argument("--cfl-mode", choices=("safe", "paper"))
    p_run.add_argument("--courant", type=float)
    p_run.add_argument("--t-final", type=float)
    p_run.add_argument("--out")
    p_run.add_argument("--workers", type=int, default=1,
                       help="parallel chunks for interface fluxes")
    p_run.add_argument("--no-plots", action="store_true")
    p_run.set_defaults(func=cmd_run)

    p_rie = sub.add_parser("riemann", help="solve one Riemann problem")
    p_rie.add_argument("--left", required=True, metavar="RHO,ETA")
    p_rie.add_argument("--right", required=True, metavar="RHO,ETA")
    p_rie.add_argument("--params", help="config file with a [model] section")
    p_rie.add_argument("--params-builtin", default="es1",
                       choices=scenarios.BUILTIN_NAMES)
    p_rie.add_argument("--format", choices=("text", "csv"), default="text")
    p_rie.set_defaults(func=cmd_riemann)

    p_cmp = sub.add_parser("compare", help="wave-count comparison table")
    p_cmp.add_argument("--pairs", help="CSV of model,rho_l,aux_l,rho_r,aux_r")
    p_cmp.set_defaults(func=cmd_compare)

    p_val = sub.add_parser("validate", help="check a config file")
    p_val.add_argument("config")
    p_val.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
