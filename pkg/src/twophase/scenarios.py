"""Scenario configuration: file format, built-in experiments, unit handling.

Configs are plain INI-style text (``[section]`` headers with ``key = value``
lines).  Model speeds are given in km/h and positions in meters, matching
the usual traffic-engineering conventions; everything is converted to SI
when the simulation objects are built.  Three built-in scenarios are
provided, all on a 3 km road:

* ``es1``: a traffic light at x = 500 m turning green over a fully jammed
  queue whose driver speed rises linearly from w_check to w_hat;
* ``es2``: the same, with the driver speed falling from w_hat to w_check;
* ``es3``: no light; density rising and driver speed falling across the
  occupied stretch (500 m, 2500 m), which steepens into a shock.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .godunov import Boundary, CflPolicy, Grid, SimState, init_from_profiles
from .model import ModelParams, linear_speed_profile

KMH = 1.0 / 3.6  # km/h expressed in m/s

BUILTIN_NAMES = ("es1", "es2", "es3")


@dataclass(frozen=True)
class ScenarioConfig:
    # [model] (speeds in km/h)
    R: float = 1.0
    v_max: float = 60.0
    w_check: float = 120.0
    w_hat: float = 140.0
    psi: str = "linear"
    # [grid] (meters)
    x_min: float = 0.0
    x_max: float = 3000.0
    n_cells: int = 3000
    # [numerics]
    cfl_mode: str = "safe"
    courant: float = 0.9
    t_final: float = 300.0
    snapshot_every: float = 1.0
    # [initial]
    builtin: str | None = None
    rho_points: tuple[tuple[float, float], ...] | None = None
    w_points: tuple[tuple[float, float], ...] | None = None
    bc: str = "outflow"
    # [output]
    out_dir: str = "out"


def builtin_scenario(name: str) -> ScenarioConfig:
    if name not in BUILTIN_NAMES:
        raise ValueError(f"unknown built-in scenario {name!r}; "
                         f"choose one of {', '.join(BUILTIN_NAMES)}")
    t_final = 200.0 if name == "es3" else 300.0
    return ScenarioConfig(builtin=name, t_final=t_final)


def _builtin_profiles(name: str, cfg: ScenarioConfig):
    """Initial density and driver-speed (km/h) profiles of the built-ins."""
    wc, wh = cfg.w_check, cfg.w_hat

    if name == "es1":
        rho0 = lambda x: 1.0 if x <= 500.0 else 0.0
        w0 = lambda x: wc + (wh - wc) * x / 500.0 if x <= 500.0 else 0.0
    elif name == "es2":
        rho0 = lambda x: 1.0 if x <= 500.0 else 0.0
        w0 = lambda x: wh + (wc - wh) * x / 500.0 if x <= 500.0 else 0.0
    else:  # es3
        def rho0(x):
            if x <= 500.0 or x >= 2500.0:
                return 0.0
            return 0.2 + 0.5 * (x - 500.0) / 2000.0

        def w0(x):
            if x <= 500.0 or x >= 2500.0:
                return 0.0
            return wh + (wc - wh) * (x - 500.0) / 2000.0
    return rho0, w0


def _piecewise(points: tuple[tuple[float, float], ...]) -> Callable:
    xs = np.array([xy[0] for xy in points])
    ys = np.array([xy[1] for xy in points])
    if np.any(np.diff(xs) < 0):
        raise ValueError("breakpoint tables must be sorted in x")

    def f(x):
        return float(np.interp(x, xs, ys))

    return f


def initial_profiles(cfg: ScenarioConfig):
    """(rho0, w0) callables; w0 in km/h."""
    if cfg.builtin is not None:
        return _builtin_profiles(cfg.builtin, cfg)
    if cfg.rho_points is None or cfg.w_points is None:
        raise ValueError("config needs either a built-in name or both "
                         "rho and w breakpoint tables")
    return _piecewise(cfg.rho_points), _piecewise(cfg.w_points)


def model_params(cfg: ScenarioConfig, si: bool = True) -> ModelParams:
    """Model constants; speeds converted to m/s unless si=False."""
    if cfg.psi != "linear":
        raise ValueError(f"unknown speed profile {cfg.psi!r}")
    scale = KMH if si else 1.0
    return ModelParams(R=cfg.R, v_max=cfg.v_max * scale,
                       w_check=cfg.w_check * scale,
                       w_hat=cfg.w_hat * scale,
                       psi=linear_speed_profile(cfg.R))


def cfl_policy(cfg: ScenarioConfig) -> CflPolicy:
    mode = {"safe": "safe", "paper": "fixed-vmax"}.get(cfg.cfl_mode)
    if mode is None:
        raise ValueError(f"unknown CFL mode {cfg.cfl_mode!r}")
    return CflPolicy(mode=mode, courant=cfg.courant)


def build_sim(cfg: ScenarioConfig) -> SimState:
    p = model_params(cfg)
    grid = Grid(cfg.x_min, cfg.x_max, cfg.n_cells)
    rho0, w0_kmh = initial_profiles(cfg)
    w0 = lambda x: w0_kmh(x) * KMH
    s = init_from_profiles(grid, rho0, w0, p)
    return replace(s, bc=Boundary(kind=cfg.bc))


# ---------------------------------------------------------------------------
# Config file round-trip
# ---------------------------------------------------------------------------

def _format_points(points) -> str:
    return ", ".join(f"{x!r}:{v!r}" for x, v in points)


def _parse_points(text: str):
    pairs = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        x, _, v = item.partition(":")
        pairs.append((float(x), float(v)))
    return tuple(pairs)


def emit_config(cfg: ScenarioConfig) -> str:
    cp = configparser.ConfigParser()
    cp["model"] = {
        "R": repr(cfg.R),
        "v_max": repr(cfg.v_max),
        "w_check": repr(cfg.w_check),
        "w_hat": repr(cfg.w_hat),
        "psi": cfg.psi,
    }
    cp["grid"] = {
        "x_min": repr(cfg.x_min),
        "x_max": repr(cfg.x_max),
        "n_cells": str(cfg.n_cells),
    }
    cp["numerics"] = {
        "cfl_mode": cfg.cfl_mode,
        "courant": repr(cfg.courant),
        "t_final": repr(cfg.t_final),
        "snapshot_every": repr(cfg.snapshot_every),
    }
    initial = {"bc": cfg.bc}
    if cfg.builtin is not None:
        initial["builtin"] = cfg.builtin
    if cfg.rho_points is not None:
        initial["rho_points"] = _format_points(cfg.rho_points)
    if cfg.w_points is not None:
        initial["w_points"] = _format_points(cfg.w_points)
    cp["initial"] = initial
    cp["output"] = {"dir": cfg.out_dir}
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def parse_config(text: str) -> ScenarioConfig:
    cp = configparser.ConfigParser()
    cp.read_string(text)
    model = cp["model"] if cp.has_section("model") else {}
    grid = cp["grid"] if cp.has_section("grid") else {}
    num = cp["numerics"] if cp.has_section("numerics") else {}
    initial = cp["initial"] if cp.has_section("initial") else {}
    output = cp["output"] if cp.has_section("output") else {}
    base = ScenarioConfig()
    return ScenarioConfig(
        R=float(model.get("r", base.R)),
        v_max=float(model.get("v_max", base.v_max)),
        w_check=float(model.get("w_check", base.w_check)),
        w_hat=float(model.get("w_hat", base.w_hat)),
        psi=model.get("psi", base.psi),
        x_min=float(grid.get("x_min", base.x_min)),
        x_max=float(grid.get("x_max", base.x_max)),
        n_cells=int(grid.get("n_cells", base.n_cells)),
        cfl_mode=num.get("cfl_mode", base.cfl_mode),
        courant=float(num.get("courant", base.courant)),
        t_final=float(num.get("t_final", base.t_final)),
        snapshot_every=float(num.get("snapshot_every", base.snapshot_every)),
        builtin=initial.get("builtin") or None,
        rho_points=(_parse_points(initial["rho_points"])
                    if "rho_points" in initial else None),
        w_points=(_parse_points(initial["w_points"])
                  if "w_points" in initial else None),
        bc=initial.get("bc", base.bc),
        out_dir=output.get("dir", base.out_dir),
    )


def load_config(path) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
