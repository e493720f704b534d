"""First-order finite-volume time integrator with exact-Riemann fluxes.

Cell averages of (rho, eta) are advanced by the conservative update

    u_j(t + dt) = u_j(t) - (dt / dx) * (flux_{j+1/2} - flux_{j-1/2})

with the interface fluxes of :mod:`twophase.riemann`.  Two time-step
policies are available: a provably stable one bounded by the largest
characteristic speed max(V_max, w_hat), and a fixed dt = c * dx / V_max
variant matching common practice for this model even though it can exceed a
unit Courant number when congested waves are fast.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .model import ModelParams, State
from .riemann import interface_flux

# Bound violations up to these (absolute, in model units) are silently
# clamped; anything larger is treated as a blow-up.
CLAMP_REL_TOL = 1e-9


class InstabilityError(RuntimeError):
    """Raised when a step produces NaNs or clearly inadmissible states."""


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    n_cells: int

    def __post_init__(self):
        if self.n_cells < 2:
            raise ValueError("need at least 2 cells")
        if self.x_max <= self.x_min:
            raise ValueError("x_max must exceed x_min")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_cells

    def centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.n_cells) + 0.5) * self.dx


@dataclass(frozen=True)
class Boundary:
    """Ghost-cell policy: outflow (copy edge), periodic, or fixed states."""

    kind: str = "outflow"
    left: State | None = None
    right: State | None = None

    def __post_init__(self):
        if self.kind not in ("outflow", "periodic", "dirichlet"):
            raise ValueError(f"unknown boundary policy {self.kind!r}")
        if self.kind == "dirichlet" and (self.left is None or self.right is None):
            raise ValueError("dirichlet boundaries need both edge states")


@dataclass(frozen=True)
class CflPolicy:
    """Time-step selection.

    mode "safe" uses dt = courant * dx / max(V_max, w_hat); mode "fixed-vmax"
    uses dt = courant * dx / V_max regardless of the actual wave speeds.
    """

    mode: str = "safe"
    courant: float = 0.9

    def __post_init__(self):
        if self.mode not in ("safe", "fixed-vmax"):
            raise ValueError(f"unknown CFL mode {self.mode!r}")
        if not (0 < self.courant <= 1):
            raise ValueError("Courant number must lie in (0, 1]")


@dataclass(frozen=True)
class SimState:
    t: float
    rho: np.ndarray
    eta: np.ndarray
    grid: Grid
    params: ModelParams
    bc: Boundary = field(default_factory=Boundary)


@dataclass(frozen=True)
class Snapshot:
    t: float
    rho: np.ndarray
    eta: np.ndarray


@dataclass(frozen=True)
class RunResult:
    snapshots: list[Snapshot]
    n_steps: int
    final: SimState


def init_from_profiles(grid: Grid, rho0: Callable, w0: Callable,
                       p: ModelParams) -> SimState:
    """Point-sample the initial profiles at the cell centers.

    rho0 must map into [0, R]; w0 into [w_check, w_hat], with w = 0 allowed
    only on (numerically) empty road.  Sub-threshold densities become
    canonical vacuum cells.
    """
    x = grid.centers()
    rho = np.array([float(rho0(xi)) for xi in x])
    w = np.array([float(w0(xi)) for xi in x])
    tol = 1e-12
    if np.any(rho < -tol) or np.any(rho > p.R * (1 + tol)):
        raise ValueError("density profile leaves [0, R]")
    vac = rho <= p.rho_vac
    bad_w = ~vac & ((w < p.w_check * (1 - tol)) | (w > p.w_hat * (1 + tol)))
    if np.any(bad_w):
        raise ValueError("driver-speed profile leaves [w_check, w_hat] on "
                         "occupied road")
    rho = np.where(vac, 0.0, np.clip(rho, 0.0, p.R))
    w = np.where(vac, 0.0, np.clip(w, p.w_check, p.w_hat))
    return SimState(t=0.0, rho=rho, eta=rho * w, grid=grid, params=p)


def stable_dt(s: SimState, policy: CflPolicy) -> float:
    p = s.params
    if policy.mode == "safe":
        return policy.courant * s.grid.dx / p.max_wave_speed
    return policy.courant * s.grid.dx / p.v_max


def max_signal_speed(s: SimState) -> float:
    """Largest |characteristic speed| over the current cells."""
    p = s.params
    nonvac = s.rho > p.rho_vac
    if not np.any(nonvac):
        return p.v_max
    rho = s.rho[nonvac]
    eta = s.eta[nonvac]
    w = eta / rho
    wpsi = w * np.asarray(p.psi.value(rho))
    v = np.minimum(p.v_max, wpsi)
    lam1 = eta * np.asarray(p.psi.derivative(rho)) + v
    congested = wpsi <= p.v_max
    speeds = [float(np.max(v))]
    if np.any(congested):
        speeds.append(float(np.max(np.abs(lam1[congested]))))
    return max(speeds)


def _ghost_arrays(s: SimState) -> tuple[np.ndarray, np.ndarray]:
    rho, eta, bc = s.rho, s.eta, s.bc
    if bc.kind == "outflow":
        gl = (rho[0], eta[0])
        gr = (rho[-1], eta[-1])
    elif bc.kind == "periodic":
        gl = (rho[-1], eta[-1])
        gr = (rho[0], eta[0])
    else:
        gl = (bc.left.rho, bc.left.eta)
        gr = (bc.right.rho, bc.right.eta)
    rho_ext = np.concatenate(([gl[0]], rho, [gr[0]]))
    eta_ext = np.concatenate(([gl[1]], eta, [gr[1]]))
    return rho_ext, eta_ext


def _all_interface_fluxes(rho_ext, eta_ext, p, workers=1):
    n_if = len(rho_ext) - 1
    if workers <= 1:
        return interface_flux(rho_ext[:-1], eta_ext[:-1],
                              rho_ext[1:], eta_ext[1:], p)
    # Disjoint chunks written into preallocated arrays: the result is
    # independent of the number of workers by construction.
    F = np.empty(n_if)
    G = np.empty(n_if)
    bounds = np.linspace(0, n_if, workers + 1).astype(int)

    def fill(a, b):
        F[a:b], G[a:b] = interface_flux(rho_ext[a:b], eta_ext[a:b],
                                        rho_ext[a + 1:b + 1],
                                        eta_ext[a + 1:b + 1], p)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(lambda ab: fill(*ab),
                      zip(bounds[:-1], bounds[1:])))
    return F, G


def step(s: SimState, dt: float, workers: int = 1) -> SimState:
    """One conservative update; raises InstabilityError on blow-up."""
    p = s.params
    rho_ext, eta_ext = _ghost_arrays(s)
    F, G = _all_interface_fluxes(rho_ext, eta_ext, p, workers)
    nu = dt / s.grid.dx
    rho = s.rho - nu * (F[1:] - F[:-1])
    eta = s.eta - nu * (G[1:] - G[:-1])

    if not (np.all(np.isfinite(rho)) and np.all(np.isfinite(eta))):
        raise InstabilityError(f"non-finite state at t={s.t + dt:.6g}")

    rho_tol = CLAMP_REL_TOL * p.R
    if np.any(rho < -rho_tol) or np.any(rho > p.R + rho_tol):
        raise InstabilityError(
            f"density left [0, R] by more than {rho_tol:g} at t={s.t + dt:.6g}")
    rho = np.clip(rho, 0.0, p.R)

    nonvac = rho > p.rho_vac
    if np.any(nonvac):
        w = eta[nonvac] / rho[nonvac]
        w_tol = CLAMP_REL_TOL * p.w_hat
        if np.any(w < p.w_check - w_tol) or np.any(w > p.w_hat + w_tol):
            raise InstabilityError(
                f"driver speed left [w_check, w_hat] at t={s.t + dt:.6g}")
        w_cl = np.clip(w, p.w_check, p.w_hat)
        changed = w_cl != w
        if np.any(changed):
            eta_nv = eta[nonvac]
            eta_nv[changed] = w_cl[changed] * rho[nonvac][changed]
            eta[nonvac] = eta_nv
    return replace(s, t=s.t + dt, rho=rho, eta=eta)


def run(s: SimState, T: float, policy: CflPolicy | None = None,
        snapshot_every: float = 1.0, workers: int = 1) -> RunResult:
    """Advance by T, capturing snapshots at multiples of snapshot_every.

    The last step is truncated to land exactly on t0 + T.  Snapshot times are
    aligned to completed steps (no interpolation in time); the initial and
    final states are always captured.
    """
    if T < 0:
        raise ValueError("T must be non-negative")
    policy = policy or CflPolicy()
    snaps = [Snapshot(s.t, s.rho.copy(), s.eta.copy())]
    t_end = s.t + T
    eps = 1e-9 * max(1.0, abs(t_end))
    next_snap = s.t + snapshot_every
    n_steps = 0
    while s.t < t_end - eps:
        dt = min(stable_dt(s, policy), t_end - s.t)
        if policy.mode == "safe":
            actual = max_signal_speed(s)
            if dt * actual > s.grid.dx * (1 + 1e-12):
                raise InstabilityError(
                    f"wave speed {actual:g} exceeds the safe CFL bound")
        s = step(s, dt, workers=workers)
        n_steps += 1
        if s.t >= next_snap - eps and s.t < t_end - eps:
            snaps.append(Snapshot(s.t, s.rho.copy(), s.eta.copy()))
            while next_snap <= s.t + eps:
                next_snap += snapshot_every
    if snaps[-1].t < s.t - eps:
        snaps.append(Snapshot(s.t, s.rho.copy(), s.eta.copy()))
    return RunResult(snapshots=snaps, n_steps=n_steps, final=s)
