"""Diagnostics over simulation output: fronts, shock detection, errors."""

from __future__ import annotations

import numpy as np

from .godunov import Grid, Snapshot
from .model import ModelParams


def front_position(rho: np.ndarray, grid: Grid, p: ModelParams) -> float:
    """Center of the rightmost occupied (above-vacuum) cell, or x_min."""
    occupied = np.flatnonzero(rho > p.rho_vac)
    if len(occupied) == 0:
        return grid.x_min
    return float(grid.centers()[occupied[-1]])


def max_compressive_gradient(rho: np.ndarray, eta: np.ndarray, grid: Grid,
                             p: ModelParams) -> tuple[float, float]:
    """Steepest density increase between adjacent congested cells.

    Returns (gradient, interface position).  Only positive (compressive)
    jumps between occupied congested cells count, so travelling contacts in
    the free phase and fronts bordering empty road do not register; what is
    left is exactly the steepening that turns into a shock.
    """
    nonvac = rho > p.rho_vac
    w = np.where(nonvac, eta / np.where(nonvac, rho, 1.0), 0.0)
    congested = nonvac & (w * np.asarray(p.psi.value(rho))
                          <= p.v_max * (1 + 1e-9))
    pair_ok = congested[:-1] & congested[1:]
    grad = np.diff(rho) / grid.dx
    grad = np.where(pair_ok, grad, -np.inf)
    j = int(np.argmax(grad))
    x_if = grid.x_min + (j + 1) * grid.dx
    best = float(grad[j])
    if not np.isfinite(best):
        return 0.0, x_if
    return max(best, 0.0), x_if


def first_shock_location(snapshots: list[Snapshot], grid: Grid,
                         p: ModelParams,
                         factor: float = 5.0) -> tuple[float, float] | None:
    """(time, position) where the compressive gradient first exceeds
    ``factor`` times its initial maximum; None if it never does."""
    g0, _ = max_compressive_gradient(snapshots[0].rho, snapshots[0].eta,
                                     grid, p)
    threshold = factor * g0
    for snap in snapshots[1:]:
        g, x = max_compressive_gradient(snap.rho, snap.eta, grid, p)
        if g > threshold:
            return snap.t, x
    return None


def l1_error(rho: np.ndarray, exact: np.ndarray, dx: float) -> float:
    return float(np.sum(np.abs(rho - exact)) * dx)


def observed_orders(errors: list[float]) -> list[float]:
    """Convergence orders from successive grid halvings."""
    return [float(np.log2(errors[i] / errors[i + 1]))
            for i in range(len(errors) - 1)]
