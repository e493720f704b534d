"""Output writers: delimited field dumps, run summaries, contour figures.

The CSV is the primary, deterministic artifact (9 significant digits, byte
identical across reruns of the same configuration).  Figures are rendered
from the same snapshot data with matplotlib's file-only backend.
"""

from __future__ import annotations

import os
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .godunov import Grid, RunResult
from .model import ModelParams

MS_TO_KMH = 3.6


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def field_rows(result: RunResult, grid: Grid, p: ModelParams):
    """Rows (t, x, rho, eta, w, v) with speeds converted back to km/h."""
    x = grid.centers()
    for snap in result.snapshots:
        nonvac = snap.rho > p.rho_vac
        w = np.where(nonvac, snap.eta / np.where(nonvac, snap.rho, 1.0), 0.0)
        v = np.where(nonvac,
                     np.minimum(p.v_max, w * np.asarray(p.psi.value(snap.rho))),
                     p.v_max)
        for j in range(grid.n_cells):
            yield (snap.t, x[j], snap.rho[j], snap.eta[j] * MS_TO_KMH,
                   w[j] * MS_TO_KMH, v[j] * MS_TO_KMH)


def write_fields_csv(path, result: RunResult, grid: Grid, p: ModelParams):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,x,rho,eta,w,v\n")
        for row in field_rows(result, grid, p):
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_summary(path, result: RunResult, grid: Grid, p: ModelParams,
                  wall_time: float):
    dx = grid.dx
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"steps = {result.n_steps}\n")
        fh.write(f"wall_time_s = {wall_time:.3f}\n")
        fh.write("t,mass_rho,mass_eta,min_w_kmh,max_w_kmh\n")
        for snap in result.snapshots:
            nonvac = snap.rho > p.rho_vac
            if np.any(nonvac):
                w = snap.eta[nonvac] / snap.rho[nonvac] * MS_TO_KMH
                wmin, wmax = float(np.min(w)), float(np.max(w))
            else:
                wmin = wmax = 0.0
            fh.write(f"{_fmt(snap.t)},{_fmt(float(np.sum(snap.rho)) * dx)},"
                     f"{_fmt(float(np.sum(snap.eta)) * dx * MS_TO_KMH)},"
                     f"{_fmt(wmin)},{_fmt(wmax)}\n")


def write_contours(out_dir, result: RunResult, grid: Grid, p: ModelParams):
    """Contour maps of density and driver speed over (x, t)."""
    out_dir = Path(out_dir)
    x = grid.centers()
    t = np.array([snap.t for snap in result.snapshots])
    rho = np.stack([snap.rho for snap in result.snapshots])
    w = np.zeros_like(rho)
    for i, snap in enumerate(result.snapshots):
        nonvac = snap.rho > p.rho_vac
        w[i, nonvac] = snap.eta[nonvac] / snap.rho[nonvac] * MS_TO_KMH

    written = []
    for name, data, label in (("density_contour.png", rho, "density"),
                              ("w_contour.png", w, "driver speed [km/h]")):
        fig, ax = plt.subplots(figsize=(6, 4.5))
        mesh = ax.pcolormesh(x, t, data, shading="nearest", cmap="viridis")
        fig.colorbar(mesh, ax=ax, label=label)
        ax.set_xlabel("x [m]")
        ax.set_ylabel("t [s]")
        fig.tight_layout()
        path = out_dir / name
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)
    return written
