"""Riemann-level solver for a two-phase model with a one-dimensional free
phase and a linearized-momentum congested phase.

The free phase is the curve q = R (rho - sigma) / (sigma (R - rho)) for
rho in [0, sigma_plus], travelled at the constant speed V.  The congested
phase is two-dimensional with speed

    v(rho, q) = V sigma / (R - sigma) * (R / rho - 1) * (1 + q)

and momentum ratio q / rho confined to [q_minus / R, q_plus / R].  Only the
free-left / congested-right Riemann problem is solved here, which is where
this model structurally differs from the one in :mod:`twophase.riemann`:
its fans can contain up to three waves instead of two.

The middle state is taken on the ray q / rho = q_minus / R, which makes the
case-2 rarefaction an exact integral curve of the first field (q / rho is
its Riemann invariant).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import brentq

ROOT_TOL = 1e-12
ZERO_WAVE_TOL = 1e-12


@dataclass(frozen=True)
class BwgpbParams:
    R: float
    V: float
    sigma: float
    sigma_plus: float
    q_minus: float
    q_plus: float

    def __post_init__(self):
        if not (0 < self.sigma <= self.sigma_plus < self.R):
            raise ValueError("need 0 < sigma <= sigma_plus < R")
        if not (0 <= self.q_minus < self.q_plus):
            raise ValueError("need 0 <= q_minus < q_plus")
        if self.V <= 0:
            raise ValueError("V must be positive")

    @property
    def coeff(self) -> float:
        """V sigma / (R - sigma), the congested speed scale."""
        return self.V * self.sigma / (self.R - self.sigma)


#: Documented parameter set used by the demo pairs and the test suite.
DEFAULT_PARAMS = BwgpbParams(R=1.0, V=60.0, sigma=0.5, sigma_plus=0.55,
                             q_minus=0.1, q_plus=1.0)


@dataclass(frozen=True)
class BwgpbState:
    rho: float
    q: float


class BwgpbWaveKind(Enum):
    PHASE_TRANSITION = "phase-transition"
    RAREFACTION_1 = "rarefaction-1"
    CONTACT_2 = "contact-2"


@dataclass(frozen=True)
class BwgpbWave:
    kind: BwgpbWaveKind
    left: BwgpbState
    right: BwgpbState
    speed: float | tuple[float, float]

    @property
    def head_speed(self) -> float:
        return self.speed[0] if isinstance(self.speed, tuple) else self.speed

    @property
    def tail_speed(self) -> float:
        return self.speed[1] if isinstance(self.speed, tuple) else self.speed


def free_curve_q(rho: float, p: BwgpbParams) -> float:
    """Momentum of the free-phase curve at the given density."""
    return p.R * (rho - p.sigma) / (p.sigma * (p.R - rho))


def free_state(rho: float, p: BwgpbParams) -> BwgpbState:
    if not (0 <= rho <= p.sigma_plus):
        raise ValueError("free-phase density must lie in [0, sigma_plus]")
    return BwgpbState(rho, free_curve_q(rho, p))


def in_free_phase(u: BwgpbState, p: BwgpbParams, tol: float = 1e-9) -> bool:
    if not (0 <= u.rho <= p.sigma_plus * (1 + tol)):
        return False
    return abs(u.q - free_curve_q(u.rho, p)) <= tol * max(1.0, abs(u.q))


def in_congested_phase(u: BwgpbState, p: BwgpbParams, tol: float = 1e-9) -> bool:
    if u.rho <= 0 or u.rho > p.R * (1 + tol):
        return False
    ratio = u.q / u.rho
    if not (p.q_minus / p.R - tol <= ratio <= p.q_plus / p.R + tol):
        return False
    return congested_velocity(u, p) <= p.V * (1 + tol)


def congested_velocity(u: BwgpbState, p: BwgpbParams) -> float:
    if u.rho <= 0:
        raise ValueError("congested speed undefined at zero density")
    return p.coeff * (p.R / u.rho - 1.0) * (1.0 + u.q)


def bwgpb_velocity(u: BwgpbState, p: BwgpbParams) -> float:
    if in_free_phase(u, p):
        return p.V
    return congested_velocity(u, p)


def bwgpb_lambda1(u: BwgpbState, p: BwgpbParams) -> float:
    """First eigenvalue of the congested flux Jacobian, with eigenvector
    (rho, q): lambda1 = v + rho dv/drho + q dv/dq."""
    if u.rho <= 0:
        raise ValueError("lambda1 undefined at zero density")
    v = congested_velocity(u, p)
    return v - p.coeff * (p.R / u.rho + u.q)


def bwgpb_lambda2(u: BwgpbState, p: BwgpbParams) -> float:
    return congested_velocity(u, p)


def _ray_state(rho: float, p: BwgpbParams) -> BwgpbState:
    """Congested state on the middle-state ray q / rho = q_minus / R."""
    return BwgpbState(rho, rho * p.q_minus / p.R)


def _ray_flux(rho: float, p: BwgpbParams) -> float:
    return rho * congested_velocity(_ray_state(rho, p), p)


def bwgpb_middle_state(u_l: BwgpbState, u_r: BwgpbState,
                       p: BwgpbParams) -> BwgpbState:
    """Congested state on the q_minus ray moving at the right state's speed.

    Solves v(rho_m, rho_m q_minus / R) = v(u_r) by bisection in rho_m.
    """
    v_r = congested_velocity(u_r, p)
    if v_r < 0:
        raise ValueError("right state has negative speed")
    if v_r == 0.0:
        return _ray_state(p.R, p)

    def gap(rho):
        return congested_velocity(_ray_state(rho, p), p) - v_r

    lo = 1e-12 * p.R
    if gap(p.R) > 0:
        raise ValueError("no congested middle state matches the right speed")
    rho_m = brentq(gap, lo, p.R, xtol=ROOT_TOL * p.R)
    u_m = _ray_state(rho_m, p)
    if not in_congested_phase(u_m, p, tol=1e-7):
        raise ValueError("middle state falls outside the congested phase")
    return u_m


def bwgpb_pt_speed(u_l: BwgpbState, u_m: BwgpbState, p: BwgpbParams) -> float:
    """Jump speed of the free-to-congested transition, from the density
    jump condition."""
    if abs(u_m.rho - u_l.rho) < ZERO_WAVE_TOL * p.R:
        raise ValueError("phase-transition speed undefined for equal densities")
    v_m = congested_velocity(u_m, p)
    return (u_m.rho * v_m - u_l.rho * p.V) / (u_m.rho - u_l.rho)


def bwgpb_solve(u_l: BwgpbState, u_r: BwgpbState,
                p: BwgpbParams) -> list[BwgpbWave]:
    """Wave fan for free-left / congested-right data: at most three waves.

    Case 1 (transition at least as fast as the first field at the middle
    state): transition + contact.  Case 2: transition to an attachment state
    on the q_minus ray where the jump speed matches the first eigenvalue,
    then a first-family rarefaction to the middle state, then the contact.
    """
    if not in_free_phase(u_l, p, tol=1e-6):
        raise ValueError("left state must lie on the free-phase curve")
    if not in_congested_phase(u_r, p, tol=1e-6):
        raise ValueError("right state must lie in the congested phase")

    u_m = bwgpb_middle_state(u_l, u_r, p)
    waves: list[BwgpbWave] = []
    v_r = congested_velocity(u_r, p)

    degenerate_pt = abs(u_m.rho - u_l.rho) < ZERO_WAVE_TOL * p.R
    if not degenerate_pt:
        lam_pt = bwgpb_pt_speed(u_l, u_m, p)
        lam1_m = bwgpb_lambda1(u_m, p)
        if lam_pt >= lam1_m:
            waves.append(BwgpbWave(BwgpbWaveKind.PHASE_TRANSITION,
                                   u_l, u_m, lam_pt))
        else:
            u_p = _attachment_state(u_l, u_m, p)
            waves.append(BwgpbWave(BwgpbWaveKind.PHASE_TRANSITION, u_l, u_p,
                                   bwgpb_pt_speed(u_l, u_p, p)))
            waves.append(BwgpbWave(BwgpbWaveKind.RAREFACTION_1, u_p, u_m,
                                   (bwgpb_lambda1(u_p, p), lam1_m)))

    if (abs(u_m.rho - u_r.rho) > ZERO_WAVE_TOL * p.R
            or abs(u_m.q - u_r.q) > ZERO_WAVE_TOL):
        waves.append(BwgpbWave(BwgpbWaveKind.CONTACT_2, u_m, u_r, v_r))
    return waves


def _attachment_state(u_l: BwgpbState, u_m: BwgpbState,
                      p: BwgpbParams) -> BwgpbState:
    """State on the q_minus ray where the transition speed from u_l equals
    the first eigenvalue (tangency of the jump chord to the reduced flux)."""

    def gap(rho):
        u = _ray_state(rho, p)
        return bwgpb_pt_speed(u_l, u, p) - bwgpb_lambda1(u, p)

    lo = u_m.rho
    hi = p.R
    g_lo, g_hi = gap(lo), gap(hi)
    if g_lo >= 0 or g_hi < 0:
        raise ValueError(
            "no attachment state on the congested momentum ray: "
            f"gap({lo:.6g})={g_lo:.6g}, gap({hi:.6g})={g_hi:.6g}")
    rho_p = brentq(gap, lo, hi, xtol=ROOT_TOL * p.R)
    return _ray_state(rho_p, p)


def bwgpb_wave_count(u_l: BwgpbState, u_r: BwgpbState, p: BwgpbParams) -> int:
    return len(bwgpb_solve(u_l, u_r, p))


@dataclass(frozen=True)
class CompareRow:
    model: str
    rho_l: float
    aux_l: float
    rho_r: float
    aux_r: float
    n_waves: int


def compare_wave_counts(cmr_pairs, bwgpb_pairs, cmr_params,
                        bwgpb_params) -> list[CompareRow]:
    """Wave counts of both models on given free-left / congested-right pairs.

    cmr_pairs holds (State, State) pairs for the two-phase model of
    :mod:`twophase.riemann` (aux = momentum eta); bwgpb_pairs holds
    (BwgpbState, BwgpbState) pairs (aux = momentum q).
    """
    from .riemann import solve as cmr_solve

    rows = []
    for u_l, u_r in cmr_pairs:
        fan = cmr_solve(u_l, u_r, cmr_params)
        rows.append(CompareRow("cmr", u_l.rho, u_l.eta, u_r.rho, u_r.eta,
                               len(fan.waves)))
    for u_l, u_r in bwgpb_pairs:
        rows.append(CompareRow("bwgpb", u_l.rho, u_l.q, u_r.rho, u_r.q,
                               bwgpb_wave_count(u_l, u_r, bwgpb_params)))
    return rows
