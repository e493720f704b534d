"""Exact Riemann solver and interface flux for the two-phase model.

Wave fans contain at most two waves.  Depending on the phases of the left
and right data the fan is:

* free / free: a single linear wave travelling at the speed cap;
* congested / congested: a first-family shock or rarefaction to a middle
  state sharing the left driver speed, then a second-family contact moving
  at the right state's speed;
* congested / free: a first-family wave down to the phase boundary, then a
  linear wave;
* free / congested: a phase-transition discontinuity (equal driver speed on
  both sides) to the middle state, then a contact.

Vacuum is handled as a degenerate free state: nothing flows out of empty
road, and a state expanding into empty road ends in a front moving at the
speed cap.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .model import (
    ModelParams,
    PHASE_REL_TOL,
    Phase,
    State,
    VACUUM,
    canonical,
    classify,
    from_rho_w,
    is_vacuum,
    lambda1,
    velocity,
)

# Waves with density jump below this (relative to R) are dropped as
# zero-strength.
ZERO_WAVE_TOL = 1e-12
ROOT_TOL = 1e-12


class WaveKind(Enum):
    LINEAR = "linear"
    PHASE_TRANSITION = "phase-transition"
    SHOCK_1 = "shock-1"
    RAREFACTION_1 = "rarefaction-1"
    CONTACT_2 = "contact-2"


@dataclass(frozen=True)
class Wave:
    kind: WaveKind
    left: State
    right: State
    #: single speed for discontinuities, (head, tail) pair for rarefactions
    speed: float | tuple[float, float]

    @property
    def head_speed(self) -> float:
        return self.speed[0] if isinstance(self.speed, tuple) else self.speed

    @property
    def tail_speed(self) -> float:
        return self.speed[1] if isinstance(self.speed, tuple) else self.speed


@dataclass(frozen=True)
class WaveFan:
    left_state: State
    waves: tuple[Wave, ...]
    right_state: State


def physical_flux(u: State, p: ModelParams) -> tuple[float, float]:
    v = velocity(u, p)
    if is_vacuum(u, p):
        return 0.0, 0.0
    return u.rho * v, u.eta * v


def middle_state_congested(u_l: State, u_r: State, p: ModelParams) -> State:
    """Middle state with the left driver speed and the right realised speed.

    Solves w_l * psi(rho_m) = v(u_r); the degenerate v(u_r) = 0 case sits on
    the rho = R segment.
    """
    w_l = u_l.w
    v_r = velocity(u_r, p)
    if v_r <= 0.0:
        return from_rho_w(p.R, w_l)
    rho_m = float(p.psi.inverse(min(v_r / w_l, 1.0)))
    return from_rho_w(rho_m, w_l)


def boundary_state(u_l: State, p: ModelParams) -> State:
    """Point of the free/congested boundary with the driver speed of u_l."""
    w_l = u_l.w
    rho_o = float(p.psi.inverse(p.v_max / w_l))
    return from_rho_w(rho_o, w_l)


def _states_close(a: State, b: State, p: ModelParams) -> bool:
    return (abs(a.rho - b.rho) <= ZERO_WAVE_TOL * p.R
            and abs(a.eta - b.eta) <= ZERO_WAVE_TOL * p.R * p.w_hat)


def _first_family_waves(u_l: State, u_m: State, p: ModelParams) -> list[Wave]:
    if abs(u_m.rho - u_l.rho) < ZERO_WAVE_TOL * p.R:
        return []
    if u_m.rho > u_l.rho:
        fl = physical_flux(u_l, p)
        fm = physical_flux(u_m, p)
        s = (fm[0] - fl[0]) / (u_m.rho - u_l.rho)
        return [Wave(WaveKind.SHOCK_1, u_l, u_m, s)]
    return [Wave(WaveKind.RAREFACTION_1, u_l, u_m,
                 (lambda1(u_l, p), lambda1(u_m, p)))]


def solve(u_l: State, u_r: State, p: ModelParams) -> WaveFan:
    """Construct the self-similar wave fan for Riemann data (u_l, u_r)."""
    u_l = canonical(u_l, p)
    u_r = canonical(u_r, p)
    lvac = is_vacuum(u_l, p)
    rvac = is_vacuum(u_r, p)

    if lvac and rvac:
        return WaveFan(u_l, (), u_r)
    if lvac:
        # Nothing arrives from the left; the right data recede at their own
        # speed behind a contact-like front with vacuum behind it.
        return WaveFan(u_l, (Wave(WaveKind.CONTACT_2, VACUUM, u_r,
                                  velocity(u_r, p)),), u_r)

    phase_l = classify(u_l, p)
    # The boundary is routed to the congested formulas; the two coincide
    # there.  Vacuum on the right behaves as a free state at the speed cap.
    left_free = phase_l == Phase.FREE
    right_free = rvac or classify(u_r, p) == Phase.FREE

    waves: list[Wave] = []
    if left_free and right_free:
        if not _states_close(u_l, u_r, p):
            waves.append(Wave(WaveKind.LINEAR, u_l, u_r, p.v_max))
    elif not left_free and right_free:
        u_o = boundary_state(u_l, p)
        waves.extend(_first_family_waves(u_l, u_o, p))
        if not _states_close(u_o, u_r, p):
            waves.append(Wave(WaveKind.LINEAR, u_o, u_r, p.v_max))
    elif not left_free and not right_free:
        u_m = middle_state_congested(u_l, u_r, p)
        waves.extend(_first_family_waves(u_l, u_m, p))
        if not _states_close(u_m, u_r, p):
            waves.append(Wave(WaveKind.CONTACT_2, u_m, u_r, velocity(u_r, p)))
    else:  # free left, congested right
        u_m = middle_state_congested(u_l, u_r, p)
        if not _states_close(u_l, u_m, p):
            v_m = velocity(u_m, p)
            lam = ((u_m.rho * v_m - u_l.rho * p.v_max)
                   / (u_m.rho - u_l.rho))
            waves.append(Wave(WaveKind.PHASE_TRANSITION, u_l, u_m, lam))
        if not _states_close(u_m, u_r, p):
            waves.append(Wave(WaveKind.CONTACT_2, u_m, u_r, velocity(u_r, p)))
    return WaveFan(u_l, tuple(waves), u_r)


def _rarefaction_state(wave: Wave, xi: float, p: ModelParams) -> State:
    """State inside a first-family fan: the density on the constant-w curve
    whose characteristic speed equals xi."""
    w = wave.left.w

    def speed_gap(rho):
        u = from_rho_w(rho, w)
        return lambda1(u, p) - xi

    lo, hi = wave.right.rho, wave.left.rho  # lambda1 decreasing in rho
    if lo > hi:
        lo, hi = hi, lo
    rho = brentq(speed_gap, lo, hi, xtol=ROOT_TOL * max(p.R, 1.0))
    return from_rho_w(rho, w)


def sample(fan: WaveFan, xi: float, p: ModelParams) -> State:
    """State of the self-similar solution at x / t = xi.

    On a discontinuity the right limit is returned.
    """
    current = fan.left_state
    for wave in fan.waves:
        if xi < wave.head_speed:
            return current
        if isinstance(wave.speed, tuple) and xi <= wave.tail_speed:
            return _rarefaction_state(wave, xi, p)
        current = wave.right
    return fan.right_state


# ---------------------------------------------------------------------------
# Godunov interface flux
# ---------------------------------------------------------------------------

def godunov_flux(u_l: State, u_r: State, p: ModelParams) -> tuple[float, float]:
    """Interface flux (density flux, momentum flux) from the local Riemann
    solution, written in closed form.

    The interface state always carries the left driver speed, so the momentum
    flux is w_l times the density flux in every branch.
    """
    V = p.v_max
    rho_l, eta_l = u_l.rho, u_l.eta
    rho_r, eta_r = u_r.rho, u_r.eta
    if rho_l <= p.rho_vac:
        return 0.0, 0.0
    w_l = eta_l / rho_l
    band = model_band(p)
    left_free = w_l * float(p.psi.value(rho_l)) > V + band
    if rho_r <= p.rho_vac:
        right_free = True
        v_r = V
    else:
        w_r = eta_r / rho_r
        wpsi_r = w_r * float(p.psi.value(rho_r))
        right_free = wpsi_r > V + band
        v_r = min(V, wpsi_r)

    if right_free:
        if left_free:
            F = rho_l * V
        else:
            rho_o = float(p.psi.inverse(min(V / w_l, 1.0)))
            F = rho_o * V
    else:
        rho_m = p.R if v_r <= 0.0 else float(p.psi.inverse(min(v_r / w_l, 1.0)))
        F_m = rho_m * w_l * float(p.psi.value(rho_m))
        F = min(rho_l * V, F_m) if left_free else F_m
    return F, w_l * F


def model_band(p: ModelParams) -> float:
    return PHASE_REL_TOL * p.v_max


def interface_flux(rho_l, eta_l, rho_r, eta_r, p: ModelParams):
    """Vectorized Godunov flux over arrays of left/right cell states.

    Same branch structure as :func:`godunov_flux`; used by the time stepper
    so a full row of interfaces is evaluated in one shot.
    """
    rho_l = np.asarray(rho_l, dtype=float)
    eta_l = np.asarray(eta_l, dtype=float)
    rho_r = np.asarray(rho_r, dtype=float)
    eta_r = np.asarray(eta_r, dtype=float)
    V, R, vac = p.v_max, p.R, p.rho_vac
    band = model_band(p)

    lvac = rho_l <= vac
    rvac = rho_r <= vac
    w_l = eta_l / np.where(lvac, 1.0, rho_l)
    w_l = np.where(lvac, p.w_hat, w_l)  # placeholder, masked at the end
    w_r = eta_r / np.where(rvac, 1.0, rho_r)

    left_free = w_l * np.asarray(p.psi.value(rho_l)) > V + band
    wpsi_r = w_r * np.asarray(p.psi.value(rho_r))
    right_free = (wpsi_r > V + band) | rvac
    v_r = np.where(rvac, V, np.minimum(V, wpsi_r))

    rho_m = np.where(v_r <= 0.0, R,
                     np.asarray(p.psi.inverse(np.clip(v_r / w_l, 0.0, 1.0))))
    F_mid = rho_m * w_l * np.asarray(p.psi.value(rho_m))
    rho_o = np.asarray(p.psi.inverse(np.clip(V / w_l, 0.0, 1.0)))
    F_left = rho_l * V
    F_bound = rho_o * V

    F = np.where(left_free,
                 np.where(right_free, F_left, np.minimum(F_left, F_mid)),
                 np.where(right_free, F_bound, F_mid))
    F = np.where(lvac, 0.0, F)
    G = np.where(lvac, 0.0, w_l * F)
    return F, G
