"""Two-phase macroscopic traffic model: state space, parameters, speed law.

The model evolves a car density ``rho`` and a generalized momentum
``eta = rho * w``, where ``w`` is the maximal speed the drivers at a point
would like to travel at.  The realised speed is

    v(rho, eta) = min(V_max, (eta / rho) * psi(rho))

for a decreasing congestion profile ``psi`` with ``psi(0) = 1`` and
``psi(R) = 0``.  The global speed cap ``V_max`` splits the state space into a
free phase (``v == V_max``) and a congested phase (``v == w * psi(rho)``),
which overlap on a one-dimensional boundary.

All functions here are pure and unit-agnostic: any consistent unit system
works.  The command-line layer converts km/h inputs to SI before calling in.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

# Relative band around V_max treated as the free/congested boundary.
PHASE_REL_TOL = 1e-9
# Densities at or below VACUUM_FRACTION * R are treated as vacuum.
VACUUM_FRACTION = 1e-10


class Phase(Enum):
    FREE = "free"
    CONGESTED = "congested"
    FREE_CONGESTED_BOUNDARY = "boundary"
    VACUUM = "vacuum"


@dataclass(frozen=True)
class SpeedProfile:
    """Congestion profile psi with its derivative and inverse.

    All three callables must accept floats and numpy arrays.  ``inverse``
    maps y in [0, 1] to the density rho with psi(rho) = y; for strictly
    decreasing profiles it is a true inverse.
    """

    value: Callable
    derivative: Callable
    inverse: Callable
    name: str = "custom"


def linear_speed_profile(R: float) -> SpeedProfile:
    """psi(rho) = 1 - rho / R, with closed-form derivative and inverse."""
    return SpeedProfile(
        value=lambda rho: 1.0 - np.asarray(rho) / R,
        derivative=lambda rho: np.full_like(np.asarray(rho, dtype=float), -1.0 / R),
        inverse=lambda y: R * (1.0 - np.asarray(y)),
        name="linear",
    )


def bisection_inverse(value: Callable, R: float, tol: float = 1e-12) -> Callable:
    """Vectorized bisection inverse for a decreasing profile on [0, R].

    Intended for user-supplied profiles without a closed-form inverse.
    """

    def inverse(y):
        y = np.asarray(y, dtype=float)
        scalar = y.ndim == 0
        y = np.atleast_1d(y)
        lo = np.zeros_like(y)
        hi = np.full_like(y, R)
        # psi decreasing: psi(lo) >= y >= psi(hi)
        while np.max(hi - lo) > tol:
            mid = 0.5 * (lo + hi)
            above = np.asarray(value(mid)) > y
            lo = np.where(above, mid, lo)
            hi = np.where(above, hi, mid)
        out = 0.5 * (lo + hi)
        return float(out[0]) if scalar else out

    return inverse


@dataclass(frozen=True)
class ModelParams:
    """Constants of the model: maximal density and the three speed bounds.

    Expected ordering is 0 < v_max < w_check < w_hat (checked by
    :func:`validate_params`, not by the constructor, so that diagnostics can
    be run on bad inputs).
    """

    R: float
    v_max: float
    w_check: float
    w_hat: float
    psi: SpeedProfile

    @property
    def rho_vac(self) -> float:
        return VACUUM_FRACTION * self.R

    @property
    def max_wave_speed(self) -> float:
        """Global bound on |characteristic speed| for validated parameters."""
        return max(self.v_max, self.w_hat)


@dataclass(frozen=True)
class State:
    """Conserved pair (density, generalized momentum)."""

    rho: float
    eta: float

    @property
    def w(self) -> float:
        return self.eta / self.rho


VACUUM = State(0.0, 0.0)


def from_rho_w(rho: float, w: float) -> State:
    return State(rho, rho * w)


def is_vacuum(u: State, p: ModelParams) -> bool:
    return u.rho <= p.rho_vac


def canonical(u: State, p: ModelParams) -> State:
    """Normalize sub-threshold densities to the canonical vacuum state."""
    return VACUUM if is_vacuum(u, p) else u


def velocity(u: State, p: ModelParams) -> float:
    """Realised speed min(V_max, w * psi(rho)); V_max at vacuum by convention.

    A car entering empty road travels at the speed cap, which is what the
    vacuum convention encodes.
    """
    if is_vacuum(u, p):
        return p.v_max
    return min(p.v_max, u.w * float(p.psi.value(u.rho)))


def classify(u: State, p: ModelParams) -> Phase:
    if is_vacuum(u, p):
        return Phase.VACUUM
    wpsi = u.w * float(p.psi.value(u.rho))
    band = PHASE_REL_TOL * p.v_max
    if wpsi > p.v_max + band:
        return Phase.FREE
    if wpsi < p.v_max - band:
        return Phase.CONGESTED
    return Phase.FREE_CONGESTED_BOUNDARY


def lambda1(u: State, p: ModelParams) -> float:
    """First characteristic speed eta * psi'(rho) + v; congested states only."""
    if is_vacuum(u, p):
        raise ValueError("first characteristic speed is undefined at vacuum")
    return u.eta * float(p.psi.derivative(u.rho)) + velocity(u, p)


def lambda2(u: State, p: ModelParams) -> float:
    """Second characteristic speed, equal to the realised speed v."""
    return velocity(u, p)


def lax1(rho: float, u0: State) -> float:
    """Momentum on the first-family curve through u0 (constant w)."""
    return u0.eta * rho / u0.rho


def lax2(rho: float, u0: State, p: ModelParams) -> float:
    """Momentum on the second-family curve through u0 (constant v)."""
    psi_val = float(p.psi.value(rho))
    v0 = velocity(u0, p)
    if psi_val <= 0.0:
        if v0 > 0.0:
            raise ValueError("second-family curve does not reach rho = R "
                             "from a state with positive speed")
        return rho * 0.0
    return rho * v0 / psi_val


def validate_params(p: ModelParams, n_samples: int = 2000) -> list[str]:
    """Check the structural hypotheses on the constants and on psi.

    Returns a list of human-readable violations (empty when valid).  The
    profile conditions (endpoint values, monotonicity, concavity of
    rho * psi) and the sign of the first characteristic speed on the
    congested set are checked by dense sampling, since psi is user-supplied.
    """
    issues: list[str] = []
    if not (p.R > 0):
        issues.append(f"R must be positive (got {p.R})")
    if not (0 < p.v_max < p.w_check < p.w_hat):
        issues.append(
            "speed bounds must satisfy 0 < v_max < w_check < w_hat "
            f"(got v_max={p.v_max}, w_check={p.w_check}, w_hat={p.w_hat})")
    if issues:
        return issues

    n = max(int(n_samples), 1000)
    rho = np.linspace(0.0, p.R, n + 1)
    psi = np.asarray(p.psi.value(rho), dtype=float)
    tol = 1e-9
    if abs(psi[0] - 1.0) > tol:
        issues.append(f"psi(0) must be 1 (got {psi[0]})")
    if abs(psi[-1]) > tol:
        issues.append(f"psi(R) must be 0 (got {psi[-1]})")
    if np.any(np.diff(psi) > tol):
        issues.append("psi must be non-increasing on [0, R]")
    dpsi = np.asarray(p.psi.derivative(rho), dtype=float)
    if np.any(dpsi > tol):
        issues.append("psi' must be <= 0 on [0, R]")
    # Concavity of rho * psi(rho) via second differences.
    flux = rho * psi
    h = rho[1] - rho[0]
    second = np.diff(flux, 2) / h**2
    if np.any(second > 1e-6):
        issues.append("rho * psi(rho) must be concave on [0, R]")

    # First-family speed on the congested set: lambda1 = w * d/drho (rho psi)
    # must be <= 0 wherever w * psi(rho) <= v_max.
    w_grid = np.linspace(p.w_check, p.w_hat, 101)
    dflux = psi + rho * dpsi  # d/drho (rho psi)
    lam1 = w_grid[:, None] * dflux[None, :]
    congested = w_grid[:, None] * psi[None, :] <= p.v_max * (1 + PHASE_REL_TOL)
    if np.any(lam1[congested] > tol * p.w_hat):
        issues.append("first-family speeds must be non-positive on the "
                      "congested set")
    return issues
