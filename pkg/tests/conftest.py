"""Shared fixtures: reference parameters and random state generators.

Tests run the model in raw km/h units (the library is unit-agnostic), so
expected numbers stay on the familiar traffic scale.
"""

import numpy as np
import pytest

from twophase.model import ModelParams, State, from_rho_w, linear_speed_profile


@pytest.fixture(scope="session")
def params():
    """Reference constants: R=1, V_max=60, w in [120, 140], linear profile."""
    return ModelParams(R=1.0, v_max=60.0, w_check=120.0, w_hat=140.0,
                       psi=linear_speed_profile(1.0))


@pytest.fixture()
def rng():
    return np.random.default_rng(20260825)


def random_states(rng, p, n, include_special=True):
    """n valid non-vacuum states spread over both phases.

    With include_special, a few exact boundary points and full-jam states
    are mixed in.
    """
    rho = rng.uniform(1e-6, p.R, n)
    w = rng.uniform(p.w_check, p.w_hat, n)
    states = [from_rho_w(float(r), float(ww)) for r, ww in zip(rho, w)]
    if include_special and n >= 8:
        states[0] = from_rho_w(p.R, p.w_check)              # jam, v = 0
        states[1] = from_rho_w(p.R, p.w_hat)
        w_b = 130.0
        rho_b = float(p.psi.inverse(p.v_max / w_b))         # exact boundary
        states[2] = from_rho_w(rho_b, w_b)
        states[3] = State(0.05, 0.05 * p.w_hat)             # deep free phase
    return states
