"""Exact Riemann solver: wave structure, sampling, interface flux."""

import numpy as np
import pytest

from conftest import random_states
from twophase.model import State, VACUUM, from_rho_w, lambda1, velocity
from twophase.riemann import (
    WaveKind,
    boundary_state,
    godunov_flux,
    interface_flux,
    middle_state_congested,
    physical_flux,
    sample,
    solve,
)


class TestMiddleState:
    def test_congested_pair(self, params):
        # w_l = 140, v_r = 24: psi(rho_m) = 24/140
        u_m = middle_state_congested(State(0.9, 126.0), State(0.8, 96.0),
                                     params)
        assert u_m.rho == pytest.approx(1.0 - 24.0 / 140.0, rel=1e-12)
        assert u_m.eta == pytest.approx(116.0, rel=1e-12)

    def test_free_left(self, params):
        u_m = middle_state_congested(State(0.2, 24.0), State(0.95, 114.0),
                                     params)
        assert u_m.rho == pytest.approx(0.95, rel=1e-12)
        assert u_m.eta == pytest.approx(114.0, rel=1e-12)

    def test_jam_right(self, params):
        u_m = middle_state_congested(State(0.3, 36.0), from_rho_w(1.0, 125.0),
                                     params)
        assert (u_m.rho, u_m.eta) == (1.0, 120.0)


class TestBoundaryState:
    def test_closed_form(self, params):
        u_o = boundary_state(State(0.9, 126.0), params)
        assert u_o.rho == pytest.approx(4.0 / 7.0, rel=1e-12)
        assert u_o.eta == pytest.approx(80.0, rel=1e-12)

    def test_w_120(self, params):
        u_o = boundary_state(State(0.8, 96.0), params)
        assert u_o.rho == pytest.approx(0.5, rel=1e-12)
        assert u_o.eta == pytest.approx(60.0, rel=1e-12)

    def test_idempotent(self, params):
        u_o = boundary_state(State(0.9, 126.0), params)
        again = boundary_state(u_o, params)
        assert again.rho == pytest.approx(u_o.rho, rel=1e-12)


class TestSolve:
    def test_congested_rarefaction_and_contact(self, params):
        fan = solve(State(0.9, 126.0), State(0.8, 96.0), params)
        kinds = [w.kind for w in fan.waves]
        assert kinds == [WaveKind.RAREFACTION_1, WaveKind.CONTACT_2]
        head, tail = fan.waves[0].speed
        assert head == pytest.approx(-112.0, rel=1e-12)
        assert tail == pytest.approx(-92.0, rel=1e-10)
        assert fan.waves[1].speed == pytest.approx(24.0, rel=1e-12)
        u_m = fan.waves[0].right
        assert u_m.rho == pytest.approx(0.8285714285714286, rel=1e-9)
        assert u_m.eta == pytest.approx(116.0, rel=1e-9)

    def test_identical_states_empty(self, params):
        fan = solve(State(0.8, 96.0), State(0.8, 96.0), params)
        assert fan.waves == ()

    def test_free_to_congested_transition(self, params):
        fan = solve(State(0.2, 24.0), State(0.95, 114.0), params)
        # middle state equals the right state, so only the jump remains
        assert [w.kind for w in fan.waves] == [WaveKind.PHASE_TRANSITION]
        assert fan.waves[0].speed == pytest.approx(-8.4, rel=1e-12)

    def test_free_to_congested_with_contact(self, params):
        fan = solve(State(0.2, 24.0), State(0.9, 117.0), params)
        assert [w.kind for w in fan.waves] == [WaveKind.PHASE_TRANSITION,
                                               WaveKind.CONTACT_2]
        # both sides of the transition share the driver speed
        assert fan.waves[0].right.w == pytest.approx(120.0, rel=1e-12)

    def test_free_free_linear_wave(self, params):
        fan = solve(State(0.1, 12.5), State(0.2, 26.0), params)
        assert [w.kind for w in fan.waves] == [WaveKind.LINEAR]
        assert fan.waves[0].speed == pytest.approx(60.0)

    def test_congested_to_free(self, params):
        fan = solve(State(0.9, 126.0), State(0.1, 12.0), params)
        assert [w.kind for w in fan.waves] == [WaveKind.RAREFACTION_1,
                                               WaveKind.LINEAR]
        u_o = fan.waves[0].right
        assert u_o.rho == pytest.approx(4.0 / 7.0, rel=1e-9)

    def test_left_vacuum(self, params):
        fan = solve(VACUUM, State(0.8, 96.0), params)
        assert [w.kind for w in fan.waves] == [WaveKind.CONTACT_2]
        assert fan.waves[0].speed == pytest.approx(24.0)

    def test_right_vacuum_congested_left(self, params):
        fan = solve(State(0.9, 126.0), VACUUM, params)
        assert [w.kind for w in fan.waves] == [WaveKind.RAREFACTION_1,
                                               WaveKind.LINEAR]
        assert fan.waves[1].speed == pytest.approx(60.0)

    def test_both_vacuum(self, params):
        fan = solve(VACUUM, State(1e-13, 0.0), params)
        assert fan.waves == ()

    def test_at_most_two_waves(self, params, rng):
        states = random_states(rng, params, 60)
        for u_l in states[:30]:
            for u_r in states[30:]:
                assert len(solve(u_l, u_r, params).waves) <= 2


class TestSample:
    def test_left_of_fan(self, params):
        fan = solve(State(0.9, 126.0), State(0.8, 96.0), params)
        u = sample(fan, -150.0, params)
        assert (u.rho, u.eta) == (0.9, 126.0)

    def test_inside_rarefaction(self, params):
        fan = solve(State(0.9, 126.0), State(0.8, 96.0), params)
        u = sample(fan, -102.0, params)
        # 140 * (1 - 2 rho) = -102
        assert u.rho == pytest.approx(0.8642857142857143, rel=1e-9)
        assert u.eta == pytest.approx(121.0, rel=1e-9)

    def test_right_of_fan(self, params):
        fan = solve(State(0.9, 126.0), State(0.8, 96.0), params)
        u = sample(fan, 100.0, params)
        assert (u.rho, u.eta) == (0.8, 96.0)

    def test_between_waves(self, params):
        fan = solve(State(0.9, 126.0), State(0.8, 96.0), params)
        u = sample(fan, 0.0, params)
        assert u.rho == pytest.approx(0.8285714285714286, rel=1e-9)


def _check_weak_solution(fan, p, rtol=1e-10):
    """Rankine-Hugoniot on discontinuities, Lax ordering, sorted speeds."""
    scale = p.R * p.w_hat * p.w_hat
    prev_speed = -np.inf
    for w in fan.waves:
        assert w.head_speed >= prev_speed - 1e-9
        prev_speed = w.tail_speed
        if isinstance(w.speed, tuple):
            head, tail = w.speed
            assert head <= tail + 1e-12
            assert head == pytest.approx(lambda1(w.left, p), rel=1e-9,
                                         abs=1e-9)
            assert tail == pytest.approx(lambda1(w.right, p), rel=1e-9,
                                         abs=1e-9)
            # first-family curve: driver speed is constant through the fan
            assert w.right.w == pytest.approx(w.left.w, rel=1e-9)
            continue
        fl = physical_flux(w.left, p)
        fr = physical_flux(w.right, p)
        for du, df in ((w.right.rho - w.left.rho, fr[0] - fl[0]),
                       (w.right.eta - w.left.eta, fr[1] - fl[1])):
            assert abs(w.speed * du - df) <= rtol * scale
        if w.kind is WaveKind.SHOCK_1:
            assert lambda1(w.left, p) >= w.speed - 1e-9
            assert w.speed >= lambda1(w.right, p) - 1e-9


class TestWeakSolutionProperty:
    def test_random_pairs(self, params, rng):
        states = random_states(rng, params, 80)
        for u_l in states[:40]:
            for u_r in states[40:]:
                _check_weak_solution(solve(u_l, u_r, params), params)


class TestGodunovFlux:
    def test_consistency(self, params):
        u = State(0.8, 96.0)
        F, G = godunov_flux(u, u, params)
        assert F == pytest.approx(19.2, rel=1e-12)
        assert G == pytest.approx(2304.0, rel=1e-12)

    def test_transition_moving_right(self, params):
        # supply-limited: left free flux 12 below middle flux 19.2
        F, G = godunov_flux(State(0.2, 24.0), State(0.8, 96.0), params)
        assert (F, G) == pytest.approx((12.0, 1440.0), rel=1e-12)

    def test_transition_moving_left(self, params):
        F, G = godunov_flux(State(0.45, 54.0), State(0.95, 114.0), params)
        assert (F, G) == pytest.approx((5.7, 684.0), rel=1e-12)

    def test_congested_to_free(self, params):
        # boundary state of w = 140 passes at capacity rho_o * V_max
        F, G = godunov_flux(State(0.9, 126.0), State(0.1, 12.0), params)
        assert F == pytest.approx(4.0 / 7.0 * 60.0, rel=1e-12)
        assert G == pytest.approx(140.0 * F, rel=1e-12)

    def test_vacuum_left_is_zero(self, params):
        assert godunov_flux(VACUUM, State(0.8, 96.0), params) == (0.0, 0.0)

    def test_vacuum_right_free_left(self, params):
        F, G = godunov_flux(State(0.2, 24.0), VACUUM, params)
        assert (F, G) == pytest.approx((12.0, 1440.0), rel=1e-12)

    def test_matches_fan_value_at_zero(self, params, rng):
        # flux formula == physical flux of the fan sampled at x/t = 0
        states = random_states(rng, params, 40)
        for u_l in states[:20]:
            for u_r in states[20:]:
                fan = solve(u_l, u_r, params)
                if any(abs(w.head_speed) < 1e-6 or abs(w.tail_speed) < 1e-6
                       for w in fan.waves):
                    continue  # flux is one-sided exactly on a wave
                u0 = sample(fan, 0.0, params)
                F, G = godunov_flux(u_l, u_r, params)
                f = physical_flux(u0, params)
                assert F == pytest.approx(f[0], rel=1e-9, abs=1e-9)
                assert G == pytest.approx(f[1], rel=1e-9, abs=1e-6)


class TestVectorizedFlux:
    def test_matches_scalar(self, params, rng):
        states = random_states(rng, params, 200)
        left = states[:100] + [VACUUM, State(0.5, 62.0), VACUUM]
        right = states[100:] + [State(0.3, 37.0), VACUUM, VACUUM]
        rho_l = np.array([u.rho for u in left])
        eta_l = np.array([u.eta for u in left])
        rho_r = np.array([u.rho for u in right])
        eta_r = np.array([u.eta for u in right])
        F, G = interface_flux(rho_l, eta_l, rho_r, eta_r, params)
        for i, (u_l, u_r) in enumerate(zip(left, right)):
            Fs, Gs = godunov_flux(u_l, u_r, params)
            assert F[i] == pytest.approx(Fs, rel=1e-13, abs=1e-13)
            assert G[i] == pytest.approx(Gs, rel=1e-13, abs=1e-13)
