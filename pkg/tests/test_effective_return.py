import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from cprtax import effective_return as er
from cprtax import presets
from cprtax.errors import DegenerateDenominator, EmptyRegion, NoPositiveReturn, OutsideGainBranch
from cprtax.model import PlayerPrefs, make_game

from conftest import games

QP = presets.QUARTIC_P


def single(r, alpha=1.0, k=1.5):
    return make_game(QP, r, [PlayerPrefs(alpha, k)])


@pytest.fixture(scope="module")
def down():
    return single((3, -1))


@pytest.fixture(scope="module")
def up_gain():
    return single((1, 3), k=0.05)


@pytest.fixture(scope="module")
def curved():
    return single((1, 3), alpha=0.3)


def test_f_values(down):
    assert er.f(down, 0, 0.0, 0.0) == pytest.approx(2.1)
    assert abs(er.f(down, 0, 0.8359, 0.0)) < 2e-3


@pytest.mark.parametrize("t", [0.0, 0.7, 2.5])
def test_f_at_full_utilization(curved, t):
    assert er.f(curved, 0, 1.0, t) == pytest.approx(-1.5 * (1 + t) ** 0.3)
    assert er.f(curved, 0, 1.2, t) == pytest.approx(-1.5 * (1 + t) ** 0.3)


def test_f_x_values(down, up_gain):
    assert er.f_x(down, 0, 0.0, 0.0) == pytest.approx(-0.8)
    assert abs(er.f_x(up_gain, 0, 0.6083, 0.0)) < 1e-3


def test_f_x_outside_gain_branch(down):
    with pytest.raises(OutsideGainBranch):
        er.f_x(down, 0, 0.9, 2.5)


def test_f_x_flags_the_kink(curved):
    # r(1/6) = 1.5 exactly, where (r - t)^(alpha - 1) diverges
    slope = er.f_x_flagged(curved, 0, 1.0 / 6.0, 1.5)
    assert slope.large_magnitude and slope.value == math.inf


@given(games(), st.floats(0.02, 0.98), st.floats(0.0, 0.9))
def test_f_x_matches_finite_difference(game, x, frac):
    t = frac * er.t_bar(game)
    tau = game.players[0].gamma * t
    h = 1e-6
    margin = min(game.r.raw(x - h), game.r.raw(x + h)) - tau
    assume(margin > 1e-3)
    fd = (er.f(game, 0, x + h, t) - er.f(game, 0, x - h, t)) / (2 * h)
    assert er.f_x(game, 0, x, t) == pytest.approx(fd, abs=1e-6, rel=1e-6)


def test_f_values_vectorised_matches_scalar(curved):
    xs = np.linspace(0, 1.2, 41)
    for t in (0.0, 1.5):
        vec = er.f_values(curved, 0, xs, t)
        assert np.allclose(vec, [er.f(curved, 0, x, t) for x in xs], atol=1e-14)


def test_feasible_region(down):
    assert (er.feasible_region(down, 0, 1.0).lower, er.feasible_region(down, 0, 1.0).upper) == (0.0, 1.0)
    assert er.feasible_region(down, 0, 2.5).upper == pytest.approx(0.5, abs=1e-12)
    up = single((1, 3))
    assert er.feasible_region(up, 0, 1.5).lower == pytest.approx(1 / 6, abs=1e-12)
    with pytest.raises(EmptyRegion):
        er.feasible_region(down, 0, 3.5)
    assert 0.7 in er.feasible_region(up, 0, 1.5)


def test_critical_points_decreasing(down):
    assert er.critical_points(down, 0, 0.0).y == pytest.approx(0.8359, abs=1e-3)
    cq = er.critical_points(down, 0, 1.0)
    assert cq.y == pytest.approx(0.6166, abs=1e-3)
    assert cq.z == 0.0 and cq.interval == (0.0, cq.y) and cq.interval_closed_left


def test_critical_points_increasing(up_gain, curved):
    cq = er.critical_points(up_gain, 0, 1.5)
    assert (cq.z, cq.y) == pytest.approx((0.6952, 0.9845), abs=1e-3)
    cq = er.critical_points(curved, 0, 1.5)
    assert (cq.z, cq.z_hat, cq.y) == pytest.approx((0.4402, 0.4502, 0.6737), abs=1e-3)
    assert not cq.interval_closed_left


def test_critical_points_inactive(down):
    cq = er.critical_points(down, 0, 5.0)
    assert (cq.z, cq.z_hat, cq.y) == (0.0, 0.0, 0.0) and not cq.active


def test_t_bar_values(down, up_gain):
    assert er.t_bar(down) == pytest.approx(21 / 11, abs=1e-9)
    assert er.t_bar(presets.network_neutral()) == pytest.approx(1.655, abs=5e-3)
    assert er.t_bar(up_gain) == pytest.approx(3.21, abs=1e-2)


def test_t_bar_scales_with_sensitivity(down):
    half = down.with_gammas([0.5])
    assert er.t_bar_i(half, 0) == pytest.approx(2 * 21 / 11, abs=1e-9)
    assert er.t_bar_i(down.with_gammas([0.0]), 0) == math.inf


def test_t_bar_requires_positive_return(down):
    # bypass construction-time validation to reach the guard
    blocked = object.__new__(type(down))
    object.__setattr__(blocked, "p", down.p)
    object.__setattr__(blocked, "r", down.r)
    object.__setattr__(blocked, "players", (PlayerPrefs(1.0, 100.0),))
    object.__setattr__(blocked, "direction", down.direction)
    with pytest.raises(NoPositiveReturn):
        er.t_bar(blocked)


def test_g_values(down):
    assert er.g(down, 0, 0.0, 0.0) == pytest.approx(2.625)
    y = er.critical_points(down, 0, 0.0).y
    assert abs(er.g(down, 0, y, 0.0)) < 1e-9
    assert er.g_hat(down, 0, 0.0, 0.0) == pytest.approx(2.625)


def test_g_degenerate_denominator(up_gain, monkeypatch):
    monkeypatch.setattr(er, "f_x", lambda *args: 0.0)
    with pytest.raises(DegenerateDenominator):
        er.g(up_gain, 0, 0.6, 0.0)


def test_g_hat_clamps_below_z_hat(curved):
    assert er.g_hat(curved, 0, 0.40, 1.5) == 1.0
    cq = er.critical_points(curved, 0, 1.5)
    assert er.g_hat(curved, 0, cq.y + 0.01, 1.5) == 0.0
    assert er.g_hat(curved, 0, cq.z_hat, 1.5) == pytest.approx(1.0, abs=1e-8)


@given(games(), st.floats(0.0, 0.95))
def test_critical_ordering(game, frac):
    t = frac * er.t_bar(game)
    for i in range(game.n):
        cq = er.critical_points(game, i, t)
        if not cq.active:
            continue
        assert cq.z <= cq.z_hat + 1e-12 <= cq.y + 2e-12 <= 1 + 2e-12
        if cq.y < 1.0:
            assert abs(er.f(game, i, cq.y, t)) < 1e-8
        if game.direction == "decreasing":
            assert cq.z == 0.0


@given(games(), st.floats(0.0, 0.95))
def test_g_decreasing_on_interval(game, frac):
    t = frac * er.t_bar(game)
    cq = er.critical_points(game, 0, t)
    assume(cq.y - cq.z > 1e-3)
    xs = np.linspace(cq.z, cq.y, 30)[1:-1]
    vals = [er.g(game, 0, x, t) for x in xs]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert all(er.f(game, 0, x, t) > 0 and er.f_x(game, 0, x, t) < 0 for x in xs)


@given(games(), st.floats(0.0, 0.9), st.floats(0.01, 0.5))
def test_y_non_increasing_in_tax(game, frac, gap):
    top = er.t_bar(game)
    t2 = frac * top
    t1 = min(t2 + gap * top, top)
    for i in range(game.n):
        assert er.critical_points(game, i, t1).y <= er.critical_points(game, i, t2).y + 1e-9


@pytest.mark.parametrize("k", [0.3, 0.8, 1.3, 2.0])
def test_peak_shift_direction(k):
    game = single((1, 3), k=k)
    top = er.t_bar(game)
    zs = [er.critical_points(game, 0, t).z for t in np.linspace(0, 0.95 * top, 12)]
    steps = np.diff(zs)
    if k < 1:
        assert np.all(steps >= -1e-9)
    else:
        assert np.all(steps <= 1e-9)


def test_g_falls_with_tax_for_congestion(down):
    h = 1e-6
    for x in np.linspace(0.05, 0.5, 6):
        for t in (0.2, 0.6, 1.0):
            if er.f(down, 0, x, t + h) > 0:
                assert er.g(down, 0, x, t + h) < er.g(down, 0, x, t - h)


def test_g_hat_joint_continuity(curved):
    rng = np.random.default_rng(5)
    top = er.t_bar(curved)
    for _ in range(100):
        x, t = rng.uniform(0.05, 0.9), rng.uniform(0, 0.9 * top)
        mods = [abs(er.g_hat(curved, 0, x + d, t + d) - er.g_hat(curved, 0, x, t)) for d in (1e-4, 5e-5, 2.5e-5)]
        assert mods[2] <= mods[0] + 1e-12
        assert mods[2] < 1e-2


def test_q_independent_of_tax_when_linear(up_gain):
    assert er.q(up_gain, 0, 0.8, 0.0) == pytest.approx(er.q(up_gain, 0, 0.8, 1.0), rel=1e-12)


def test_q_matches_three_factor_formula(up_gain):
    x = 0.8
    p, dp = 0.2 + 0.8 * x**4, 3.2 * x**3
    r, dr = 1 + 3 * x, 3.0
    expected = dr * (1 - p) ** 2 / ((r + 1) * dp - dr * (1 - p) * p)
    assert er.q(up_gain, 0, x, 0.0) == pytest.approx(expected, rel=1e-12)


def test_q_monotone(curved):
    xs = np.linspace(0.3, 1.0, 30)
    qs = [er.q(curved, 0, x, 0.5) for x in xs]
    assert all(b < a for a, b in zip(qs, qs[1:]))
    ts = np.linspace(0.0, 1.0, 10)
    qt = [er.q(curved, 0, 0.7, t) for t in ts]
    assert all(b > a for a, b in zip(qt, qt[1:]))


def test_q_rejects_congestion_and_loss_branch(down, curved):
    with pytest.raises(ValueError):
        er.q(down, 0, 0.5, 0.0)
    with pytest.raises(OutsideGainBranch):
        er.q(curved, 0, 0.05, 1.5)
