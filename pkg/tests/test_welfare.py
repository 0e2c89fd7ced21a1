import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cprtax import equilibrium as eq
from cprtax import presets
from cprtax import welfare as w
from cprtax.errors import InvariantViolation

from conftest import games


def test_zero_profile(neutral):
    assert w.social_welfare(neutral, [0.0, 0.0]) == 0.0


def test_single_player_is_expected_utility():
    game = presets.network(n=1, k=1.3, alpha=0.5)
    assert w.social_welfare(game, [0.4], 0.2) == pytest.approx(eq.expected_utility(game, 0, 0.4, 0.0, 0.2))


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(3)
    game = presets.network_mixed()
    h = 1e-7
    for _ in range(30):
        x = rng.uniform(0.05, 0.45, 2)
        grad = w.welfare_gradient(game, x)
        for i in range(2):
            e = np.zeros(2)
            e[i] = h
            fd = (w.social_welfare(game, x + e) - w.social_welfare(game, x - e)) / (2 * h)
            assert grad[i] == pytest.approx(fd, abs=1e-5)


@settings(max_examples=10)
@given(games(max_players=3), st.integers(0, 2**16))
def test_gradient_random_games(game, seed):
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.05, 0.3, game.n)
    h = 1e-7
    grad = w.welfare_gradient(game, x)
    for i in range(game.n):
        e = np.zeros(game.n)
        e[i] = h
        fd = (w.social_welfare(game, x + e) - w.social_welfare(game, x - e)) / (2 * h)
        assert grad[i] == pytest.approx(fd, abs=1e-5, rel=1e-5)


def test_optimum_values(neutral, gain_seeking):
    assert w.social_optimum(neutral).x_opt == pytest.approx(0.6829, abs=2e-3)
    assert w.social_optimum(gain_seeking).x_opt == pytest.approx(0.7351, abs=2e-3)


def test_optimum_beats_random_profiles(neutral):
    best = w.social_optimum(neutral)
    rng = np.random.default_rng(0)
    probes = rng.uniform(0, 1, (100, 2))
    assert all(best.psi >= w.social_welfare(neutral, p) for p in probes)


def test_result_invariants(mixed):
    res = w.social_optimum(mixed)
    assert res.method == "multistart"
    assert res.psi >= 0.0
    assert all(0.0 <= x <= 1.0 for x in res.profile)
    assert res.x_opt == pytest.approx(sum(res.profile), abs=1e-9)


def test_interior_first_order_residual(mixed):
    res = w.social_optimum(mixed)
    grad = w.welfare_gradient(mixed, res.profile)
    for i, x in enumerate(res.profile):
        if 1e-6 < x < 1 - 1e-6:
            assert abs(grad[i]) < 1e-5


def test_multistart_stable_when_doubled(mixed, neutral, gain_seeking):
    for game in (mixed, neutral, gain_seeking):
        a = w.multistart_optimum(game, starts=32).psi
        b = w.multistart_optimum(game, starts=64).psi
        assert abs(a - b) < 1e-6


def test_reduced_matches_multistart(neutral):
    assert w.social_optimum(neutral).psi == pytest.approx(w.multistart_optimum(neutral).psi, abs=1e-9)


def test_concentrated_profile_wins_for_curved_players():
    game = presets.network(n=3, k=1.0, alpha=0.4)
    res = w.social_optimum(game)
    assert res.psi >= w.multistart_optimum(game).psi - 1e-9


def test_opt_below_equilibrium(neutral, congestion):
    for game in (neutral, congestion):
        cmp = w.check_opt_leq_ne(game)
        assert cmp.holds and cmp.x_opt <= cmp.x_ne + 1e-6
    assert w.check_opt_leq_ne(neutral).x_opt == pytest.approx(0.6829, abs=2e-3)


def test_opt_check_raises_on_violation(neutral, monkeypatch):
    fake = w.WelfareResult((0.5, 0.5), 1.0, 1.0, "reduced")
    monkeypatch.setattr(w, "social_optimum", lambda game, seed=0: fake)
    with pytest.raises(InvariantViolation):
        w.check_opt_leq_ne(neutral)


@settings(max_examples=10)
@given(games(max_players=3))
def test_opt_below_equilibrium_random(game):
    assert w.check_opt_leq_ne(game).holds
