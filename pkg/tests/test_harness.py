import numpy as np
import pytest

from plauset.agents import AgentSpec, plan_episode
from plauset.domains import DomainSpec, riverswim_instance, single_state_instance
from plauset.harness import (PLAN, SIMULATE, RegretCurve, episode_regret, optimal_return,
                             run_experiment, simulate_episode, substream)
from plauset.mdp import TabularMdp, expected_return, value_iteration
from plauset.posterior import uniform_prior


def test_deterministic_rollout():
    S = 3
    P = np.zeros((S, 1, S))
    for s in range(S):
        P[s, 0, (s + 1) % S] = 1.0
    R = np.arange(S * S, dtype=float).reshape(S, 1, S)
    mdp = TabularMdp(P, R, [1.0, 0, 0], 4)
    traj, total = simulate_episode(mdp, np.zeros((4, S), dtype=int), np.random.default_rng(0))
    assert [(s, a, s2) for s, a, s2, _ in traj] == [(0, 0, 1), (1, 0, 2), (2, 0, 0), (0, 0, 1)]
    assert total == 1 + 5 + 6 + 1


def test_rollout_policy_shape_checked():
    mdp = riverswim_instance()
    with pytest.raises(ValueError):
        simulate_episode(mdp, np.zeros((2, 6), dtype=int), np.random.default_rng(0))


@pytest.mark.parametrize("make, n", [(single_state_instance, 100_000), (riverswim_instance, 20_000)])
def test_monte_carlo_matches_exact_return(make, n):
    mdp = make()
    rng = np.random.default_rng(1)
    policy = rng.integers(0, mdp.num_actions, size=(mdp.horizon, mdp.num_states))
    returns = np.array([simulate_episode(mdp, policy, rng)[1] for _ in range(n)])
    exact = expected_return(mdp, policy)
    assert abs(returns.mean() - exact) <= 3 * returns.std(ddof=1) / np.sqrt(n)


def test_episode_regret():
    mdp = riverswim_instance()
    _, pi = value_iteration(mdp)
    assert episode_regret(mdp, pi) == 0.0
    left = np.zeros((20, 6), dtype=int)
    assert episode_regret(mdp, left) == pytest.approx(optimal_return(mdp) - 0.1, abs=1e-12)
    rng = np.random.default_rng(2)
    for _ in range(50):
        assert episode_regret(mdp, rng.integers(0, 2, size=(20, 6))) >= -1e-12


def test_substreams_are_independent_and_stable():
    a = substream(0, 1, 2, PLAN).random(3)
    assert np.array_equal(a, substream(0, 1, 2, PLAN).random(3))
    assert not np.array_equal(a, substream(0, 1, 2, SIMULATE).random(3))
    assert not np.array_equal(a, substream(1, 1, 2, PLAN).random(3))


def test_oracle_curves_are_zero():
    for name in ("riverswim", "single_state"):
        res = run_experiment(DomainSpec(name), [AgentSpec("oracle")], episodes=5, runs=3, seed=0, threads=1)
        curve = res.curves["oracle"]
        assert np.all(curve.mean_cumulative == 0) and np.all(curve.worst_cumulative == 0)


def test_curve_identities():
    res = run_experiment(DomainSpec("riverswim"), [AgentSpec("psrl"), AgentSpec("hoeffding")],
                         episodes=8, runs=4, seed=3, threads=1)
    assert len(res.records) == 2 * 4 * 8
    for curve in res.curves.values():
        assert np.all(curve.worst_cumulative >= curve.mean_cumulative)
        assert np.all(np.diff(curve.per_run, axis=1) >= -1e-9)
        assert np.all(curve.per_run <= curve.worst_cumulative)
    for r in res.records:
        assert r.episodic_regret >= -1e-9
    one = RegretCurve.from_runs(res.curves["psrl"].per_run[:1])
    np.testing.assert_array_equal(one.mean_cumulative, one.worst_cumulative)
    # cumulative regret is the running sum of the episodic regret
    run0 = [r for r in res.records if r.agent == "psrl" and r.run == 0]
    np.testing.assert_allclose(np.cumsum([r.episodic_regret for r in run0]),
                               [r.cumulative_regret for r in run0], atol=1e-12)


def test_determinism_and_thread_independence():
    agents = [AgentSpec("psrl"), AgentSpec("bayesucrl", posterior_samples=200)]
    a = run_experiment(DomainSpec("riverswim"), agents, episodes=4, runs=3, seed=7, threads=1)
    b = run_experiment(DomainSpec("riverswim"), agents, episodes=4, runs=3, seed=7, threads=2)
    assert a.records == b.records
    c = run_experiment(DomainSpec("riverswim"), agents, episodes=4, runs=3, seed=8, threads=1)
    assert a.records != c.records


def test_configuration_errors():
    with pytest.raises(ValueError):
        run_experiment(DomainSpec("riverswim"), [AgentSpec("psrl")], episodes=0)
    with pytest.raises(ValueError):
        run_experiment(DomainSpec("riverswim"), [AgentSpec("psrl")], runs=0)
    with pytest.raises(ValueError):
        run_experiment(DomainSpec("riverswim"), [AgentSpec("psrl"), AgentSpec("psrl")], episodes=1, runs=1)


def test_posterior_consistency_after_learning():
    mdp = riverswim_instance()
    post = uniform_prior(6, 2)
    spec = AgentSpec("psrl")
    for episode in range(1, 101):
        policy, _ = plan_episode(spec, post, mdp.known(), episode, substream(0, 0, episode, PLAN))
        for s, a, s_next, _ in simulate_episode(mdp, policy, substream(0, 0, episode, SIMULATE))[0]:
            post.record_transition(s, a, s_next)
    visits = post.visits()
    assert (visits >= 1).sum() >= 4
    for s, a in zip(*np.nonzero(visits >= 30)):
        assert np.abs(post.mean(s, a) - mdp.transitions[s, a]).sum() < 0.3
