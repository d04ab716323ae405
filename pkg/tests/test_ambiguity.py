import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from plauset.ambiguity import (PESSIMISTIC, L1Ball, PlausibilitySets, bayes_credible_radius,
                               bayes_ucrl_radius, bayes_ucrl_sets, hoeffding_radius, hoeffding_sets,
                               optimistic_l1_response, optimistic_value_iteration, order_statistic_index)
from plauset.mdp import KnownModel, TabularMdp, value_iteration
from plauset.posterior import DirichletPosterior, uniform_prior


def simplex_grid(S, step):
    n = int(round(1 / step))
    if S == 1:
        return np.ones((1, 1))
    rows = []
    for i in range(n + 1):
        rest = simplex_grid(S - 1, step) * (n - i) / n if i < n else np.zeros((1, S - 1))
        rows.append(np.hstack([np.full((len(rest), 1), i / n), rest]))
    return np.vstack(rows)


def two_state_samples(distances):
    # samples around [0.5, 0.5] at the given L1 distances
    d = np.asarray(distances)
    return np.stack([0.5 + d / 2, 0.5 - d / 2], axis=1)


def test_hoeffding_radius():
    assert hoeffding_radius(0, 2, 1, 0.1) == 2.0
    assert hoeffding_radius(8, 2, 1, 0.1) == pytest.approx(math.sqrt(0.25 * math.log(80)))
    assert hoeffding_radius(8, 2, 1, 0.1) == pytest.approx(1.0467, abs=1e-4)
    assert hoeffding_radius(32, 2, 1, 0.1) == pytest.approx(hoeffding_radius(8, 2, 1, 0.1) / 2)
    assert hoeffding_radius(1, 10, 5, 0.01) == 2.0
    with pytest.raises(ValueError):
        hoeffding_radius(5, 2, 1, 1.0)


def test_order_statistic_index():
    assert order_statistic_index(0.7, 10) == 7
    assert order_statistic_index(0.0, 10) == 1
    assert order_statistic_index(1.0, 10) == 10
    assert order_statistic_index(0.95, 1000) == 950


def test_credible_radius_examples():
    center = np.array([0.5, 0.5])
    assert bayes_credible_radius(np.tile(center, (5, 1)), center, 0.1) == 0.0
    samples = two_state_samples(np.arange(1, 11) / 10)
    assert bayes_credible_radius(samples, center, 0.3) == pytest.approx(0.7)
    assert bayes_credible_radius(samples, center, 1e-9) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        bayes_credible_radius(np.empty((0, 2)), center, 0.1)


def test_bayes_ucrl_radius_examples():
    center = np.array([0.5, 0.5])
    samples = two_state_samples(np.arange(1, 11) / 10)
    assert bayes_ucrl_radius(samples, center, 2) == pytest.approx(0.5)
    assert bayes_ucrl_radius(samples, center, 1) == pytest.approx(0.1)
    assert bayes_ucrl_radius(samples, center, 10**6) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        bayes_ucrl_radius(samples, center, 0)


def test_l1_response_examples():
    value, p = optimistic_l1_response([0.5, 0.3, 0.2], 0.2, [3.0, 2.0, 1.0])
    np.testing.assert_allclose(p, [0.6, 0.3, 0.1])
    assert value == pytest.approx(2.5)
    value, _ = optimistic_l1_response([0.5, 0.3, 0.2], 0.0, [3.0, 2.0, 1.0])
    assert value == pytest.approx(2.3)
    value, p = optimistic_l1_response([0.5, 0.3, 0.2], 2.0, [3.0, 2.0, 1.0])
    np.testing.assert_allclose(p, [1, 0, 0])
    assert value == pytest.approx(3.0)
    value, p = optimistic_l1_response([0.5, 0.3, 0.2], 0.2, [3.0, 2.0, 1.0], PESSIMISTIC)
    np.testing.assert_allclose(p, [0.4, 0.3, 0.3])


def test_l1_response_matches_grid():
    grid = simplex_grid(3, 0.005)
    rng = np.random.default_rng(0)
    for _ in range(20):
        c = rng.dirichlet(np.ones(3))
        psi = rng.uniform(0, 2)
        z = rng.normal(size=3)
        inside = grid[np.abs(grid - c).sum(axis=1) <= psi]
        value, p = optimistic_l1_response(c, psi, z)
        assert value >= (inside @ z).max() - 1e-12
        assert value <= (inside @ z).max() + 0.02 * np.ptp(z)
        assert np.abs(p - c).sum() <= psi + 1e-9


def test_l1_response_input_checks():
    with pytest.raises(ValueError):
        optimistic_l1_response([0.5, 0.6], 0.1, [1.0, 0.0])
    with pytest.raises(ValueError):
        optimistic_l1_response([0.5, 0.5], 2.5, [1.0, 0.0])
    with pytest.raises(ValueError):
        optimistic_l1_response([0.5, 0.5], 0.1, [1.0, np.nan])
    with pytest.raises(ValueError):
        L1Ball(np.array([0.5, 0.5]), -0.1)


probability = st.integers(2, 6).flatmap(
    lambda S: st.tuples(st.integers(0, 2**32 - 1), st.just(S)))


@settings(max_examples=100, deadline=None)
@given(probability, st.floats(0, 2), st.floats(0, 2))
def test_l1_response_properties(seed_s, psi1, psi2):
    seed, S = seed_s
    rng = np.random.default_rng(seed)
    c = rng.dirichlet(np.ones(S) * 0.5)
    c = c / c.sum()
    z = rng.normal(size=S) * 3
    lo, hi = sorted((psi1, psi2))
    up_lo, p = optimistic_l1_response(c, lo, z)
    up_hi, _ = optimistic_l1_response(c, hi, z)
    down_lo, q = optimistic_l1_response(c, lo, z, PESSIMISTIC)
    down_hi, _ = optimistic_l1_response(c, hi, z, PESSIMISTIC)
    # monotone in the radius
    assert up_hi >= up_lo - 1e-12 and down_hi <= down_lo + 1e-12
    # feasible
    for x in (p, q):
        assert np.all(x >= -1e-9) and abs(x.sum() - 1) <= 1e-9
        assert np.abs(x - c).sum() <= lo + 1e-9
    # sandwich: any row in the ball lies between the two extremes
    d = rng.normal(size=S)
    d -= d.mean()
    r = c + d * (lo / max(np.abs(d).sum(), 1e-12)) * rng.uniform()
    if np.all(r >= 0):
        assert down_lo - 1e-9 <= r @ z <= up_lo + 1e-9


def random_known(rng, S, A, H):
    R = rng.uniform(0, 1, size=(S, A, S))
    return KnownModel(R, rng.dirichlet(np.ones(S)), H)


def test_zero_radius_is_plain_value_iteration():
    rng = np.random.default_rng(0)
    for _ in range(20):
        S, A, H = rng.integers(2, 6), rng.integers(1, 4), rng.integers(1, 6)
        known = random_known(rng, S, A, H)
        centers = rng.dirichlet(np.ones(S), size=(S, A))
        V, pi = optimistic_value_iteration(known, PlausibilitySets(centers, np.zeros((S, A))))
        W, rho = value_iteration(known.build(centers))
        np.testing.assert_allclose(V, W, atol=1e-9)
        np.testing.assert_array_equal(pi, rho)


def test_full_radius_bounds_every_kernel():
    rng = np.random.default_rng(1)
    S, A, H = 3, 2, 4
    known = random_known(rng, S, A, H)
    sets = PlausibilitySets(np.full((S, A, S), 1 / S), np.full((S, A), 2.0))
    V, _ = optimistic_value_iteration(known, sets)
    for _ in range(50):
        W, _ = value_iteration(known.build(rng.dirichlet(np.ones(S) * 0.3, size=(S, A))))
        assert np.all(V >= W - 1e-9)


def test_optimistic_value_iteration_matches_grid():
    rng = np.random.default_rng(2)
    S, A, H = 3, 2, 2
    known = random_known(rng, S, A, H)
    centers = rng.dirichlet(np.ones(S), size=(S, A))
    radii = rng.uniform(0, 0.6, size=(S, A))
    V, _ = optimistic_value_iteration(known, PlausibilitySets(centers, radii))
    grid = simplex_grid(S, 0.01)
    B = np.zeros((H + 1, S))
    for h in range(H - 1, -1, -1):
        for s in range(S):
            best = -np.inf
            for a in range(A):
                inside = grid[np.abs(grid - centers[s, a]).sum(axis=1) <= radii[s, a] + 1e-12]
                best = max(best, (inside @ (known.rewards[s, a] + B[h + 1])).max())
            B[h, s] = best
    assert np.all(V >= B - 1e-12)
    np.testing.assert_allclose(V, B, atol=0.05)


def test_pessimistic_below_optimistic():
    rng = np.random.default_rng(3)
    S, A = 4, 2
    known = random_known(rng, S, A, 5)
    sets = PlausibilitySets(rng.dirichlet(np.ones(S), size=(S, A)), rng.uniform(0, 1, size=(S, A)))
    up, _ = optimistic_value_iteration(known, sets)
    down, _ = optimistic_value_iteration(known, sets, PESSIMISTIC)
    mid, _ = value_iteration(known.build(sets.centers))
    assert np.all(down <= mid + 1e-12) and np.all(mid <= up + 1e-12)


def test_credible_radius_covers_fresh_batch():
    rng = np.random.default_rng(4)
    alpha = rng.uniform(0.5, 5, size=(4, 1, 4))
    post = DirichletPosterior(alpha)
    center = post.mean(0, 0)
    psi = bayes_credible_radius(post.sample_transitions(0, 0, 1000, rng), center, 0.1)
    fresh = post.sample_transitions(0, 0, 10_000, rng)
    assert (np.abs(fresh - center).sum(axis=1) <= psi).mean() >= 0.88


def test_set_builders():
    post = uniform_prior(3, 2)
    sets = hoeffding_sets(post, 0.05)
    assert np.all(sets.radii == 2.0)
    np.testing.assert_allclose(sets.centers, 1 / 3)
    rng = np.random.default_rng(5)
    b1 = bayes_ucrl_sets(post, 1, 200, rng)
    b9 = bayes_ucrl_sets(post, 9, 200, np.random.default_rng(5))
    assert np.all(b9.radii >= b1.radii)
    assert np.all(b1.radii <= 2.0)
