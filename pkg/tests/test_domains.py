import numpy as np
import pytest

from plauset.domains import (DEFAULTS, RIVERSWIM, SINGLE_STATE, DomainSpec, describe_domains,
                             riverswim_instance, single_state_instance)
from plauset.harness import optimal_return
from plauset.mdp import expected_return, validate, value_iteration


def test_single_state_shape_and_values():
    mdp = single_state_instance()
    assert validate(mdp) == []
    assert (mdp.num_states, mdp.num_actions, mdp.horizon) == (4, 3, 1)
    V, pi = value_iteration(mdp)
    assert V[0, 0] == pytest.approx(2.5)
    assert pi[0, 0] == 2
    assert expected_return(mdp, np.zeros((1, 4), dtype=int)) == pytest.approx(1.5)


def test_riverswim_shape():
    mdp = riverswim_instance()
    assert validate(mdp) == []
    assert (mdp.num_states, mdp.num_actions, mdp.horizon, mdp.discount) == (6, 2, 20, 1.0)
    np.testing.assert_allclose(mdp.transitions[2, 1, 1:4], [0.1, 0.6, 0.3])
    np.testing.assert_allclose(mdp.transitions[0, 1, :2], [0.7, 0.3])
    np.testing.assert_allclose(mdp.transitions[5, 1, 4:], [0.7, 0.3])
    assert mdp.rewards[5, 1, 5] == 1.0 and mdp.rewards[0, 0, 0] == 0.005
    assert mdp.rewards.sum() == pytest.approx(1.005)


def test_riverswim_optimal_policy():
    mdp = riverswim_instance()
    V, pi = value_iteration(mdp)
    # swimming right pays off from the start, but not in the last few stages near home
    assert np.all(pi[0] == 1)
    assert pi[-1, 0] == 0
    always_left = expected_return(mdp, np.zeros((20, 6), dtype=int))
    assert always_left == pytest.approx(0.005 * 20)
    assert optimal_return(mdp) > always_left


def test_overrides():
    assert np.array_equal(riverswim_instance(**DEFAULTS[RIVERSWIM]).transitions,
                          riverswim_instance().transitions)
    assert np.array_equal(single_state_instance(**DEFAULTS[SINGLE_STATE]).rewards,
                          single_state_instance().rewards)
    assert riverswim_instance(horizon=5, num_states=4).transitions.shape == (4, 2, 4)
    with pytest.raises(ValueError):
        riverswim_instance(p_right=0.8, p_back=0.5)
    with pytest.raises(ValueError):
        riverswim_instance(depth=3)
    with pytest.raises(ValueError):
        single_state_instance(p_a1=(0.5, 0.6, 0.1))


def test_domain_spec():
    assert DomainSpec("RiverSwim").name == RIVERSWIM
    assert DomainSpec("single-state").name == SINGLE_STATE
    assert DomainSpec("riverswim", {"horizon": 7}).build().horizon == 7
    with pytest.raises(ValueError):
        DomainSpec("gridworld")
    with pytest.raises(ValueError):
        DomainSpec("riverswim", {"colour": 1})
    text = describe_domains()
    assert "riverswim" in text and "single_state" in text
