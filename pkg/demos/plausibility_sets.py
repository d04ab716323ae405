"""How OFVF sets compare with credible balls as data accumulates.

Feeds a growing batch of RiverSwim transitions into the posterior and prints,
for the (state 2, RIGHT) row, the radius of the OFVF set, the BayesUCRL ball
and the Hoeffding ball, plus the optimistic return each one predicts.
"""
import numpy as np

from plauset import (bayes_ucrl_sets, hoeffding_sets, ofvf_construct, optimistic_value_iteration,
                     riverswim_instance, simulate_episode, uniform_prior)
from plauset.harness import optimal_return


def main():
    mdp = riverswim_instance()
    known = mdp.known()
    rng = np.random.default_rng(0)
    post = uniform_prior(mdp.num_states, mdp.num_actions)
    print(f"true optimal return {optimal_return(mdp):.3f}")
    print(f"{'episodes':>8} {'ofvf r':>8} {'bucrl r':>8} {'hoeff r':>8} {'ofvf V':>8} {'bucrl V':>8} {'hoeff V':>8}")
    done = 0
    for target in (1, 5, 20, 80, 320):
        while done < target:
            policy = rng.integers(0, 2, size=(mdp.horizon, mdp.num_states))
            for s, a, s_next, _ in simulate_episode(mdp, policy, rng)[0]:
                post.record_transition(s, a, s_next)
            done += 1
        ofvf = ofvf_construct(post, known, 0.05, rng)
        bucrl = bayes_ucrl_sets(post, done + 1, 1000, rng)
        hoeff = hoeffding_sets(post, 0.05)
        values = [ofvf.optimistic_return]
        for sets in (bucrl, hoeff):
            V, _ = optimistic_value_iteration(known, sets)
            values.append(float(known.initial_dist @ V[0]))
        radii = [ofvf.sets.radii[2, 1], bucrl.radii[2, 1], hoeff.radii[2, 1]]
        print(f"{done:8d} " + " ".join(f"{x:8.3f}" for x in radii + values))


if __name__ == "__main__":
    main()
