"""Episodic planners sharing one interface: OFVF, BayesUCRL, Hoeffding-UCRL, PSRL, Oracle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ambiguity import DIRECTIONS, OPTIMISTIC, bayes_ucrl_sets, hoeffding_sets, optimistic_value_iteration
from .mdp import KnownModel, TabularMdp, value_iteration
from .ofvf import ofvf_construct

OFVF = "ofvf"
BAYES_UCRL = "bayesucrl"
HOEFFDING_UCRL = "hoeffding"
PSRL = "psrl"
ORACLE = "oracle"
KINDS = (OFVF, BAYES_UCRL, HOEFFDING_UCRL, PSRL, ORACLE)

_ALIASES = {"bayes_ucrl": BAYES_UCRL, "hoeffding_ucrl": HOEFFDING_UCRL, "ucrl": HOEFFDING_UCRL}


def canonical_kind(kind: str) -> str:
    k = kind.strip().lower().replace("-", "_")
    k = _ALIASES.get(k, k)
    if k not in KINDS:
        raise ValueError(f"unknown agent {kind!r}; available: {', '.join(KINDS)}")
    return k


@dataclass(frozen=True)
class AgentSpec:
    kind: str
    delta: float = 0.05
    posterior_samples: int = 1000
    direction: str = OPTIMISTIC
    max_iterations: int = 20

    def __post_init__(self):
        object.__setattr__(self, "kind", canonical_kind(self.kind))
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta out of (0,1)")
        if self.posterior_samples < 1:
            raise ValueError("posterior_samples must be >= 1")
        if self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")

    @property
    def name(self) -> str:
        return self.kind


def plan_episode(spec: AgentSpec, posterior, known: KnownModel, episode: int,
                 rng: np.random.Generator, true_mdp: TabularMdp | None = None):
    """Policy for the coming episode and the planner's own estimate of its return."""
    if episode < 1:
        raise ValueError("episode must be >= 1")
    kind = spec.kind
    if kind == OFVF:
        result = ofvf_construct(posterior, known, spec.delta, rng, direction=spec.direction,
                                max_iterations=spec.max_iterations,
                                num_samples=spec.posterior_samples)
        return result.policy, result.optimistic_return
    if kind == BAYES_UCRL:
        sets = bayes_ucrl_sets(posterior, episode, spec.posterior_samples, rng)
        values, policy = optimistic_value_iteration(known, sets)
    elif kind == HOEFFDING_UCRL:
        values, policy = optimistic_value_iteration(known, hoeffding_sets(posterior, spec.delta))
    elif kind == PSRL:
        values, policy = value_iteration(posterior.sample_mdp(known, rng))
    elif kind == ORACLE:
        if true_mdp is None:
            raise ValueError("the oracle agent needs the true MDP")
        values, policy = value_iteration(true_mdp)
    else:  # pragma: no cover - guarded by AgentSpec
        raise ValueError(kind)
    return policy, float(np.asarray(known.initial_dist) @ values[0])
