"""Finite-horizon tabular MDPs: validation, policy evaluation, value iteration.

Arrays follow one layout throughout the package:

- ``transitions[s, a, s']`` probability of reaching ``s'``
- ``rewards[s, a, s']`` reward for that transition
- values are ``(H + 1, S)`` with row ``H`` holding terminal values
- policies are ``(H, S)`` integer arrays (nonstationary)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

SIMPLEX_TOL = 1e-9


@dataclass(frozen=True)
class TabularMdp:
    transitions: np.ndarray
    rewards: np.ndarray
    initial_dist: np.ndarray
    horizon: int
    discount: float = 1.0
    terminal_values: np.ndarray | None = field(default=None)

    def __post_init__(self):
        P = np.asarray(self.transitions, dtype=float)
        if P.ndim != 3 or P.shape[0] != P.shape[2]:
            raise ValueError(f"transitions must have shape (S, A, S), got {P.shape}")
        S, A, _ = P.shape
        R = np.asarray(self.rewards, dtype=float)
        if R.shape != P.shape:
            raise ValueError(f"rewards shape {R.shape} does not match transitions {P.shape}")
        p0 = np.asarray(self.initial_dist, dtype=float)
        if p0.shape != (S,):
            raise ValueError(f"initial_dist must have shape ({S},), got {p0.shape}")
        if int(self.horizon) < 1:
            raise ValueError("horizon must be >= 1")
        if not 0.0 <= float(self.discount) <= 1.0:
            raise ValueError("discount must lie in [0, 1]")
        term = np.zeros(S) if self.terminal_values is None else np.asarray(self.terminal_values, dtype=float)
        if term.shape != (S,):
            raise ValueError(f"terminal_values must have shape ({S},)")
        for name, arr in (("transitions", P), ("rewards", R), ("initial_dist", p0), ("terminal_values", term)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "horizon", int(self.horizon))
        object.__setattr__(self, "discount", float(self.discount))

    @property
    def num_states(self) -> int:
        return self.transitions.shape[0]

    @property
    def num_actions(self) -> int:
        return self.transitions.shape[1]

    def known(self) -> KnownModel:
        """Everything except the transition kernel."""
        return KnownModel(self.rewards, self.initial_dist, self.horizon, self.discount, self.terminal_values)

    def with_transitions(self, transitions) -> TabularMdp:
        return TabularMdp(transitions, self.rewards, self.initial_dist, self.horizon,
                          self.discount, self.terminal_values)


class KnownModel(NamedTuple):
    """The parts of an MDP an agent is told up front; only transitions are learned."""
    rewards: np.ndarray
    initial_dist: np.ndarray
    horizon: int
    discount: float = 1.0
    terminal_values: np.ndarray | None = None

    @property
    def num_states(self) -> int:
        return self.rewards.shape[0]

    @property
    def num_actions(self) -> int:
        return self.rewards.shape[1]

    def terminal(self) -> np.ndarray:
        if self.terminal_values is None:
            return np.zeros(self.num_states)
        return np.asarray(self.terminal_values, dtype=float)

    def build(self, transitions) -> TabularMdp:
        return TabularMdp(transitions, self.rewards, self.initial_dist, self.horizon,
                          self.discount, self.terminal_values)


def validate(mdp: TabularMdp, tol: float = SIMPLEX_TOL) -> list[str]:
    """Return a list of violated invariants; an empty list means the MDP is valid."""
    problems = []
    P = mdp.transitions
    S, A, _ = P.shape
    for s in range(S):
        for a in range(A):
            row = P[s, a]
            if not np.all(np.isfinite(row)):
                problems.append(f"non-finite probability at ({s},{a})")
                continue
            if np.any(row < -tol):
                problems.append(f"negative mass at ({s},{a})")
            total = row.sum()
            if abs(total - 1.0) > tol:
                problems.append(f"row sum {total:.12g} at ({s},{a})")
    p0 = mdp.initial_dist
    if np.any(p0 < -tol):
        problems.append("negative mass in initial_dist")
    if abs(p0.sum() - 1.0) > tol:
        problems.append(f"initial_dist sums to {p0.sum():.12g}")
    if not np.all(np.isfinite(mdp.rewards)):
        problems.append("non-finite reward")
    if not np.all(np.isfinite(mdp.terminal_values)):
        problems.append("non-finite terminal value")
    return problems


def check(mdp: TabularMdp) -> TabularMdp:
    problems = validate(mdp)
    if problems:
        raise ValueError("invalid MDP: " + "; ".join(problems))
    return mdp


def q_values(transitions, rewards, next_values, discount=1.0) -> np.ndarray:
    """One-step backup Q[s, a] = sum_s' P[s,a,s'] (R[s,a,s'] + discount * V[s'])."""
    return np.einsum("ijk,ijk->ij", transitions, rewards + discount * next_values[None, None, :])


def greedy(q: np.ndarray) -> np.ndarray:
    # np.argmax returns the first maximiser, i.e. the lowest action index
    return np.argmax(q, axis=1)


def policy_evaluation(mdp: TabularMdp, policy) -> np.ndarray:
    """Stage values ``V[h, s]`` of a nonstationary policy, ``h = 0..H``."""
    H, S = mdp.horizon, mdp.num_states
    policy = np.asarray(policy)
    if policy.shape != (H, S):
        raise ValueError(f"policy shape {policy.shape} does not match (H, S) = {(H, S)}")
    if np.any(policy < 0) or np.any(policy >= mdp.num_actions):
        raise ValueError("policy contains invalid action indices")
    V = np.empty((H + 1, S))
    V[H] = mdp.terminal_values
    idx = np.arange(S)
    for h in range(H - 1, -1, -1):
        q = q_values(mdp.transitions, mdp.rewards, V[h + 1], mdp.discount)
        V[h] = q[idx, policy[h]]
    return V


def value_iteration(mdp: TabularMdp) -> tuple[np.ndarray, np.ndarray]:
    """Optimal stage values and a greedy policy (ties go to the lowest action)."""
    H, S = mdp.horizon, mdp.num_states
    V = np.empty((H + 1, S))
    V[H] = mdp.terminal_values
    policy = np.empty((H, S), dtype=np.int64)
    idx = np.arange(S)
    for h in range(H - 1, -1, -1):
        q = q_values(mdp.transitions, mdp.rewards, V[h + 1], mdp.discount)
        policy[h] = greedy(q)
        V[h] = q[idx, policy[h]]
    return V, policy


def expected_return(mdp: TabularMdp, policy=None, values=None) -> float:
    """``p0 . V_0`` for a policy (or for precomputed stage values)."""
    if values is None:
        values = policy_evaluation(mdp, policy)
    return float(mdp.initial_dist @ values[0])
