"""Episodic learning loop, exact regret accounting and multi-run aggregation."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .agents import AgentSpec, plan_episode
from .domains import DomainSpec
from .mdp import TabularMdp, check, expected_return, value_iteration
from .posterior import uniform_prior

# purposes of the per-(run, episode) random substreams
PLAN, SIMULATE = 0, 1
THREADS_ENV = "PLAUSET_THREADS"


def substream(seed: int, run: int, episode: int, purpose: int) -> np.random.Generator:
    """Independent generator for one (run, episode, purpose) under a master seed."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(run, episode, purpose)))


@dataclass(frozen=True)
class EpisodeRecord:
    agent: str
    run: int
    episode: int
    episodic_regret: float
    cumulative_regret: float
    predicted_return: float
    realized_return: float


@dataclass
class RegretCurve:
    per_run: np.ndarray  # (runs, episodes) cumulative regret
    mean_cumulative: np.ndarray
    worst_cumulative: np.ndarray

    @classmethod
    def from_runs(cls, per_run) -> RegretCurve:
        per_run = np.asarray(per_run, dtype=float)
        return cls(per_run, per_run.mean(axis=0), per_run.max(axis=0))


@dataclass
class ExperimentResult:
    records: list
    curves: dict

    def final(self, agent: str) -> tuple[float, float]:
        """(mean, worst) cumulative regret at the last episode."""
        c = self.curves[agent]
        return float(c.mean_cumulative[-1]), float(c.worst_cumulative[-1])


def simulate_episode(mdp: TabularMdp, policy, rng: np.random.Generator):
    """Roll the policy out for one episode; returns (trajectory, realized_return).

    The trajectory is a list of (s, a, s_next, reward) tuples.
    """
    H, S = mdp.horizon, mdp.num_states
    policy = np.asarray(policy)
    if policy.shape != (H, S):
        raise ValueError(f"policy shape {policy.shape} does not match (H, S) = {(H, S)}")
    cum = np.cumsum(mdp.transitions, axis=2)
    u = rng.random(H + 1)
    s = min(int(np.searchsorted(np.cumsum(mdp.initial_dist), u[0], side="right")), S - 1)
    trajectory = []
    total = 0.0
    for h in range(H):
        a = int(policy[h, s])
        s_next = min(int(np.searchsorted(cum[s, a], u[h + 1], side="right")), S - 1)
        r = float(mdp.rewards[s, a, s_next])
        trajectory.append((s, a, s_next, r))
        total += r
        s = s_next
    return trajectory, total + float(mdp.terminal_values[s])


def optimal_return(mdp: TabularMdp) -> float:
    values, _ = value_iteration(mdp)
    return float(mdp.initial_dist @ values[0])


def episode_regret(mdp: TabularMdp, policy, optimum: float | None = None) -> float:
    """Exact expected regret of one episode under the true model."""
    if optimum is None:
        optimum = optimal_return(mdp)
    return optimum - expected_return(mdp, policy)


def _run(mdp: TabularMdp, agents, episodes: int, run: int, seed: int):
    known = mdp.known()
    optimum = optimal_return(mdp)
    out = []
    for spec in agents:
        posterior = uniform_prior(mdp.num_states, mdp.num_actions)
        cumulative = 0.0
        for episode in range(1, episodes + 1):
            policy, predicted = plan_episode(spec, posterior, known, episode,
                                             substream(seed, run, episode, PLAN), true_mdp=mdp)
            trajectory, realized = simulate_episode(mdp, policy, substream(seed, run, episode, SIMULATE))
            for s, a, s_next, _ in trajectory:
                posterior.record_transition(s, a, s_next)
            regret = episode_regret(mdp, policy, optimum)
            cumulative += regret
            out.append(EpisodeRecord(spec.name, run, episode, regret, cumulative, predicted, realized))
    return out


def _threads(threads):
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        threads = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(threads))


def run_experiment(domain, agents, episodes: int = 100, runs: int = 100, seed: int = 0,
                   threads: int | None = None) -> ExperimentResult:
    """Simulate every agent for ``runs`` independent runs of ``episodes`` episodes.

    Each run starts from the uniform prior. Results do not depend on
    ``threads`` (default: the PLAUSET_THREADS environment variable, else
    the CPU count).
    """
    if episodes < 1 or runs < 1:
        raise ValueError("episodes and runs must both be >= 1")
    mdp = domain.build() if isinstance(domain, DomainSpec) else check(domain)
    agents = [a if isinstance(a, AgentSpec) else AgentSpec(a) for a in agents]
    names = [a.name for a in agents]
    if len(set(names)) != len(names):
        raise ValueError("agent names must be unique")

    workers = min(_threads(threads), runs)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run, [mdp] * runs, [agents] * runs, [episodes] * runs,
                                   range(runs), [seed] * runs))
    else:
        chunks = [_run(mdp, agents, episodes, run, seed) for run in range(runs)]

    records = sorted((r for chunk in chunks for r in chunk),
                     key=lambda r: (names.index(r.agent), r.run, r.episode))
    curves = {}
    for name in names:
        per_run = np.zeros((runs, episodes))
        for r in records:
            if r.agent == name:
                per_run[r.run, r.episode - 1] = r.cumulative_regret
        curves[name] = RegretCurve.from_runs(per_run)
    return ExperimentResult(records, curves)
