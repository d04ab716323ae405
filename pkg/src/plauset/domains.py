"""Benchmark MDPs: a single decision state over three terminals, and RiverSwim.

Numeric parameters are configuration defaults chosen to follow the usual
shape of these benchmarks; every one can be overridden.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .mdp import TabularMdp, check

SINGLE_STATE = "single_state"
RIVERSWIM = "riverswim"

SINGLE_STATE_DEFAULTS = {
    "terminal_values": (1.0, 2.0, 3.0),
    "p_a1": (0.6, 0.3, 0.1),
    "p_a2": (0.3, 0.4, 0.3),
    "p_a3": (0.1, 0.3, 0.6),
    "horizon": 1,
}

RIVERSWIM_DEFAULTS = {
    "num_states": 6,
    "horizon": 20,
    "p_right": 0.3,
    "p_back": 0.1,
    "small_reward": 0.005,
    "large_reward": 1.0,
}

DEFAULTS = {SINGLE_STATE: SINGLE_STATE_DEFAULTS, RIVERSWIM: RIVERSWIM_DEFAULTS}


def _params(defaults, overrides):
    unknown = set(overrides) - set(defaults)
    if unknown:
        raise ValueError(f"unknown domain parameter(s): {', '.join(sorted(unknown))}")
    return {**defaults, **overrides}


def single_state_instance(**overrides) -> TabularMdp:
    """One decision state (index 0) whose three actions lead to absorbing terminals 1..3.

    Terminal values are paid as the reward of the transition into each terminal.
    """
    p = _params(SINGLE_STATE_DEFAULTS, overrides)
    values = np.asarray(p["terminal_values"], dtype=float)
    rows = [np.asarray(p[key], dtype=float) for key in ("p_a1", "p_a2", "p_a3")]
    if values.shape != (3,) or any(r.shape != (3,) for r in rows):
        raise ValueError("single-state domain needs three terminal values and three-entry action rows")
    S, A = 4, 3
    P = np.zeros((S, A, S))
    R = np.zeros((S, A, S))
    for a, row in enumerate(rows):
        P[0, a, 1:] = row
        R[0, a, 1:] = values
    for t in range(1, S):
        P[t, :, t] = 1.0
    p0 = np.zeros(S)
    p0[0] = 1.0
    return check(TabularMdp(P, R, p0, int(p["horizon"])))


def riverswim_instance(**overrides) -> TabularMdp:
    """Chain of states; LEFT (action 0) drifts home, RIGHT (action 1) swims upstream.

    RIGHT from an interior state: p_right forward, p_back back, the rest stays.
    RIGHT from state 0: p_right forward, the rest stays. RIGHT from the last
    state: p_right stays (paying large_reward), the rest goes back.
    LEFT at state 0 pays small_reward.
    """
    p = _params(RIVERSWIM_DEFAULTS, overrides)
    S = int(p["num_states"])
    if S < 2:
        raise ValueError("RiverSwim needs at least two states")
    fwd, back = float(p["p_right"]), float(p["p_back"])
    if fwd < 0 or back < 0 or fwd + back > 1:
        raise ValueError("p_right and p_back must be nonnegative with p_right + p_back <= 1")
    LEFT, RIGHT = 0, 1
    P = np.zeros((S, 2, S))
    R = np.zeros((S, 2, S))
    for s in range(S):
        P[s, LEFT, max(s - 1, 0)] = 1.0
    P[0, RIGHT, 1] = fwd
    P[0, RIGHT, 0] = 1.0 - fwd
    for s in range(1, S - 1):
        P[s, RIGHT, s + 1] = fwd
        P[s, RIGHT, s - 1] = back
        P[s, RIGHT, s] = 1.0 - fwd - back
    P[S - 1, RIGHT, S - 1] = fwd
    P[S - 1, RIGHT, S - 2] = 1.0 - fwd
    R[0, LEFT, 0] = float(p["small_reward"])
    R[S - 1, RIGHT, S - 1] = float(p["large_reward"])
    p0 = np.zeros(S)
    p0[0] = 1.0
    return check(TabularMdp(P, R, p0, int(p["horizon"])))


BUILDERS = {SINGLE_STATE: single_state_instance, RIVERSWIM: riverswim_instance}


@dataclass(frozen=True)
class DomainSpec:
    name: str
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        name = self.name.lower().replace("-", "_")
        if name == "single":
            name = SINGLE_STATE
        if name not in BUILDERS:
            raise ValueError(f"unknown domain {self.name!r}; available: {', '.join(BUILDERS)}")
        object.__setattr__(self, "name", name)
        _params(DEFAULTS[name], self.overrides)

    def build(self) -> TabularMdp:
        return BUILDERS[self.name](**self.overrides)


def describe_domains() -> str:
    lines = []
    for name, defaults in DEFAULTS.items():
        lines.append(name)
        for key, value in defaults.items():
            if isinstance(value, tuple):
                value = ", ".join(f"{x:g}" for x in value)
            lines.append(f"  {key} = {value}")
    return "\n".join(lines)
