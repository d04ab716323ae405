"""L1 plausibility sets and the optimistic Bellman machinery over them."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .mdp import SIMPLEX_TOL, KnownModel

OPTIMISTIC = "optimistic"
PESSIMISTIC = "pessimistic"
DIRECTIONS = (OPTIMISTIC, PESSIMISTIC)
MAX_RADIUS = 2.0


def direction_sign(direction: str) -> float:
    if direction == OPTIMISTIC:
        return 1.0
    if direction == PESSIMISTIC:
        return -1.0
    raise ValueError(f"unknown direction {direction!r}; expected one of {DIRECTIONS}")


def _check_simplex(p, what="center"):
    if np.any(p < -SIMPLEX_TOL) or abs(p.sum() - 1.0) > SIMPLEX_TOL:
        raise ValueError(f"{what} is not a probability vector: {p}")


@dataclass(frozen=True)
class L1Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        center = np.asarray(self.center, dtype=float)
        _check_simplex(center)
        if not 0.0 <= self.radius <= MAX_RADIUS + SIMPLEX_TOL:
            raise ValueError(f"radius {self.radius} outside [0, 2]")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", float(min(self.radius, MAX_RADIUS)))

    def contains(self, p, tol: float = SIMPLEX_TOL) -> bool:
        p = np.asarray(p, dtype=float)
        on_simplex = np.all(p >= -tol) and abs(p.sum() - 1.0) <= tol
        return bool(on_simplex and np.abs(p - self.center).sum() <= self.radius + tol)

    def support(self, z, direction: str = OPTIMISTIC) -> float:
        return optimistic_l1_response(self.center, self.radius, z, direction)[0]


@dataclass(frozen=True)
class PlausibilitySets:
    """One L1 ball per (s, a): ``centers`` is (S, A, S), ``radii`` is (S, A)."""
    centers: np.ndarray
    radii: np.ndarray

    def __post_init__(self):
        centers = np.ascontiguousarray(self.centers, dtype=float)
        radii = np.ascontiguousarray(self.radii, dtype=float)
        if centers.ndim != 3 or radii.shape != centers.shape[:2]:
            raise ValueError("centers must be (S, A, S) and radii (S, A)")
        if np.any(centers < -SIMPLEX_TOL) or np.any(np.abs(centers.sum(axis=2) - 1.0) > SIMPLEX_TOL):
            raise ValueError("every center must lie on the simplex")
        if np.any(radii < 0) or np.any(radii > MAX_RADIUS + SIMPLEX_TOL):
            raise ValueError("radii must lie in [0, 2]")
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "radii", np.minimum(radii, MAX_RADIUS))

    def ball(self, s: int, a: int) -> L1Ball:
        return L1Ball(self.centers[s, a], self.radii[s, a])


def hoeffding_radius(n: int, num_states: int, num_actions: int, delta: float) -> float:
    """Distribution-free L1 radius sqrt(2/n log(S A 2^S / delta)), clamped to [0, 2]."""
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    if n <= 0:
        return MAX_RADIUS
    log_term = math.log(num_states) + math.log(num_actions) + num_states * math.log(2.0) - math.log(delta)
    return min(MAX_RADIUS, math.sqrt(2.0 / n * log_term))


def order_statistic_index(coverage: float, n: int) -> int:
    """1-based index of the smallest order statistic covering ``coverage`` of n samples."""
    # the small offset keeps products like 0.7 * 10 = 7.000000000000001 from rounding up
    k = math.ceil(coverage * n - 1e-9)
    return min(max(1, k), n)


def upper_order_statistic(values, coverage: float, axis: int = -1):
    """Smallest sample value v with at least ceil(coverage n) samples <= v."""
    values = np.asarray(values, dtype=float)
    n = values.shape[axis]
    if n == 0:
        raise ValueError("empty sample")
    k = order_statistic_index(coverage, n) - 1
    return np.take(np.partition(values, k, axis=axis), k, axis=axis)


def l1_distances(samples, center) -> np.ndarray:
    return np.abs(np.asarray(samples) - np.asarray(center)).sum(axis=-1)


def bayes_credible_radius(samples, center, delta: float) -> float:
    """Smallest radius holding at least ceil((1 - delta) N) of the samples."""
    samples = np.atleast_2d(samples)
    if samples.shape[0] == 0:
        raise ValueError("empty sample batch")
    return float(min(MAX_RADIUS, upper_order_statistic(l1_distances(samples, center), 1.0 - delta)))


def bayes_ucrl_radius(samples, center, episode: int, split: int = 1) -> float:
    """Credible radius at coverage 1 - 1/(episode * split); episode 1 with split 1 gives the minimum distance."""
    if episode < 1:
        raise ValueError("episode must be >= 1")
    delta = min(1.0 / (episode * split), 1.0)
    return bayes_credible_radius(samples, center, delta)


def optimistic_l1_response(center, radius: float, z, direction: str = OPTIMISTIC):
    """Extreme value of p.z over the L1 ball around ``center`` intersected with the simplex.

    Returns ``(value, p)``; ``direction="pessimistic"`` minimises instead.
    """
    center = np.ascontiguousarray(center, dtype=float)
    z = np.ascontiguousarray(z, dtype=float)
    _check_simplex(center)
    if not 0.0 <= radius <= MAX_RADIUS + SIMPLEX_TOL:
        raise ValueError(f"radius {radius} outside [0, 2]")
    if z.shape != center.shape or not np.all(np.isfinite(z)):
        raise ValueError("z must be a finite vector matching the center")
    sign = direction_sign(direction)
    _, p = _kernels.l1_response(center, float(radius), sign * z)
    return float(p @ z), p


def optimistic_value_iteration(known: KnownModel, sets: PlausibilitySets, direction: str = OPTIMISTIC):
    """Backward induction where every backup takes the extreme kernel row in its ball.

    Returns ``(values, policy)`` shaped (H + 1, S) and (H, S).
    """
    rewards = np.ascontiguousarray(known.rewards, dtype=float)
    if sets.centers.shape != rewards.shape:
        raise ValueError("plausibility sets do not cover every (s, a)")
    return _kernels.robust_value_iteration(
        rewards, sets.centers, sets.radii, known.terminal(), int(known.horizon),
        float(known.discount), direction_sign(direction))


def hoeffding_sets(posterior, delta: float) -> PlausibilitySets:
    """Balls around the posterior mean with Hoeffding radii from the visit counts."""
    S, A = posterior.num_states, posterior.num_actions
    visits = posterior.visits()
    radii = np.array([[hoeffding_radius(int(round(visits[s, a])), S, A, delta) for a in range(A)]
                      for s in range(S)])
    return PlausibilitySets(posterior.mean(), radii)


def bayes_ucrl_sets(posterior, episode: int, num_samples: int, rng, split: int | None = None) -> PlausibilitySets:
    """Balls around the posterior mean sized by posterior-sample distance quantiles."""
    S, A = posterior.num_states, posterior.num_actions
    split = S * A if split is None else split
    if episode < 1:
        raise ValueError("episode must be >= 1")
    centers = posterior.mean()
    batch = posterior.sample_all(num_samples, rng)
    dist = l1_distances(batch, centers[:, :, None, :])
    coverage = 1.0 - min(1.0 / (episode * split), 1.0)
    radii = np.minimum(upper_order_statistic(dist, coverage, axis=2), MAX_RADIUS)
    return PlausibilitySets(centers, radii)
