"""Value-function-driven plausibility sets (OFVF).

Each (s, a) set is the smallest L1 ball that meets, for every value vector
in the current value set, the hyperplane through a posterior quantile of
the backed-up value. The value set grows with the optimistic solutions
until the coverage condition holds for the latest one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .ambiguity import (OPTIMISTIC, PESSIMISTIC, L1Ball, PlausibilitySets, direction_sign,
                        optimistic_value_iteration, order_statistic_index,
                        upper_order_statistic)
from .lp import LinearProgramError
from .mdp import KnownModel, value_iteration

DEDUP_TOL = 1e-6
# slack when comparing a ball's support value against sampled projections
CHECK_TOL = 1e-9
_FLAT = 1e-12


class ValueSet:
    """Ordered collection of value vectors, deduplicated in the sup norm."""

    def __init__(self, vectors=(), tol: float = DEDUP_TOL):
        self.tol = tol
        self._data = None
        self._size = 0
        for v in vectors:
            self.add(v)

    def add(self, v) -> bool:
        v = np.array(v, dtype=float).ravel()
        if self._data is None:
            self._data = np.empty((8, v.shape[0]))
        elif np.abs(self._data[:self._size] - v).max(axis=1).min() <= self.tol:
            return False
        if self._size == self._data.shape[0]:
            self._data = np.concatenate([self._data, np.empty_like(self._data)])
        self._data[self._size] = v
        self._size += 1
        return True

    def __len__(self):
        return self._size

    def __iter__(self):
        return iter(self.as_array())

    def __getitem__(self, i):
        return self.as_array()[i]

    def as_array(self) -> np.ndarray:
        if self._data is None:
            return np.empty((0, 0))
        return self._data[:self._size].copy()


@dataclass(frozen=True)
class Hyperplane:
    normal: np.ndarray
    offset: float

    def clamped(self) -> Hyperplane:
        """Same normal with the offset pulled into [min(normal), max(normal)]."""
        normal = np.asarray(self.normal, dtype=float)
        return Hyperplane(normal, float(np.clip(self.offset, normal.min(), normal.max())))


@dataclass
class OfvfResult:
    policy: np.ndarray
    optimistic_return: float
    sets: PlausibilitySets
    iterations: int
    value_set: ValueSet
    condition_satisfied: bool
    values: np.ndarray
    worst_fraction: float = field(default=float("nan"))


def quantile_offset(v, samples, eps: float, direction: str = OPTIMISTIC) -> float:
    """Offset g of the hyperplane v.p = g from posterior samples of p.

    Optimistic: smallest g with at least (1 - eps) of samples at or below it.
    Pessimistic: largest g with at least (1 - eps) of samples at or above it.
    """
    samples = np.atleast_2d(samples)
    if samples.shape[0] == 0:
        raise ValueError("empty sample batch")
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    proj = samples @ np.asarray(v, dtype=float)
    if direction_sign(direction) > 0:
        return float(upper_order_statistic(proj, 1.0 - eps))
    return float(-upper_order_statistic(-proj, 1.0 - eps))


def _offsets(proj, eps, direction, axis):
    if direction_sign(direction) > 0:
        return upper_order_statistic(proj, 1.0 - eps, axis=axis)
    return -upper_order_statistic(-proj, 1.0 - eps, axis=axis)


def _is_flat(z) -> bool:
    return np.ptp(z) <= _FLAT * max(1.0, np.max(np.abs(z)))


def _center_ball(Z, g, nominal):
    """Minimax centre for non-flat planes (rows of Z); returns (center, radius)."""
    S = nominal.shape[0]
    if len(Z) == 0:
        return nominal.copy(), 0.0
    if len(Z) == 1:
        q, _ = _kernels.l1_project(nominal, Z[0], g[0])
        return q, 0.0
    Z, g = np.ascontiguousarray(Z), np.ascontiguousarray(g)
    status, p, _ = _kernels.minimax_center(Z, g, nominal, True)
    if status != _kernels.OPTIMAL:
        raise LinearProgramError(f"minimax centre LP failed with status {status} (S={S}, k={len(Z)})")
    return p, min(_kernels.max_distance(Z, g, p), 2.0)


def minimax_l1_center(planes, nominal=None):
    """Smallest L1 ball (centre in the simplex) meeting every plane's simplex slice.

    Offsets are clamped into the range of their normals first. Ties among
    optimal centres go to the one closest to ``nominal`` when given.
    Returns ``(center, radius, witnesses)`` where witness i lies on plane i
    at L1 distance at most ``radius`` from the centre.
    """
    planes = [h.clamped() for h in planes]
    if not planes:
        raise ValueError("need at least one hyperplane")
    S = planes[0].normal.shape[0]
    active = [i for i, h in enumerate(planes) if not _is_flat(h.normal)]
    Z = np.array([planes[i].normal for i in active]).reshape(len(active), S)
    g = np.array([planes[i].offset for i in active])
    if nominal is None:
        if len(active) == 0:
            center = np.full(S, 1.0 / S)
        else:
            status, center, _ = _kernels.minimax_center(Z, g, np.full(S, 1.0 / S), False)
            if status != _kernels.OPTIMAL:
                raise LinearProgramError(f"minimax centre LP failed with status {status}")
    else:
        center, _ = _center_ball(Z, g, np.ascontiguousarray(nominal, dtype=float))
    witnesses = []
    radius = 0.0
    for h in planes:
        if _is_flat(h.normal):
            witnesses.append(center.copy())
            continue
        q, d = _kernels.l1_project(center, h.normal, h.offset)
        witnesses.append(q)
        radius = max(radius, d)
    return center, min(radius, 2.0), witnesses


def check_condition(ball: L1Ball, samples, values, eps: float, direction: str = OPTIMISTIC):
    """Empirical coverage of the ball along each value vector.

    Optimistic: a sample p* succeeds for v when max_{p in ball} (p - p*).v >= 0.
    Pessimistic: success is max_{p in ball} (p - p*).v <= 0.
    Returns ``(passed, worst_fraction)`` with passed = worst_fraction >= 1 - eps.
    """
    samples = np.atleast_2d(samples)
    if samples.shape[0] == 0:
        raise ValueError("empty sample batch")
    values = np.atleast_2d(np.asarray(values, dtype=float))
    if values.shape[0] == 0:
        raise ValueError("empty value set")
    center = np.ascontiguousarray(ball.center)
    top = np.array([_kernels.l1_response_value(center, ball.radius, np.ascontiguousarray(v))
                    for v in values])
    proj = samples @ values.T
    if direction_sign(direction) > 0:
        ok = top[None, :] - proj >= -CHECK_TOL
    else:
        ok = top[None, :] - proj <= CHECK_TOL
    worst = float(ok.mean(axis=0).min())
    return worst >= 1.0 - eps - 1e-12, worst


def _grown(arr, axis, size):
    shape = list(arr.shape)
    shape[axis] = size
    out = np.zeros(shape, dtype=arr.dtype)
    out[tuple(slice(0, n) for n in arr.shape)] = arr
    return out


class _SetBuilder:
    """Per-(s, a) hyperplanes and balls for one posterior batch."""

    def __init__(self, batch, nominal, rewards, discount, eps, direction, capacity=64):
        self.batch = batch
        self.nominal = np.ascontiguousarray(nominal)
        self.rewards = rewards
        self.discount = discount
        self.eps = eps
        self.direction = direction
        S, A = rewards.shape[:2]
        k = order_statistic_index(1.0 - eps, batch.shape[2]) - 1
        self.rank = k if direction_sign(direction) > 0 else batch.shape[2] - 1 - k
        self.Z = np.zeros((S, A, capacity, S))
        self.g = np.zeros((S, A, capacity))
        self.count = np.zeros((S, A), dtype=np.int64)
        # distance cuts; plane i owns rows cstart[s, a, i]:cstart[s, a, i + 1]
        self.W = np.zeros((S, A, 2 * S * capacity, S))
        self.a = np.zeros((S, A, 2 * S * capacity))
        self.cstart = np.zeros((S, A, capacity + 1), dtype=np.int64)
        self.centers = self.nominal.copy()
        self.radii = np.zeros((S, A))

    def targets(self, vectors):
        """Backed-up vectors R[s, a] + discount * v, shape (S, A, K, S)."""
        return self.rewards[:, :, None, :] + self.discount * vectors[None, None, :, :]

    def projections(self, vectors):
        """Sampled values of p.(R[s, a] + discount * v), shape (S, A, K, N)."""
        return _kernels.sample_projections(self.batch, np.ascontiguousarray(self.targets(vectors)))

    def _reserve(self, extra):
        need = int(self.count.max()) + extra
        cap = self.g.shape[2]
        if need <= cap:
            return
        cap = max(need, 2 * cap)
        self.Z = _grown(self.Z, 2, cap)
        self.g = _grown(self.g, 2, cap)
        self.W = _grown(self.W, 2, 2 * self.Z.shape[3] * cap)
        self.a = _grown(self.a, 2, 2 * self.Z.shape[3] * cap)
        self.cstart = _grown(self.cstart, 2, cap + 1)

    def add(self, vectors):
        vectors = np.atleast_2d(vectors)
        Z = np.ascontiguousarray(self.targets(vectors))
        G = _kernels.sample_quantiles(self.batch, Z, self.rank)
        self._reserve(vectors.shape[0])
        status = _kernels.add_planes(self.Z, self.g, self.count, self.W, self.a, self.cstart,
                                     self.centers, self.radii,
                                     self.nominal, Z, G, _FLAT, CHECK_TOL)
        if status != _kernels.OPTIMAL:
            raise LinearProgramError(f"minimax centre LP failed with status {status}")

    def sets(self) -> PlausibilitySets:
        return PlausibilitySets(self.centers.copy(), self.radii.copy())

    def coverage(self, vectors, sign_check):
        """Per (s, a, k) fraction of samples satisfying the condition for vector k."""
        Z = np.ascontiguousarray(self.targets(vectors))
        top = _kernels.ball_extremes(self.centers, self.radii, Z, 1.0)
        return _kernels.coverage_fractions(self.batch, Z, top, float(sign_check), CHECK_TOL)


def build_sets(posterior, known: KnownModel, vectors, eps: float, rng=None, *,
               num_samples: int = 1000, direction: str = OPTIMISTIC, batch=None) -> PlausibilitySets:
    """Plausibility sets optimised for a fixed collection of value vectors."""
    if batch is None:
        batch = posterior.sample_all(num_samples, rng)
    builder = _SetBuilder(batch, posterior.mean(), np.asarray(known.rewards, dtype=float),
                          float(known.discount), eps, direction)
    builder.add(np.atleast_2d(np.asarray(vectors, dtype=float)))
    return builder.sets()


def certificate(result: OfvfResult, posterior, known: KnownModel, delta: float, rng, *,
                num_samples: int = 1000, direction: str = OPTIMISTIC):
    """Re-run the coverage condition for the final value function on a fresh batch.

    Returns ``(passed, worst_fraction)`` taken over every (s, a) and stage vector.
    """
    S, A = posterior.num_states, posterior.num_actions
    eps = delta / (S * A)
    batch = posterior.sample_all(num_samples, rng)
    builder = _SetBuilder(batch, posterior.mean(), np.asarray(known.rewards, dtype=float),
                          float(known.discount), eps, direction)
    builder.centers = np.ascontiguousarray(result.sets.centers)
    builder.radii = np.ascontiguousarray(result.sets.radii)
    frac = builder.coverage(result.values[1:], direction_sign(direction))
    worst = float(frac.min())
    return worst >= 1.0 - eps - 1e-12, worst


def ofvf_construct(posterior, known: KnownModel, delta: float, rng, *, direction: str = OPTIMISTIC,
                   max_iterations: int = 20, num_samples: int = 1000) -> OfvfResult:
    """Grow the value set until the optimistic solution satisfies the coverage condition."""
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    if max_iterations < 1:
        raise ValueError("max_iterations must be >= 1")
    sign = direction_sign(direction)
    S, A = posterior.num_states, posterior.num_actions
    eps = delta / (S * A)
    nominal = posterior.mean()
    batch = posterior.sample_all(num_samples, rng)
    builder = _SetBuilder(batch, nominal, np.asarray(known.rewards, dtype=float),
                          float(known.discount), eps, direction)

    values, _ = value_iteration(known.build(nominal))
    value_set = ValueSet()
    initial = [v for v in values[1:] if value_set.add(v)]
    builder.add(np.array(initial))

    iterations = 0
    satisfied = False
    while True:
        iterations += 1
        sets = builder.sets()
        values, policy = optimistic_value_iteration(known, sets, direction)
        stages = values[1:]
        frac = builder.coverage(stages, sign)
        per_stage = frac.min(axis=(0, 1))
        worst = float(per_stage.min())
        violated = np.flatnonzero(per_stage < 1.0 - eps - 1e-12)
        if violated.size == 0:
            satisfied = True
            break
        if iterations >= max_iterations:
            break
        added = [h for h in violated if value_set.add(stages[h])]
        if not added:
            break
        builder.add(stages[added])

    return OfvfResult(
        policy=policy,
        optimistic_return=float(known.initial_dist @ values[0]),
        sets=sets,
        iterations=iterations,
        value_set=value_set,
        condition_satisfied=satisfied,
        values=values,
        worst_fraction=worst,
    )


__all__ = [
    "OPTIMISTIC", "PESSIMISTIC", "ValueSet", "Hyperplane", "OfvfResult", "quantile_offset",
    "minimax_l1_center", "check_condition", "build_sets", "certificate", "ofvf_construct",
]
