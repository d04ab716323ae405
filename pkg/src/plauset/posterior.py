"""Independent Dirichlet posteriors over the rows of an unknown transition kernel."""

from __future__ import annotations

import numpy as np

from .mdp import KnownModel, TabularMdp


class DirichletPosterior:
    """Per-(s, a) Dirichlet concentrations over next states.

    The posterior is owned by a single run and updated in place; use
    :meth:`copy` to take a snapshot.
    """

    def __init__(self, prior_alpha, alpha=None):
        prior_alpha = np.array(prior_alpha, dtype=float)
        if prior_alpha.ndim != 3 or prior_alpha.shape[0] != prior_alpha.shape[2]:
            raise ValueError(f"concentrations must have shape (S, A, S), got {prior_alpha.shape}")
        if np.any(prior_alpha <= 0):
            raise ValueError("Dirichlet concentrations must be positive")
        self.prior_alpha = prior_alpha
        self.alpha = prior_alpha.copy() if alpha is None else np.array(alpha, dtype=float)
        if self.alpha.shape != prior_alpha.shape:
            raise ValueError("alpha and prior_alpha shapes differ")

    @property
    def num_states(self) -> int:
        return self.alpha.shape[0]

    @property
    def num_actions(self) -> int:
        return self.alpha.shape[1]

    @property
    def counts(self) -> np.ndarray:
        """Observed transition counts per (s, a, s')."""
        return self.alpha - self.prior_alpha

    def visits(self) -> np.ndarray:
        """n_{s,a}: number of observed transitions out of each (s, a)."""
        return self.counts.sum(axis=2)

    def copy(self) -> DirichletPosterior:
        return DirichletPosterior(self.prior_alpha, self.alpha)

    def record_transition(self, s: int, a: int, s_next: int) -> DirichletPosterior:
        S, A = self.num_states, self.num_actions
        if not (0 <= s < S and 0 <= a < A and 0 <= s_next < S):
            raise IndexError(f"transition ({s}, {a}, {s_next}) out of range for S={S}, A={A}")
        self.alpha[s, a, s_next] += 1.0
        return self

    def record_counts(self, counts) -> DirichletPosterior:
        counts = np.asarray(counts, dtype=float)
        if counts.shape != self.alpha.shape or np.any(counts < 0):
            raise ValueError("counts must be nonnegative with shape (S, A, S)")
        self.alpha += counts
        return self

    def mean(self, s: int | None = None, a: int | None = None) -> np.ndarray:
        """Posterior mean row ``alpha / sum(alpha)``; all rows if no coordinates are given."""
        if s is None:
            return self.alpha / self.alpha.sum(axis=2, keepdims=True)
        row = self.alpha[s, a]
        return row / row.sum()

    def mean_mdp(self, known: KnownModel) -> TabularMdp:
        return known.build(self.mean())

    def sample_transitions(self, s: int, a: int, n: int, rng: np.random.Generator) -> np.ndarray:
        """``n`` independent Dirichlet draws for one (s, a), shape ``(n, S)``."""
        if n < 1:
            raise ValueError("need at least one sample")
        return _dirichlet(self.alpha[s, a], (n,), rng)

    def sample_all(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """``n`` draws for every (s, a) at once, shape ``(S, A, n, S)``."""
        if n < 1:
            raise ValueError("need at least one sample")
        return _dirichlet(self.alpha[:, :, None, :], (self.num_states, self.num_actions, n), rng)

    def sample_kernel(self, rng: np.random.Generator) -> np.ndarray:
        return _dirichlet(self.alpha, (self.num_states, self.num_actions), rng)

    def sample_mdp(self, known: KnownModel, rng: np.random.Generator) -> TabularMdp:
        """One MDP drawn from the posterior; rewards and p0 come from ``known``."""
        return known.build(self.sample_kernel(rng))


def uniform_prior(num_states: int, num_actions: int, concentration: float = 1.0) -> DirichletPosterior:
    if num_states < 1 or num_actions < 1:
        raise ValueError("num_states and num_actions must be positive")
    return DirichletPosterior(np.full((num_states, num_actions, num_states), float(concentration)))


def _dirichlet(alpha, batch_shape, rng):
    # normalised Gamma draws; alpha broadcasts against batch_shape + (S,)
    S = np.shape(alpha)[-1]
    shape = tuple(batch_shape) + (S,)
    g = rng.standard_gamma(np.broadcast_to(alpha, shape))
    total = g.sum(axis=-1, keepdims=True)
    # tiny concentrations can underflow every coordinate to zero
    bad = total[..., 0] <= 0.0
    if np.any(bad):
        g[bad] = np.broadcast_to(alpha, shape)[bad]
        total = g.sum(axis=-1, keepdims=True)
    return g / total
