"""Plausibility sets for optimistic exploration in tabular finite-horizon MDPs."""

from .agents import BAYES_UCRL, HOEFFDING_UCRL, KINDS, OFVF, ORACLE, PSRL, AgentSpec, plan_episode
from .ambiguity import (OPTIMISTIC, PESSIMISTIC, L1Ball, PlausibilitySets, bayes_credible_radius,
                        bayes_ucrl_sets, hoeffding_radius, hoeffding_sets, optimistic_l1_response,
                        optimistic_value_iteration, order_statistic_index)
from .domains import RIVERSWIM, SINGLE_STATE, DomainSpec, riverswim_instance, single_state_instance
from .harness import EpisodeRecord, ExperimentResult, RegretCurve, episode_regret, run_experiment, simulate_episode
from .lp import LinearProgramError, solve_standard_form
from .mdp import KnownModel, TabularMdp, expected_return, policy_evaluation, validate, value_iteration
from .ofvf import (Hyperplane, OfvfResult, ValueSet, build_sets, certificate, check_condition,
                   minimax_l1_center, ofvf_construct, quantile_offset)
from .posterior import DirichletPosterior, uniform_prior

__version__ = "0.1.0"
