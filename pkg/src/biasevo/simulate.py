"""Batched task runs: many agents through one environment at once.

The per-trial arithmetic mirrors :mod:`biasevo.agent` operation for
operation so a batch row and the scalar reference produce identical
choices from identical uniform draws.
"""

from __future__ import annotations

import math

import numba
import numpy as np

from .environments import EnvironmentSpec, best_option_matrix, reversal_masks

# column order of a parameter matrix, matching agent.PARAM_NAMES
A_PLUS, A_MINUS, BETA, TAU, PHI = range(5)


@numba.njit(cache=True, nogil=True)
def _run_batch(params, choice_u, reward_u, best, p_reward, initial_best, period_length, correct_counts):
    n_agents, n_trials = choice_u.shape
    accuracy = np.empty(n_agents)
    for i in range(n_agents):
        a_plus = params[i, A_PLUS]
        a_minus = params[i, A_MINUS]
        beta = params[i, BETA]
        tau = params[i, TAU]
        phi = params[i, PHI]
        q0 = 0.0
        q1 = 0.0
        c0 = 0.0
        c1 = 0.0
        hits = 0
        for t in range(n_trials):
            if t % period_length == 0:
                q0 = 0.0
                q1 = 0.0
                c0 = 0.0
                c1 = 0.0
            p0 = 1.0 / (1.0 + math.exp(-beta * (q0 - q1) - phi * (c0 - c1)))
            chosen = 0 if choice_u[i, t] < p0 else 1

            if chosen == 0:
                c0 = c0 + tau * (1.0 - c0)
                c1 = (1.0 - tau) * c1
            else:
                c1 = c1 + tau * (1.0 - c1)
                c0 = (1.0 - tau) * c0

            swapped = best[i, t] ^ initial_best
            reward = 1.0 if reward_u[i, t] < p_reward[chosen ^ swapped] else -1.0

            q = q0 if chosen == 0 else q1
            pe = reward - q
            if pe > 0:
                q = q + a_plus * pe
            elif pe < 0:
                q = q + a_minus * pe
            if chosen == 0:
                q0 = q
            else:
                q1 = q

            if chosen == best[i, t]:
                hits += 1
                correct_counts[t] += 1
        accuracy[i] = hits / n_trials
    return accuracy


def run_environment(params: np.ndarray, spec: EnvironmentSpec, rng: np.random.Generator,
                    record_trials: bool = False):
    """Run every row of ``params`` once through ``spec``.

    Returns ``(accuracy, p_correct)`` where ``p_correct`` is the
    across-agent correct-choice rate per trial, or None unless
    ``record_trials`` is set.

    Draw order from ``rng``: reversal schedules, choice uniforms,
    reward uniforms, each as an (n_agents, n_trials) block, so agent i
    always reads row i regardless of how the batch is scheduled.
    """
    params = np.ascontiguousarray(params, dtype=np.float64)
    n = params.shape[0]
    T = spec.n_trials
    best = best_option_matrix(spec, reversal_masks(spec, n, rng))
    choice_u = rng.random((n, T))
    reward_u = rng.random((n, T))
    counts = np.zeros(T, dtype=np.int64)
    acc = _run_batch(params, choice_u, reward_u, best, np.asarray(spec.p_reward, dtype=np.float64),
                     np.int8(spec.initial_best), spec.period_length, counts)
    curve = counts / n if record_trials else None
    return acc, curve


def population_fitness(params: np.ndarray, envs, rng: np.random.Generator, record_trials: bool = False):
    """Unweighted mean accuracy over ``envs``, one run per environment.

    Returns ``(fitness, curves)``; ``curves`` maps environment label to
    the per-trial correct rate (empty unless ``record_trials``).
    """
    envs = list(envs)
    if not envs:
        raise ValueError("at least one environment is required")
    total = np.zeros(params.shape[0])
    curves = {}
    for spec in envs:
        acc, curve = run_environment(params, spec, rng, record_trials)
        total += acc
        if record_trials:
            curves[spec.label] = curve
    return total / len(envs), curves

