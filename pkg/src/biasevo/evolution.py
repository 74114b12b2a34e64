"""Rank-based evolutionary loop over agent genomes.

Each generation every agent runs the task once, the bottom 5% by
accuracy leave no descendant, the top 5% leave two and the rest leave
one.  Genetic variability comes either from a uniformly drawn initial
population or from Gaussian mutations applied after reproduction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .agent import LOWER, PARAM_BOUNDS, PARAM_NAMES, UPPER, AgentState, Genome, TrialRecord, \
    choice_probability, prediction_error, reset_state, update_choice_trace, update_q
from .environments import EnvironmentInstance, EnvironmentSpec, build_schedule, current_best
from .simulate import population_fitness

SELECTION_FRACTION = 20  # 1/20 = 5% culled and 5% duplicated
MUTATION_TARGETS = ("five_percent_of_survivors", "all_descendants")


def _range(name):
    lo, hi = PARAM_BOUNDS[name]
    return hi - lo


@dataclass(frozen=True)
class MutationTable:
    """Standard deviation of the zero-mean Gaussian mutation per parameter.

    Defaults scale each parameter's range by the range of beta, i.e. 5%
    of the range.
    """

    alpha_plus: float = _range("alpha_plus") / _range("beta")
    alpha_minus: float = _range("alpha_minus") / _range("beta")
    beta: float = _range("beta") / _range("beta")
    tau: float = _range("tau") / _range("beta")
    phi: float = _range("phi") / _range("beta")

    def sigmas(self) -> np.ndarray:
        return np.array([getattr(self, p) for p in PARAM_NAMES])


@dataclass(frozen=True)
class InitMode:
    """How generation 0 is built.

    ``kind='fixed'`` copies ``genome`` into every agent and turns on
    mutation; ``kind='uniform'`` draws every parameter from its full
    range and runs without mutation.
    """

    kind: str = "uniform"
    genome: Genome | None = None

    def __post_init__(self):
        if self.kind not in ("fixed", "uniform"):
            raise ValueError(f"unknown init kind {self.kind!r}")
        if self.kind == "fixed" and self.genome is None:
            raise ValueError("fixed initialization needs a genome")

    @property
    def mutation(self) -> bool:
        return self.kind == "fixed"

    @classmethod
    def fixed(cls, genome: Genome) -> "InitMode":
        return cls("fixed", genome)

    @classmethod
    def uniform(cls) -> "InitMode":
        return cls("uniform")


@dataclass
class Population:
    members: np.ndarray  # (n_agents, 5) in PARAM_NAMES column order
    generation: int = 0

    def __len__(self):
        return self.members.shape[0]

    def genomes(self) -> list[Genome]:
        return [Genome.from_array(row) for row in self.members]

    def means(self) -> dict:
        m = self.members.mean(axis=0)
        return dict(zip(PARAM_NAMES, (float(v) for v in m)))


@dataclass
class GenerationStats:
    generation: int
    fitness_mean: float
    fitness_top5_mean: float
    fitness_bottom5_mean: float
    mean_alpha_plus: float
    mean_alpha_minus: float
    mean_beta: float
    mean_tau: float
    mean_phi: float
    # per-environment correct rate by trial; filled only when recording
    curves: dict = field(default_factory=dict, repr=False)

    @property
    def mean_delta_alpha(self) -> float:
        return self.mean_alpha_plus - self.mean_alpha_minus


def check_population_size(n_agents: int):
    if n_agents <= 0 or n_agents % SELECTION_FRACTION:
        raise ValueError(
            f"n_agents must be a positive multiple of {SELECTION_FRACTION} "
            f"so that 5% is a whole number of agents, got {n_agents}"
        )


def init_population(mode: InitMode, n_agents: int, rng: np.random.Generator) -> Population:
    check_population_size(n_agents)
    if mode.kind == "fixed":
        members = np.tile(mode.genome.to_array(), (n_agents, 1))
    else:
        members = rng.uniform(LOWER, UPPER, size=(n_agents, len(PARAM_NAMES)))
    return Population(members, 0)


def evaluate_fitness(genome: Genome, envs, rng: np.random.Generator) -> float:
    """Accuracy of one agent, averaged over ``envs`` (scalar reference path).

    Consumes ``rng`` in the same order as a one-row batch in
    :func:`biasevo.simulate.population_fitness`.
    """
    envs = list(envs)
    if not envs:
        raise ValueError("at least one environment is required")
    total = 0.0
    for spec in envs:
        acc, _ = run_task(genome, spec, rng)
        total += acc
    return total / len(envs)


def run_task(genome: Genome, spec: EnvironmentSpec, rng: np.random.Generator):
    """Play one full task with the scalar model; returns (accuracy, records)."""
    instance = EnvironmentInstance(spec, build_schedule(spec, rng))
    choice_u = rng.random(spec.n_trials)
    reward_u = rng.random(spec.n_trials)
    records = []
    state: AgentState = reset_state()
    for t in range(spec.n_trials):
        if t % spec.period_length == 0:
            state = reset_state()
        chosen = 0 if choice_u[t] < choice_probability(genome, state) else 1
        state = update_choice_trace(state, chosen, genome)
        reward = 1 if reward_u[t] < instance.reward_probability(chosen, t) else -1
        pe = prediction_error(state, chosen, reward)
        state = update_q(state, chosen, reward, genome)
        best = current_best(instance, t)
        records.append(TrialRecord(t, chosen, reward, pe, chosen == best))
    accuracy = sum(r.correct for r in records) / spec.n_trials
    return accuracy, records


def rank_order(fitness: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Agent indices from best to worst; ties broken by a random shuffle."""
    fitness = np.asarray(fitness)
    perm = rng.permutation(fitness.shape[0])
    return perm[np.argsort(-fitness[perm], kind="stable")]


def select_and_reproduce(fitness, population: Population, rng: np.random.Generator) -> Population:
    """Cull the bottom 5%, duplicate the top 5%, keep everyone else once.

    Output rows are the survivors in rank order followed by the second
    copies of the top 5%.
    """
    n = len(population)
    check_population_size(n)
    fitness = np.asarray(fitness, dtype=float)
    if fitness.shape != (n,):
        raise ValueError(f"need one fitness value per member ({n}), got shape {fitness.shape}")
    k = n // SELECTION_FRACTION
    order = rank_order(fitness, rng)
    offspring = np.concatenate([order[: n - k], order[:k]])
    return Population(population.members[offspring].copy(), population.generation + 1)


def mutate(genome: Genome, table: MutationTable, rng: np.random.Generator) -> Genome:
    noise = rng.normal(0.0, table.sigmas())
    return Genome.from_array(genome.to_array() + noise)  # Genome clamps on construction


def mutate_members(members: np.ndarray, rows, table: MutationTable, rng: np.random.Generator):
    """In-place Gaussian mutation of the given rows, then clamping."""
    rows = np.asarray(rows)
    noise = rng.normal(0.0, table.sigmas(), size=(rows.size, members.shape[1]))
    members[rows] = np.clip(members[rows] + noise, LOWER, UPPER)


def generation_stats(generation: int, fitness: np.ndarray, members: np.ndarray, curves=None) -> GenerationStats:
    k = fitness.size // SELECTION_FRACTION
    ranked = np.sort(fitness)
    means = members.mean(axis=0)
    return GenerationStats(
        generation=generation,
        fitness_mean=float(fitness.mean()),
        fitness_top5_mean=float(ranked[-k:].mean()),
        fitness_bottom5_mean=float(ranked[:k].mean()),
        mean_alpha_plus=float(means[0]),
        mean_alpha_minus=float(means[1]),
        mean_beta=float(means[2]),
        mean_tau=float(means[3]),
        mean_phi=float(means[4]),
        curves=curves or {},
    )


def step_generation(population: Population, scenario, rng: np.random.Generator, record_trials: bool = False):
    """Evaluate, record telemetry, select, and (fixed-init only) mutate.

    ``scenario`` needs ``environments``, ``init_mode``, ``mutation_table``
    and ``mutation_target``.  ``rng`` is split into independent fitness,
    selection and mutation streams so each stage's draws do not depend
    on the others.
    """
    fit_rng, sel_rng, mut_rng = rng.spawn(3)
    fitness, curves = population_fitness(population.members, scenario.environments, fit_rng, record_trials)
    stats = generation_stats(population.generation, fitness, population.members, curves)
    nxt = select_and_reproduce(fitness, population, sel_rng)
    if scenario.init_mode.mutation:
        n = len(nxt)
        if scenario.mutation_target == "all_descendants":
            rows = np.arange(n)
        else:
            rows = np.sort(mut_rng.choice(n, size=n // SELECTION_FRACTION, replace=False))
        mutate_members(nxt.members, rows, scenario.mutation_table, mut_rng)
    return nxt, stats
