"""Scenario orchestration: reboots, generation loops and the scenario grid.

Random streams are derived from ``(master_seed, reboot)`` for the initial
population and ``(master_seed, reboot, generation)`` for each generation,
so a reboot's trajectory does not depend on which worker runs it or in
what order.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .agent import PARAM_NAMES, Genome
from .environments import EnvironmentSpec, stable_catalog, volatile_catalog
from .evolution import MUTATION_TARGETS, GenerationStats, InitMode, MutationTable, \
    check_population_size, init_population, step_generation

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScenarioConfig:
    environments: tuple
    n_agents: int = 1000
    n_generations: int = 200
    n_reboots: int = 100
    init_mode: InitMode = field(default_factory=InitMode.uniform)
    mutation_table: MutationTable = field(default_factory=MutationTable)
    master_seed: int = 0
    mutation_target: str = "five_percent_of_survivors"
    record_learning_curves: bool = False
    name: str = ""

    def __post_init__(self):
        envs = self.environments
        if isinstance(envs, EnvironmentSpec):
            envs = (envs,)
        object.__setattr__(self, "environments", tuple(envs))
        if not self.environments:
            raise ValueError("environments: at least one environment is required")
        check_population_size(self.n_agents)
        if self.n_generations < 1:
            raise ValueError(f"n_generations must be >= 1, got {self.n_generations}")
        if self.n_reboots < 1:
            raise ValueError(f"n_reboots must be >= 1, got {self.n_reboots}")
        if self.mutation_target not in MUTATION_TARGETS:
            raise ValueError(f"mutation_target must be one of {MUTATION_TARGETS}, got {self.mutation_target!r}")
        if self.master_seed < 0:
            raise ValueError(f"master_seed must be non-negative, got {self.master_seed}")


@dataclass
class RebootResult:
    reboot: int
    stats: list  # GenerationStats per generation
    final_means: dict  # parameter name -> population mean at the last generation
    learning_curves: dict = field(default_factory=dict)

    @property
    def final_delta_alpha(self) -> float:
        return self.final_means["alpha_plus"] - self.final_means["alpha_minus"]

    @property
    def final_phi(self) -> float:
        return self.final_means["phi"]

    @property
    def final_mean_alpha(self) -> float:
        return 0.5 * (self.final_means["alpha_plus"] + self.final_means["alpha_minus"])


def generation_rng(master_seed: int, reboot: int, generation: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(reboot, generation)))


def init_rng(master_seed: int, reboot: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(reboot,)))


def run_reboot(config: ScenarioConfig, reboot_index: int) -> RebootResult:
    """One independent evolutionary run from initialization to the last generation."""
    pop = init_population(config.init_mode, config.n_agents, init_rng(config.master_seed, reboot_index))
    trajectory: list[GenerationStats] = []
    last = config.n_generations - 1
    for g in range(config.n_generations):
        record = config.record_learning_curves and g == last
        pop, stats = step_generation(pop, config, generation_rng(config.master_seed, reboot_index, g), record)
        trajectory.append(stats)
    final = trajectory[-1]
    final_means = {p: getattr(final, f"mean_{p}") for p in PARAM_NAMES}
    return RebootResult(reboot_index, trajectory, final_means, dict(final.curves))


def run_scenario(config: ScenarioConfig, threads: int = 1, reboots=None) -> list[RebootResult]:
    """Run ``config.n_reboots`` reboots (or the given indices), ordered by index.

    ``threads=1`` is the sequential reference mode; any other value gives
    the same results because every reboot owns its streams.
    """
    indices = list(range(config.n_reboots)) if reboots is None else sorted(reboots)
    log.info("scenario %s: %d reboots on %d thread(s)", config.name or "?", len(indices), threads)
    if threads <= 1:
        return [run_reboot(config, r) for r in indices]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda r: run_reboot(config, r), indices))


TABLE1_INITS = {
    "init-zero": Genome(0.0, 0.0, 0.0, 0.0, 0.0),
    "init-persev": Genome(alpha_plus=0.5, alpha_minus=0.5, beta=10.0, tau=0.5, phi=10.0),
    "init-neutral": Genome(alpha_plus=0.5, alpha_minus=0.5, beta=10.0, tau=0.5, phi=0.0),
    "init-posbias": Genome(alpha_plus=0.5, alpha_minus=0.25, beta=10.0, tau=0.5, phi=0.0),
}


def scenario_grid(**overrides) -> dict[str, ScenarioConfig]:
    """Every named scenario, keyed by its CLI name.

    ``overrides`` (e.g. ``n_reboots=25``) are applied to every config.
    The uniform baseline appears once here; see :func:`scenario_views`
    for the grouped layout where it is listed under both the
    initialization and the stable views.
    """
    grid = {}
    baseline_env = next(e for e in stable_catalog() if e.label == "baseline")
    for name, genome in TABLE1_INITS.items():
        grid[name] = ScenarioConfig((baseline_env,), init_mode=InitMode.fixed(genome), name=name, **overrides)
    for env in stable_catalog() + volatile_catalog():
        grid[env.label] = ScenarioConfig((env,), name=env.label, **overrides)
    grid["macro-stable"] = ScenarioConfig(tuple(stable_catalog()), name="macro-stable", **overrides)
    grid["macro-volatile"] = ScenarioConfig(tuple(volatile_catalog()), name="macro-volatile", **overrides)
    return grid


def scenario_views() -> dict[str, list[str]]:
    return {
        "initialization": [*TABLE1_INITS, "baseline"],
        "stable": [e.label for e in stable_catalog()],
        "volatile": [e.label for e in volatile_catalog()],
        "macro": ["macro-stable", "macro-volatile"],
    }
