"""Evolutionary simulation of learning biases in two-armed bandit agents."""

from .agent import AgentState, Genome, choice_probability, choose, reset_state, update_choice_trace, update_q
from .environments import EnvironmentSpec, build_schedule, stable_catalog, volatile_catalog
from .evolution import InitMode, MutationTable, Population, init_population, step_generation
from .experiments import RebootResult, ScenarioConfig, run_reboot, run_scenario, scenario_grid

__all__ = [
    "AgentState", "Genome", "choice_probability", "choose", "reset_state", "update_choice_trace",
    "update_q", "EnvironmentSpec", "build_schedule", "stable_catalog", "volatile_catalog",
    "InitMode", "MutationTable", "Population", "init_population", "step_generation",
    "RebootResult", "ScenarioConfig", "run_reboot", "run_scenario", "scenario_grid",
]
