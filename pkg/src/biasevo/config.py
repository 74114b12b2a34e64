"""Scenario configuration files (JSON) and their validation."""

from __future__ import annotations

import json
from dataclasses import asdict, fields, replace
from pathlib import Path

from .agent import PARAM_BOUNDS, PARAM_NAMES, Genome
from .environments import EnvironmentSpec
from .evolution import MUTATION_TARGETS, SELECTION_FRACTION, InitMode, MutationTable
from .experiments import ScenarioConfig, scenario_grid, scenario_views

DEFAULTS = {"n_agents": 1000, "n_generations": 200, "n_reboots": 100, "master_seed": 0}


class ConfigError(ValueError):
    """Invalid configuration; the message names the field and the value."""


def scenario_names() -> list[str]:
    return list(scenario_grid())


def expand_scenarios(names) -> list[str]:
    """Resolve scenario names and group names ('stable', 'all', ...)."""
    grid = scenario_grid()
    views = scenario_views()
    out = []
    for name in names:
        if name == "all":
            picked = list(grid)
        elif name in views:
            picked = views[name]
        elif name in grid:
            picked = [name]
        else:
            raise ConfigError(
                f"scenario: unknown scenario {name!r}; choose from "
                f"{', '.join(list(grid) + list(views) + ['all'])}"
            )
        out.extend(p for p in picked if p not in out)
    return out


def _check_genome(d: dict, where: str) -> Genome:
    unknown = set(d) - set(PARAM_NAMES)
    if unknown:
        raise ConfigError(f"{where}: unknown parameter(s) {sorted(unknown)}")
    for name, value in d.items():
        lo, hi = PARAM_BOUNDS[name]
        if not lo <= float(value) <= hi:
            raise ConfigError(f"{where}.{name}: value {value} outside [{lo}, {hi}]")
    return Genome(**{k: float(v) for k, v in d.items()})


def _check_fields(values: dict):
    n = values.get("n_agents")
    if n is not None and (int(n) <= 0 or int(n) % SELECTION_FRACTION):
        raise ConfigError(
            f"n_agents: value {n} must be a positive multiple of {SELECTION_FRACTION} "
            "(5% of the population must be a whole number of agents)"
        )
    for key in ("n_generations", "n_reboots"):
        v = values.get(key)
        if v is not None and int(v) < 1:
            raise ConfigError(f"{key}: value {v} must be >= 1")
    seed = values.get("master_seed")
    if seed is not None and int(seed) < 0:
        raise ConfigError(f"master_seed: value {seed} must be non-negative")
    target = values.get("mutation_target")
    if target is not None and target not in MUTATION_TARGETS:
        raise ConfigError(f"mutation_target: value {target!r} not in {MUTATION_TARGETS}")


def config_from_dict(d: dict, base: ScenarioConfig | None = None) -> ScenarioConfig:
    """Build a config from a plain dict, on top of ``base`` if given."""
    d = dict(d)
    d.pop("scenario", None)
    known = {f.name for f in fields(ScenarioConfig)}
    unknown = set(d) - known
    if unknown:
        raise ConfigError(f"unknown config field(s): {sorted(unknown)}")
    _check_fields(d)
    kw = {}
    for key in ("n_agents", "n_generations", "n_reboots", "master_seed"):
        if key in d:
            kw[key] = int(d[key])
    for key in ("mutation_target", "name"):
        if key in d:
            kw[key] = str(d[key])
    if "record_learning_curves" in d:
        kw["record_learning_curves"] = bool(d["record_learning_curves"])
    if "environments" in d:
        try:
            kw["environments"] = tuple(EnvironmentSpec.from_dict(e) for e in d["environments"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"environments: {exc}") from None
    if "init_mode" in d:
        im = d["init_mode"]
        kind = im.get("kind", "uniform")
        if kind == "fixed":
            kw["init_mode"] = InitMode.fixed(_check_genome(im.get("genome", {}), "init_mode.genome"))
        elif kind == "uniform":
            kw["init_mode"] = InitMode.uniform()
        else:
            raise ConfigError(f"init_mode.kind: value {kind!r} not in ('fixed', 'uniform')")
    if "mutation_table" in d:
        mt = d["mutation_table"]
        bad = {k: v for k, v in mt.items() if k not in PARAM_NAMES or float(v) < 0}
        if bad:
            raise ConfigError(f"mutation_table: invalid entries {bad}")
        kw["mutation_table"] = MutationTable(**{k: float(v) for k, v in mt.items()})
    if base is None:
        if "environments" not in kw:
            raise ConfigError("environments: a config file needs 'scenario' or 'environments'")
        return ScenarioConfig(**{**DEFAULTS, **kw})
    return replace(base, **kw)


def config_to_dict(config: ScenarioConfig) -> dict:
    im = config.init_mode
    return {
        "name": config.name,
        "environments": [e.to_dict() for e in config.environments],
        "n_agents": config.n_agents,
        "n_generations": config.n_generations,
        "n_reboots": config.n_reboots,
        "init_mode": {"kind": im.kind, **({"genome": im.genome.as_dict()} if im.genome else {})},
        "mutation_table": asdict(config.mutation_table),
        "master_seed": config.master_seed,
        "mutation_target": config.mutation_target,
        "record_learning_curves": config.record_learning_curves,
    }


def load_config_file(path) -> dict:
    path = Path(path)
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: {path} is not valid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config: {path} must hold a JSON object")
    return data


def parse_config(scenario: str | None = None, file: str | None = None, **flags) -> list[ScenarioConfig]:
    """Resolve a scenario (or group) plus file values plus flag overrides.

    Precedence: flags > file > named scenario > defaults.  ``flags``
    uses ScenarioConfig field names; None values are ignored.
    """
    file_values = load_config_file(file) if file else {}
    scenario = scenario or file_values.get("scenario")
    flags = {k: v for k, v in flags.items() if v is not None}
    _check_fields(flags)
    if scenario is None:
        if "environments" not in file_values:
            raise ConfigError("scenario: give --scenario or a config file with 'scenario' or 'environments'")
        cfg = config_from_dict(file_values)
        if not cfg.name:
            cfg = replace(cfg, name=Path(file).stem)
        return [config_from_dict(flags, cfg)]
    grid = scenario_grid(**DEFAULTS)
    return [config_from_dict(flags, config_from_dict(file_values, grid[name]))
            for name in expand_scenarios([scenario] if isinstance(scenario, str) else scenario)]
