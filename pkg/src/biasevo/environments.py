"""Bandit environments: reward probabilities, learning periods and reversals."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

N_TRIALS = 160
REVERSAL_KINDS = ("none", "fixed", "gaussian", "uniform")
BASELINE_P = (0.75, 0.25)


@dataclass(frozen=True)
class EnvironmentSpec:
    """Static description of one bandit task.

    ``p_reward[k]`` is the probability that option k pays +1 before any
    reversal.  Stable tasks are split into ``n_periods`` blocks that each
    present a fresh pair of options; volatile tasks are one continuous
    session whose option values swap at the reversal trials.
    """

    p_reward: tuple = BASELINE_P
    n_trials: int = N_TRIALS
    n_periods: int = 8
    period_length: int = 20
    reversal_kind: str = "none"
    n_reversals: int = 0
    label: str = "baseline"
    # gaussian jitter SD in trials; None means a quarter of the fixed interval
    gaussian_sigma: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "p_reward", tuple(float(p) for p in self.p_reward))
        if len(self.p_reward) != 2:
            raise ValueError(f"p_reward must have 2 entries, got {self.p_reward}")
        if any(not 0.0 <= p <= 1.0 for p in self.p_reward):
            raise ValueError(f"p_reward entries must lie in [0, 1], got {self.p_reward}")
        if self.p_reward[0] == self.p_reward[1]:
            raise ValueError(f"p_reward entries must differ, got {self.p_reward}")
        if self.n_periods * self.period_length != self.n_trials:
            raise ValueError(
                f"n_periods * period_length must equal n_trials "
                f"({self.n_periods} * {self.period_length} != {self.n_trials})"
            )
        if self.reversal_kind not in REVERSAL_KINDS:
            raise ValueError(f"unknown reversal_kind {self.reversal_kind!r}")
        if self.reversal_kind == "none":
            if self.n_reversals != 0:
                raise ValueError("n_reversals must be 0 when reversal_kind is 'none'")
        else:
            if self.n_periods != 1:
                raise ValueError("volatile environments must have n_periods = 1")
            if self.n_reversals < 1:
                raise ValueError(f"n_reversals must be >= 1, got {self.n_reversals}")
        if self.reversal_kind in ("fixed", "gaussian") and self.n_trials % (self.n_reversals + 1):
            raise ValueError(
                f"n_reversals + 1 = {self.n_reversals + 1} does not divide "
                f"n_trials = {self.n_trials}"
            )

    @property
    def volatile(self) -> bool:
        return self.reversal_kind != "none"

    @property
    def initial_best(self) -> int:
        return int(self.p_reward[1] > self.p_reward[0])

    @property
    def reversal_interval(self) -> int:
        return self.n_trials // (self.n_reversals + 1)

    @property
    def uniform_rate(self) -> float:
        """Per-trial reversal probability of the uniform schedule."""
        return self.n_reversals / self.n_trials

    @property
    def sigma(self) -> float:
        if self.gaussian_sigma is not None:
            return float(self.gaussian_sigma)
        return self.reversal_interval / 4.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["p_reward"] = list(self.p_reward)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "EnvironmentSpec":
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown environment field(s): {sorted(unknown)}")
        return cls(**d)


@dataclass(frozen=True)
class ReversalSchedule:
    reversal_trials: tuple = ()

    def __len__(self):
        return len(self.reversal_trials)


@dataclass(frozen=True)
class EnvironmentInstance:
    """One realized run of an environment (fixed schedule)."""

    spec: EnvironmentSpec
    schedule: ReversalSchedule = field(default_factory=ReversalSchedule)

    def current_best(self, trial: int) -> int:
        return current_best(self, trial)

    def reward_probability(self, option: int, trial: int) -> float:
        swaps = int(np.searchsorted(self.schedule.reversal_trials, trial, side="right"))
        return self.spec.p_reward[option ^ (swaps % 2)]


def fixed_reversal_trials(spec: EnvironmentSpec) -> np.ndarray:
    L = spec.reversal_interval
    return L * np.arange(1, spec.n_reversals + 1)


def build_schedule(spec: EnvironmentSpec, rng: np.random.Generator) -> ReversalSchedule:
    kind = spec.reversal_kind
    T = spec.n_trials
    if kind == "none":
        return ReversalSchedule(())
    if kind == "fixed":
        times = fixed_reversal_trials(spec)
    elif kind == "gaussian":
        jitter = rng.normal(0.0, spec.sigma, size=spec.n_reversals)
        times = np.clip(np.rint(fixed_reversal_trials(spec) + jitter), 1, T - 1)
        times = np.unique(times.astype(np.int64))
    else:
        flips = rng.random(T - 1) < spec.uniform_rate
        times = np.flatnonzero(flips) + 1
    return ReversalSchedule(tuple(int(t) for t in times))


def reversal_masks(spec: EnvironmentSpec, n_runs: int, rng: np.random.Generator) -> np.ndarray:
    """Boolean (n_runs, n_trials) array, True where a reversal takes effect.

    Row ``i`` consumes the random stream exactly as the ``i``-th of
    ``n_runs`` successive :func:`build_schedule` calls would.
    """
    T = spec.n_trials
    mask = np.zeros((n_runs, T), dtype=bool)
    kind = spec.reversal_kind
    if kind == "fixed":
        mask[:, fixed_reversal_trials(spec)] = True
    elif kind == "gaussian":
        jitter = rng.normal(0.0, spec.sigma, size=(n_runs, spec.n_reversals))
        times = np.clip(np.rint(fixed_reversal_trials(spec) + jitter), 1, T - 1).astype(np.int64)
        rows = np.repeat(np.arange(n_runs), spec.n_reversals)
        mask[rows, times.ravel()] = True
    elif kind == "uniform":
        mask[:, 1:] = rng.random((n_runs, T - 1)) < spec.uniform_rate
    return mask


def best_option_matrix(spec: EnvironmentSpec, masks: np.ndarray) -> np.ndarray:
    """Currently-better option per run and trial, from reversal masks."""
    parity = np.cumsum(masks, axis=1) % 2
    return (parity ^ spec.initial_best).astype(np.int8)


def current_best(instance: EnvironmentInstance, trial: int) -> int:
    spec = instance.spec
    if not 0 <= trial < spec.n_trials:
        raise IndexError(f"trial {trial} outside [0, {spec.n_trials})")
    swaps = int(np.searchsorted(instance.schedule.reversal_trials, trial, side="right"))
    return spec.initial_best ^ (swaps % 2)


def sample_reward(p: float, rng: np.random.Generator) -> int:
    return 1 if rng.random() < p else -1


def stable_catalog() -> list[EnvironmentSpec]:
    """The seven unique stable tasks (difficulty, richness, period length)."""
    return [
        EnvironmentSpec((0.95, 0.05), label="easy"),
        EnvironmentSpec((0.75, 0.25), label="baseline"),
        EnvironmentSpec((0.55, 0.45), label="hard"),
        EnvironmentSpec((0.55, 0.05), label="poor"),
        EnvironmentSpec((0.95, 0.45), label="rich"),
        EnvironmentSpec((0.75, 0.25), n_periods=32, period_length=5, label="short-period"),
        EnvironmentSpec((0.75, 0.25), n_periods=2, period_length=80, label="long-period"),
    ]


VOLATILE_PREFIX = {"fixed": "fixed", "gaussian": "gauss", "uniform": "uniform"}


def volatile_catalog() -> list[EnvironmentSpec]:
    """Fixed, gaussian and uniform reversal schedules at 1, 7 and 31 reversals."""
    return [
        EnvironmentSpec(
            BASELINE_P,
            n_periods=1,
            period_length=N_TRIALS,
            reversal_kind=kind,
            n_reversals=n,
            label=f"{prefix}-{n}",
        )
        for kind, prefix in VOLATILE_PREFIX.items()
        for n in (1, 7, 31)
    ]
