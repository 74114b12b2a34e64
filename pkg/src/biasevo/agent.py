"""Single-agent cognitive model for the two-armed bandit.

Each agent carries two Q-values (outcome history) and two choice traces
(choice history).  The decision rule is a logistic function of the value
difference and the trace difference, the value update uses separate
learning rates for positive and negative prediction errors, and the
traces move toward the last choice at rate ``tau``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

import numpy as np

N_OPTIONS = 2

# closed ranges of each evolvable parameter, in genome order
PARAM_NAMES = ("alpha_plus", "alpha_minus", "beta", "tau", "phi")
PARAM_BOUNDS = {
    "alpha_plus": (0.0, 1.0),
    "alpha_minus": (0.0, 1.0),
    "beta": (0.0, 20.0),
    "tau": (0.0, 1.0),
    "phi": (-20.0, 20.0),
}
LOWER = np.array([PARAM_BOUNDS[p][0] for p in PARAM_NAMES])
UPPER = np.array([PARAM_BOUNDS[p][1] for p in PARAM_NAMES])


def _clip(name: str, value: float) -> float:
    lo, hi = PARAM_BOUNDS[name]
    return min(max(float(value), lo), hi)


@dataclass(frozen=True)
class Genome:
    """The five evolvable parameters of one agent.

    Values outside their range are clamped on construction, so a Genome
    is always valid.
    """

    alpha_plus: float = 0.0
    alpha_minus: float = 0.0
    beta: float = 0.0
    tau: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, _clip(f.name, getattr(self, f.name)))

    @property
    def delta_alpha(self) -> float:
        return self.alpha_plus - self.alpha_minus

    def to_array(self) -> np.ndarray:
        return np.array([getattr(self, p) for p in PARAM_NAMES], dtype=float)

    @classmethod
    def from_array(cls, values) -> "Genome":
        return cls(*(float(v) for v in values))

    def as_dict(self) -> dict:
        return {p: getattr(self, p) for p in PARAM_NAMES}


@dataclass(frozen=True)
class AgentState:
    q_values: tuple = (0.0, 0.0)
    c_values: tuple = (0.0, 0.0)

    def swapped(self) -> "AgentState":
        """The same state with the two option labels exchanged."""
        return AgentState(self.q_values[::-1], self.c_values[::-1])


@dataclass(frozen=True)
class TrialRecord:
    trial_index: int
    chosen: int
    reward: int
    prediction_error: float
    correct: bool


def reset_state() -> AgentState:
    return AgentState((0.0, 0.0), (0.0, 0.0))


def choice_probability(genome: Genome, state: AgentState) -> float:
    """Probability of choosing option 0."""
    dq = state.q_values[0] - state.q_values[1]
    dc = state.c_values[0] - state.c_values[1]
    # |exponent| <= 20*2 + 20*1, so exp never overflows
    return 1.0 / (1.0 + math.exp(-genome.beta * dq - genome.phi * dc))


def choose(genome: Genome, state: AgentState, rng: np.random.Generator) -> int:
    return 0 if rng.random() < choice_probability(genome, state) else 1


def prediction_error(state: AgentState, chosen: int, reward: int) -> float:
    return reward - state.q_values[chosen]


def update_q(state: AgentState, chosen: int, reward: int, genome: Genome) -> AgentState:
    """Asymmetric delta-rule update of the chosen option only."""
    if reward not in (-1, 1):
        raise ValueError(f"reward must be -1 or +1, got {reward!r}")
    pe = prediction_error(state, chosen, reward)
    if pe > 0:
        step = genome.alpha_plus * pe
    elif pe < 0:
        step = genome.alpha_minus * pe
    else:
        return state
    q = list(state.q_values)
    q[chosen] = q[chosen] + step
    return replace(state, q_values=tuple(q))


def update_choice_trace(state: AgentState, chosen: int, genome: Genome) -> AgentState:
    tau = genome.tau
    c = list(state.c_values)
    for option in range(N_OPTIONS):
        if option == chosen:
            c[option] = c[option] + tau * (1.0 - c[option])
        else:
            c[option] = (1.0 - tau) * c[option]
    return replace(state, c_values=tuple(c))
