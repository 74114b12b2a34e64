import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biasevo.agent import AgentState, Genome, choice_probability, choose, reset_state, \
    update_choice_trace, update_q

unit = st.floats(0.0, 1.0)
q_val = st.floats(-1.0, 1.0)
genomes = st.builds(Genome, unit, unit, st.floats(0.0, 20.0), unit, st.floats(-20.0, 20.0))
states = st.builds(AgentState, st.tuples(q_val, q_val), st.tuples(unit, unit))


def test_genome_clamps_on_construction():
    g = Genome(alpha_plus=1.7, alpha_minus=-0.2, beta=25.0, tau=2.0, phi=-30.0)
    assert g.to_array().tolist() == [1.0, 0.0, 20.0, 1.0, -20.0]


def test_genome_array_round_trip():
    g = Genome(0.3, 0.2, 7.0, 0.4, -3.0)
    assert Genome.from_array(g.to_array()) == g
    assert g.delta_alpha == pytest.approx(0.1)


@pytest.mark.parametrize("state", [reset_state(), AgentState((0.4, -0.9), (0.1, 0.8))])
def test_zero_weights_give_half(state):
    assert choice_probability(Genome(beta=0.0, phi=0.0), state) == 0.5


@given(genomes, q_val, unit)
def test_symmetric_state_gives_half(genome, q, c):
    assert choice_probability(genome, AgentState((q, q), (c, c))) == 0.5


def test_choice_probability_value_term():
    state = AgentState((0.5, 0.0), (0.3, 0.3))
    assert choice_probability(Genome(beta=10.0), state) == pytest.approx(0.9933071490757153, abs=1e-12)


def test_choice_probability_trace_term():
    state = AgentState((0.2, 0.2), (0.25, 0.75))
    assert choice_probability(Genome(beta=1.0, phi=2.0), state) == pytest.approx(0.2689414213699951, abs=1e-12)


@given(genomes, states)
def test_label_swap_symmetry(genome, state):
    p = choice_probability(genome, state)
    assert 0.0 < p < 1.0
    assert p + choice_probability(genome, state.swapped()) == pytest.approx(1.0, abs=1e-15)


def test_monotone_in_value_and_trace_differences():
    grid = np.linspace(-1.0, 1.0, 41)
    for beta in (0.5, 5.0, 20.0):
        g = Genome(beta=beta, phi=3.0)
        p = [choice_probability(g, AgentState((d / 2, -d / 2), (0.4, 0.2))) for d in grid]
        assert np.all(np.diff(p) > 0)
    for phi in (0.5, 5.0, 20.0):
        g = Genome(beta=4.0, phi=phi)
        p = [choice_probability(g, AgentState((0.1, 0.3), (0.5 + d / 2, 0.5 - d / 2))) for d in grid]
        assert np.all(np.diff(p) > 0)


def _choice_rate(genome, state, n, seed):
    rng = np.random.default_rng(seed)
    return sum(choose(genome, state, rng) == 0 for _ in range(n)) / n


def test_choose_unbiased_when_weights_are_zero():
    assert _choice_rate(Genome(), AgentState((0.7, -0.2), (0.9, 0.1)), 10**6, 1) == pytest.approx(0.5, abs=0.005)


def test_choose_matches_probability():
    state = AgentState((0.5, 0.0), (0.0, 0.0))
    assert _choice_rate(Genome(beta=10.0), state, 10**6, 2) == pytest.approx(0.9933, abs=0.003)


def test_choose_saturated_state_always_option_zero():
    g = Genome(beta=20.0, phi=20.0)
    state = AgentState((1.0, -1.0), (1.0, 0.0))
    assert 1.0 - choice_probability(g, state) < 1e-30
    assert _choice_rate(g, state, 10**4, 3) == 1.0


@pytest.mark.parametrize("q, reward, rates, expected", [
    (0.0, 1, (0.5, 0.9), 0.5),
    (0.5, -1, (0.9, 0.2), 0.2),
    (1.0, 1, (0.5, 0.5), 1.0),
    (-1.0, -1, (0.5, 0.5), -1.0),
])
def test_update_q_examples(q, reward, rates, expected):
    g = Genome(alpha_plus=rates[0], alpha_minus=rates[1])
    new = update_q(AgentState((q, 0.3), (0.0, 0.0)), 0, reward, g)
    assert new.q_values[0] == pytest.approx(expected, abs=1e-15)
    assert new.q_values[1] == 0.3


def test_update_q_rejects_non_binary_reward():
    with pytest.raises(ValueError):
        update_q(reset_state(), 0, 0, Genome())


@given(q_val, st.sampled_from([-1, 1]), unit, unit, st.sampled_from([0, 1]))
def test_update_q_is_convex_combination(q, reward, a_plus, a_minus, chosen):
    state = AgentState((q, q), (0.0, 0.0))
    new = update_q(state, chosen, reward, Genome(alpha_plus=a_plus, alpha_minus=a_minus))
    assert -1.0 <= new.q_values[chosen] <= 1.0
    assert new.q_values[1 - chosen] == q


@given(q_val, st.sampled_from([-1, 1]), unit)
def test_equal_rates_reduce_to_rescorla_wagner(q, reward, alpha):
    new = update_q(AgentState((q, 0.0), (0.0, 0.0)), 0, reward, Genome(alpha_plus=alpha, alpha_minus=alpha))
    assert new.q_values[0] == pytest.approx(q + alpha * (reward - q), abs=1e-15)


def test_choice_trace_examples():
    s = AgentState((0.0, 0.0), (0.3, 0.7))
    assert update_choice_trace(s, 0, Genome(tau=0.0)).c_values == (0.3, 0.7)
    assert update_choice_trace(s, 1, Genome(tau=1.0)).c_values == (0.0, 1.0)
    c = update_choice_trace(AgentState((0, 0), (0.5, 0.5)), 0, Genome(tau=0.2)).c_values
    assert c == pytest.approx((0.6, 0.4), abs=1e-15)


@settings(max_examples=50)
@given(unit, st.lists(st.sampled_from([0, 1]), min_size=1000, max_size=1000))
def test_traces_stay_in_unit_interval(tau, choices):
    g = Genome(tau=tau)
    state = reset_state()
    for c in choices:
        state = update_choice_trace(state, c, g)
        assert all(0.0 <= v <= 1.0 for v in state.c_values)


def test_reset_state():
    s = reset_state()
    assert s.q_values == (0.0, 0.0) and s.c_values == (0.0, 0.0)
    assert choice_probability(Genome(0.3, 0.1, 12.0, 0.5, -7.0), s) == 0.5


def test_exponent_bound_does_not_overflow():
    p = choice_probability(Genome(beta=20.0, phi=20.0), AgentState((-1.0, 1.0), (0.0, 1.0)))
    assert 0.0 < p < math.exp(-59)
