from collections import Counter
from dataclasses import dataclass

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biasevo.agent import LOWER, UPPER, Genome
from biasevo.environments import EnvironmentSpec, stable_catalog, volatile_catalog
from biasevo.evolution import InitMode, MutationTable, Population, evaluate_fitness, \
    init_population, mutate, mutate_members, rank_order, run_task, select_and_reproduce, \
    step_generation
from biasevo.simulate import population_fitness

BASELINE = EnvironmentSpec()
EASY = EnvironmentSpec((0.95, 0.05), label="easy")


@dataclass
class Scenario:
    environments: tuple = (BASELINE,)
    init_mode: InitMode = InitMode.uniform()
    mutation_table: MutationTable = MutationTable()
    mutation_target: str = "five_percent_of_survivors"


def random_members(n, seed):
    return np.random.default_rng(seed).uniform(LOWER, UPPER, size=(n, 5))


def test_mutation_table_defaults():
    t = MutationTable()
    assert t.sigmas().tolist() == pytest.approx([0.05, 0.05, 1.0, 0.05, 2.0])
    spans = UPPER - LOWER
    assert t.sigmas() == pytest.approx(0.05 * spans)


def test_batch_matches_scalar_reference_exactly():
    envs = stable_catalog() + volatile_catalog()
    members = random_members(40, 0)
    for i, row in enumerate(members):
        scalar = evaluate_fitness(Genome.from_array(row), envs, np.random.default_rng(i))
        batch, _ = population_fitness(row[None, :], envs, np.random.default_rng(i))
        assert batch[0] == scalar


def test_run_task_records():
    acc, records = run_task(Genome(0.5, 0.5, 10.0, 0.3, 1.0), BASELINE, np.random.default_rng(1))
    assert len(records) == 160
    assert all(-2.0 <= r.prediction_error <= 2.0 and r.reward in (-1, 1) for r in records)
    assert acc == sum(r.correct for r in records) / 160


def _fitness_of(genome, env, n, seed):
    fit, _ = population_fitness(np.tile(genome.to_array(), (n, 1)), [env], np.random.default_rng(seed))
    return fit


def test_random_policy_accuracy():
    assert _fitness_of(Genome(), BASELINE, 10**4, 1).mean() == pytest.approx(0.5, abs=0.02)


def test_non_learning_agent_accuracy():
    g = Genome(alpha_plus=0.0, alpha_minus=0.0, beta=15.0, tau=0.4, phi=0.0)
    assert _fitness_of(g, BASELINE, 10**4, 2).mean() == pytest.approx(0.5, abs=0.02)


def test_strong_agent_on_easy_task():
    g = Genome(alpha_plus=0.5, alpha_minus=0.5, beta=20.0, tau=0.0, phi=0.0)
    assert _fitness_of(g, EASY, 10**4, 3).mean() > 0.85


def test_macro_fitness_is_mean_of_environments():
    envs = [BASELINE, EASY]
    members = random_members(100, 4)
    fit, _ = population_fitness(members, envs, np.random.default_rng(9))
    rng = np.random.default_rng(9)
    parts = [population_fitness(members, [e], rng)[0] for e in envs]
    assert fit == pytest.approx((parts[0] + parts[1]) / 2, abs=1e-15)


def test_selection_counts_n1000():
    pop = Population(random_members(1000, 1))
    fitness = np.random.default_rng(2).random(1000)
    nxt = select_and_reproduce(fitness, pop, np.random.default_rng(3))
    assert len(nxt) == 1000 and nxt.generation == 1
    order = np.argsort(-fitness)
    counts = Counter(map(tuple, nxt.members))
    assert sum(counts[tuple(pop.members[i])] == 0 for i in order[-50:]) == 50
    assert sum(counts[tuple(pop.members[i])] == 2 for i in order[:50]) == 50
    assert all(counts[tuple(pop.members[i])] == 1 for i in order[50:950])


def test_selection_small_trace():
    members = np.arange(20, dtype=float)[:, None].repeat(5, axis=1)
    fitness = 20.0 - np.arange(20)  # member 0 ranks first, member 19 last
    nxt = select_and_reproduce(fitness, Population(members), np.random.default_rng(0))
    c = Counter(nxt.members[:, 0].tolist())
    assert c[0.0] == 2 and c[19.0] == 0
    assert all(c[float(i)] == 1 for i in range(1, 19))


def test_selection_all_ties():
    members = random_members(100, 5)
    nxt = select_and_reproduce(np.full(100, 0.5), Population(members), np.random.default_rng(1))
    before = Counter(map(tuple, members))
    after = Counter(map(tuple, nxt.members))
    assert len(nxt) == 100
    assert sum((before - after).values()) == 5 and sum((after - before).values()) == 5


def test_selection_rejects_bad_sizes():
    with pytest.raises(ValueError, match="multiple of 20"):
        select_and_reproduce(np.zeros(30), Population(random_members(30, 0)), np.random.default_rng(0))
    with pytest.raises(ValueError, match="one fitness value"):
        select_and_reproduce(np.zeros(19), Population(random_members(20, 0)), np.random.default_rng(0))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from([0.0, 0.25, 0.5, 1.0]), min_size=40, max_size=40), st.integers(0, 2**32 - 1))
def test_population_size_invariant_under_ties(fitness, seed):
    pop = Population(random_members(40, seed % 1000))
    nxt = select_and_reproduce(np.array(fitness), pop, np.random.default_rng(seed))
    assert nxt.members.shape == (40, 5)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 30), min_size=60, max_size=60), st.integers(0, 10**6))
def test_rank_selection_scale_invariant(raw, seed):
    f = np.array(raw, dtype=float) / 30.0
    transforms = [lambda x: 3 * x - 7, np.exp, lambda x: x ** 3 + x]
    base = rank_order(f, np.random.default_rng(seed))
    for tr in transforms:
        assert np.array_equal(rank_order(tr(f), np.random.default_rng(seed)), base)


def test_mutate_zero_noise_is_identity():
    g = Genome(0.3, 0.6, 4.0, 0.1, -2.0)
    zero = MutationTable(0.0, 0.0, 0.0, 0.0, 0.0)
    assert mutate(g, zero, np.random.default_rng(0)) == g


def test_mutate_clamps():
    g = Genome(alpha_plus=0.99)
    big = MutationTable(alpha_plus=1e-12, alpha_minus=0.0, beta=0.0, tau=0.0, phi=0.0)

    class Plus:
        def normal(self, loc, scale):
            return np.where(np.asarray(scale) > 0, 0.5, 0.0)

    assert mutate(g, big, Plus()).alpha_plus == 1.0


def test_mutation_sigma_calibration():
    members = np.tile([0.5, 0.5, 10.0, 0.5, 0.0], (10**6, 1))
    mutate_members(members, np.arange(10**6), MutationTable(), np.random.default_rng(6))
    sd = (members - [0.5, 0.5, 10.0, 0.5, 0.0]).std(axis=0)
    assert sd[2] == pytest.approx(1.0, abs=0.01)
    assert sd[[0, 1, 3]] == pytest.approx([0.05] * 3, rel=0.01)
    assert np.all(members >= LOWER) and np.all(members <= UPPER)


def test_init_population_fixed():
    g = Genome(alpha_plus=0.5, alpha_minus=0.25, beta=10.0, tau=0.5, phi=0.0)
    pop = init_population(InitMode.fixed(g), 1000, np.random.default_rng(0))
    assert len(pop) == 1000 and all(x == g for x in pop.genomes()[:5])
    assert np.all(pop.members == g.to_array())
    zero = init_population(InitMode.fixed(Genome()), 1000, None)
    assert np.all(zero.members == 0.0)


def test_init_population_uniform_moments():
    pop = init_population(InitMode.uniform(), 10**5, np.random.default_rng(1))
    m = pop.means()
    assert m["phi"] == pytest.approx(0.0, abs=0.2)
    assert m["alpha_plus"] == pytest.approx(0.5, abs=0.005)
    assert np.all(pop.members >= LOWER) and np.all(pop.members <= UPPER)


def test_init_population_rejects_size():
    with pytest.raises(ValueError):
        init_population(InitMode.uniform(), 999, np.random.default_rng(0))


def test_init_mode_validation():
    with pytest.raises(ValueError):
        InitMode("fixed")
    assert InitMode.fixed(Genome()).mutation and not InitMode.uniform().mutation


def test_step_uniform_never_creates_new_genomes():
    rng = np.random.default_rng(0)
    pop = init_population(InitMode.uniform(), 200, rng)
    seen = set(map(tuple, pop.members))
    for g in range(10):
        prev = set(map(tuple, pop.members))
        pop, stats = step_generation(pop, Scenario(), np.random.default_rng(g))
        now = set(map(tuple, pop.members))
        assert now <= prev <= seen
        assert len(pop) == 200


def test_step_fixed_mutates_at_most_five_percent():
    g = Genome(alpha_plus=0.5, alpha_minus=0.5, beta=10.0, tau=0.5, phi=0.0)
    scen = Scenario(init_mode=InitMode.fixed(g))
    pop = init_population(scen.init_mode, 1000, None)
    nxt, _ = step_generation(pop, scen, np.random.default_rng(1))
    changed = np.any(nxt.members != g.to_array(), axis=1).sum()
    assert 0 < changed <= 50


def test_step_all_descendants_target():
    g = Genome(alpha_plus=0.5, alpha_minus=0.5, beta=10.0, tau=0.5, phi=0.0)
    scen = Scenario(init_mode=InitMode.fixed(g), mutation_target="all_descendants")
    nxt, _ = step_generation(init_population(scen.init_mode, 200, None), scen, np.random.default_rng(1))
    assert np.any(nxt.members != g.to_array(), axis=1).sum() > 190


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_step_outputs_stay_in_range(seed):
    g = Genome(alpha_plus=0.99, alpha_minus=0.01, beta=19.5, tau=0.98, phi=-19.0)
    scen = Scenario(init_mode=InitMode.fixed(g), mutation_target="all_descendants")
    pop = init_population(scen.init_mode, 100, None)
    for gen in range(3):
        pop, stats = step_generation(pop, scen, np.random.default_rng([seed, gen]))
        assert np.all(pop.members >= LOWER) and np.all(pop.members <= UPPER)
        assert stats.fitness_bottom5_mean <= stats.fitness_mean <= stats.fitness_top5_mean


def test_step_is_deterministic():
    scen = Scenario(environments=(BASELINE, volatile_catalog()[4]))
    pop = init_population(InitMode.uniform(), 100, np.random.default_rng(3))
    a, sa = step_generation(pop, scen, np.random.default_rng(7))
    b, sb = step_generation(pop, scen, np.random.default_rng(7))
    assert np.array_equal(a.members, b.members) and sa == sb
