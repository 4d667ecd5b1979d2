"""Evolutionary engine: selection, mutation, budgets, elitism, reproducibility."""

import math

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from cixl2 import (ConfigError, GAConfig, Individual, SearchDomain,
                   initialize_population, make_benchmark, make_operator,
                   nonuniform_mutate, run_ga, run_generational, run_mgg,
                   tournament_select)
from cixl2.ga import _CountingObjective


class ScriptedRng:
    """Replays a fixed script of integer draws."""

    def __init__(self, draws):
        self._draws = list(draws)

    def integers(self, low, high, size=None):
        return np.asarray(self._draws.pop(0))


def sphere_rowwise(row):
    return float(np.sum(np.asarray(row) ** 2))


class TestIndividual:
    def test_coerces_genes(self):
        ind = Individual([1, 2, 3])
        assert ind.genes.dtype == np.float64
        assert ind.genes.flags["C_CONTIGUOUS"]
        assert ind.objective is None

    def test_objective_cast(self):
        assert Individual([0.0], np.float64(2.5)).objective == 2.5


class TestSearchDomain:
    def test_box(self):
        domain = SearchDomain.box(-5.12, 5.12, 3)
        assert domain.dimension == 3
        assert domain.bounds == [(-5.12, 5.12)] * 3

    def test_heterogeneous_bounds(self):
        domain = SearchDomain([(-1.0, 1.0), (0.0, 10.0)])
        assert domain.contains([0.5, 9.0])
        assert not domain.contains([0.5, 11.0])
        assert not domain.contains([-2.0, 5.0])

    def test_validation(self):
        with pytest.raises(ConfigError):
            SearchDomain([])
        with pytest.raises(ConfigError):
            SearchDomain([(1.0, 1.0)])
        with pytest.raises(ConfigError):
            SearchDomain([(2.0, 1.0)])
        with pytest.raises(ConfigError):
            SearchDomain([(0.0, math.inf)])


class TestGAConfig:
    def test_defaults(self):
        config = GAConfig()
        assert config.population_size == 100
        assert config.crossover_prob == 0.6
        assert config.mutation_prob == 0.05
        assert config.mutation_b == 5.0
        assert config.update_model == "generational"
        assert config.mgg_lambda == 200
        assert config.eval_budget == 300000
        assert config.seed == 0

    def test_validation(self):
        with pytest.raises(ConfigError):
            GAConfig(population_size=1)
        with pytest.raises(ConfigError):
            GAConfig(crossover_prob=1.5)
        with pytest.raises(ConfigError):
            GAConfig(mutation_prob=-0.1)
        with pytest.raises(ConfigError):
            GAConfig(mutation_b=-1.0)
        with pytest.raises(ConfigError):
            GAConfig(update_model="steady_state")
        with pytest.raises(ConfigError):
            GAConfig(mgg_lambda=1)
        with pytest.raises(ConfigError):
            GAConfig(eval_budget=0)


class TestInitialization:
    def test_uniform_population(self):
        domain = SearchDomain.box(-2.0, 2.0, 4)
        population = initialize_population(domain, 50, np.random.default_rng(0))
        assert len(population) == 50
        for ind in population:
            assert ind.objective is None
            assert domain.contains(ind.genes)

    def test_rejects_empty(self):
        domain = SearchDomain.box(-1.0, 1.0, 2)
        with pytest.raises(ConfigError):
            initialize_population(domain, 0, np.random.default_rng(0))


class TestTournament:
    def test_lower_objective_wins(self):
        population = [Individual([0.0], 5.0), Individual([1.0], 1.0)]
        winner = tournament_select(population, ScriptedRng([[0, 1]]))
        assert winner is population[1]

    def test_ties_go_to_first_drawn(self):
        population = [Individual([0.0], 2.0), Individual([1.0], 2.0)]
        assert tournament_select(population, ScriptedRng([[0, 1]])) is population[0]
        assert tournament_select(population, ScriptedRng([[1, 0]])) is population[1]

    def test_unevaluated_rejected(self):
        population = [Individual([0.0]), Individual([1.0], 1.0)]
        with pytest.raises(ValueError):
            tournament_select(population, ScriptedRng([[0, 1]]))

    def test_selection_pressure(self):
        # with two uniform draws from 100, the best wins 1 - 0.99^2 = 1.99%
        population = [Individual([float(i)], float(i)) for i in range(100)]
        rng = np.random.default_rng(42)
        trials = 100000
        hits = sum(tournament_select(population, rng) is population[0]
                   for _ in range(trials))
        p = 1.0 - 0.99**2
        sigma = math.sqrt(p * (1.0 - p) / trials)
        assert abs(hits / trials - p) < 3.0 * sigma


class TestNonuniformMutation:
    DOMAIN = SearchDomain.box(-5.0, 5.0, 8)

    def test_final_generation_is_identity(self):
        rng = np.random.default_rng(0)
        ind = Individual(rng.uniform(-5, 5, 8))
        out = nonuniform_mutate(ind, self.DOMAIN, t=300, g_max=300, b=5.0,
                                p_m=1.0, rng=rng)
        assert_array_equal(out.genes, ind.genes)

    def test_zero_rate_is_identity(self):
        rng = np.random.default_rng(1)
        ind = Individual(rng.uniform(-5, 5, 8))
        out = nonuniform_mutate(ind, self.DOMAIN, t=1, g_max=300, b=5.0,
                                p_m=0.0, rng=rng)
        assert_array_equal(out.genes, ind.genes)

    def test_step_bounded_by_gap_to_bound(self):
        rng = np.random.default_rng(2)
        for t in (0, 10, 150, 299):
            ind = Individual(rng.uniform(-5, 5, 8))
            out = nonuniform_mutate(ind, self.DOMAIN, t=t, g_max=300, b=5.0,
                                    p_m=1.0, rng=rng)
            assert self.DOMAIN.contains(out.genes)
            moved_up = out.genes >= ind.genes
            assert (out.genes[moved_up] <= 5.0).all()
            assert (out.genes[~moved_up] >= -5.0).all()

    def test_early_steps_larger_on_average(self):
        rng = np.random.default_rng(3)
        ind = Individual(np.zeros(8))
        early = np.mean([np.abs(nonuniform_mutate(
            ind, self.DOMAIN, 1, 300, 5.0, 1.0, rng).genes).mean()
            for _ in range(200)])
        late = np.mean([np.abs(nonuniform_mutate(
            ind, self.DOMAIN, 295, 300, 5.0, 1.0, rng).genes).mean()
            for _ in range(200)])
        assert early > 10.0 * late

    def test_draw_order_is_gate_direction_magnitude(self):
        used = np.random.default_rng(7)
        nonuniform_mutate(Individual(np.zeros(8)), self.DOMAIN, 1, 10, 5.0,
                          0.5, used)
        shadow = np.random.default_rng(7)
        shadow.random(8)
        shadow.integers(0, 2, size=8)
        shadow.random(8)
        assert used.random() == shadow.random()

    def test_validation(self):
        rng = np.random.default_rng(4)
        ind = Individual(np.zeros(8))
        with pytest.raises(ConfigError):
            nonuniform_mutate(ind, self.DOMAIN, 0, 0, 5.0, 0.5, rng)
        with pytest.raises(ConfigError):
            nonuniform_mutate(ind, self.DOMAIN, -1, 10, 5.0, 0.5, rng)
        with pytest.raises(ConfigError):
            nonuniform_mutate(ind, self.DOMAIN, 11, 10, 5.0, 0.5, rng)


class TestCountingObjective:
    def test_counts_rows(self):
        counter = _CountingObjective(sphere_rowwise)
        counter(np.zeros((7, 3)))
        counter(np.zeros((5, 3)))
        assert counter.calls == 12

    def test_batch_protocol_used_when_present(self):
        bench = make_benchmark("sphere", dimension=4)
        counter = _CountingObjective(bench)
        out = counter(np.ones((3, 4)))
        assert_array_equal(out, [4.0, 4.0, 4.0])

    def test_malformed_result_rejected(self):
        class Bad:
            def evaluate_batch(self, block):
                return np.zeros((block.shape[0], 2))

        counter = _CountingObjective(Bad())
        with pytest.raises(RuntimeError):
            counter(np.zeros((3, 2)))


class TestGenerationalModel:
    def test_budget_accounting_exact(self):
        bench = make_benchmark("sphere", dimension=5)
        config = GAConfig(population_size=20, eval_budget=200, seed=1)
        rec = run_generational(config, bench.domain, bench, make_operator("blx", 5))
        assert rec.evaluations == list(range(20, 201, 20))
        assert rec.generations == list(range(10))

    def test_setup_evaluations_are_charged(self):
        # three virtual-parent evaluations per generation shift the grid
        bench = make_benchmark("sphere", dimension=5)
        config = GAConfig(population_size=20, eval_budget=112, seed=1)
        rec = run_generational(config, bench.domain, bench,
                               make_operator("cixl2", 5, n_best=5))
        assert rec.evaluations == [20, 43, 66, 89, 112]

    def test_reported_evaluations_match_actual_calls(self):
        bench = make_benchmark("sphere", dimension=5)
        counter = {"n": 0}

        def counting(row):
            counter["n"] += 1
            return sphere_rowwise(row)

        config = GAConfig(population_size=10, eval_budget=100, seed=3)
        rec = run_generational(config, bench.domain, counting,
                               make_operator("cixl2", 5, n_best=4))
        assert rec.evaluations[-1] == counter["n"]
        assert rec.evaluations[-1] <= config.eval_budget

    def test_never_overruns_budget(self):
        bench = make_benchmark("sphere", dimension=5)
        for budget in (47, 61, 100, 153):
            config = GAConfig(population_size=10, eval_budget=budget, seed=0)
            rec = run_generational(config, bench.domain, bench,
                                   make_operator("blx", 5))
            assert rec.evaluations[-1] <= budget
            assert budget - rec.evaluations[-1] < 10  # no full generation left unused

    def test_elitism_is_monotone(self):
        bench = make_benchmark("rastrigin", dimension=5)
        config = GAConfig(population_size=30, eval_budget=3000, seed=5)
        rec = run_generational(config, bench.domain, bench,
                               make_operator("cixl2", 5))
        diffs = np.diff(rec.best_objective)
        assert (diffs <= 0.0).all()

    def test_mean_never_beats_best(self):
        bench = make_benchmark("sphere", dimension=5)
        config = GAConfig(population_size=20, eval_budget=1000, seed=6)
        rec = run_generational(config, bench.domain, bench,
                               make_operator("fuzzy", 5))
        assert all(m >= b for m, b in zip(rec.mean_objective, rec.best_objective))

    def test_disabled_variation_keeps_initial_best(self):
        bench = make_benchmark("sphere", dimension=5)
        config = GAConfig(population_size=20, eval_budget=500, seed=7,
                          crossover_prob=0.0, mutation_prob=0.0)
        rec = run_generational(config, bench.domain, bench,
                               make_operator("blx", 5))
        assert all(b == rec.best_objective[0] for b in rec.best_objective)

    def test_bit_identical_reruns(self):
        bench = make_benchmark("rastrigin", dimension=5)
        config = GAConfig(population_size=20, eval_budget=800, seed=11)
        op = make_operator("cixl2", 5)
        one = run_generational(config, bench.domain, bench, op)
        two = run_generational(config, bench.domain, bench, op)
        assert one.rows() == two.rows()
        assert_array_equal(one.best.genes, two.best.genes)

    def test_seed_changes_the_run(self):
        bench = make_benchmark("rastrigin", dimension=5)
        op = make_operator("blx", 5)
        one = run_generational(GAConfig(population_size=20, eval_budget=400,
                                        seed=1), bench.domain, bench, op)
        two = run_generational(GAConfig(population_size=20, eval_budget=400,
                                        seed=2), bench.domain, bench, op)
        assert one.rows() != two.rows()

    def test_best_point_is_consistent(self):
        bench = make_benchmark("ackley", dimension=5)
        config = GAConfig(population_size=20, eval_budget=600, seed=13)
        rec = run_generational(config, bench.domain, bench,
                               make_operator("sbx", 5))
        assert rec.best.objective == rec.best_objective[-1]
        assert bench.evaluate(rec.best.genes) == rec.best.objective
        assert bench.domain.contains(rec.best.genes)

    def test_seed_individuals_are_used(self):
        bench = make_benchmark("sphere", dimension=5)
        config = GAConfig(population_size=10, eval_budget=100, seed=17)
        rec = run_generational(config, bench.domain, bench,
                               make_operator("blx", 5),
                               seed_individuals=[np.zeros(5)])
        assert rec.best_objective[0] == 0.0
        assert rec.best.objective == 0.0

    def test_seed_individual_validation(self):
        bench = make_benchmark("sphere", dimension=5)
        config = GAConfig(population_size=3, eval_budget=100, seed=0)
        op = make_operator("blx", 5)
        with pytest.raises(ConfigError):
            run_generational(config, bench.domain, bench, op,
                             seed_individuals=[np.zeros(4)])
        with pytest.raises(ConfigError):
            run_generational(config, bench.domain, bench, op,
                             seed_individuals=[np.full(5, 99.0)])
        with pytest.raises(ConfigError):
            run_generational(config, bench.domain, bench, op,
                             seed_individuals=[np.zeros(5)] * 4)

    def test_budget_must_cover_first_generation(self):
        bench = make_benchmark("sphere", dimension=5)
        config = GAConfig(population_size=20, eval_budget=39, seed=0)
        with pytest.raises(ConfigError):
            run_generational(config, bench.domain, bench, make_operator("blx", 5))

    def test_two_child_operator_fills_odd_population(self):
        bench = make_benchmark("sphere", dimension=5)
        config = GAConfig(population_size=15, eval_budget=150, seed=19)
        rec = run_generational(config, bench.domain, bench,
                               make_operator("sbx", 5))
        assert rec.evaluations == [15, 30, 45, 60, 75, 90, 105, 120, 135, 150]


class TestMggModel:
    def test_budget_accounting_exact(self):
        bench = make_benchmark("sphere", dimension=5)
        config = GAConfig(population_size=10, mgg_lambda=20, eval_budget=110,
                          seed=1, update_model="mgg")
        rec = run_mgg(config, bench.domain, bench, make_operator("undx", 5))
        assert rec.evaluations == [10, 30, 50, 70, 90, 110]

    def test_monotone_and_reproducible(self):
        bench = make_benchmark("schwefel_ds", dimension=5)
        config = GAConfig(population_size=15, mgg_lambda=20, eval_budget=600,
                          seed=2, update_model="mgg")
        op = make_operator("undx", 5)
        one = run_mgg(config, bench.domain, bench, op)
        two = run_mgg(config, bench.domain, bench, op)
        assert one.rows() == two.rows()
        assert (np.diff(one.best_objective) <= 0.0).all()
        assert one.best_objective[-1] < one.best_objective[0]

    def test_two_slot_parent_operators_work(self):
        bench = make_benchmark("sphere", dimension=5)
        config = GAConfig(population_size=10, mgg_lambda=10, eval_budget=200,
                          seed=3, update_model="mgg")
        for name in ("blx", "sbx", "fuzzy"):
            rec = run_mgg(config, bench.domain, bench, make_operator(name, 5))
            assert rec.evaluations[-1] <= 200
            assert (np.diff(rec.best_objective) <= 0.0).all()

    def test_budget_must_cover_first_step(self):
        bench = make_benchmark("sphere", dimension=5)
        config = GAConfig(population_size=10, mgg_lambda=50, eval_budget=59,
                          seed=0, update_model="mgg")
        with pytest.raises(ConfigError):
            run_mgg(config, bench.domain, bench, make_operator("undx", 5))

    def test_best_point_is_consistent(self):
        bench = make_benchmark("griewangk", dimension=5)
        config = GAConfig(population_size=10, mgg_lambda=20, eval_budget=400,
                          seed=5, update_model="mgg")
        rec = run_mgg(config, bench.domain, bench, make_operator("undx", 5))
        assert rec.best.objective == rec.best_objective[-1]
        assert bench.evaluate(rec.best.genes) == rec.best.objective


class TestDispatch:
    def test_update_model_routes(self):
        bench = make_benchmark("sphere", dimension=5)
        mgg_config = GAConfig(population_size=10, mgg_lambda=10,
                              eval_budget=100, seed=1, update_model="mgg")
        rec = run_ga(mgg_config, bench.domain, bench, make_operator("undx", 5))
        assert rec.evaluations == [10, 20, 30, 40, 50, 60, 70, 80, 90, 100]
        gen_config = GAConfig(population_size=10, eval_budget=100, seed=1)
        rec = run_ga(gen_config, bench.domain, bench, make_operator("blx", 5))
        assert rec.evaluations == list(range(10, 101, 10))

    def test_mgg_rejects_seed_individuals(self):
        bench = make_benchmark("sphere", dimension=5)
        config = GAConfig(population_size=10, mgg_lambda=10, eval_budget=100,
                          seed=1, update_model="mgg")
        with pytest.raises(ConfigError):
            run_ga(config, bench.domain, bench, make_operator("undx", 5),
                   seed_individuals=[np.zeros(5)])
