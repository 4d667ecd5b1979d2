"""Real-coded evolutionary engine.

Populations are arrays of gene vectors inside a box-shaped search domain.
Two update models are provided: a generational model with binary tournament
selection and elitism, and a minimal-generation-gap (MGG) model where each
step recombines a single pair of population slots against a large block of
children.

Determinism contract
--------------------
Each run consumes a single ``numpy.random.Generator`` seeded from the config.
Draws happen in a fixed, documented order so that runs are bit-reproducible
for a given backend:

generational model, per generation:
  1. crossover gates, ``rng.random(n_applications)``
  2. tournament candidates, ``rng.integers(0, N, (n_applications, n_parents, 2))``
  3. extra parent indices if the operator needs them, ``rng.integers(0, N, ...)``
  4. operator draws for the gated applications only
  5. mutation gate, direction, and magnitude draws, each shaped ``(N, p)``

MGG model, per step:
  1. first slot index, then second slot index (shifted to avoid the first)
  2. parent choice bits when the operator takes one parent per application
  3. third parent indices if the operator needs them
  4. operator draws for all applications
  5. mutation draws shaped ``(lambda, p)``

Operator construction must not draw: virtual-parent setup is charged
evaluations but no randomness.
"""

import numpy as np

from ._backend import kernels
from .errors import ConfigError


class Individual:
    """A gene vector plus an optional cached objective value."""

    __slots__ = ("genes", "objective")

    def __init__(self, genes, objective=None):
        self.genes = np.ascontiguousarray(genes, dtype=float)
        self.objective = None if objective is None else float(objective)

    def __repr__(self):
        return f"Individual(genes={self.genes!r}, objective={self.objective!r})"


class SearchDomain:
    """Per-gene closed intervals [a_i, b_i] with a_i < b_i."""

    def __init__(self, bounds):
        arr = np.asarray(bounds, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 1:
            raise ConfigError("bounds must be a non-empty sequence of (lower, upper) pairs")
        if not np.all(np.isfinite(arr)):
            raise ConfigError("domain bounds must be finite")
        if not np.all(arr[:, 0] < arr[:, 1]):
            raise ConfigError("every lower bound must lie strictly below its upper bound")
        self.lower = np.ascontiguousarray(arr[:, 0])
        self.upper = np.ascontiguousarray(arr[:, 1])

    @classmethod
    def box(cls, lower, upper, dimension):
        """Same interval for every gene."""
        return cls([(lower, upper)] * int(dimension))

    @property
    def dimension(self):
        return self.lower.shape[0]

    @property
    def bounds(self):
        return list(zip(self.lower.tolist(), self.upper.tolist()))

    def contains(self, genes):
        g = np.asarray(genes, dtype=float)
        return bool(np.all(g >= self.lower) and np.all(g <= self.upper))

    def __repr__(self):
        return f"SearchDomain({self.bounds!r})"


class GAConfig:
    """Run parameters for both update models.

    eval_budget caps the total number of objective calls; a generation or MGG
    step is only started if it fits completely inside the remaining budget.
    """

    def __init__(self, population_size=100, crossover_prob=0.6, mutation_prob=0.05,
                 mutation_b=5.0, update_model="generational", mgg_lambda=200,
                 eval_budget=300000, seed=0):
        self.population_size = int(population_size)
        self.crossover_prob = float(crossover_prob)
        self.mutation_prob = float(mutation_prob)
        self.mutation_b = float(mutation_b)
        self.update_model = str(update_model)
        self.mgg_lambda = int(mgg_lambda)
        self.eval_budget = int(eval_budget)
        self.seed = int(seed)
        if self.population_size < 2:
            raise ConfigError("population_size must be at least 2")
        if not 0.0 <= self.crossover_prob <= 1.0:
            raise ConfigError("crossover_prob must lie in [0, 1]")
        if not 0.0 <= self.mutation_prob <= 1.0:
            raise ConfigError("mutation_prob must lie in [0, 1]")
        if self.mutation_b < 0.0:
            raise ConfigError("mutation_b must be non-negative")
        if self.update_model not in ("generational", "mgg"):
            raise ConfigError(f"unknown update_model {self.update_model!r}; "
                              "valid models: generational, mgg")
        if self.mgg_lambda < 2:
            raise ConfigError("mgg_lambda must be at least 2")
        if self.eval_budget < 1:
            raise ConfigError("eval_budget must be positive")

    def __repr__(self):
        return (f"GAConfig(population_size={self.population_size}, "
                f"crossover_prob={self.crossover_prob}, mutation_prob={self.mutation_prob}, "
                f"mutation_b={self.mutation_b}, update_model={self.update_model!r}, "
                f"mgg_lambda={self.mgg_lambda}, eval_budget={self.eval_budget}, "
                f"seed={self.seed})")


class RunRecord:
    """Trace of one run: per-generation aggregates plus the final best point.

    Row 0 describes the freshly initialized population, before any update.
    """

    __slots__ = ("seed", "generations", "evaluations", "best_objective",
                 "mean_objective", "best")

    def __init__(self, seed):
        self.seed = seed
        self.generations = []
        self.evaluations = []
        self.best_objective = []
        self.mean_objective = []
        self.best = None

    def append(self, generation, evaluations, best_objective, mean_objective):
        self.generations.append(int(generation))
        self.evaluations.append(int(evaluations))
        self.best_objective.append(float(best_objective))
        self.mean_objective.append(float(mean_objective))

    def rows(self):
        return list(zip(self.generations, self.evaluations,
                        self.best_objective, self.mean_objective))


class _CountingObjective:
    """Batch objective wrapper that counts every evaluated row."""

    __slots__ = ("_batch", "calls")

    def __init__(self, objective):
        if hasattr(objective, "evaluate_batch"):
            self._batch = objective.evaluate_batch
        else:
            fn = objective

            def _rowwise(block):
                return np.array([float(fn(row)) for row in block])

            self._batch = _rowwise
        self.calls = 0

    def __call__(self, block):
        self.calls += block.shape[0]
        out = np.ascontiguousarray(self._batch(block), dtype=float)
        if out.shape != (block.shape[0],):
            raise RuntimeError("objective returned a malformed batch result")
        return out


def initialize_population(domain, size, rng):
    """Uniform initial population; objectives are left unset."""
    if size < 1:
        raise ConfigError("population size must be positive")
    genes = rng.uniform(domain.lower, domain.upper, size=(size, domain.dimension))
    return [Individual(row) for row in genes]


def tournament_select(population, rng):
    """Binary tournament with replacement; ties go to the first-drawn candidate."""
    n = len(population)
    idx = rng.integers(0, n, size=2)
    a, b = population[int(idx[0])], population[int(idx[1])]
    if a.objective is None or b.objective is None:
        raise ValueError("tournament requires evaluated individuals")
    return a if a.objective <= b.objective else b


def nonuniform_mutate(individual, domain, t, g_max, b, p_m, rng):
    """Non-uniform mutation: per-gene moves toward a bound, shrinking with t.

    The step is y * (1 - r**((1 - t/g_max)**b)) where y is the distance to the
    chosen bound; at t == g_max the step is exactly zero. Draw order per call:
    gate, direction, magnitude, each of length p.
    """
    if g_max < 1:
        raise ConfigError("g_max must be at least 1")
    if not 0 <= t <= g_max:
        raise ConfigError("t must lie in [0, g_max]")
    p = domain.dimension
    gate = rng.random(p)
    tau = rng.integers(0, 2, size=p)
    r = rng.random(p)
    exponent = (1.0 - t / g_max) ** b
    genes = kernels.mutate(individual.genes[None], domain.lower, domain.upper,
                           p_m, exponent, gate[None], tau[None], r[None])[0]
    return Individual(genes)


def _uniform_block(domain, size, rng, seed_individuals):
    genes = rng.uniform(domain.lower, domain.upper, size=(size, domain.dimension))
    if seed_individuals:
        if len(seed_individuals) > size:
            raise ConfigError("more seed individuals than population slots")
        for row, start in enumerate(seed_individuals):
            start = np.asarray(start, dtype=float)
            if start.shape != (domain.dimension,):
                raise ConfigError("seed individual has the wrong dimension")
            if not domain.contains(start):
                raise ConfigError("seed individual lies outside the domain")
            genes[row] = start
    return genes


def run_generational(config, domain, objective, crossover, seed_individuals=None):
    """Generational model: tournament parents, gated crossover, mutation, elitism.

    Every generation produces and evaluates exactly N offspring. The crossover
    gate is drawn once per operator application; a closed gate copies the
    tournament parents through unchanged (both of them for two-child
    operators). The best individual found so far unconditionally replaces the
    worst offspring. seed_individuals, if given, overwrite the first rows of
    the initial population before evaluation.
    """
    rng = np.random.default_rng(config.seed)
    evaluate = _CountingObjective(objective)
    n = config.population_size
    p = domain.dimension
    lower, upper = domain.lower, domain.upper

    n_children = crossover.children_per_application
    n_parents = crossover.parents_per_application
    n_apps = -(-n // n_children)
    per_gen = n + crossover.setup_evaluations
    if config.eval_budget < n + per_gen:
        raise ConfigError(f"eval_budget {config.eval_budget} cannot cover "
                          f"initialization ({n}) plus one generation ({per_gen})")
    g_max = config.eval_budget // per_gen

    genes = _uniform_block(domain, n, rng, seed_individuals)
    objs = evaluate(genes)
    best_idx = int(np.argmin(objs))
    best_genes = genes[best_idx].copy()
    best_obj = float(objs[best_idx])

    record = RunRecord(config.seed)
    record.append(0, evaluate.calls, best_obj, objs.mean())

    t = 0
    while evaluate.calls + per_gen <= config.eval_budget:
        t += 1
        ctx = crossover.begin_generation(genes, objs, domain, evaluate)

        gates = rng.random(n_apps)
        cand = rng.integers(0, n, size=(n_apps, n_parents, 2))
        # ties go to the first-drawn candidate
        parent_idx = np.where(objs[cand[..., 0]] <= objs[cand[..., 1]],
                              cand[..., 0], cand[..., 1])
        if crossover.extra_parents:
            extra_idx = rng.integers(0, n, size=(n_apps, crossover.extra_parents))
        else:
            extra_idx = None

        buffer = np.empty((n_apps, n_children, p))
        cross_rows = np.nonzero(gates < config.crossover_prob)[0]
        copy_rows = np.nonzero(gates >= config.crossover_prob)[0]
        if cross_rows.size:
            parents = [np.ascontiguousarray(genes[parent_idx[cross_rows, s]])
                       for s in range(n_parents)]
            parent_objs = [np.ascontiguousarray(objs[parent_idx[cross_rows, s]])
                           for s in range(n_parents)]
            extras = None
            if extra_idx is not None:
                extras = np.ascontiguousarray(genes[extra_idx[cross_rows, 0]])
            children = crossover.make_children(ctx, parents, parent_objs,
                                               extras, domain, rng)
            buffer[cross_rows] = children.reshape(cross_rows.size, n_children, p)
        for s in range(n_children):
            src = parent_idx[copy_rows, min(s, n_parents - 1)]
            buffer[copy_rows, s] = genes[src]

        offspring = np.ascontiguousarray(buffer.reshape(n_apps * n_children, p)[:n])
        exponent = (1.0 - t / g_max) ** config.mutation_b
        gate = rng.random((n, p))
        tau = rng.integers(0, 2, size=(n, p))
        r = rng.random((n, p))
        offspring = kernels.mutate(offspring, lower, upper, config.mutation_prob,
                                   exponent, gate, tau, r)
        new_objs = evaluate(offspring)

        worst = int(np.argmax(new_objs))
        offspring[worst] = best_genes
        new_objs[worst] = best_obj
        genes, objs = offspring, new_objs

        cur = int(np.argmin(objs))
        if objs[cur] < best_obj:
            best_obj = float(objs[cur])
            best_genes = genes[cur].copy()
        record.append(t, evaluate.calls, best_obj, objs.mean())

    record.best = Individual(best_genes, best_obj)
    return record


def _roulette_pick(weights, u):
    # u in [0, 1); weight-proportional slot via the cumulative sum
    cum = np.cumsum(weights)
    return int(np.searchsorted(cum, u * cum[-1], side="right"))


def run_mgg(config, domain, objective, crossover):
    """Minimal generation gap model.

    Each step picks two distinct population slots, builds lambda children from
    those parents, mutates and evaluates them, then refills the two slots from
    the pool (2 parents + children): the pool best goes to the first slot, a
    rank-weighted roulette pick over the remainder goes to the second. Weights
    fall linearly from pool size down to 1 for the pool worst.
    """
    rng = np.random.default_rng(config.seed)
    evaluate = _CountingObjective(objective)
    n = config.population_size
    lam = config.mgg_lambda
    p = domain.dimension
    lower, upper = domain.lower, domain.upper

    n_children = crossover.children_per_application
    n_parents = crossover.parents_per_application
    if n_parents > 2:
        raise ConfigError("the MGG model supplies at most two slot parents")
    n_apps = -(-lam // n_children)
    per_step = lam + crossover.setup_evaluations
    if config.eval_budget < n + per_step:
        raise ConfigError(f"eval_budget {config.eval_budget} cannot cover "
                          f"initialization ({n}) plus one step ({per_step})")
    step_cap = config.eval_budget // per_step

    genes = _uniform_block(domain, n, rng, None)
    objs = evaluate(genes)
    best_idx = int(np.argmin(objs))
    best_genes = genes[best_idx].copy()
    best_obj = float(objs[best_idx])

    record = RunRecord(config.seed)
    record.append(0, evaluate.calls, best_obj, objs.mean())

    t = 0
    while evaluate.calls + per_step <= config.eval_budget:
        t += 1
        ctx = crossover.begin_generation(genes, objs, domain, evaluate)

        slot_i = int(rng.integers(0, n))
        slot_j = int(rng.integers(0, n - 1))
        if slot_j >= slot_i:
            slot_j += 1

        if n_parents == 1:
            pick = rng.integers(0, 2, size=n_apps)
            chosen = np.where(pick == 0, slot_i, slot_j)
            parents = [np.ascontiguousarray(genes[chosen])]
            parent_objs = [np.ascontiguousarray(objs[chosen])]
        else:
            parents = [np.ascontiguousarray(np.broadcast_to(genes[slot_i], (n_apps, p))),
                       np.ascontiguousarray(np.broadcast_to(genes[slot_j], (n_apps, p)))]
            parent_objs = [np.full(n_apps, objs[slot_i]), np.full(n_apps, objs[slot_j])]
        extras = None
        if crossover.extra_parents:
            lo, hi = sorted((slot_i, slot_j))
            third = rng.integers(0, n - 2, size=n_apps)
            third = third + (third >= lo)
            third = third + (third >= hi)
            extras = np.ascontiguousarray(genes[third])

        children = crossover.make_children(ctx, parents, parent_objs,
                                           extras, domain, rng)
        children = np.ascontiguousarray(children[:lam])
        exponent = (1.0 - t / step_cap) ** config.mutation_b
        gate = rng.random((lam, p))
        tau = rng.integers(0, 2, size=(lam, p))
        r = rng.random((lam, p))
        children = kernels.mutate(children, lower, upper, config.mutation_prob,
                                  exponent, gate, tau, r)
        child_objs = evaluate(children)

        pool_genes = np.vstack([genes[slot_i][None], genes[slot_j][None], children])
        pool_objs = np.concatenate([[objs[slot_i]], [objs[slot_j]], child_objs])
        order = np.argsort(pool_objs, kind="stable")
        top = order[0]
        rest = order[1:]
        weights = np.arange(rest.size, 0, -1, dtype=float)
        other = rest[_roulette_pick(weights, float(rng.random()))]

        genes[slot_i] = pool_genes[top]
        objs[slot_i] = pool_objs[top]
        genes[slot_j] = pool_genes[other]
        objs[slot_j] = pool_objs[other]

        if pool_objs[top] < best_obj:
            best_obj = float(pool_objs[top])
            best_genes = pool_genes[top].copy()
        record.append(t, evaluate.calls, best_obj, objs.mean())

    record.best = Individual(best_genes, best_obj)
    return record


def run_ga(config, domain, objective, crossover, seed_individuals=None):
    """Dispatch on config.update_model."""
    if config.update_model == "mgg":
        if seed_individuals:
            raise ConfigError("seed individuals are only supported by the generational model")
        return run_mgg(config, domain, objective, crossover)
    return run_generational(config, domain, objective, crossover, seed_individuals)
