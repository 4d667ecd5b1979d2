"""Univariate Gaussian estimation-of-distribution baseline.

Each generation fits an independent Gaussian per gene to the selected best
fraction by maximum likelihood (n-denominator variance, unlike the n-1 form
used for confidence intervals) and samples the next population from it,
keeping the best individual found so far.
"""

import numpy as np

from .errors import ConfigError
from .ga import RunRecord, Individual, _CountingObjective


class EDAConfig:
    """Run parameters: large population, truncation selection, budget, seed."""

    def __init__(self, population_size=2000, selection_size=1000,
                 eval_budget=300000, seed=0):
        self.population_size = int(population_size)
        self.selection_size = int(selection_size)
        self.eval_budget = int(eval_budget)
        self.seed = int(seed)
        if self.population_size < 2:
            raise ConfigError("population_size must be at least 2")
        if not 1 <= self.selection_size <= self.population_size:
            raise ConfigError("selection_size must lie in [1, population_size]")
        if self.eval_budget < 1:
            raise ConfigError("eval_budget must be positive")

    def __repr__(self):
        return (f"EDAConfig(population_size={self.population_size}, "
                f"selection_size={self.selection_size}, "
                f"eval_budget={self.eval_budget}, seed={self.seed})")


def run_umdac(config, domain, objective):
    """Truncation-selected Gaussian sampling with an elitist carry-over.

    Per generation: keep the best selection_size members, fit per-gene
    Gaussians (stddev floored at 1e-12 of the gene span), then build the next
    population from the best-so-far individual plus population_size - 1 fresh
    clamped samples. Draw order per generation: one standard-normal block
    shaped (population_size - 1, p).
    """
    rng = np.random.default_rng(config.seed)
    evaluate = _CountingObjective(objective)
    n = config.population_size
    k = config.selection_size
    p = domain.dimension
    lower, upper = domain.lower, domain.upper
    floor = 1e-12 * (upper - lower)

    per_gen = n - 1
    if config.eval_budget < n + per_gen:
        raise ConfigError(f"eval_budget {config.eval_budget} cannot cover "
                          f"initialization ({n}) plus one generation ({per_gen})")

    genes = rng.uniform(lower, upper, size=(n, p))
    objs = evaluate(genes)
    best_idx = int(np.argmin(objs))
    best_genes = genes[best_idx].copy()
    best_obj = float(objs[best_idx])

    record = RunRecord(config.seed)
    record.append(0, evaluate.calls, best_obj, objs.mean())

    t = 0
    while evaluate.calls + per_gen <= config.eval_budget:
        t += 1
        order = np.argsort(objs, kind="stable")[:k]
        chosen = genes[order]
        mean = chosen.mean(axis=0)
        sd = np.maximum(chosen.std(axis=0), floor)

        z = rng.standard_normal(size=(per_gen, p))
        fresh = np.clip(mean + sd * z, lower, upper)
        fresh_objs = evaluate(np.ascontiguousarray(fresh))

        genes = np.vstack([best_genes[None], fresh])
        objs = np.concatenate([[best_obj], fresh_objs])
        cur = int(np.argmin(objs))
        if objs[cur] < best_obj:
            best_obj = float(objs[cur])
            best_genes = genes[cur].copy()
        record.append(t, evaluate.calls, best_obj, objs.mean())

    record.best = Individual(best_genes, best_obj)
    return record
