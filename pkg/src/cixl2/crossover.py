"""Crossover operators for real-coded populations.

The headline operator builds per-gene confidence intervals over the best-n
individuals and mates each parent with one of three virtual parents (interval
lower limits, means, upper limits). Four classic rivals are provided behind
the same interface: blend crossover, simulated binary crossover, fuzzy
recombination, and the three-parent ellipsoidal operator.

Two layers:

* single-application functions (``cixl2_offspring``, ``blx_alpha``, ``sbx``,
  ``fuzzy_recombination``, ``undx``) that take Individuals and draw their own
  per-gene randomness;
* engine adapters (``make_operator``) that generate whole batches of children
  from pre-gathered parent arrays, drawing from the run generator in a fixed
  order so runs stay bit-reproducible.
"""

import math

import numpy as np

from ._backend import kernels
from .errors import ConfigError
from .ga import Individual
from .stats import t_quantile


class CIXL2Params:
    """Confidence-interval crossover knobs: best-n sample size and coverage."""

    __slots__ = ("n_best", "confidence")

    def __init__(self, n_best=5, confidence=0.70):
        self.n_best = int(n_best)
        self.confidence = float(confidence)
        if self.n_best < 2:
            raise ConfigError("n_best must be at least 2")
        if not 0.0 < self.confidence < 1.0:
            raise ConfigError("confidence must lie strictly between 0 and 1")

    def __repr__(self):
        return f"CIXL2Params(n_best={self.n_best}, confidence={self.confidence})"


class VirtualParents:
    """The three synthetic parents: interval lower limits, upper limits, means."""

    __slots__ = ("cill", "ciul", "cim")

    def __init__(self, cill, ciul, cim):
        self.cill = cill
        self.ciul = ciul
        self.cim = cim

    def __repr__(self):
        return f"VirtualParents(cill={self.cill!r}, ciul={self.ciul!r}, cim={self.cim!r})"


def _as_batch(objective):
    if hasattr(objective, "evaluate_batch"):
        return objective.evaluate_batch
    if hasattr(objective, "calls"):
        return objective

    def _rowwise(block):
        return np.array([float(objective(row)) for row in block])

    return _rowwise


def _virtual_parents_from_arrays(genes, objs, n_best, confidence, domain, batch_objective):
    if n_best > genes.shape[0]:
        raise ConfigError(f"n_best {n_best} exceeds population size {genes.shape[0]}")
    order = np.argsort(objs, kind="stable")[:n_best]
    best = genes[order]
    colmin = best.min(axis=0)
    colmax = best.max(axis=0)
    constant = colmin == colmax
    # zero-dispersion genes collapse the interval exactly onto the shared value
    mean = np.where(constant, colmin, best.mean(axis=0))
    sd = np.where(constant, 0.0, best.std(axis=0, ddof=1))
    q = t_quantile(n_best - 1, 0.5 * (1.0 + confidence))
    half = q * sd / math.sqrt(n_best)
    trio = np.vstack([mean - half, mean, mean + half])
    np.clip(trio, domain.lower, domain.upper, out=trio)
    trio = np.ascontiguousarray(trio)
    tobj = batch_objective(trio)
    return VirtualParents(cill=Individual(trio[0], tobj[0]),
                          ciul=Individual(trio[2], tobj[2]),
                          cim=Individual(trio[1], tobj[1]))


def build_virtual_parents(population, params, domain, objective):
    """Fit per-gene confidence intervals over the best-n individuals.

    Selects the n_best lowest-objective members (stable order on ties), runs a
    bilateral t interval on every gene, clamps the three resulting vectors to
    the domain, and evaluates them (3 objective calls).
    """
    genes = np.ascontiguousarray([ind.genes for ind in population], dtype=float)
    objs = []
    for ind in population:
        if ind.objective is None:
            raise ValueError("virtual parents require an evaluated population")
        objs.append(ind.objective)
    return _virtual_parents_from_arrays(genes, np.asarray(objs), params.n_best,
                                        params.confidence, domain,
                                        _as_batch(objective))


def cixl2_offspring(parent, vp, domain, rng):
    """One child from a parent and the virtual parents; caller evaluates.

    Per gene: the parent's position against [CILL, CIUL] picks the virtual
    parent (below the interval - CILL, inside or on a boundary - CIM, above -
    CIUL); a fresh uniform r then extrapolates away from the worse of the two,
    never landing strictly between them. Result is clamped to the domain.
    """
    if parent.objective is None:
        raise ValueError("parent must be evaluated")
    r = rng.random(domain.dimension)
    genes = kernels.cixl2_children(parent.genes[None], np.array([parent.objective]),
                                   vp.cill.genes, vp.cim.genes, vp.ciul.genes,
                                   vp.cill.objective, vp.cim.objective,
                                   vp.ciul.objective, r[None],
                                   domain.lower, domain.upper)[0]
    return Individual(genes)


def blx_alpha(parent1, parent2, alpha, domain, rng):
    """Blend crossover: per gene, uniform on the parent interval widened by alpha."""
    u = rng.random(domain.dimension)
    genes = kernels.blx_children(parent1.genes[None], parent2.genes[None],
                                 float(alpha), u[None],
                                 domain.lower, domain.upper)[0]
    return Individual(genes)


def sbx(parent1, parent2, eta, domain, rng):
    """Simulated binary crossover: two children symmetric about the parent midpoint.

    The spread factor is (2u)^(1/(eta+1)) for u <= 0.5 and (1/(2(1-u)))^(1/(eta+1))
    otherwise; u = 0.5 reproduces the parents bit-for-bit.
    """
    u = rng.random(domain.dimension)
    c1, c2 = kernels.sbx_children(parent1.genes[None], parent2.genes[None],
                                  float(eta), u[None],
                                  domain.lower, domain.upper)
    return Individual(c1[0]), Individual(c2[0])


def fuzzy_recombination(parent1, parent2, d, domain, rng):
    """Triangular recombination: mode at a randomly picked parent gene,
    half-width d times the parent distance."""
    p = domain.dimension
    pick = rng.integers(0, 2, size=p)
    u = rng.random(p)
    genes = kernels.fuzzy_children(parent1.genes[None], parent2.genes[None],
                                   float(d), pick[None], u[None],
                                   domain.lower, domain.upper)[0]
    return Individual(genes)


def undx(parent1, parent2, parent3, sigma_xi, sigma_eta, domain, rng):
    """Three-parent normally distributed crossover.

    The child sits at the parent midpoint plus a normal step along the parent
    axis (scale sigma_xi) plus a normal cloud in the orthogonal complement
    whose scale is sigma_eta times the third parent's distance from the axis.
    """
    p = domain.dimension
    if p < 2:
        raise ConfigError("this operator needs at least two genes")
    xi = rng.standard_normal(1)
    z = rng.standard_normal((1, p))
    genes = kernels.undx_children(parent1.genes[None], parent2.genes[None],
                                  parent3.genes[None], float(sigma_xi),
                                  float(sigma_eta), xi, z,
                                  domain.lower, domain.upper)[0]
    return Individual(genes)


def _fmt(value):
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return repr(value)


class _OperatorBase:
    """Engine-facing operator adapter.

    Class attributes describe the shape of one application (parents consumed,
    children produced, extra random parents, setup evaluations per
    generation). ``begin_generation`` runs once per generation before any
    randomness is drawn and must not itself draw; ``make_children`` consumes
    the run generator in the order documented per operator.
    """

    name = ""
    parents_per_application = 2
    children_per_application = 1
    extra_parents = 0
    setup_evaluations = 0
    default_model = "generational"

    def begin_generation(self, genes, objs, domain, evaluate):
        return None

    def make_children(self, ctx, parents, parent_objs, extras, domain, rng):
        raise NotImplementedError

    @property
    def params_text(self):
        return ",".join(f"{k}={_fmt(v)}" for k, v in self._params())

    @property
    def label(self):
        parts = [self.name]
        for key, value in self._params():
            short = "".join(word[0] for word in key.split("_"))
            parts.append(f"{short}{_fmt(value)}")
        return "-".join(parts)

    def _params(self):
        return []

    def __repr__(self):
        return f"{type(self).__name__}({self.params_text})"


class Cixl2Operator(_OperatorBase):
    """Confidence-interval crossover; draws one uniform per gene per child."""

    name = "cixl2"
    parents_per_application = 1
    children_per_application = 1
    setup_evaluations = 3

    def __init__(self, n_best=5, confidence=0.70):
        self.params = CIXL2Params(n_best, confidence)

    def begin_generation(self, genes, objs, domain, evaluate):
        return _virtual_parents_from_arrays(genes, objs, self.params.n_best,
                                            self.params.confidence, domain,
                                            _as_batch(evaluate))

    def make_children(self, ctx, parents, parent_objs, extras, domain, rng):
        r = rng.random(parents[0].shape)
        return kernels.cixl2_children(parents[0], parent_objs[0],
                                      ctx.cill.genes, ctx.cim.genes,
                                      ctx.ciul.genes, ctx.cill.objective,
                                      ctx.cim.objective, ctx.ciul.objective,
                                      r, domain.lower, domain.upper)

    def _params(self):
        return [("n_best", self.params.n_best), ("confidence", self.params.confidence)]


class BlxOperator(_OperatorBase):
    """Blend crossover; draws one uniform per gene."""

    name = "blx"

    def __init__(self, alpha=0.5):
        self.alpha = float(alpha)
        if self.alpha < 0.0:
            raise ConfigError("alpha must be non-negative")

    def make_children(self, ctx, parents, parent_objs, extras, domain, rng):
        u = rng.random(parents[0].shape)
        return kernels.blx_children(parents[0], parents[1], self.alpha, u,
                                    domain.lower, domain.upper)

    def _params(self):
        return [("alpha", self.alpha)]


class SbxOperator(_OperatorBase):
    """Simulated binary crossover; two children per application, one uniform per gene."""

    name = "sbx"
    children_per_application = 2

    def __init__(self, eta=2.0):
        self.eta = float(eta)
        if self.eta < 0.0:
            raise ConfigError("eta must be non-negative")

    def make_children(self, ctx, parents, parent_objs, extras, domain, rng):
        u = rng.random(parents[0].shape)
        c1, c2 = kernels.sbx_children(parents[0], parents[1], self.eta, u,
                                      domain.lower, domain.upper)
        return np.stack([c1, c2], axis=1).reshape(-1, parents[0].shape[1])

    def _params(self):
        return [("eta", self.eta)]


class FuzzyOperator(_OperatorBase):
    """Triangular recombination; draws mode picks then uniforms, one each per gene."""

    name = "fuzzy"

    def __init__(self, d=0.5):
        self.d = float(d)
        if self.d < 0.0:
            raise ConfigError("d must be non-negative")

    def make_children(self, ctx, parents, parent_objs, extras, domain, rng):
        pick = rng.integers(0, 2, size=parents[0].shape)
        u = rng.random(parents[0].shape)
        return kernels.fuzzy_children(parents[0], parents[1], self.d, pick, u,
                                      domain.lower, domain.upper)

    def _params(self):
        return [("d", self.d)]


class UndxOperator(_OperatorBase):
    """Three-parent ellipsoidal crossover; draws one axis normal, then one
    normal per gene. Runs under the minimal-generation-gap model by default."""

    name = "undx"
    extra_parents = 1
    default_model = "mgg"

    def __init__(self, dimension, sigma_xi=0.5, sigma_eta=None):
        if dimension < 2:
            raise ConfigError("this operator needs at least two genes")
        self.sigma_xi = float(sigma_xi)
        self.sigma_eta = (0.35 / math.sqrt(dimension) if sigma_eta is None
                          else float(sigma_eta))
        if self.sigma_xi < 0.0 or self.sigma_eta < 0.0:
            raise ConfigError("sigma_xi and sigma_eta must be non-negative")

    def make_children(self, ctx, parents, parent_objs, extras, domain, rng):
        n = parents[0].shape[0]
        xi = rng.standard_normal(n)
        z = rng.standard_normal(parents[0].shape)
        return kernels.undx_children(parents[0], parents[1], extras,
                                     self.sigma_xi, self.sigma_eta, xi, z,
                                     domain.lower, domain.upper)

    def _params(self):
        return [("sigma_xi", self.sigma_xi), ("sigma_eta", self.sigma_eta)]


_OPERATORS = {
    "cixl2": (Cixl2Operator, ("n_best", "confidence"), False),
    "blx": (BlxOperator, ("alpha",), False),
    "sbx": (SbxOperator, ("eta",), False),
    "fuzzy": (FuzzyOperator, ("d",), False),
    "undx": (UndxOperator, ("sigma_xi", "sigma_eta"), True),
}


def operator_names():
    return tuple(sorted(_OPERATORS))


def make_operator(name, dimension, **params):
    """Build an engine adapter by name; unknown names or parameters are config errors."""
    try:
        cls, allowed, wants_dimension = _OPERATORS[name]
    except KeyError:
        raise ConfigError(f"unknown operator {name!r}; valid names: "
                          f"{', '.join(operator_names())}") from None
    for key in params:
        if key not in allowed:
            raise ConfigError(f"{key!r} is not a parameter of {name}; "
                              f"valid parameters: {', '.join(allowed)}")
    if wants_dimension:
        return cls(dimension, **params)
    return cls(**params)
