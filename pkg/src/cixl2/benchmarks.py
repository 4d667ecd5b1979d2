"""Nine continuous minimization benchmarks on box domains.

Fixed-form functions (sphere, double-sum, Rosenbrock, Rastrigin, Schwefel,
Ackley, Griewangk) are built from their formulas; the two randomized families
are constructed deterministically: the trigonometric least-squares surface
from a seeded matrix triple, and the Langerman foxhole surface from either a
data file or a seeded embedded default.

The Schwefel sum uses the additive constant 418.9829 per dimension, so its
value at the tabulated minimizer (-420.9687, ...) is only zero to about 1e-5
per gene; callers comparing against 0 should allow 1e-3 per gene.
"""

import math

import numpy as np

from ._backend import kernels
from .errors import ConfigError, DataFormatError
from .ga import SearchDomain

_LANGERMAN_DEFAULT_SEED = 1060


class Benchmark:
    """A named objective with its box domain and, when known, its optimum."""

    __slots__ = ("name", "dimension", "domain", "known_optimum_point",
                 "known_optimum_value", "data", "_batch_fn")

    def __init__(self, name, dimension, domain, batch_fn,
                 known_optimum_point=None, known_optimum_value=None, data=None):
        self.name = name
        self.dimension = int(dimension)
        self.domain = domain
        self.known_optimum_point = known_optimum_point
        self.known_optimum_value = known_optimum_value
        self.data = data
        self._batch_fn = batch_fn

    def evaluate(self, x):
        x = np.ascontiguousarray(x, dtype=float)
        if x.shape != (self.dimension,):
            raise ValueError(f"{self.name} expects {self.dimension} genes, "
                             f"got shape {x.shape}")
        return float(np.asarray(self._batch_fn(x[None]))[0])

    def evaluate_batch(self, block):
        block = np.ascontiguousarray(block, dtype=float)
        if block.ndim != 2 or block.shape[1] != self.dimension:
            raise ValueError(f"{self.name} expects blocks shaped "
                             f"(n, {self.dimension}), got {block.shape}")
        return np.asarray(self._batch_fn(block))

    def __call__(self, x):
        return self.evaluate(x)

    def __repr__(self):
        return f"Benchmark({self.name!r}, dimension={self.dimension})"


def evaluate(benchmark, x):
    """Evaluate one gene vector; dimension mismatches raise."""
    return benchmark.evaluate(x)


class FletcherData:
    """Seeded coefficients of the trigonometric least-squares surface."""

    __slots__ = ("a", "b", "alpha")

    def __init__(self, a, b, alpha):
        self.a = np.ascontiguousarray(a, dtype=float)
        self.b = np.ascontiguousarray(b, dtype=float)
        self.alpha = np.ascontiguousarray(alpha, dtype=float)


class LangermanData:
    """Foxhole centers (m x p) and depths (m)."""

    __slots__ = ("a", "c")

    def __init__(self, a, c):
        self.a = np.ascontiguousarray(a, dtype=float)
        self.c = np.ascontiguousarray(c, dtype=float)
        if self.a.ndim != 2 or self.c.ndim != 1 or self.a.shape[0] != self.c.shape[0]:
            raise ValueError("centers must be (m, p) with m matching the depth count")


def make_fletcher(p, seed):
    """Coefficient matrices uniform in [-100, 100], target point in [-pi, pi].

    Deterministic per seed; draw order: a, then b, then alpha.
    """
    if p < 1:
        raise ConfigError("dimension must be positive")
    rng = np.random.default_rng(seed)
    a = rng.uniform(-100.0, 100.0, size=(p, p))
    b = rng.uniform(-100.0, 100.0, size=(p, p))
    alpha = rng.uniform(-math.pi, math.pi, size=p)
    return FletcherData(a, b, alpha)


def _parse_error(path, lineno, message):
    return DataFormatError(f"{path}: line {lineno}: {message}")


def load_langerman(path=None, dimension=30):
    """Load foxhole data from a text file, or generate the embedded default.

    File format: first line "m p", then m rows of p reals (the centers), then
    one row of m reals (the depths). The embedded default is a seeded draw
    with m = p = dimension, centers and depths in [0, 10]; it is synthetic
    stand-in data, so results on it are not comparable across data sources.
    """
    if path is None:
        rng = np.random.default_rng(_LANGERMAN_DEFAULT_SEED)
        a = rng.uniform(0.0, 10.0, size=(dimension, dimension))
        c = rng.uniform(0.0, 10.0, size=dimension)
        return LangermanData(a, c)

    try:
        with open(path, encoding="utf-8") as handle:
            raw = handle.read().splitlines()
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from None
    lines = [(i + 1, line.split()) for i, line in enumerate(raw) if line.split()]
    if not lines:
        raise DataFormatError(f"{path}: empty file")

    def parse_row(lineno, tokens, expected, what):
        if len(tokens) != expected:
            raise _parse_error(path, lineno,
                               f"expected {expected} {what} values, found {len(tokens)}")
        row = np.empty(expected)
        for col, tok in enumerate(tokens):
            try:
                row[col] = float(tok)
            except ValueError:
                raise _parse_error(path, lineno,
                                   f"column {col + 1}: {tok!r} is not a number") from None
        return row

    lineno, header = lines[0]
    if len(header) != 2:
        raise _parse_error(path, lineno, 'header must be "m p"')
    try:
        m, p = int(header[0]), int(header[1])
    except ValueError:
        raise _parse_error(path, lineno, 'header must hold two integers "m p"') from None
    if m < 1 or p < 1:
        raise _parse_error(path, lineno, "m and p must be positive")
    if len(lines) < 1 + m + 1:
        raise DataFormatError(f"{path}: unexpected end of file: need {m} center rows "
                              f"plus one depth row after the header")
    if len(lines) > 1 + m + 1:
        raise _parse_error(path, lines[1 + m + 1][0], "unexpected trailing data")
    a = np.empty((m, p))
    for row_idx in range(m):
        lineno, tokens = lines[1 + row_idx]
        a[row_idx] = parse_row(lineno, tokens, p, "center")
    lineno, tokens = lines[1 + m]
    c = parse_row(lineno, tokens, m, "depth")
    return LangermanData(a, c)


def _box(low, high, p):
    return SearchDomain.box(low, high, p)


def make_benchmark(name, dimension=30, fletcher_seed=1, langerman_path=None):
    """Construct a benchmark by registry name; unknown names are config errors."""
    p = int(dimension)
    if p < 1:
        raise ConfigError("dimension must be positive")
    if name == "sphere":
        return Benchmark(name, p, _box(-5.12, 5.12, p), kernels.eval_sphere,
                         np.zeros(p), 0.0)
    if name == "schwefel_ds":
        return Benchmark(name, p, _box(-65.536, 65.536, p), kernels.eval_schwefel_ds,
                         np.zeros(p), 0.0)
    if name == "rosenbrock":
        if p < 2:
            raise ConfigError("rosenbrock needs at least two genes")
        return Benchmark(name, p, _box(-2.048, 2.048, p), kernels.eval_rosenbrock,
                         np.ones(p), 0.0)
    if name == "rastrigin":
        return Benchmark(name, p, _box(-5.12, 5.12, p), kernels.eval_rastrigin,
                         np.zeros(p), 0.0)
    if name == "schwefel":
        return Benchmark(name, p, _box(-512.03, 511.97, p), kernels.eval_schwefel,
                         np.full(p, -420.9687), 0.0)
    if name == "ackley":
        return Benchmark(name, p, _box(-30.0, 30.0, p), kernels.eval_ackley,
                         np.zeros(p), 0.0)
    if name == "griewangk":
        return Benchmark(name, p, _box(-600.0, 600.0, p), kernels.eval_griewangk,
                         np.zeros(p), 0.0)
    if name == "fletcher_powell":
        data = make_fletcher(p, fletcher_seed)
        target = data.a @ np.sin(data.alpha) + data.b @ np.cos(data.alpha)
        target = np.ascontiguousarray(target)

        def batch(block, a=data.a, b=data.b, t=target):
            return kernels.eval_fletcher(block, a, b, t)

        return Benchmark(name, p, _box(-math.pi, math.pi, p), batch,
                         data.alpha.copy(), 0.0, data=data)
    if name == "langerman":
        data = load_langerman(langerman_path, p)
        if data.a.shape[1] != p:
            raise ConfigError(f"langerman data is {data.a.shape[1]}-dimensional, "
                              f"benchmark wants {p}")

        def batch(block, a=data.a, c=data.c):
            return kernels.eval_langerman(block, a, c)

        return Benchmark(name, p, _box(0.0, 10.0, p), batch, data=data)
    raise ConfigError(f"unknown benchmark {name!r}; valid names: "
                      f"{', '.join(benchmark_names())}")


def benchmark_names():
    return ("ackley", "fletcher_powell", "griewangk", "langerman", "rastrigin",
            "rosenbrock", "schwefel", "schwefel_ds", "sphere")
