"""Benchmark suite: optima, domains, data files, and batch consistency."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_array_equal

from cixl2 import (ConfigError, DataFormatError, benchmark_names, evaluate,
                   load_langerman, make_benchmark, make_fletcher)

ALL_NAMES = ("ackley", "fletcher_powell", "griewangk", "langerman",
             "rastrigin", "rosenbrock", "schwefel", "schwefel_ds", "sphere")

EXPECTED_BOUNDS = {
    "sphere": (-5.12, 5.12),
    "schwefel_ds": (-65.536, 65.536),
    "rosenbrock": (-2.048, 2.048),
    "rastrigin": (-5.12, 5.12),
    "schwefel": (-512.03, 511.97),
    "ackley": (-30.0, 30.0),
    "griewangk": (-600.0, 600.0),
    "fletcher_powell": (-math.pi, math.pi),
    "langerman": (0.0, 10.0),
}


class TestRegistry:
    def test_names_are_sorted_and_complete(self):
        assert benchmark_names() == ALL_NAMES

    def test_unknown_name_rejected(self):
        with pytest.raises(ConfigError):
            make_benchmark("dejong")

    def test_every_function_builds_at_default_dimension(self):
        for name in benchmark_names():
            bench = make_benchmark(name)
            assert bench.dimension == 30
            lo, hi = EXPECTED_BOUNDS[name]
            assert bench.domain.lower[0] == pytest.approx(lo)
            assert bench.domain.upper[-1] == pytest.approx(hi)

    def test_dimension_validation(self):
        with pytest.raises(ConfigError):
            make_benchmark("sphere", dimension=0)
        with pytest.raises(ConfigError):
            make_benchmark("rosenbrock", dimension=1)


class TestKnownOptima:
    def test_zero_optima_within_1e9(self):
        for name in ("sphere", "schwefel_ds", "rosenbrock", "rastrigin",
                     "ackley", "griewangk"):
            bench = make_benchmark(name)
            assert bench.known_optimum_value == 0.0
            got = bench.evaluate(bench.known_optimum_point)
            assert abs(got) <= 1e-9, f"{name} optimum evaluates to {got!r}"

    def test_schwefel_near_zero_at_published_point(self):
        # the additive constant is a 7-digit truncation, so the floor is
        # only accurate to about 1e-5 per gene
        bench = make_benchmark("schwefel", dimension=30)
        point = bench.known_optimum_point
        assert_array_equal(point, np.full(30, -420.9687))
        assert abs(bench.evaluate(point)) <= 1e-3 * 30

    def test_fletcher_target_point_scores_zero(self):
        bench = make_benchmark("fletcher_powell", dimension=10, fletcher_seed=1)
        got = bench.evaluate(bench.known_optimum_point)
        assert abs(got) <= 1e-9
        assert bench.known_optimum_value == 0.0

    def test_langerman_has_no_published_optimum(self):
        bench = make_benchmark("langerman")
        assert bench.known_optimum_point is None
        assert bench.known_optimum_value is None


class TestHandComputedValues:
    def test_sphere(self):
        bench = make_benchmark("sphere", dimension=3)
        assert bench.evaluate([1.0, 2.0, 3.0]) == 14.0

    def test_schwefel_ds(self):
        # partial sums 1, 3, 6 -> 1 + 9 + 36
        bench = make_benchmark("schwefel_ds", dimension=3)
        assert bench.evaluate([1.0, 2.0, 3.0]) == 46.0

    def test_rosenbrock(self):
        bench = make_benchmark("rosenbrock", dimension=2)
        assert bench.evaluate([0.0, 0.0]) == 1.0
        assert bench.evaluate([-1.0, 1.0]) == 4.0

    def test_rastrigin(self):
        bench = make_benchmark("rastrigin", dimension=2)
        assert bench.evaluate([0.5, 0.5]) == pytest.approx(40.5, abs=1e-12)

    def test_ackley_is_translated_to_zero(self):
        bench = make_benchmark("ackley", dimension=30)
        assert abs(bench.evaluate(np.zeros(30))) < 1e-14

    def test_griewangk(self):
        bench = make_benchmark("griewangk", dimension=1)
        x = np.array([600.0])
        expected = 1.0 + 600.0**2 / 4000.0 - math.cos(600.0)
        assert bench.evaluate(x) == pytest.approx(expected, rel=1e-14)


class TestEvaluationInterface:
    def test_batch_matches_rowwise(self):
        rng = np.random.default_rng(3)
        for name in benchmark_names():
            bench = make_benchmark(name, dimension=30)
            block = rng.uniform(bench.domain.lower, bench.domain.upper, (20, 30))
            batch = bench.evaluate_batch(block)
            rows = np.array([bench.evaluate(row) for row in block])
            assert_array_equal(batch, rows)

    def test_module_level_evaluate(self):
        bench = make_benchmark("sphere", dimension=2)
        assert evaluate(bench, [3.0, 4.0]) == 25.0

    def test_callable_protocol(self):
        bench = make_benchmark("sphere", dimension=2)
        assert bench([1.0, 1.0]) == 2.0

    def test_shape_validation(self):
        bench = make_benchmark("sphere", dimension=5)
        with pytest.raises(ValueError):
            bench.evaluate([1.0, 2.0])
        with pytest.raises(ValueError):
            bench.evaluate_batch(np.zeros((4, 3)))
        with pytest.raises(ValueError):
            bench.evaluate_batch(np.zeros(5))

    @settings(max_examples=30)
    @given(st.integers(0, 8), st.integers(0, 2**31 - 1))
    def test_finite_everywhere_sampled(self, which, seed):
        name = benchmark_names()[which]
        bench = make_benchmark(name, dimension=8 if name != "langerman" else 30)
        rng = np.random.default_rng(seed)
        block = rng.uniform(bench.domain.lower, bench.domain.upper,
                            (8, bench.dimension))
        values = bench.evaluate_batch(block)
        assert np.isfinite(values).all()


class TestFletcherData:
    def test_seed_reproducibility(self):
        one = make_fletcher(6, 1)
        two = make_fletcher(6, 1)
        other = make_fletcher(6, 2)
        assert_array_equal(one.a, two.a)
        assert_array_equal(one.b, two.b)
        assert_array_equal(one.alpha, two.alpha)
        assert not np.array_equal(one.a, other.a)

    def test_ranges(self):
        data = make_fletcher(12, 3)
        assert data.a.shape == (12, 12) and data.b.shape == (12, 12)
        assert (np.abs(data.a) <= 100.0).all() and (np.abs(data.b) <= 100.0).all()
        assert (np.abs(data.alpha) <= math.pi).all()

    def test_benchmark_copies_alpha(self):
        bench = make_benchmark("fletcher_powell", dimension=4, fletcher_seed=9)
        bench.known_optimum_point[0] = 99.0
        assert bench.evaluate(bench.data.alpha) <= 1e-9


class TestLangermanData:
    def test_default_is_seeded_and_reproducible(self):
        one = load_langerman()
        two = load_langerman()
        assert_array_equal(one.a, two.a)
        assert_array_equal(one.c, two.c)
        assert one.a.shape == (30, 30) and one.c.shape == (30,)
        assert (one.a >= 0.0).all() and (one.a <= 10.0).all()
        assert (one.c >= 0.0).all() and (one.c <= 10.0).all()

    def test_file_round_trip(self, tmp_path):
        data = load_langerman(dimension=5)
        path = tmp_path / "centers.txt"
        lines = ["5 5"]
        for row in data.a[:5, :5]:
            lines.append(" ".join(f"{v:.17g}" for v in row))
        lines.append(" ".join(f"{v:.17g}" for v in data.c[:5]))
        path.write_text("\n".join(lines) + "\n")
        loaded = load_langerman(path, dimension=5)
        assert_array_equal(loaded.a, data.a[:5, :5])
        assert_array_equal(loaded.c, data.c[:5])

    def test_benchmark_from_file(self, tmp_path):
        path = tmp_path / "centers.txt"
        path.write_text("2 3\n1 2 3\n4 5 6\n0.5 0.25\n")
        bench = make_benchmark("langerman", dimension=3, langerman_path=path)
        # at the first center: distance 0 to it, exp(0)*cos(0)=1
        d = float(np.sum((np.array([1.0, 2.0, 3.0]) - np.array([4.0, 5.0, 6.0])) ** 2))
        expected = -(0.5 + 0.25 * math.exp(-d / math.pi) * math.cos(math.pi * d))
        assert bench.evaluate([1.0, 2.0, 3.0]) == pytest.approx(expected, rel=1e-12)

    def test_dimension_mismatch_rejected(self, tmp_path):
        path = tmp_path / "centers.txt"
        path.write_text("2 3\n1 2 3\n4 5 6\n0.5 0.25\n")
        with pytest.raises(ConfigError):
            make_benchmark("langerman", dimension=30, langerman_path=path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataFormatError, match="cannot read"):
            load_langerman(tmp_path / "absent.txt")

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("")
        with pytest.raises(DataFormatError, match="empty"):
            load_langerman(path)

    def test_bad_header(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2\n")
        with pytest.raises(DataFormatError, match='line 1'):
            load_langerman(path)
        path.write_text("two three\n1 2 3\n")
        with pytest.raises(DataFormatError, match="two integers"):
            load_langerman(path)
        path.write_text("0 3\n")
        with pytest.raises(DataFormatError, match="positive"):
            load_langerman(path)

    def test_bad_float_reports_line_and_column(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2 3\n1 2 3\n4 oops 6\n0.5 0.25\n")
        with pytest.raises(DataFormatError, match="line 3"):
            load_langerman(path)

    def test_wrong_row_width(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2 3\n1 2 3\n4 5\n0.5 0.25\n")
        with pytest.raises(DataFormatError, match="line 3"):
            load_langerman(path)

    def test_truncated_file(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2 3\n1 2 3\n")
        with pytest.raises(DataFormatError, match="end of file"):
            load_langerman(path)

    def test_trailing_data(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2 3\n1 2 3\n4 5 6\n0.5 0.25\n7 8 9\n")
        with pytest.raises(DataFormatError, match="trailing"):
            load_langerman(path)

    def test_blank_lines_and_comments_between_rows(self, tmp_path):
        path = tmp_path / "spaced.txt"
        path.write_text("2 3\n\n1 2 3\n\n\n4 5 6\n0.5 0.25\n\n")
        data = load_langerman(path, dimension=3)
        assert_array_equal(data.a, [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
