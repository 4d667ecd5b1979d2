"""Real-coded genetic algorithm toolkit built around confidence-interval
crossover, with rival operators, continuous benchmarks, a Gaussian
estimation-of-distribution baseline, and classifier-ensemble weighting."""

from ._backend import BACKEND
from .benchmarks import (Benchmark, FletcherData, LangermanData, benchmark_names,
                         evaluate, load_langerman, make_benchmark, make_fletcher)
from .crossover import (CIXL2Params, VirtualParents, blx_alpha,
                        build_virtual_parents, cixl2_offspring,
                        fuzzy_recombination, make_operator, operator_names,
                        sbx, undx)
from .eda import EDAConfig, run_umdac
from .ensemble import (PredictionSet, accuracy, bem_weights, combine,
                       ga_weights, gem_weights, load_predictions,
                       win_draw_loss, write_predictions)
from .errors import CollinearityError, ConfigError, DataFormatError
from .ga import (GAConfig, Individual, RunRecord, SearchDomain,
                 initialize_population, nonuniform_mutate, run_ga,
                 run_generational, run_mgg, tournament_select)
from .stats import (ConfidenceInterval, SampleStats, confidence_interval,
                    sample_stats, t_cdf, t_quantile)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Benchmark",
    "CIXL2Params",
    "CollinearityError",
    "ConfidenceInterval",
    "ConfigError",
    "DataFormatError",
    "EDAConfig",
    "FletcherData",
    "GAConfig",
    "Individual",
    "LangermanData",
    "PredictionSet",
    "RunRecord",
    "SampleStats",
    "SearchDomain",
    "VirtualParents",
    "accuracy",
    "bem_weights",
    "benchmark_names",
    "blx_alpha",
    "build_virtual_parents",
    "cixl2_offspring",
    "combine",
    "confidence_interval",
    "evaluate",
    "fuzzy_recombination",
    "ga_weights",
    "gem_weights",
    "initialize_population",
    "load_langerman",
    "load_predictions",
    "make_benchmark",
    "make_fletcher",
    "make_operator",
    "nonuniform_mutate",
    "operator_names",
    "run_ga",
    "run_generational",
    "run_mgg",
    "run_umdac",
    "sample_stats",
    "sbx",
    "t_cdf",
    "t_quantile",
    "tournament_select",
    "undx",
    "win_draw_loss",
    "write_predictions",
]
