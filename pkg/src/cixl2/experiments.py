"""Experiment orchestration: config files, batched runs, CSV output.

Config files are INI-style with one section per concern. Unknown sections
and keys are hard errors so a config never silently half-applies. Every
command writes deterministic CSV; rerunning the same config reproduces the
files byte for byte. Relative data-file paths are resolved against the
config file's directory.

Trace CSV columns:   generation, evaluations, best_objective, mean_objective
Summary CSV columns: function, operator, params, runs, mean, stddev, best, worst
"""

import configparser
import csv
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .benchmarks import make_benchmark
from .crossover import make_operator, operator_names
from .eda import EDAConfig, run_umdac
from .ensemble import (CollinearityError, accuracy, bem_weights, ga_weights,
                       gem_weights, load_predictions, win_draw_loss)
from .errors import ConfigError
from .ga import GAConfig, run_generational, run_mgg

_OPERATOR_PARAM_TYPES = {
    "n_best": int,
    "confidence": float,
    "alpha": float,
    "eta": float,
    "d": float,
    "sigma_xi": float,
    "sigma_eta": float,
}

_SECTION_KEYS = {
    "benchmark": ("name", "dimension", "fletcher_seed", "langerman_file"),
    "operator": ("name",) + tuple(_OPERATOR_PARAM_TYPES),
    "ga": ("population_size", "crossover_prob", "mutation_prob", "mutation_b",
           "update_model", "mgg_lambda", "eval_budget"),
    "eda": ("population_size", "selection_size", "eval_budget"),
    "output": ("runs", "seed", "directory", "workers"),
    "sweep": ("n_best", "confidence"),
    "compare": ("operators",),
    "ensemble": ("learning_file", "test_file", "methods", "ga_eval_budget",
                 "ga_population_size", "ga_n_best", "ga_confidence"),
    "dataset": ("learning_file", "test_file"),
}

_COMMAND_SECTIONS = {
    "run": {"required": ("benchmark", "operator"), "optional": ("ga", "output")},
    "sweep": {"required": ("benchmark", "sweep"), "optional": ("ga", "output")},
    "compare": {"required": ("benchmark", "compare"), "optional": ("ga", "output")},
    "eda": {"required": ("benchmark",), "optional": ("eda", "output")},
    "ensemble": {"required": (), "optional": ("ensemble", "output")},
}


def _read_sections(path, command):
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as handle:
            parser.read_file(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None

    spec = _COMMAND_SECTIONS[command]
    allowed = set(spec["required"]) | set(spec["optional"])
    sections = {}
    for name in parser.sections():
        if name.startswith("dataset:"):
            if command != "ensemble":
                raise ConfigError(f"{path}: section [{name}] is only used by the "
                                  f"ensemble command")
            if not name[len("dataset:"):].strip():
                raise ConfigError(f"{path}: dataset section needs a name, "
                                  f"e.g. [dataset:iris]")
            keys = _SECTION_KEYS["dataset"]
        elif name in allowed:
            keys = _SECTION_KEYS[name]
        else:
            raise ConfigError(f"{path}: section [{name}] is not used by the "
                              f"{command} command; allowed sections: "
                              f"{', '.join(sorted(allowed)) or 'none'}")
        for key in parser.options(name):
            if key not in keys:
                raise ConfigError(f"{path}: [{name}] has unknown key {key!r}; "
                                  f"valid keys: {', '.join(keys)}")
        sections[name] = dict(parser.items(name))
    for name in spec["required"]:
        if name not in sections:
            raise ConfigError(f"{path}: missing required section [{name}]")
    return sections


def _typed(sections, section, key, default, convert, kind):
    raw = sections.get(section, {}).get(key)
    if raw is None:
        return default
    try:
        return convert(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key} = {raw!r} is not {kind}") from None


def _int_of(sections, section, key, default):
    return _typed(sections, section, key, default, int, "an integer")


def _float_of(sections, section, key, default):
    return _typed(sections, section, key, default, float, "a number")


def _str_of(sections, section, key, default):
    raw = sections.get(section, {}).get(key)
    return default if raw is None else raw.strip()


def _path_of(sections, section, key, base_dir):
    raw = sections.get(section, {}).get(key)
    if raw is None:
        return None
    raw = raw.strip()
    if not raw:
        raise ConfigError(f"[{section}] {key} must not be empty")
    return os.path.normpath(os.path.join(base_dir, raw))


def _output_settings(sections, out=None, runs=None, seed=None, workers=None):
    settings = {
        "runs": runs if runs is not None else _int_of(sections, "output", "runs", 30),
        "seed": seed if seed is not None else _int_of(sections, "output", "seed", 0),
        "directory": out if out is not None
                     else _str_of(sections, "output", "directory", "out"),
        "workers": workers if workers is not None
                   else _int_of(sections, "output", "workers", 1),
    }
    if settings["runs"] < 1:
        raise ConfigError("runs must be at least 1")
    if settings["workers"] < 1:
        raise ConfigError("workers must be at least 1")
    return settings


def _benchmark_settings(sections, base_dir):
    name = _str_of(sections, "benchmark", "name", None)
    if not name:
        raise ConfigError("[benchmark] needs a name")
    return {
        "benchmark": name,
        "dimension": _int_of(sections, "benchmark", "dimension", 30),
        "fletcher_seed": _int_of(sections, "benchmark", "fletcher_seed", 1),
        "langerman_path": _path_of(sections, "benchmark", "langerman_file", base_dir),
    }


def _ga_settings(sections):
    return {
        "population_size": _int_of(sections, "ga", "population_size", 100),
        "crossover_prob": _float_of(sections, "ga", "crossover_prob", 0.6),
        "mutation_prob": _float_of(sections, "ga", "mutation_prob", 0.05),
        "mutation_b": _float_of(sections, "ga", "mutation_b", 5.0),
        "update_model": _str_of(sections, "ga", "update_model", "generational"),
        "mgg_lambda": _int_of(sections, "ga", "mgg_lambda", 200),
        "eval_budget": _int_of(sections, "ga", "eval_budget", 300000),
    }


def _operator_settings(sections):
    name = _str_of(sections, "operator", "name", None)
    if not name:
        raise ConfigError("[operator] needs a name")
    params = {}
    for key, raw in sections["operator"].items():
        if key == "name":
            continue
        try:
            params[key] = _OPERATOR_PARAM_TYPES[key](raw)
        except ValueError:
            raise ConfigError(f"[operator] {key} = {raw!r} is not a valid "
                              f"{_OPERATOR_PARAM_TYPES[key].__name__}") from None
    return name, params


def _parse_operator_token(token):
    """Parse 'name' or 'name:key=value,key=value' from a compare list."""
    name, _, tail = token.partition(":")
    params = {}
    if tail:
        for piece in tail.split(","):
            key, eq, raw = piece.partition("=")
            if not eq or not key or not raw:
                raise ConfigError(f"malformed operator token {token!r}; expected "
                                  f"name:key=value,key=value")
            if key not in _OPERATOR_PARAM_TYPES:
                raise ConfigError(f"operator token {token!r}: unknown parameter "
                                  f"{key!r}; valid parameters: "
                                  f"{', '.join(_OPERATOR_PARAM_TYPES)}")
            try:
                params[key] = _OPERATOR_PARAM_TYPES[key](raw)
            except ValueError:
                raise ConfigError(f"operator token {token!r}: {raw!r} is not a "
                                  f"valid {_OPERATOR_PARAM_TYPES[key].__name__}") from None
    if name not in operator_names():
        raise ConfigError(f"unknown operator {name!r}; valid names: "
                          f"{', '.join(operator_names())}")
    return name, params


def _execute_run(spec):
    """Run one seeded experiment described by a plain dict (pickles cleanly)."""
    bench = make_benchmark(spec["benchmark"], spec["dimension"],
                           spec["fletcher_seed"], spec["langerman_path"])
    if spec["algorithm"] == "umdac":
        config = EDAConfig(seed=spec["seed"], **spec["eda"])
        return run_umdac(config, bench.domain, bench)
    operator = make_operator(spec["operator"], bench.domain.dimension,
                             **spec["operator_params"])
    ga = dict(spec["ga"])
    ga["update_model"] = spec["model"]
    config = GAConfig(seed=spec["seed"], **ga)
    if spec["model"] == "mgg":
        return run_mgg(config, bench.domain, bench, operator)
    return run_generational(config, bench.domain, bench, operator)


def _run_many(specs, workers):
    if workers <= 1 or len(specs) <= 1:
        return [_execute_run(spec) for spec in specs]
    with ProcessPoolExecutor(max_workers=min(workers, len(specs))) as pool:
        return list(pool.map(_execute_run, specs))


def _ga_specs(bench_settings, ga_settings, operator_name, operator_params,
              model, base_seed, runs):
    return [{**bench_settings, "algorithm": "ga", "model": model,
             "operator": operator_name, "operator_params": dict(operator_params),
             "ga": dict(ga_settings), "seed": base_seed + k}
            for k in range(runs)]


def _fnum(value):
    return format(float(value), ".16e")


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


_TRACE_HEADER = ("generation", "evaluations", "best_objective", "mean_objective")
_SUMMARY_HEADER = ("function", "operator", "params", "runs", "mean", "stddev",
                   "best", "worst")


def _write_trace(path, record):
    rows = [(str(g), str(e), _fnum(b), _fnum(m)) for g, e, b, m in record.rows()]
    return _write_csv(path, _TRACE_HEADER, rows)


def _summary_row(function, operator, params, records):
    finals = np.array([rec.best.objective for rec in records])
    stddev = float(np.std(finals, ddof=1)) if finals.size > 1 else 0.0
    return (function, operator, params, str(finals.size), _fnum(finals.mean()),
            _fnum(stddev), _fnum(finals.min()), _fnum(finals.max()))


def _write_convergence(path, records):
    length = min(len(rec.generations) for rec in records)
    best = np.array([rec.best_objective[:length] for rec in records])
    mean_best = best.mean(axis=0)
    rows = [(str(records[0].generations[i]), str(records[0].evaluations[i]),
             _fnum(mean_best[i])) for i in range(length)]
    return _write_csv(path, ("generation", "evaluations", "mean_best_objective"), rows)


def _prepare_out_dir(directory):
    os.makedirs(directory, exist_ok=True)
    return directory


def cmd_run(config_path, out=None, runs=None, seed=None, workers=None):
    """Repeated runs of one benchmark/operator pair: traces plus a summary row."""
    sections = _read_sections(config_path, "run")
    base_dir = os.path.dirname(os.path.abspath(config_path))
    bench = _benchmark_settings(sections, base_dir)
    ga = _ga_settings(sections)
    output = _output_settings(sections, out, runs, seed, workers)
    op_name, op_params = _operator_settings(sections)

    # fail fast on bad names/params before spending any compute
    probe = make_benchmark(bench["benchmark"], bench["dimension"],
                           bench["fletcher_seed"], bench["langerman_path"])
    operator = make_operator(op_name, probe.dimension, **op_params)
    model = ga["update_model"]
    if "update_model" not in sections.get("ga", {}):
        model = operator.default_model

    specs = _ga_specs(bench, ga, op_name, op_params, model,
                      output["seed"], output["runs"])
    records = _run_many(specs, output["workers"])

    out_dir = _prepare_out_dir(output["directory"])
    written = []
    for spec, record in zip(specs, records):
        name = f"trace_{bench['benchmark']}_{operator.label}_s{spec['seed']}.csv"
        written.append(_write_trace(os.path.join(out_dir, name), record))
    params_text = operator.params_text
    if model == "mgg":
        params_text = params_text + ",model=mgg" if params_text else "model=mgg"
    summary = _write_csv(os.path.join(out_dir, "summary.csv"), _SUMMARY_HEADER,
                         [_summary_row(bench["benchmark"], op_name, params_text,
                                       records)])
    written.append(summary)
    return {"summary": summary, "traces": written[:-1]}


def cmd_sweep(config_path, out=None, runs=None, seed=None, workers=None):
    """Grid over confidence-interval crossover parameters, one summary row per cell."""
    sections = _read_sections(config_path, "sweep")
    base_dir = os.path.dirname(os.path.abspath(config_path))
    bench = _benchmark_settings(sections, base_dir)
    ga = _ga_settings(sections)
    output = _output_settings(sections, out, runs, seed, workers)
    make_benchmark(bench["benchmark"], bench["dimension"],
                   bench["fletcher_seed"], bench["langerman_path"])

    grid = sections["sweep"]
    try:
        n_values = [int(tok) for tok in
                    grid.get("n_best", "").replace(",", " ").split()]
        c_values = [float(tok) for tok in
                    grid.get("confidence", "").replace(",", " ").split()]
    except ValueError as exc:
        raise ConfigError(f"[sweep] grid values: {exc}") from None
    if not n_values or not c_values:
        raise ConfigError("[sweep] needs comma- or whitespace-separated "
                          "n_best and confidence lists")

    all_specs = []
    cells = []
    for n_best in n_values:
        for confidence in c_values:
            params = {"n_best": n_best, "confidence": confidence}
            operator = make_operator("cixl2", bench["dimension"], **params)
            specs = _ga_specs(bench, ga, "cixl2", params, ga["update_model"],
                              output["seed"], output["runs"])
            cells.append((operator.params_text, len(all_specs), len(specs)))
            all_specs.extend(specs)
    records = _run_many(all_specs, output["workers"])

    out_dir = _prepare_out_dir(output["directory"])
    rows = [_summary_row(bench["benchmark"], "cixl2", params_text,
                         records[start:start + count])
            for params_text, start, count in cells]
    summary = _write_csv(os.path.join(out_dir, "summary.csv"), _SUMMARY_HEADER, rows)
    return {"summary": summary}


def cmd_compare(config_path, out=None, runs=None, seed=None, workers=None):
    """Several operators on one benchmark: summary rows plus convergence traces."""
    sections = _read_sections(config_path, "compare")
    base_dir = os.path.dirname(os.path.abspath(config_path))
    bench = _benchmark_settings(sections, base_dir)
    ga = _ga_settings(sections)
    output = _output_settings(sections, out, runs, seed, workers)
    make_benchmark(bench["benchmark"], bench["dimension"],
                   bench["fletcher_seed"], bench["langerman_path"])

    tokens = _str_of(sections, "compare", "operators", "").replace(",", " ").split()
    if not tokens:
        raise ConfigError("[compare] needs a comma- or whitespace-separated "
                          "operators list")
    entries = []
    for token in tokens:
        name, params = _parse_operator_token(token)
        operator = make_operator(name, bench["dimension"], **params)
        model = "mgg" if name == "undx" else ga["update_model"]
        entries.append((name, params, operator, model))

    all_specs = []
    spans = []
    for name, params, operator, model in entries:
        specs = _ga_specs(bench, ga, name, params, model,
                          output["seed"], output["runs"])
        spans.append((len(all_specs), len(specs)))
        all_specs.extend(specs)
    records = _run_many(all_specs, output["workers"])

    out_dir = _prepare_out_dir(output["directory"])
    rows = []
    convergence = []
    for (name, params, operator, model), (start, count) in zip(entries, spans):
        chunk = records[start:start + count]
        params_text = operator.params_text
        if model == "mgg":
            params_text = params_text + ",model=mgg" if params_text else "model=mgg"
        rows.append(_summary_row(bench["benchmark"], name, params_text, chunk))
        path = os.path.join(out_dir, f"convergence_{operator.label}.csv")
        convergence.append(_write_convergence(path, chunk))
    summary = _write_csv(os.path.join(out_dir, "summary.csv"), _SUMMARY_HEADER, rows)
    return {"summary": summary, "convergence": convergence}


def cmd_eda(config_path, out=None, runs=None, seed=None, workers=None):
    """Repeated Gaussian-model runs: traces plus a summary row."""
    sections = _read_sections(config_path, "eda")
    base_dir = os.path.dirname(os.path.abspath(config_path))
    bench = _benchmark_settings(sections, base_dir)
    output = _output_settings(sections, out, runs, seed, workers)
    make_benchmark(bench["benchmark"], bench["dimension"],
                   bench["fletcher_seed"], bench["langerman_path"])
    eda = {
        "population_size": _int_of(sections, "eda", "population_size", 2000),
        "selection_size": _int_of(sections, "eda", "selection_size", 1000),
        "eval_budget": _int_of(sections, "eda", "eval_budget", 300000),
    }
    EDAConfig(**eda)

    specs = [{**bench, "algorithm": "umdac", "eda": dict(eda),
              "seed": output["seed"] + k} for k in range(output["runs"])]
    records = _run_many(specs, output["workers"])

    out_dir = _prepare_out_dir(output["directory"])
    label = f"umdac-ps{eda['population_size']}-ss{eda['selection_size']}"
    written = []
    for spec, record in zip(specs, records):
        name = f"trace_{bench['benchmark']}_{label}_s{spec['seed']}.csv"
        written.append(_write_trace(os.path.join(out_dir, name), record))
    params_text = (f"population_size={eda['population_size']},"
                   f"selection_size={eda['selection_size']}")
    summary = _write_csv(os.path.join(out_dir, "summary.csv"), _SUMMARY_HEADER,
                         [_summary_row(bench["benchmark"], "umdac", params_text,
                                       records)])
    return {"summary": summary, "traces": written}


_ENSEMBLE_METHODS = ("bem", "gem", "ga")


def cmd_ensemble(config_path, out=None, runs=None, seed=None, workers=None):
    """Accuracy table and pairwise win/draw/loss counts for weight methods."""
    sections = _read_sections(config_path, "ensemble")
    base_dir = os.path.dirname(os.path.abspath(config_path))
    output = _output_settings(sections, out, runs, seed, workers)

    datasets = []
    for name in sections:
        if name.startswith("dataset:"):
            label = name[len("dataset:"):].strip()
            learn = _path_of(sections, name, "learning_file", base_dir)
            test = _path_of(sections, name, "test_file", base_dir)
            if learn is None or test is None:
                raise ConfigError(f"[{name}] needs learning_file and test_file")
            datasets.append((label, learn, test))
    inline_learn = _path_of(sections, "ensemble", "learning_file", base_dir)
    inline_test = _path_of(sections, "ensemble", "test_file", base_dir)
    if inline_learn or inline_test:
        if datasets:
            raise ConfigError("give prediction files either inline in [ensemble] "
                              "or via [dataset:...] sections, not both")
        if inline_learn is None or inline_test is None:
            raise ConfigError("[ensemble] needs both learning_file and test_file")
        datasets.append(("default", inline_learn, inline_test))
    if not datasets:
        raise ConfigError("no datasets configured: add [dataset:NAME] sections "
                          "or [ensemble] learning_file/test_file")

    methods = _str_of(sections, "ensemble", "methods",
                      "bem gem ga").replace(",", " ").split()
    if not methods:
        raise ConfigError("[ensemble] methods must not be empty")
    seen = set()
    for method in methods:
        if method not in _ENSEMBLE_METHODS:
            raise ConfigError(f"unknown ensemble method {method!r}; valid "
                              f"methods: {', '.join(_ENSEMBLE_METHODS)}")
        if method in seen:
            raise ConfigError(f"ensemble method {method!r} listed twice")
        seen.add(method)

    ga_params = {
        "n_best": _int_of(sections, "ensemble", "ga_n_best", 5),
        "confidence": _float_of(sections, "ensemble", "ga_confidence", 0.70),
        "eval_budget": _int_of(sections, "ensemble", "ga_eval_budget", 20000),
        "population_size": _int_of(sections, "ensemble", "ga_population_size", 100),
    }

    acc_rows = []
    test_acc = np.zeros((len(datasets), len(methods)))
    for d_idx, (label, learn_path, test_path) in enumerate(datasets):
        learn = load_predictions(learn_path)
        test = load_predictions(test_path)
        if test.n_networks != learn.n_networks or test.n_classes != learn.n_classes:
            raise ConfigError(f"dataset {label!r}: learning and test files "
                              f"disagree on networks or classes")
        for m_idx, method in enumerate(methods):
            if method == "bem":
                weights = bem_weights(learn.n_networks)
            elif method == "gem":
                try:
                    weights = gem_weights(learn)
                except CollinearityError as exc:
                    print(f"warning: dataset {label!r}: {exc}; using uniform "
                          f"weights instead", file=sys.stderr)
                    weights = bem_weights(learn.n_networks)
            else:
                weights = ga_weights(learn, seed=output["seed"] + d_idx, **ga_params)
            learn_acc = accuracy(learn, weights)
            t_acc = accuracy(test, weights)
            test_acc[d_idx, m_idx] = t_acc
            acc_rows.append((label, method, _fnum(learn_acc), _fnum(t_acc)))

    out_dir = _prepare_out_dir(output["directory"])
    acc_path = _write_csv(os.path.join(out_dir, "accuracy.csv"),
                          ("dataset", "method", "learning_accuracy",
                           "test_accuracy"), acc_rows)
    wdl = win_draw_loss(test_acc)
    wdl_rows = [(methods[i], methods[j], str(int(wdl[i, j, 0])),
                 str(int(wdl[i, j, 1])), str(int(wdl[i, j, 2])))
                for i in range(len(methods)) for j in range(len(methods))]
    wdl_path = _write_csv(os.path.join(out_dir, "win_draw_loss.csv"),
                          ("method_a", "method_b", "a_wins", "draws", "a_losses"),
                          wdl_rows)
    return {"accuracy": acc_path, "win_draw_loss": wdl_path}
