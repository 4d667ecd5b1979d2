"""Weighted combination of pre-computed classifier outputs.

A prediction set holds per-pattern class scores from several networks plus
the true labels. Combination picks the argmax of the weighted score sum.
Weight choices: uniform averaging, the misfit-correlation closed form, and a
genetic search over the weight simplex that is seeded with the uniform point
so its learning accuracy can never fall below it.
"""

import numpy as np

from .crossover import Cixl2Operator
from .errors import CollinearityError, DataFormatError
from .ga import GAConfig, SearchDomain, run_generational

_CONDITION_LIMIT = 1e12


class PredictionSet:
    """Outputs shaped (patterns, networks, classes) plus integer labels."""

    __slots__ = ("outputs", "labels")

    def __init__(self, outputs, labels):
        self.outputs = np.ascontiguousarray(outputs, dtype=float)
        self.labels = np.ascontiguousarray(labels, dtype=np.int64)
        if self.outputs.ndim != 3:
            raise ValueError("outputs must be shaped (patterns, networks, classes)")
        if self.labels.shape != (self.outputs.shape[0],):
            raise ValueError("need exactly one label per pattern")
        if not np.all(np.isfinite(self.outputs)):
            raise ValueError("outputs must be finite")
        n_classes = self.outputs.shape[2]
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= n_classes):
            raise ValueError("labels must be class indices below the class count")

    @property
    def n_patterns(self):
        return self.outputs.shape[0]

    @property
    def n_networks(self):
        return self.outputs.shape[1]

    @property
    def n_classes(self):
        return self.outputs.shape[2]


def load_predictions(path):
    """Read a prediction file.

    Format: header "patterns networks classes", then one line per pattern
    holding the integer label followed by networks x classes outputs in
    network-major order.
    """
    try:
        with open(path, encoding="utf-8") as handle:
            raw = handle.read().splitlines()
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from None
    lines = [(i + 1, line.split()) for i, line in enumerate(raw) if line.split()]
    if not lines:
        raise DataFormatError(f"{path}: empty file")
    lineno, header = lines[0]
    if len(header) != 3:
        raise DataFormatError(f'{path}: line {lineno}: header must be '
                              f'"patterns networks classes"')
    try:
        n_pat, n_net, n_cls = (int(tok) for tok in header)
    except ValueError:
        raise DataFormatError(f"{path}: line {lineno}: header must hold three "
                              f"integers") from None
    if n_pat < 1 or n_net < 1 or n_cls < 1:
        raise DataFormatError(f"{path}: line {lineno}: header counts must be positive")
    if len(lines) - 1 != n_pat:
        raise DataFormatError(f"{path}: expected {n_pat} pattern lines, "
                              f"found {len(lines) - 1}")
    outputs = np.empty((n_pat, n_net, n_cls))
    labels = np.empty(n_pat, dtype=np.int64)
    width = 1 + n_net * n_cls
    for row, (lineno, tokens) in enumerate(lines[1:]):
        if len(tokens) != width:
            raise DataFormatError(f"{path}: line {lineno}: expected {width} values "
                                  f"(label plus {n_net}x{n_cls} outputs), "
                                  f"found {len(tokens)}")
        try:
            label = int(tokens[0])
        except ValueError:
            raise DataFormatError(f"{path}: line {lineno}: column 1: {tokens[0]!r} "
                                  f"is not an integer label") from None
        if not 0 <= label < n_cls:
            raise DataFormatError(f"{path}: line {lineno}: label {label} outside "
                                  f"[0, {n_cls})")
        labels[row] = label
        for col, tok in enumerate(tokens[1:], start=2):
            try:
                value = float(tok)
            except ValueError:
                raise DataFormatError(f"{path}: line {lineno}: column {col}: "
                                      f"{tok!r} is not a number") from None
            flat = col - 2
            outputs[row, flat // n_cls, flat % n_cls] = value
    return PredictionSet(outputs, labels)


def write_predictions(path, outputs, labels):
    """Inverse of load_predictions, mainly for building synthetic sets."""
    outputs = np.asarray(outputs, dtype=float)
    labels = np.asarray(labels)
    n_pat, n_net, n_cls = outputs.shape
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"{n_pat} {n_net} {n_cls}\n")
        for row in range(n_pat):
            flat = " ".join(f"{v:.16e}" for v in outputs[row].ravel())
            handle.write(f"{int(labels[row])} {flat}\n")


def _outputs_of(predictions):
    if isinstance(predictions, PredictionSet):
        return predictions.outputs
    out = np.asarray(predictions, dtype=float)
    if out.ndim != 3:
        raise ValueError("predictions must be shaped (patterns, networks, classes)")
    return out


def combine(predictions, weights):
    """Predicted class per pattern: argmax of the weighted score sum.

    Ties go to the lowest class index. Any positive rescaling of the weight
    vector leaves the result unchanged.
    """
    outputs = _outputs_of(predictions)
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (outputs.shape[1],):
        raise ValueError(f"need {outputs.shape[1]} weights, got shape {weights.shape}")
    scores = np.einsum("pkc,k->pc", outputs, weights)
    return np.argmax(scores, axis=1)


def accuracy(predictions, weights, labels=None):
    """Fraction of patterns whose combined decision matches the label."""
    if labels is None:
        if not isinstance(predictions, PredictionSet):
            raise ValueError("labels are required when predictions is a bare array")
        labels = predictions.labels
    decisions = combine(predictions, weights)
    return float(np.mean(decisions == np.asarray(labels)))


def bem_weights(n_networks):
    """Uniform averaging weights."""
    n = int(n_networks)
    if n < 1:
        raise ValueError("need at least one network")
    return np.full(n, 1.0 / n)


def _weights_from_misfit_correlation(cmat):
    cmat = np.asarray(cmat, dtype=float)
    if np.linalg.cond(cmat) > _CONDITION_LIMIT:
        raise CollinearityError("misfit correlation matrix is near-singular; "
                                "networks are too correlated for closed-form weights")
    row_sums = np.linalg.solve(cmat, np.ones(cmat.shape[0]))
    return row_sums / row_sums.sum()


def gem_weights(predictions, labels=None):
    """Closed-form weights from the misfit correlation matrix.

    Misfits are network deviations from the one-hot target, averaged over
    patterns and classes; weight i is the i-th inverse-matrix row sum,
    normalized to sum 1. Near-singular matrices (condition number above 1e12,
    e.g. duplicated networks) raise CollinearityError so callers can fall
    back to uniform weights.
    """
    if isinstance(predictions, PredictionSet) and labels is None:
        labels = predictions.labels
    outputs = _outputs_of(predictions)
    if labels is None:
        raise ValueError("labels are required when predictions is a bare array")
    labels = np.asarray(labels, dtype=np.int64)
    n_pat, n_net, n_cls = outputs.shape
    if n_net < 2:
        raise ValueError("need at least two networks")
    onehot = np.zeros((n_pat, n_cls))
    onehot[np.arange(n_pat), labels] = 1.0
    misfit = onehot[:, None, :] - outputs
    cmat = np.einsum("pic,pjc->ij", misfit, misfit) / (n_pat * n_cls)
    return _weights_from_misfit_correlation(cmat)


class _WeightObjective:
    """1 - learning accuracy of the normalized weight vector (batched)."""

    __slots__ = ("outputs", "labels", "uniform")

    def __init__(self, outputs, labels):
        self.outputs = outputs
        self.labels = labels
        self.uniform = 1.0 / outputs.shape[1]

    def evaluate_batch(self, block):
        sums = block.sum(axis=1)
        positive = sums > 0.0
        safe = np.where(positive, sums, 1.0)
        normalized = np.where(positive[:, None], block / safe[:, None], self.uniform)
        scores = np.einsum("pkc,nk->npc", self.outputs, normalized)
        decided = np.argmax(scores, axis=2)
        return 1.0 - np.mean(decided == self.labels[None, :], axis=1)


def ga_weights(predictions, labels=None, n_best=5, confidence=0.70,
               eval_budget=20000, population_size=100, seed=0):
    """Search the weight simplex for maximal learning accuracy.

    Genes live in [0, 1] and are normalized at evaluation time (an all-zero
    vector falls back to uniform weights). The initial population is seeded
    with the uniform point, so with elitism the result never scores below
    uniform averaging on the learning split. Returns normalized weights.
    """
    if isinstance(predictions, PredictionSet) and labels is None:
        labels = predictions.labels
    outputs = _outputs_of(predictions)
    if labels is None:
        raise ValueError("labels are required when predictions is a bare array")
    labels = np.asarray(labels, dtype=np.int64)
    n_net = outputs.shape[1]
    domain = SearchDomain.box(0.0, 1.0, n_net)
    objective = _WeightObjective(outputs, labels)
    config = GAConfig(population_size=population_size, eval_budget=eval_budget,
                      seed=seed)
    operator = Cixl2Operator(n_best=n_best, confidence=confidence)
    uniform = np.full(n_net, 1.0 / n_net)
    record = run_generational(config, domain, objective, operator,
                              seed_individuals=[uniform])
    genes = record.best.genes
    total = genes.sum()
    if total <= 0.0:
        return uniform
    return genes / total


def win_draw_loss(accuracy_table):
    """Pairwise dataset counts: entry [i, j] = (i beats j, ties, i loses to j).

    accuracy_table is shaped (datasets, methods). Counts in each entry sum to
    the dataset count; the diagonal is all draws.
    """
    table = np.asarray(accuracy_table, dtype=float)
    if table.ndim != 2:
        raise ValueError("accuracy table must be shaped (datasets, methods)")
    a = table[:, :, None]
    b = table[:, None, :]
    wins = (a > b).sum(axis=0)
    draws = (a == b).sum(axis=0)
    losses = (a < b).sum(axis=0)
    return np.stack([wins, draws, losses], axis=2)
