"""Pure-numpy kernel backend.

Mirrors the compiled extension in `_kernels.pyx` function-for-function. Every
kernel consumes pre-drawn random arrays instead of an RNG, so both backends
consume the generator stream identically. Kernels that are pure elementwise
arithmetic (confidence-interval crossover, blend crossover, triangular
recombination, clamps) produce bit-identical results under either backend; the
ones involving pow/transcendentals or reductions may differ in the last ulps.

Array conventions: float64 C-contiguous, gene matrices shaped (rows, genes),
bounds shaped (genes,), integer draws int64.
"""

import numpy as np

BACKEND_NAME = "python"


# ---------------------------------------------------------------------------
# objective batch evaluation


def eval_sphere(x):
    return np.sum(x * x, axis=1)


def eval_schwefel_ds(x):
    c = np.cumsum(x, axis=1)
    return np.sum(c * c, axis=1)


def eval_rosenbrock(x):
    a = x[:, 1:] - x[:, :-1] ** 2
    b = x[:, :-1] - 1.0
    return np.sum(100.0 * a * a + b * b, axis=1)


def eval_rastrigin(x):
    return 10.0 * x.shape[1] + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x), axis=1)


def eval_schwefel(x):
    return 418.9829 * x.shape[1] + np.sum(x * np.sin(np.sqrt(np.abs(x))), axis=1)


def eval_ackley(x):
    p = x.shape[1]
    s1 = np.sum(x * x, axis=1)
    s2 = np.sum(np.cos(2.0 * np.pi * x), axis=1)
    return 20.0 + np.e - 20.0 * np.exp(-0.2 * np.sqrt(s1 / p)) - np.exp(s2 / p)


def eval_griewangk(x):
    scale = np.sqrt(np.arange(1.0, x.shape[1] + 1.0))
    return 1.0 + np.sum(x * x, axis=1) / 4000.0 - np.prod(np.cos(x / scale), axis=1)


def eval_fletcher(x, a, b, target):
    bmat = np.sin(x) @ a.T + np.cos(x) @ b.T
    d = target[None, :] - bmat
    return np.sum(d * d, axis=1)


def eval_langerman(x, la, lc):
    d = x[:, None, :] - la[None, :, :]
    dist = np.sum(d * d, axis=2)
    return -np.sum(lc[None, :] * np.exp(-dist / np.pi) * np.cos(np.pi * dist), axis=1)


# ---------------------------------------------------------------------------
# crossover and mutation


def cixl2_children(parents, parent_obj, cill, cim, ciul, obj_cill, obj_cim, obj_ciul, r, lower, upper):
    """One child per parent row, mated against the matching virtual parent.

    Gene placement: strictly below the interval's lower limit pairs the gene
    with the lower-limit parent, strictly above the upper limit with the
    upper-limit parent, anything inside (boundaries included) with the
    interval-center parent. The child gene extrapolates away from the worse
    of (parent, virtual parent), never landing between them.
    """
    below = parents < cill
    above = parents > ciul
    v = np.where(below, cill, np.where(above, ciul, cim))
    vo = np.where(below, obj_cill, np.where(above, obj_ciul, obj_cim))
    better = parent_obj[:, None] < vo
    out = np.where(better, r * (parents - v) + parents, r * (v - parents) + v)
    return np.clip(out, lower, upper)


def blx_children(g1, g2, alpha, u, lower, upper):
    """Uniform draw on [cmin - alpha*I, cmax + alpha*I] per gene."""
    cmin = np.minimum(g1, g2)
    cmax = np.maximum(g1, g2)
    span = cmax - cmin
    lo = cmin - alpha * span
    hi = cmax + alpha * span
    out = lo + u * (hi - lo)
    return np.clip(out, lower, upper)


def sbx_children(g1, g2, eta, u, lower, upper):
    """Two children symmetric about the parent pair, polynomial spread index eta."""
    mag = 1.0 / (eta + 1.0)
    bb = np.where(u <= 0.5, (2.0 * u) ** mag, (0.5 / (1.0 - u)) ** mag)
    h = 0.5 * (1.0 - bb) * (g2 - g1)
    c1 = np.clip(g1 + h, lower, upper)
    c2 = np.clip(g2 - h, lower, upper)
    return c1, c2


def fuzzy_children(g1, g2, width, pick, u, lower, upper):
    """Symmetric triangular draw, mode at a randomly picked parent gene.

    Half-width is width * |g1 - g2|; sampling by inverse CDF.
    """
    mode = np.where(pick == 0, g1, g2)
    w = width * np.abs(g1 - g2)
    out = np.where(
        u < 0.5,
        mode + w * (np.sqrt(2.0 * u) - 1.0),
        mode + w * (1.0 - np.sqrt(2.0 * (1.0 - u))),
    )
    return np.clip(out, lower, upper)


def undx_children(p1, p2, p3, sigma_xi, sigma_eta, xi, z, lower, upper):
    """One child per row from the three-parent ellipsoidal distribution.

    xi: (rows,) standard normals for the primary axis; z: (rows, genes)
    standard normals supplying the orthogonal component. The span of the
    orthogonal perturbation is the distance of the third parent from the
    line through the first two. Degenerate rows: coincident primary parents
    draw isotropically around the midpoint scaled by the distance to the
    third parent; a collinear third parent drops the orthogonal term.
    """
    d = p2 - p1
    m = 0.5 * (p1 + p2)
    nd = np.sqrt(np.sum(d * d, axis=1))
    deg_d = nd < 1e-12
    safe = np.where(deg_d, 1.0, nd)
    dhat = d / safe[:, None]
    rel = p3 - p1
    t = np.sum(rel * dhat, axis=1)
    perp = rel - t[:, None] * dhat
    dist = np.sqrt(np.sum(perp * perp, axis=1))
    relm = p3 - m
    dist0 = np.sqrt(np.sum(relm * relm, axis=1))

    w = sigma_eta * z
    wt = np.sum(w * dhat, axis=1)
    w_perp = w - wt[:, None] * dhat

    axis_term = (sigma_xi * xi)[:, None] * d
    full = m + axis_term + dist[:, None] * w_perp
    no_perp = m + axis_term
    iso = m + sigma_eta * dist0[:, None] * z
    out = np.where(deg_d[:, None], iso, np.where((dist < 1e-12)[:, None], no_perp, full))
    return np.clip(out, lower, upper)


def mutate(genes, lower, upper, p_m, exponent, gate, tau, r):
    """Non-uniform mutation: shrinking moves toward a random bound.

    exponent is the per-generation decay (1 - t/g_max)^b. The min/max against
    the moved-toward bound guards against one-ulp rounding overshoot only;
    the increment itself never exceeds the gap to the bound.
    """
    rho = r**exponent
    lam = 1.0 - rho
    up_move = np.minimum(genes + (upper - genes) * lam, upper)
    dn_move = np.maximum(genes - (genes - lower) * lam, lower)
    moved = np.where(tau == 0, up_move, dn_move)
    return np.where(gate < p_m, moved, genes)
