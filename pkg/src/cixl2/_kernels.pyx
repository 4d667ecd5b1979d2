# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel backend.

Mirrors `_kernels_py` function-for-function; see that module for the array
and determinism conventions. Scalar loops here use the same operation order
as the numpy expressions so the pure-arithmetic kernels agree bitwise (the
extension is compiled with -ffp-contract=off to keep multiply-adds split).
"""

from libc.math cimport M_E, M_PI, cos, exp, fabs, pow, sin, sqrt

import numpy as np

cimport numpy as cnp

BACKEND_NAME = "compiled"


# ---------------------------------------------------------------------------
# objective batch evaluation


def eval_sphere(const double[:, ::1] x):
    cdef Py_ssize_t n = x.shape[0], p = x.shape[1], i, j
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef double s
    for i in range(n):
        s = 0.0
        for j in range(p):
            s += x[i, j] * x[i, j]
        out[i] = s
    return out_arr


def eval_schwefel_ds(const double[:, ::1] x):
    cdef Py_ssize_t n = x.shape[0], p = x.shape[1], i, j
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef double s, c
    for i in range(n):
        s = 0.0
        c = 0.0
        for j in range(p):
            c += x[i, j]
            s += c * c
        out[i] = s
    return out_arr


def eval_rosenbrock(const double[:, ::1] x):
    cdef Py_ssize_t n = x.shape[0], p = x.shape[1], i, j
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef double s, a, b
    for i in range(n):
        s = 0.0
        for j in range(p - 1):
            a = x[i, j + 1] - x[i, j] * x[i, j]
            b = x[i, j] - 1.0
            s += 100.0 * a * a + b * b
        out[i] = s
    return out_arr


def eval_rastrigin(const double[:, ::1] x):
    cdef Py_ssize_t n = x.shape[0], p = x.shape[1], i, j
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef double s, twopi = 2.0 * M_PI
    for i in range(n):
        s = 0.0
        for j in range(p):
            s += x[i, j] * x[i, j] - 10.0 * cos(twopi * x[i, j])
        out[i] = 10.0 * p + s
    return out_arr


def eval_schwefel(const double[:, ::1] x):
    cdef Py_ssize_t n = x.shape[0], p = x.shape[1], i, j
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef double s
    for i in range(n):
        s = 0.0
        for j in range(p):
            s += x[i, j] * sin(sqrt(fabs(x[i, j])))
        out[i] = 418.9829 * p + s
    return out_arr


def eval_ackley(const double[:, ::1] x):
    cdef Py_ssize_t n = x.shape[0], p = x.shape[1], i, j
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef double s1, s2, twopi = 2.0 * M_PI
    for i in range(n):
        s1 = 0.0
        s2 = 0.0
        for j in range(p):
            s1 += x[i, j] * x[i, j]
            s2 += cos(twopi * x[i, j])
        out[i] = 20.0 + M_E - 20.0 * exp(-0.2 * sqrt(s1 / p)) - exp(s2 / p)
    return out_arr


def eval_griewangk(const double[:, ::1] x):
    cdef Py_ssize_t n = x.shape[0], p = x.shape[1], i, j
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    scale_arr = np.sqrt(np.arange(1.0, p + 1.0))
    cdef double[::1] scale = scale_arr
    cdef double s, pr
    for i in range(n):
        s = 0.0
        pr = 1.0
        for j in range(p):
            s += x[i, j] * x[i, j]
            pr *= cos(x[i, j] / scale[j])
        out[i] = 1.0 + s / 4000.0 - pr
    return out_arr


def eval_fletcher(const double[:, ::1] x, const double[:, ::1] a, const double[:, ::1] b, const double[::1] target):
    cdef Py_ssize_t n = x.shape[0], p = x.shape[1], i, j, k
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    sn_arr = np.empty(p)
    cs_arr = np.empty(p)
    cdef double[::1] sn = sn_arr
    cdef double[::1] cs = cs_arr
    cdef double s, bi, d
    for i in range(n):
        for j in range(p):
            sn[j] = sin(x[i, j])
            cs[j] = cos(x[i, j])
        s = 0.0
        for k in range(p):
            bi = 0.0
            for j in range(p):
                bi += a[k, j] * sn[j] + b[k, j] * cs[j]
            d = target[k] - bi
            s += d * d
        out[i] = s
    return out_arr


def eval_langerman(const double[:, ::1] x, const double[:, ::1] la, const double[::1] lc):
    cdef Py_ssize_t n = x.shape[0], p = x.shape[1], m = la.shape[0], i, j, k
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef double s, dist, d
    for i in range(n):
        s = 0.0
        for k in range(m):
            dist = 0.0
            for j in range(p):
                d = x[i, j] - la[k, j]
                dist += d * d
            s += lc[k] * exp(-dist / M_PI) * cos(M_PI * dist)
        out[i] = -s
    return out_arr


# ---------------------------------------------------------------------------
# crossover and mutation


def cixl2_children(const double[:, ::1] parents, const double[::1] parent_obj,
                   const double[::1] cill, const double[::1] cim, const double[::1] ciul,
                   double obj_cill, double obj_cim, double obj_ciul,
                   const double[:, ::1] r, const double[::1] lower, const double[::1] upper):
    """See `_kernels_py.cixl2_children`."""
    cdef Py_ssize_t k = parents.shape[0], p = parents.shape[1], i, j
    out_arr = np.empty((k, p))
    cdef double[:, ::1] out = out_arr
    cdef double bf, v, vo, g
    for i in range(k):
        for j in range(p):
            bf = parents[i, j]
            if bf < cill[j]:
                v = cill[j]
                vo = obj_cill
            elif bf > ciul[j]:
                v = ciul[j]
                vo = obj_ciul
            else:
                v = cim[j]
                vo = obj_cim
            if parent_obj[i] < vo:
                g = r[i, j] * (bf - v) + bf
            else:
                g = r[i, j] * (v - bf) + v
            if g < lower[j]:
                g = lower[j]
            elif g > upper[j]:
                g = upper[j]
            out[i, j] = g
    return out_arr


def blx_children(const double[:, ::1] g1, const double[:, ::1] g2, double alpha,
                 const double[:, ::1] u, const double[::1] lower, const double[::1] upper):
    """See `_kernels_py.blx_children`."""
    cdef Py_ssize_t k = g1.shape[0], p = g1.shape[1], i, j
    out_arr = np.empty((k, p))
    cdef double[:, ::1] out = out_arr
    cdef double cmin, cmax, span, lo, hi, g
    for i in range(k):
        for j in range(p):
            if g1[i, j] <= g2[i, j]:
                cmin = g1[i, j]
                cmax = g2[i, j]
            else:
                cmin = g2[i, j]
                cmax = g1[i, j]
            span = cmax - cmin
            lo = cmin - alpha * span
            hi = cmax + alpha * span
            g = lo + u[i, j] * (hi - lo)
            if g < lower[j]:
                g = lower[j]
            elif g > upper[j]:
                g = upper[j]
            out[i, j] = g
    return out_arr


def sbx_children(const double[:, ::1] g1, const double[:, ::1] g2, double eta,
                 const double[:, ::1] u, const double[::1] lower, const double[::1] upper):
    """See `_kernels_py.sbx_children`."""
    cdef Py_ssize_t k = g1.shape[0], p = g1.shape[1], i, j
    c1_arr = np.empty((k, p))
    c2_arr = np.empty((k, p))
    cdef double[:, ::1] c1 = c1_arr
    cdef double[:, ::1] c2 = c2_arr
    cdef double mag = 1.0 / (eta + 1.0)
    cdef double uu, bb, h, g
    for i in range(k):
        for j in range(p):
            uu = u[i, j]
            if uu <= 0.5:
                bb = pow(2.0 * uu, mag)
            else:
                bb = pow(0.5 / (1.0 - uu), mag)
            h = 0.5 * (1.0 - bb) * (g2[i, j] - g1[i, j])
            g = g1[i, j] + h
            if g < lower[j]:
                g = lower[j]
            elif g > upper[j]:
                g = upper[j]
            c1[i, j] = g
            g = g2[i, j] - h
            if g < lower[j]:
                g = lower[j]
            elif g > upper[j]:
                g = upper[j]
            c2[i, j] = g
    return c1_arr, c2_arr


def fuzzy_children(const double[:, ::1] g1, const double[:, ::1] g2, double width,
                   const cnp.int64_t[:, ::1] pick, const double[:, ::1] u,
                   const double[::1] lower, const double[::1] upper):
    """See `_kernels_py.fuzzy_children`."""
    cdef Py_ssize_t k = g1.shape[0], p = g1.shape[1], i, j
    out_arr = np.empty((k, p))
    cdef double[:, ::1] out = out_arr
    cdef double mode, w, g
    for i in range(k):
        for j in range(p):
            if pick[i, j] == 0:
                mode = g1[i, j]
            else:
                mode = g2[i, j]
            w = width * fabs(g1[i, j] - g2[i, j])
            if u[i, j] < 0.5:
                g = mode + w * (sqrt(2.0 * u[i, j]) - 1.0)
            else:
                g = mode + w * (1.0 - sqrt(2.0 * (1.0 - u[i, j])))
            if g < lower[j]:
                g = lower[j]
            elif g > upper[j]:
                g = upper[j]
            out[i, j] = g
    return out_arr


def undx_children(const double[:, ::1] p1, const double[:, ::1] p2, const double[:, ::1] p3,
                  double sigma_xi, double sigma_eta,
                  const double[::1] xi, const double[:, ::1] z,
                  const double[::1] lower, const double[::1] upper):
    """See `_kernels_py.undx_children`."""
    cdef Py_ssize_t k = p1.shape[0], p = p1.shape[1], i, j
    out_arr = np.empty((k, p))
    cdef double[:, ::1] out = out_arr
    dvec_arr = np.empty(p)
    dhat_arr = np.empty(p)
    cdef double[::1] dvec = dvec_arr
    cdef double[::1] dhat = dhat_arr
    cdef double nd, t, dist, dist0, wt, mj, g, ax, wp
    for i in range(k):
        nd = 0.0
        for j in range(p):
            dvec[j] = p2[i, j] - p1[i, j]
            nd += dvec[j] * dvec[j]
        nd = sqrt(nd)
        if nd < 1e-12:
            dist0 = 0.0
            for j in range(p):
                mj = 0.5 * (p1[i, j] + p2[i, j])
                g = p3[i, j] - mj
                dist0 += g * g
            dist0 = sqrt(dist0)
            for j in range(p):
                mj = 0.5 * (p1[i, j] + p2[i, j])
                g = mj + sigma_eta * dist0 * z[i, j]
                if g < lower[j]:
                    g = lower[j]
                elif g > upper[j]:
                    g = upper[j]
                out[i, j] = g
            continue
        for j in range(p):
            dhat[j] = dvec[j] / nd
        t = 0.0
        for j in range(p):
            t += (p3[i, j] - p1[i, j]) * dhat[j]
        dist = 0.0
        for j in range(p):
            g = (p3[i, j] - p1[i, j]) - t * dhat[j]
            dist += g * g
        dist = sqrt(dist)
        ax = sigma_xi * xi[i]
        if dist < 1e-12:
            for j in range(p):
                mj = 0.5 * (p1[i, j] + p2[i, j])
                g = mj + ax * dvec[j]
                if g < lower[j]:
                    g = lower[j]
                elif g > upper[j]:
                    g = upper[j]
                out[i, j] = g
            continue
        wt = 0.0
        for j in range(p):
            wt += sigma_eta * z[i, j] * dhat[j]
        for j in range(p):
            wp = sigma_eta * z[i, j] - wt * dhat[j]
            mj = 0.5 * (p1[i, j] + p2[i, j])
            g = mj + ax * dvec[j] + dist * wp
            if g < lower[j]:
                g = lower[j]
            elif g > upper[j]:
                g = upper[j]
            out[i, j] = g
    return out_arr


def mutate(const double[:, ::1] genes, const double[::1] lower, const double[::1] upper,
           double p_m, double exponent,
           const double[:, ::1] gate, const cnp.int64_t[:, ::1] tau, const double[:, ::1] r):
    """See `_kernels_py.mutate`."""
    cdef Py_ssize_t k = genes.shape[0], p = genes.shape[1], i, j
    out_arr = np.empty((k, p))
    cdef double[:, ::1] out = out_arr
    cdef double rho, lam, g
    for i in range(k):
        for j in range(p):
            if gate[i, j] < p_m:
                rho = pow(r[i, j], exponent)
                lam = 1.0 - rho
                if tau[i, j] == 0:
                    g = genes[i, j] + (upper[j] - genes[i, j]) * lam
                    if g > upper[j]:
                        g = upper[j]
                else:
                    g = genes[i, j] - (genes[i, j] - lower[j]) * lam
                    if g < lower[j]:
                        g = lower[j]
            else:
                g = genes[i, j]
            out[i, j] = g
    return out_arr
