# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled optimization kernel (mirrors ``_slow.py`` step for step).

See the pure-Python module for the parameter-encoding documentation.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, fabs, sqrt
from libc.stdlib cimport free, malloc

cnp.import_array()

BACKEND = "compiled"

cdef double BIG = 1e300
cdef double GUARD = 1e-12


cdef inline double _sigmoid(double y) nogil:
    if y > 40.0:
        y = 40.0
    elif y < -40.0:
        y = -40.0
    return 1.0 / (1.0 + exp(-y))


cdef inline double _e2r(double n_s) nogil:
    return 1.0 + 2.0 * n_s + 2.0 * sqrt(n_s * (n_s + 1.0))


cdef void _softmax(const double* z, double* out, int m) nogil:
    cdef int j
    cdef double zmax = z[0]
    cdef double total = 0.0
    for j in range(1, m):
        if z[j] > zmax:
            zmax = z[j]
    for j in range(m):
        out[j] = exp(z[j] - zmax)
        total += out[j]
    for j in range(m):
        out[j] /= total


cdef double _objective(
    const double* x,
    int objective,
    int kind,
    const double* vabs,
    int m,
    double n_total,
    double n_s_fixed,
    double ratio,
    double n_c_fixed,
    double* u,
    double* a,
    double* n_arr,
) nogil:
    cdef int j
    cdef double norm, n_s, budget, e2r, em2r, s1, s2, c, kappa
    cdef double usq_ns, den, scale, diag, value, frac, e2r_j

    if kind <= 2:
        norm = 0.0
        for j in range(m):
            u[j] = fabs(x[j])
            norm += u[j] * u[j]
        if norm == 0.0:
            return BIG
        norm = sqrt(norm)
        for j in range(m):
            u[j] /= norm
        if kind == 0:
            n_s = n_total * _sigmoid(x[2 * m])
            budget = n_total - n_s
            _softmax(x + m, a, m)
            for j in range(m):
                a[j] *= budget
        elif kind == 1:
            n_s = n_s_fixed
            for j in range(m):
                a[j] = n_c_fixed
        else:
            n_s = n_s_fixed
            budget = n_total - n_s
            _softmax(x + m, a, m)
            for j in range(m):
                a[j] *= budget
        e2r = _e2r(n_s)
        if objective == 0:
            em2r = 1.0 / e2r
            s1 = 0.0
            s2 = 0.0
            for j in range(m):
                usq_ns = u[j] * u[j] * n_s
                den = a[j] - usq_ns
                scale = a[j] if a[j] > usq_ns else usq_ns
                if scale == 0.0 or fabs(den) <= GUARD * scale:
                    return BIG
                s1 += sqrt(a[j]) * u[j] * vabs[j] / den
                s2 += vabs[j] * vabs[j] * (a[j] + usq_ns) / (den * den)
            value = (em2r - 1.0) * s1 * s1 + s2
            return value if value > 0.0 else BIG
        c = e2r - 1.0
        kappa = 0.0
        s1 = 0.0
        s2 = 0.0
        for j in range(m):
            diag = a[j] + u[j] * u[j] * n_s
            if diag <= 0.0:
                return BIG
            kappa += a[j] * u[j] * u[j] / diag
            s1 += sqrt(a[j]) * u[j] * vabs[j] / diag
            s2 += vabs[j] * vabs[j] / diag
        value = s2 - (c / (1.0 + c * kappa)) * s1 * s1
        return value if value > 0.0 else BIG

    # separable kinds
    if kind == 3:
        _softmax(x, a, m)
        for j in range(m):
            a[j] *= n_total
            frac = _sigmoid(x[m + j])
            n_arr[j] = a[j] * frac
            a[j] -= n_arr[j]
    elif kind == 4:
        _softmax(x, n_arr, m)
        for j in range(m):
            n_arr[j] *= n_s_fixed
            a[j] = n_c_fixed
    else:
        _softmax(x, a, m)
        for j in range(m):
            a[j] *= n_total
            n_arr[j] = ratio * a[j]
            a[j] = (1.0 - ratio) * a[j]

    value = 0.0
    for j in range(m):
        e2r_j = _e2r(n_arr[j])
        if objective == 0:
            den = a[j] - n_arr[j]
            scale = a[j] if a[j] > n_arr[j] else n_arr[j]
            if scale == 0.0 or fabs(den) <= GUARD * scale:
                return BIG
            value += vabs[j] * vabs[j] * (a[j] / e2r_j + n_arr[j]) / (den * den)
        else:
            diag = a[j] * e2r_j + n_arr[j]
            if diag <= 0.0:
                return BIG
            value += vabs[j] * vabs[j] / diag
    return value if value > 0.0 else BIG


def objective_value(x, int objective, int kind, vabs, double n_total,
                    double n_s_fixed, double ratio, double n_c_fixed):
    """Evaluate one objective at encoded coordinates x."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] vv = np.ascontiguousarray(vabs, dtype=np.float64)
    cdef int m = vv.shape[0]
    cdef double* scratch = <double*> malloc(3 * m * sizeof(double))
    if scratch == NULL:
        raise MemoryError()
    try:
        return _objective(
            &xv[0], objective, kind, &vv[0], m, n_total, n_s_fixed, ratio,
            n_c_fixed, scratch, scratch + m, scratch + 2 * m,
        )
    finally:
        free(scratch)


def nelder_mead(x0, int objective, int kind, vabs, double n_total,
                double n_s_fixed, double ratio, double n_c_fixed,
                int max_eval=20000, double ftol=1e-10):
    """One Nelder-Mead run; returns (f_best, x_best, n_eval, converged)."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] start = np.ascontiguousarray(x0, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] vv = np.ascontiguousarray(vabs, dtype=np.float64)
    cdef int n = start.shape[0]
    cdef int m = vv.shape[0]
    cdef int rows = n + 1
    cdef cnp.ndarray[cnp.float64_t, ndim=2] simplex = np.empty((rows, n))
    cdef cnp.ndarray[cnp.float64_t, ndim=1] values = np.empty(rows)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] centroid = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xr = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xe = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xc = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] row = np.empty(n)
    cdef double* scratch = <double*> malloc(3 * m * sizeof(double))
    if scratch == NULL:
        raise MemoryError()
    cdef double* u = scratch
    cdef double* a = scratch + m
    cdef double* n_arr = scratch + 2 * m
    cdef int i, j, k, n_eval, best
    cdef double fr, fe, fc, f_low, f_high, tmpv, fworst
    cdef bint converged = False

    try:
        for j in range(n):
            simplex[0, j] = start[j]
        values[0] = _objective(&simplex[0, 0], objective, kind, &vv[0], m,
                               n_total, n_s_fixed, ratio, n_c_fixed, u, a, n_arr)
        for i in range(n):
            for j in range(n):
                simplex[i + 1, j] = start[j]
            simplex[i + 1, i] += 0.5
            values[i + 1] = _objective(&simplex[i + 1, 0], objective, kind, &vv[0], m,
                                       n_total, n_s_fixed, ratio, n_c_fixed, u, a, n_arr)
        n_eval = n + 1

        while n_eval < max_eval:
            # stable insertion sort of rows by value
            for i in range(1, rows):
                tmpv = values[i]
                for j in range(n):
                    row[j] = simplex[i, j]
                k = i - 1
                while k >= 0 and values[k] > tmpv:
                    values[k + 1] = values[k]
                    for j in range(n):
                        simplex[k + 1, j] = simplex[k, j]
                    k -= 1
                values[k + 1] = tmpv
                for j in range(n):
                    simplex[k + 1, j] = row[j]

            f_low = values[0]
            f_high = values[rows - 1]
            tmpv = fabs(f_low)
            if tmpv < 1e-300:
                tmpv = 1e-300
            if f_low < 1e299 and fabs(f_high - f_low) <= ftol * tmpv:
                converged = True
                break

            for j in range(n):
                centroid[j] = 0.0
                for i in range(n):
                    centroid[j] += simplex[i, j]
                centroid[j] /= n
                xr[j] = centroid[j] + (centroid[j] - simplex[rows - 1, j])
            fr = _objective(&xr[0], objective, kind, &vv[0], m, n_total,
                            n_s_fixed, ratio, n_c_fixed, u, a, n_arr)
            n_eval += 1
            if fr < values[0]:
                for j in range(n):
                    xe[j] = centroid[j] + 2.0 * (centroid[j] - simplex[rows - 1, j])
                fe = _objective(&xe[0], objective, kind, &vv[0], m, n_total,
                                n_s_fixed, ratio, n_c_fixed, u, a, n_arr)
                n_eval += 1
                if fe < fr:
                    for j in range(n):
                        simplex[rows - 1, j] = xe[j]
                    values[rows - 1] = fe
                else:
                    for j in range(n):
                        simplex[rows - 1, j] = xr[j]
                    values[rows - 1] = fr
            elif fr < values[rows - 2]:
                for j in range(n):
                    simplex[rows - 1, j] = xr[j]
                values[rows - 1] = fr
            else:
                fworst = values[rows - 1]
                if fr < fworst:
                    for j in range(n):
                        xc[j] = centroid[j] + 0.5 * (xr[j] - centroid[j])
                else:
                    for j in range(n):
                        xc[j] = centroid[j] + 0.5 * (simplex[rows - 1, j] - centroid[j])
                fc = _objective(&xc[0], objective, kind, &vv[0], m, n_total,
                                n_s_fixed, ratio, n_c_fixed, u, a, n_arr)
                n_eval += 1
                if fc < (fr if fr < fworst else fworst):
                    for j in range(n):
                        simplex[rows - 1, j] = xc[j]
                    values[rows - 1] = fc
                else:
                    for i in range(1, rows):
                        for j in range(n):
                            simplex[i, j] = simplex[0, j] + 0.5 * (simplex[i, j] - simplex[0, j])
                        values[i] = _objective(&simplex[i, 0], objective, kind, &vv[0], m,
                                               n_total, n_s_fixed, ratio, n_c_fixed, u, a, n_arr)
                    n_eval += n

        best = 0
        for i in range(1, rows):
            if values[i] < values[best]:
                best = i
        return float(values[best]), np.asarray(simplex[best]).copy(), n_eval, bool(converged)
    finally:
        free(scratch)
