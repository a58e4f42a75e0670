"""Pure-Python optimization kernel (fallback backend).

Implements the transformed-coordinate objectives and the Nelder-Mead
simplex loop used by :mod:`mznet.optimization`.  The compiled backend in
``_fast.pyx`` mirrors this module step for step; both must stay in sync.

Parameter encodings (m = number of arms carrying weight in v):

====  ======================  ==========================================
kind  layout of x             decoded allocation
====  ======================  ==========================================
0     [w(m), z(m), y]         distributed, free n_s:
                              u = |w|/||w||, n_s = n_T sig(y),
                              a = (n_T - n_s) softmax(z)
1     [w(m)]                  distributed, fixed n_s, uniform a = n_c
2     [w(m), z(m)]            distributed, fixed n_s,
                              a = (n_T - n_s) softmax(z)
3     [z(m), y(m)]            separable, free split:
                              t = n_T softmax(z), n_j = t_j sig(y_j),
                              a_j = t_j - n_j
4     [y(m)]                  separable, fixed total n_s split by
                              softmax(y), a_j = n_c
5     [z(m)]                  separable, fixed squeezed fraction:
                              t = n_T softmax(z), n = ratio t,
                              a = (1 - ratio) t
====  ======================  ==========================================

Objectives: 0 = moment-based variance, 1 = quantum-Cramer-Rao variance.
The kernel works with |v_j| and nonnegative u_j; only products u_j v_j
and u_j^2 enter the formulas, so signs are applied by the caller.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"

BIG = 1e300
_GUARD = 1e-12


def _sigmoid(y: float) -> float:
    if y > 40.0:
        y = 40.0
    elif y < -40.0:
        y = -40.0
    return 1.0 / (1.0 + math.exp(-y))


def _softmax(z: np.ndarray) -> np.ndarray:
    e = np.exp(z - np.max(z))
    return e / np.sum(e)


def _e2r(n_s: float) -> float:
    return 1.0 + 2.0 * n_s + 2.0 * math.sqrt(n_s * (n_s + 1.0))


def _decode(x, kind, m, n_total, n_s_fixed, ratio, n_c_fixed):
    """Return (u, a, n) with per-arm intensities a and squeezing.

    For distributed kinds (0-2), n is the scalar total n_s and u the unit
    splitting magnitudes; for separable kinds (3-5), n is the per-arm
    squeezed photon array and u is None.
    """
    x = np.asarray(x, dtype=float)
    if kind == 0:
        w = np.abs(x[:m])
        norm = math.sqrt(float(w @ w))
        if norm == 0.0:
            return None
        n_s = n_total * _sigmoid(x[2 * m])
        a = (n_total - n_s) * _softmax(x[m : 2 * m])
        return w / norm, a, n_s
    if kind == 1:
        w = np.abs(x[:m])
        norm = math.sqrt(float(w @ w))
        if norm == 0.0:
            return None
        return w / norm, np.full(m, n_c_fixed), n_s_fixed
    if kind == 2:
        w = np.abs(x[:m])
        norm = math.sqrt(float(w @ w))
        if norm == 0.0:
            return None
        a = (n_total - n_s_fixed) * _softmax(x[m : 2 * m])
        return w / norm, a, n_s_fixed
    if kind == 3:
        t = n_total * _softmax(x[:m])
        frac = np.array([_sigmoid(y) for y in x[m : 2 * m]])
        n = t * frac
        return None, t - n, n
    if kind == 4:
        n = n_s_fixed * _softmax(x[:m])
        return None, np.full(m, n_c_fixed), n
    if kind == 5:
        t = n_total * _softmax(x[:m])
        return None, (1.0 - ratio) * t, ratio * t
    raise ValueError(f"unknown kind {kind}")


def objective_value(x, objective, kind, vabs, n_total, n_s_fixed, ratio, n_c_fixed):
    """Evaluate one objective at encoded coordinates x."""
    vabs = np.asarray(vabs, dtype=float)
    m = vabs.size
    decoded = _decode(x, kind, m, n_total, n_s_fixed, ratio, n_c_fixed)
    if decoded is None:
        return BIG
    u, a, n = decoded
    if kind <= 2:
        n_s = float(n)
        e2r = _e2r(n_s)
        if objective == 0:
            em2r = 1.0 / e2r
            s1 = 0.0
            s2 = 0.0
            for j in range(m):
                usq_ns = u[j] * u[j] * n_s
                den = a[j] - usq_ns
                scale = max(a[j], usq_ns)
                if scale == 0.0 or abs(den) <= _GUARD * scale:
                    return BIG
                s1 += math.sqrt(a[j]) * u[j] * vabs[j] / den
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
            s1 += math.sqrt(a[j]) * u[j] * vabs[j] / diag
            s2 += vabs[j] * vabs[j] / diag
        value = s2 - (c / (1.0 + c * kappa)) * s1 * s1
        return value if value > 0.0 else BIG
    # separable
    value = 0.0
    for j in range(m):
        e2r_j = _e2r(n[j])
        if objective == 0:
            den = a[j] - n[j]
            scale = max(a[j], n[j])
            if scale == 0.0 or abs(den) <= _GUARD * scale:
                return BIG
            value += vabs[j] * vabs[j] * (a[j] / e2r_j + n[j]) / (den * den)
        else:
            diag = a[j] * e2r_j + n[j]
            if diag <= 0.0:
                return BIG
            value += vabs[j] * vabs[j] / diag
    return value if value > 0.0 else BIG


def nelder_mead(
    x0,
    objective,
    kind,
    vabs,
    n_total,
    n_s_fixed,
    ratio,
    n_c_fixed,
    max_eval=20000,
    ftol=1e-10,
):
    """One Nelder-Mead run; returns (f_best, x_best, n_eval, converged)."""
    x0 = np.asarray(x0, dtype=float)
    n = x0.size

    def f(x):
        return objective_value(
            x, objective, kind, vabs, n_total, n_s_fixed, ratio, n_c_fixed
        )

    simplex = np.empty((n + 1, n))
    values = np.empty(n + 1)
    simplex[0] = x0
    values[0] = f(x0)
    for i in range(n):
        simplex[i + 1] = x0
        simplex[i + 1, i] += 0.5
        values[i + 1] = f(simplex[i + 1])
    n_eval = n + 1
    converged = False

    while n_eval < max_eval:
        order = np.argsort(values, kind="stable")
        simplex = simplex[order]
        values = values[order]
        f_low, f_high = values[0], values[-1]
        if f_low < 1e299 and abs(f_high - f_low) <= ftol * max(abs(f_low), 1e-300):
            converged = True
            break
        centroid = np.mean(simplex[:-1], axis=0)
        # reflection
        xr = centroid + (centroid - simplex[-1])
        fr = f(xr)
        n_eval += 1
        if fr < values[0]:
            xe = centroid + 2.0 * (centroid - simplex[-1])
            fe = f(xe)
            n_eval += 1
            if fe < fr:
                simplex[-1], values[-1] = xe, fe
            else:
                simplex[-1], values[-1] = xr, fr
        elif fr < values[-2]:
            simplex[-1], values[-1] = xr, fr
        else:
            if fr < values[-1]:
                xc = centroid + 0.5 * (xr - centroid)
            else:
                xc = centroid + 0.5 * (simplex[-1] - centroid)
            fc = f(xc)
            n_eval += 1
            if fc < min(fr, values[-1]):
                simplex[-1], values[-1] = xc, fc
            else:
                for i in range(1, n + 1):
                    simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0])
                    values[i] = f(simplex[i])
                n_eval += n

    best = int(np.argmin(values))
    return float(values[best]), simplex[best].copy(), n_eval, converged
