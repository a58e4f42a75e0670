"""Constrained minimization of the sensitivity figures of merit.

Solves the two minimization problems (moment-based and quantum-Cramer-Rao
variance of v . theta) over the circuit splitting, the coherent
intensities and the squeezed photon budget, under the four resource
constraints compared in the gain analysis:

C1  same total photon number only;
C2  same total photons and the same (uniform) coherent intensities,
    which fixes the total squeezed photon number;
C3  same total photons and the same total squeezed photon number, with
    the squeezed fraction fixed per arm for the separable strategy;
C4  same total photons and the same squeeze parameter everywhere.

Also provides the analytic upper/lower bounds with their scaling-regime
specializations, the closed-form optima for the generalized average, a
Lagrange stationarity certificate, and the gain factors G1-G4.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._kernels import _slow as _decode_impl
from .errors import DegenerateSlope, Infeasible
from .network_model import (
    CircuitVector,
    CoefficientVector,
    squeeze_factor,
)

__all__ = [
    "ApproximationWarning",
    "OptimizationProblem",
    "OptimizationResult",
    "BoundsReport",
    "minimize_emom",
    "minimize_eqcr",
    "bounds_emom",
    "bounds_eqcr",
    "analytic_optimum_vave",
    "lagrange_stationarity_check",
    "gain",
    "gain2_analytic",
    "gain2_vave_exact",
    "gain4_analytic",
    "gain4_curve",
]

#: "Much greater than" is operationalized as a ratio of at least 100.
MUCH_GREATER = 100.0

_CONSTRAINTS = ("C1", "C2", "C3", "C4")
_POLE_WINDOW = 1e-6


class ApproximationWarning(UserWarning):
    """An analytic expression was evaluated outside its validity regime."""


@dataclass(frozen=True)
class OptimizationProblem:
    """A sensitivity minimization task under one resource constraint."""

    v: CoefficientVector
    total_photons: float
    constraint: str = "C1"
    strategy: str = "entangled"
    fixed_squeezed_photons: float | None = None

    def __post_init__(self) -> None:
        if self.constraint not in _CONSTRAINTS:
            raise ValueError(f"constraint must be one of {_CONSTRAINTS}")
        if self.strategy not in ("entangled", "separable"):
            raise ValueError("strategy must be 'entangled' or 'separable'")
        if self.total_photons <= 0:
            raise Infeasible("total photon number must be positive")
        if self.constraint != "C1":
            n_s = self.fixed_squeezed_photons
            if n_s is None:
                raise Infeasible(f"{self.constraint} requires fixed_squeezed_photons")
            if n_s < 0:
                raise Infeasible("squeezed photon number must be nonnegative")
            if self.constraint == "C4" and self.strategy == "separable":
                if self.total_photons <= self.v.d * n_s:
                    raise Infeasible(
                        "C4 separable needs total photons above d * n_s"
                    )
            elif n_s >= self.total_photons:
                raise Infeasible("squeezed photons exceed the total budget")


@dataclass(frozen=True)
class OptimizationResult:
    """Minimizer and minimum of one constrained sensitivity problem."""

    minimum_variance: float
    arg_circuit: CircuitVector | None
    arg_intensities: np.ndarray
    arg_squeezed_photons: float
    solver_status: str
    restarts_used: int
    arg_squeezed_per_arm: np.ndarray | None = None
    evaluations: int = 0


@dataclass(frozen=True)
class BoundsReport:
    """Analytic lower/upper bounds with their regime label and validity."""

    lower: float
    upper: float
    regime_label: str
    validity: bool
    details: dict = field(default_factory=dict)


def _logit(p: float) -> float:
    p = min(max(p, 1e-12), 1.0 - 1e-12)
    return math.log(p / (1.0 - p))


def _support(v: CoefficientVector):
    mask = v.entries != 0.0
    if not np.any(mask):
        raise ValueError("coefficient vector has no support")
    return mask, np.abs(v.entries[mask]), np.sign(v.entries[mask])


def _kind_and_scalars(problem: OptimizationProblem):
    """Map (strategy, constraint) to the kernel kind and fixed scalars."""
    d = problem.v.d
    n_t = problem.total_photons
    n_s = problem.fixed_squeezed_photons or 0.0
    if problem.strategy == "entangled":
        if problem.constraint == "C1":
            return 0, n_t, 0.0, 0.0, 0.0
        if problem.constraint in ("C2", "C4"):
            return 1, n_t, n_s, 0.0, (n_t - n_s) / d
        return 2, n_t, n_s, 0.0, 0.0  # C3
    if problem.constraint == "C1":
        return 3, n_t, 0.0, 0.0, 0.0
    if problem.constraint == "C2":
        return 4, n_t, n_s, 0.0, (n_t - n_s) / d
    if problem.constraint == "C3":
        return 5, n_t, 0.0, n_s / n_t, 0.0
    raise Infeasible("the C4 separable strategy has no free parameters")


def _analytic_starts(kind, objective, vabs, n_t, n_s_fixed):
    """Structured start points encoding the known near-optimal allocations."""
    m = vabs.size
    tiny = 1e-12
    starts = []
    w_v = np.log(vabs + tiny) - np.log(np.max(vabs))
    if kind in (0, 1, 2):
        w_candidates = [vabs / np.max(vabs), np.sqrt(vabs / np.max(vabs))]
        if kind == 1:
            return [np.array(w) for w in w_candidates] + [np.ones(m)]
        z_candidates = [np.zeros(m), 2.0 * w_v]
        if kind == 2:
            for w in w_candidates:
                for z in z_candidates:
                    starts.append(np.concatenate([w, z]))
            return starts
        w_stat = math.sqrt(n_t / 4.0) if objective == 0 else n_t / 2.0
        y = _logit(min(max(w_stat, 1e-3), 0.49 * n_t) / n_t)
        for w in w_candidates:
            for z in z_candidates:
                starts.append(np.concatenate([w, z, [y]]))
        return starts
    if kind == 3:
        for z in (np.zeros(m), 0.8 * w_v):
            t = n_t * _decode_impl._softmax(z)
            y = np.array([_logit(min(0.5 / math.sqrt(tj), 0.49)) for tj in t])
            starts.append(np.concatenate([z, y]))
        return starts
    if kind == 4:
        return [w_v.copy(), np.zeros(m)]
    return [np.zeros(m), 2.0 * w_v]  # kind 5


def _solve_kernel(
    objective,
    kind,
    vabs,
    n_t,
    n_s_fixed,
    ratio,
    n_c_fixed,
    seed,
    restarts,
    extra_starts=(),
    max_eval=20000,
    ftol=1e-10,
):
    dims = {0: 2 * vabs.size + 1, 1: vabs.size, 2: 2 * vabs.size,
            3: 2 * vabs.size, 4: vabs.size, 5: vabs.size}[kind]
    starts = [np.asarray(s, dtype=float) for s in
              _analytic_starts(kind, objective, vabs, n_t, n_s_fixed)]
    n_analytic = len(starts)
    starts.extend(np.asarray(s, dtype=float) for s in extra_starts)
    for k in range(restarts):
        rng = np.random.default_rng(np.random.SeedSequence((int(seed), k)))
        starts.append(rng.normal(0.0, 2.0, size=dims))

    best_value = math.inf
    best_x = None
    best_converged = False
    best_start_value = math.inf
    analytic_best = math.inf
    total_eval = 0
    for idx, x0 in enumerate(starts):
        if x0.size != dims:
            raise ValueError("start point has the wrong dimension")
        f0 = _kernels.objective_value(
            x0, objective, kind, vabs, n_t, n_s_fixed, ratio, n_c_fixed
        )
        if idx < n_analytic:
            analytic_best = min(analytic_best, f0)
        best_start_value = min(best_start_value, f0)
        if f0 < best_value:
            best_value, best_x, best_converged = f0, x0.copy(), False
        fmin, xmin, nev, conv = _kernels.nelder_mead(
            x0, objective, kind, vabs, n_t, n_s_fixed, ratio, n_c_fixed,
            max_eval, ftol,
        )
        total_eval += nev
        if fmin < best_value:
            best_value, best_x, best_converged = fmin, xmin, conv

    if not math.isfinite(best_value) or best_value >= 1e299:
        raise Infeasible("no feasible point was found by any restart")
    if analytic_best - best_value <= ftol * abs(best_value):
        status = "analytic"
    elif best_converged:
        status = "converged"
    else:
        status = "max_iter"
    return best_value, best_x, status, len(starts), total_eval


def _assemble_result(problem, kind, best_value, best_x, status, restarts, nev):
    mask, vabs, signs = _support(problem.v)
    d = problem.v.d
    n_t = problem.total_photons
    n_s_fixed = problem.fixed_squeezed_photons or 0.0
    ratio = (n_s_fixed / n_t) if (problem.constraint == "C3" and
                                  problem.strategy == "separable") else 0.0
    n_c_fixed = ((n_t - n_s_fixed) / d) if kind in (1, 4) else 0.0
    u, a, n = _decode_impl._decode(
        best_x, kind, vabs.size, n_t, n_s_fixed, ratio, n_c_fixed
    )
    intensities = np.full(d, n_c_fixed) if kind in (1, 4) else np.zeros(d)
    intensities[mask] = a
    if kind <= 2:
        circuit_entries = np.zeros(d)
        circuit_entries[mask] = signs * u
        return OptimizationResult(
            minimum_variance=best_value,
            arg_circuit=CircuitVector(circuit_entries),
            arg_intensities=intensities,
            arg_squeezed_photons=float(n),
            solver_status=status,
            restarts_used=restarts,
            evaluations=nev,
        )
    per_arm = np.zeros(d)
    per_arm[mask] = n
    return OptimizationResult(
        minimum_variance=best_value,
        arg_circuit=None,
        arg_intensities=intensities,
        arg_squeezed_photons=float(np.sum(per_arm)),
        solver_status=status,
        restarts_used=restarts,
        arg_squeezed_per_arm=per_arm,
        evaluations=nev,
    )


def _emom_signed(u_signed, v_signed, a, n_s):
    """Moment-based variance for explicitly signed u (sign-search helper)."""
    e2r = squeeze_factor(n_s)
    den = a - u_signed ** 2 * n_s
    s1 = float(np.sum(np.sqrt(a) * u_signed * v_signed / den))
    s2 = float(np.sum(v_signed ** 2 * (a + u_signed ** 2 * n_s) / den ** 2))
    return (1.0 / e2r - 1.0) * s1 * s1 + s2


def _minimize(problem, objective, seed, restarts, exhaustive_signs):
    if problem.strategy == "separable" and problem.constraint == "C4":
        return _separable_c4_result(problem, objective)
    kind, n_t, n_s_fixed, ratio, n_c_fixed = _kind_and_scalars(problem)
    _, vabs, signs = _support(problem.v)
    best_value, best_x, status, restarts_used, nev = _solve_kernel(
        objective, kind, vabs, n_t, n_s_fixed, ratio, n_c_fixed, seed, restarts
    )
    result = _assemble_result(
        problem, kind, best_value, best_x, status, restarts_used, nev
    )
    if exhaustive_signs and kind <= 2 and objective == 0:
        result = _verify_signs(problem, result)
    return result


def _verify_signs(problem, result):
    """Exhaustively search sign patterns of the circuit vector (d <= 12).

    The canonical choice sign(u_j) = sign(v_j) is provably optimal by the
    joint sign-flip symmetry; this mode re-checks that numerically.
    """
    mask, vabs, signs = _support(problem.v)
    m = vabs.size
    if m > 12:
        raise ValueError("exhaustive sign search is limited to 12 components")
    u_abs = np.abs(result.arg_circuit.entries[mask])
    a = result.arg_intensities[mask]
    n_s = result.arg_squeezed_photons
    v_signed = problem.v.entries[mask]
    best = math.inf
    for pattern in range(1 << m):
        s = np.array([1.0 if pattern & (1 << j) else -1.0 for j in range(m)])
        best = min(best, _emom_signed(s * u_abs, v_signed, a, n_s))
    if best < result.minimum_variance * (1.0 - 1e-9):
        return OptimizationResult(
            minimum_variance=best,
            arg_circuit=result.arg_circuit,
            arg_intensities=result.arg_intensities,
            arg_squeezed_photons=result.arg_squeezed_photons,
            solver_status="converged",
            restarts_used=result.restarts_used,
            evaluations=result.evaluations,
        )
    return result


def _separable_c4_result(problem, objective):
    """The C4 separable strategy is fully determined by the budget."""
    d = problem.v.d
    n_s = problem.fixed_squeezed_photons
    n_c = problem.total_photons / d - n_s
    if n_c <= 0:
        raise Infeasible("C4 separable arm intensity is not positive")
    e2r = squeeze_factor(n_s)
    if objective == 0:
        if abs(n_c - n_s) <= _POLE_WINDOW * max(n_c, n_s):
            raise DegenerateSlope("C4 separable variance diverges at n_c' = n_s")
        value = (n_c / e2r + n_s) / (d * (n_c - n_s) ** 2)
    else:
        value = 1.0 / (d * (n_c * e2r + n_s))
    return OptimizationResult(
        minimum_variance=value,
        arg_circuit=None,
        arg_intensities=np.full(d, n_c),
        arg_squeezed_photons=float(d * n_s),
        solver_status="analytic",
        restarts_used=0,
        arg_squeezed_per_arm=np.full(d, float(n_s)),
    )


def minimize_emom(
    problem: OptimizationProblem,
    seed: int = 0,
    restarts: int = 16,
    exhaustive_signs: bool = False,
) -> OptimizationResult:
    """Minimize the moment-based variance under the problem's constraint."""
    return _minimize(problem, 0, seed, restarts, exhaustive_signs)


def minimize_eqcr(
    problem: OptimizationProblem,
    seed: int = 0,
    restarts: int = 16,
    exhaustive_signs: bool = False,
) -> OptimizationResult:
    """Minimize the quantum-Cramer-Rao variance under the constraint."""
    return _minimize(problem, 1, seed, restarts, exhaustive_signs)


# ---------------------------------------------------------------------------
# Analytic bounds and optima
# ---------------------------------------------------------------------------


def bounds_emom(v, n_total: float, n_squeezed: float, regime: str | None = None) -> BoundsReport:
    """Lower/upper bounds on the optimized moment-based variance.

    With ``regime=None`` the full two-term bounds are returned; the
    regime-specialized simplifications are available as
    ``"sn_prefactor"``, ``"optimal_squeezing"`` (minimized over the
    squeezed photon number) and ``"transient_heisenberg"``.
    """
    vec = v if isinstance(v, CoefficientVector) else CoefficientVector(np.asarray(v, float))
    d = vec.d
    w = vec.weight
    e2r = squeeze_factor(n_squeezed)
    em2r = 1.0 / e2r
    if regime is None:
        lower = em2r / (d * n_total) + n_squeezed / (d * n_total ** 2)
        upper = em2r / n_total + n_squeezed * w / n_total ** 2
        lower_ok = n_total >= MUCH_GREATER * n_squeezed
        upper_ok = n_total >= MUCH_GREATER * (d + 1) * n_squeezed
        if n_total >= MUCH_GREATER * n_squeezed * e2r * w:
            label = "sn_prefactor"
        elif upper_ok and n_squeezed * e2r >= MUCH_GREATER * n_total:
            label = "transient_heisenberg"
        else:
            label = "optimal_squeezing"
        return BoundsReport(
            lower=lower, upper=upper, regime_label=label,
            validity=bool(lower_ok and upper_ok),
            details={"lower_valid": bool(lower_ok), "upper_valid": bool(upper_ok),
                     "weight": w},
        )
    if regime == "sn_prefactor":
        valid = n_total >= MUCH_GREATER * n_squeezed * e2r * w
        return BoundsReport(em2r / (d * n_total), em2r / n_total,
                            "sn_prefactor", bool(valid), {"weight": w})
    if regime == "optimal_squeezing":
        n_star = math.sqrt(n_total / (4.0 * w))
        valid = n_star >= MUCH_GREATER and n_star >= MUCH_GREATER * (d + 1) / (4.0 * w)
        return BoundsReport(1.0 / (d * n_total ** 1.5), math.sqrt(w) / n_total ** 1.5,
                            "optimal_squeezing", bool(valid),
                            {"optimal_n_s_upper": n_star,
                             "optimal_n_s_lower": math.sqrt(n_total / 4.0),
                             "weight": w})
    if regime == "transient_heisenberg":
        valid = (n_total >= MUCH_GREATER * (d + 1) * n_squeezed
                 and n_squeezed * e2r >= MUCH_GREATER * n_total)
        return BoundsReport(n_squeezed / (d * n_total ** 2),
                            n_squeezed * w / n_total ** 2,
                            "transient_heisenberg", bool(valid), {"weight": w})
    raise ValueError(f"unknown regime {regime!r}")


def bounds_eqcr(v, n_total: float, n_squeezed: float, regime: str | None = None) -> BoundsReport:
    """Lower/upper bounds on the optimized quantum-Cramer-Rao variance."""
    vec = v if isinstance(v, CoefficientVector) else CoefficientVector(np.asarray(v, float))
    d = vec.d
    e2r = squeeze_factor(n_squeezed)
    em2r = 1.0 / e2r
    if regime is None or regime == "qcr_general":
        lower = 1.0 / (d * (n_total * e2r - n_squeezed * (e2r - 1.0)))
        upper = em2r / (n_total - n_squeezed)
        return BoundsReport(lower, upper, "qcr_general", True, {})
    if regime == "qcr_simplified":
        valid = n_total >= MUCH_GREATER * n_squeezed
        return BoundsReport(em2r / (d * n_total), em2r / n_total,
                            "qcr_simplified", bool(valid), {})
    if regime == "heisenberg":
        valid = n_total / 2.0 >= MUCH_GREATER
        return BoundsReport(1.0 / (d * n_total ** 2), 1.0 / n_total ** 2,
                            "heisenberg", bool(valid),
                            {"optimal_n_s": n_total / 2.0})
    raise ValueError(f"unknown regime {regime!r}")


def analytic_optimum_vave(d: int, n_total: float, n_squeezed: float, objective: str) -> float:
    """Closed-form optimum for the generalized average combination.

    Achieved by the uniform splitting u~ = sqrt(d) v_ave with uniform
    coherent intensities.  The moment-based form is proved for
    n_T >> (d+1) n_s; outside that regime an ApproximationWarning is
    issued (the quantum-Cramer-Rao form holds in all regimes).
    """
    e2r = squeeze_factor(n_squeezed)
    if objective == "emom":
        if n_total < MUCH_GREATER * (d + 1) * n_squeezed:
            warnings.warn(
                "moment-based optimum used outside its validity regime "
                "n_T >> (d+1) n_s",
                ApproximationWarning,
                stacklevel=2,
            )
        return 1.0 / (e2r * n_total) + n_squeezed / n_total ** 2
    if objective == "eqcr":
        return 1.0 / (n_total * e2r - n_squeezed * (e2r - 1.0))
    raise ValueError("objective must be 'emom' or 'eqcr'")


def lagrange_stationarity_check(v, candidate, n_coherent: float, n_squeezed: float) -> float:
    """Normalized residual of the constrained stationarity system.

    Uses the simplified objective valid for n_c >> n_s (uniform coherent
    intensities): f(u~) = (e^{-2r}-1)(u~.v)^2/n_c + (n_s/n_c^2) sum v_j^2 u~_j^2,
    with the unit-norm constraint handled by a projected multiplier.
    A residual below 1e-8 certifies the candidate as a stationary point.
    """
    vec = v if isinstance(v, CoefficientVector) else CoefficientVector(np.asarray(v, float))
    cand = candidate.entries if isinstance(candidate, CircuitVector) else np.asarray(candidate, float)
    if n_coherent < MUCH_GREATER * n_squeezed:
        warnings.warn(
            "stationarity system assumes n_c >> n_s",
            ApproximationWarning,
            stacklevel=2,
        )
    em2r = 1.0 / squeeze_factor(n_squeezed)
    grad = (
        2.0 * (em2r - 1.0) / n_coherent * float(cand @ vec.entries) * vec.entries
        + 2.0 * (n_squeezed / n_coherent ** 2) * vec.entries ** 2 * cand
    )
    lam = float(grad @ cand) / (2.0 * float(cand @ cand))
    residual = grad - 2.0 * lam * cand
    scale = max(float(np.max(np.abs(grad))), 1e-300)
    return float(np.max(np.abs(residual))) / scale


# ---------------------------------------------------------------------------
# Gain factors
# ---------------------------------------------------------------------------


def _mimic_start(problem_ent, sep_result):
    """Encode the separable optimum as a start for the entangled search."""
    mask, vabs, _ = _support(problem_ent.v)
    n_t = problem_ent.total_photons
    a = sep_result.arg_intensities[mask]
    n = sep_result.arg_squeezed_per_arm[mask]
    n_s = float(np.sum(n))
    tiny = 1e-12
    if n_s > 0:
        w = np.sqrt(n / n_s + tiny)
    else:
        w = vabs / np.max(vabs)
    w = w / max(np.max(w), tiny)
    if problem_ent.constraint == "C1":
        z = np.log(a / max(float(np.sum(a)), tiny) + tiny)
        y = _logit(min(max(n_s, 1e-6), 0.49 * n_t) / n_t)
        return [np.concatenate([w, z, [y]])]
    if problem_ent.constraint == "C3":
        z = np.log(a / max(float(np.sum(a)), tiny) + tiny)
        return [np.concatenate([w, z])]
    return [w]  # C2 / C4: only the splitting is free


def gain(
    constraint: str,
    v,
    n_total: float,
    n_squeezed: float | None = None,
    seed: int = 0,
    restarts: int = 16,
):
    """Gain factor: optimized separable over optimized entangled variance.

    Returns ``(gain_value, entangled_result, separable_result)``.
    """
    vec = v if isinstance(v, CoefficientVector) else CoefficientVector(np.asarray(v, float))
    sep_problem = OptimizationProblem(
        v=vec, total_photons=n_total, constraint=constraint,
        strategy="separable", fixed_squeezed_photons=n_squeezed,
    )
    ent_problem = OptimizationProblem(
        v=vec, total_photons=n_total, constraint=constraint,
        strategy="entangled", fixed_squeezed_photons=n_squeezed,
    )
    if constraint == "C4":
        sep_result = _separable_c4_result(sep_problem, 0)
    else:
        kind, n_t, n_s_fixed, ratio, n_c_fixed = _kind_and_scalars(sep_problem)
        _, vabs, _ = _support(vec)
        value, x, status, used, nev = _solve_kernel(
            0, kind, vabs, n_t, n_s_fixed, ratio, n_c_fixed, seed, restarts
        )
        sep_result = _assemble_result(sep_problem, kind, value, x, status, used, nev)

    kind, n_t, n_s_fixed, ratio, n_c_fixed = _kind_and_scalars(ent_problem)
    _, vabs, _ = _support(vec)
    extra = _mimic_start(ent_problem, sep_result) if sep_result.arg_squeezed_per_arm is not None else ()
    value, x, status, used, nev = _solve_kernel(
        0, kind, vabs, n_t, n_s_fixed, ratio, n_c_fixed, seed, restarts,
        extra_starts=extra,
    )
    ent_result = _assemble_result(ent_problem, kind, value, x, status, used, nev)
    return sep_result.minimum_variance / ent_result.minimum_variance, ent_result, sep_result


def gain2_analytic(v) -> float:
    """Asymptotic fixed-intensity gain d (sum_i |v_i|)^2."""
    vec = v if isinstance(v, CoefficientVector) else CoefficientVector(np.asarray(v, float))
    return float(vec.d * np.sum(np.abs(vec.entries)) ** 2)


def gain2_vave_exact(d: int, n_coherent: float, n_squeezed: float) -> float:
    """Exact fixed-intensity gain at the generalized average.

    (n_c e^{-2r'} + n_s/d) / (n_c e^{-2r} + n_s/d) with
    r' = arcsinh sqrt(n_s/d) and r = arcsinh sqrt(n_s).
    """
    if n_coherent < MUCH_GREATER * n_squeezed:
        warnings.warn(
            "exact fixed-intensity gain assumes n_c >> n_s",
            ApproximationWarning,
            stacklevel=2,
        )
    em2r_sep = 1.0 / squeeze_factor(n_squeezed / d)
    em2r_ent = 1.0 / squeeze_factor(n_squeezed)
    return (n_coherent * em2r_sep + n_squeezed / d) / (
        n_coherent * em2r_ent + n_squeezed / d
    )


def gain4_analytic(d: int, n_total: float, n_squeezed: float) -> float:
    """Same-squeeze-parameter gain in the n_c, n_c' >> n_s regime:
    (n_T e^{-2r} + d n_s) / (n_T e^{-2r} + n_s)."""
    em2r = 1.0 / squeeze_factor(n_squeezed)
    return (n_total * em2r + d * n_squeezed) / (n_total * em2r + n_squeezed)


def gain4_curve(d: int, n_squeezed: float, n_total_values, seed: int = 0, restarts: int = 16):
    """Sweep of the same-squeeze-parameter gains G4 and G4-tilde.

    Returns a list of dict rows.  Points within the relative pole window
    of n_T = 2 d n_s, or with an infeasible separable budget, are marked
    in the row status and carry None values.
    """
    v_ave = CoefficientVector.average(d)
    e2r = squeeze_factor(n_squeezed)
    rows = []
    pole = 2.0 * d * n_squeezed
    for n_t in n_total_values:
        n_t = float(n_t)
        row = {"n_total": n_t, "g4": None, "g4_qcr": None, "status": "ok"}
        if abs(n_t - pole) <= _POLE_WINDOW * pole:
            row["status"] = "PoleExcluded"
            rows.append(row)
            continue
        n_c_sep = n_t / d - n_squeezed
        if n_c_sep <= 0 or n_squeezed >= n_t:
            row["status"] = "Infeasible"
            rows.append(row)
            continue
        sep_var = (n_c_sep / e2r + n_squeezed) / (d * (n_c_sep - n_squeezed) ** 2)
        sep_qcr = 1.0 / (d * (n_c_sep * e2r + n_squeezed))
        ent_problem = OptimizationProblem(
            v=v_ave, total_photons=n_t, constraint="C4",
            strategy="entangled", fixed_squeezed_photons=n_squeezed,
        )
        ent = minimize_emom(ent_problem, seed=seed, restarts=restarts)
        row["g4"] = sep_var / ent.minimum_variance
        row["g4_qcr"] = sep_qcr / ent.minimum_variance
        row["entangled_status"] = ent.solver_status
        rows.append(row)
    return rows
