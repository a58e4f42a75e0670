"""Moment-matrix and Fisher spectra, and Haar-random circuit ensembles.

The spectrum of the moment matrix M ranks the linear phase combinations
by moment-based sensitivity: the best unit combination attains variance
1/(mu_max d) at the top eigenvector.  The same role is played for the
quantum-Cramer-Rao bound by the spectrum of the Fisher information
matrix, whose top eigenvalue f_max always dominates mu_max.  Ensemble
helpers sample the splitting vector from a Haar-random circuit row and
collect statistics of the optimal sensitivities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import Infeasible
from .gaussian_oracle import oracle_moment_matrix
from .network_model import (
    CircuitVector,
    CoefficientVector,
    EntangledConfig,
    inverse_moment_matrix,
    qfim,
)

__all__ = [
    "SpectrumResult",
    "EnsembleStats",
    "squeezing_spectrum",
    "fisher_spectrum",
    "sample_haar_circuit",
    "haar_weight_statistic",
    "haar_mean_prediction",
    "ensemble_optimal_variance",
    "ensemble_optimal_squeezing",
    "ensemble_heisenberg_saturation",
]

#: Relative eigenvalue gap below which two eigenvalues are degenerate.
DEGENERACY_GAP = 1e-8

#: Condition number of the closed-form inverse beyond which the moment
#: matrix is assembled from the oracle covariance instead of inverted.
_CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class SpectrumResult:
    """Eigendecomposition of the moment matrix or the Fisher matrix."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    max_eigenvalue: float
    optimal_v: CoefficientVector
    degeneracy_classes: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class EnsembleStats:
    """Mean and root-mean-square fluctuation over ensemble samples."""

    sample_count: int
    mean: float
    rms: float
    master_seed: int
    values: np.ndarray | None = None


def _degeneracy_classes(eigenvalues: np.ndarray) -> tuple[tuple[int, ...], ...]:
    classes = []
    current = [0]
    for i in range(1, eigenvalues.size):
        scale = max(abs(eigenvalues[i - 1]), abs(eigenvalues[i]), 1e-300)
        if abs(eigenvalues[i - 1] - eigenvalues[i]) <= DEGENERACY_GAP * scale:
            current.append(i)
        else:
            classes.append(tuple(current))
            current = [i]
    classes.append(tuple(current))
    return tuple(classes)


def _spectrum_from_matrix(matrix: np.ndarray) -> SpectrumResult:
    values, vectors = np.linalg.eigh(matrix)
    order = np.argsort(values, kind="stable")[::-1]
    values = values[order]
    vectors = vectors[:, order]
    top = vectors[:, 0]
    # Canonical overall sign: largest-magnitude entry positive.
    lead = int(np.argmax(np.abs(top)))
    if top[lead] < 0:
        top = -top
    d = matrix.shape[0]
    return SpectrumResult(
        eigenvalues=values,
        eigenvectors=vectors,
        max_eigenvalue=float(values[0]),
        optimal_v=CoefficientVector(top / math.sqrt(d)),
        degeneracy_classes=_degeneracy_classes(values),
    )


def _moment_matrix(config: EntangledConfig) -> np.ndarray:
    minv = inverse_moment_matrix(config)
    if np.linalg.cond(minv) > _CONDITION_LIMIT:
        gamma, g = oracle_moment_matrix(config.d, config)
        return g.T @ np.linalg.solve(gamma, g)
    return np.linalg.inv(minv)


def squeezing_spectrum(config: EntangledConfig) -> SpectrumResult:
    """Eigendecomposition of the moment matrix M.

    The minimum of the moment-based variance over coefficient vectors
    with |v|^2 = 1/d equals 1/(mu_max d), attained at ``optimal_v``.
    """
    return _spectrum_from_matrix(_moment_matrix(config))


def fisher_spectrum(config: EntangledConfig) -> SpectrumResult:
    """Eigendecomposition of the quantum Fisher information matrix."""
    return _spectrum_from_matrix(qfim(config))


def sample_haar_circuit(d: int, rng: np.random.Generator) -> np.ndarray:
    """One Haar-distributed d x d unitary (QR with phase correction)."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def haar_weight_statistic(d: int) -> float:
    """Haar average of d * sum_j u~_j^4 over circuit rows: 2d/(d+1)."""
    return 2.0 * d / (d + 1.0)


def haar_mean_prediction(d: int, n_total: float, n_squeezed: float) -> float:
    """Ensemble-averaged optimal moment-based variance prediction:
    e^{-2r}/n_T + n_s S / n_T^2 with S = 2d/(d+1)."""
    e2r = 1.0 + 2.0 * n_squeezed + 2.0 * math.sqrt(n_squeezed * (n_squeezed + 1.0))
    return 1.0 / (e2r * n_total) + n_squeezed * haar_weight_statistic(d) / n_total ** 2


def _uniform_config(u_abs: np.ndarray, n_total: float, n_squeezed: float) -> EntangledConfig:
    d = u_abs.size
    return EntangledConfig(
        d=d,
        circuit=CircuitVector(u_abs),
        coherent_intensities=np.full(d, (n_total - n_squeezed) / d),
        squeezed_photons=n_squeezed,
    )


def _check_budget(n_total: float, n_squeezed: float) -> None:
    if n_squeezed >= n_total:
        raise Infeasible("squeezed photons exceed the total budget")
    if n_squeezed < 0 or n_total <= 0:
        raise Infeasible("photon numbers must be nonnegative with n_T > 0")


def _sample_rows(d: int, sample_count: int, seed: int):
    """Yield (index, canonical-positive Haar row) pairs deterministically."""
    for i in range(sample_count):
        rng = np.random.default_rng(np.random.SeedSequence((int(seed), i)))
        u = sample_haar_circuit(d, rng)
        yield i, np.abs(u[0, :])


def _stats(values: np.ndarray, seed: int, keep_values: bool) -> EnsembleStats:
    mean = float(np.mean(values))
    rms = float(np.sqrt(np.mean((values - mean) ** 2)))
    return EnsembleStats(
        sample_count=values.size,
        mean=mean,
        rms=rms,
        master_seed=int(seed),
        values=values if keep_values else None,
    )


def _min_variance(u_abs: np.ndarray, n_total: float, n_squeezed: float, objective: str) -> float:
    config = _uniform_config(u_abs, n_total, n_squeezed)
    if objective == "emom":
        top = float(np.linalg.eigvalsh(_moment_matrix(config))[-1])
    elif objective == "eqcr":
        top = float(np.linalg.eigvalsh(qfim(config))[-1])
    else:
        raise ValueError("objective must be 'emom' or 'eqcr'")
    return 1.0 / (top * u_abs.size)


def ensemble_optimal_variance(
    d: int,
    n_total: float,
    n_squeezed: float,
    sample_count: int = 1000,
    seed: int = 0,
    objective: str = "emom",
    keep_values: bool = False,
) -> EnsembleStats:
    """Statistics of the optimal variance over Haar-random splittings.

    Each sample draws the splitting magnitudes from the first row of a
    Haar unitary, with uniform coherent intensities (n_T - n_s)/d, and
    records 1/(mu_max d) (``emom``) or 1/(f_max d) (``eqcr``).
    """
    _check_budget(n_total, n_squeezed)
    values = np.empty(sample_count)
    for i, u_abs in _sample_rows(d, sample_count, seed):
        values[i] = _min_variance(u_abs, n_total, n_squeezed, objective)
    return _stats(values, seed, keep_values)


def _golden_min(f, lo: float, hi: float, rel_tol: float = 1e-6):
    """Golden-section minimum of f over log-spaced [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = math.log(lo), math.log(hi)
    c = b - invphi * (b - a)
    e = a + invphi * (b - a)
    fc, fe = f(math.exp(c)), f(math.exp(e))
    while (b - a) > rel_tol:
        if fc < fe:
            b, e, fe = e, c, fc
            c = b - invphi * (b - a)
            fc = f(math.exp(c))
        else:
            a, c, fc = c, e, fe
            e = a + invphi * (b - a)
            fe = f(math.exp(e))
    x = math.exp((a + b) / 2.0)
    return x, f(x)


def ensemble_optimal_squeezing(
    d: int,
    n_total: float,
    sample_count: int = 1000,
    seed: int = 0,
    objective: str = "emom",
    keep_values: bool = False,
) -> tuple[EnsembleStats, EnsembleStats]:
    """Per-sample minimization of the optimal variance over n_s.

    Returns statistics of the minimized variance and of the minimizing
    squeezed photon number.
    """
    _check_budget(n_total, 0.0)
    minima = np.empty(sample_count)
    argmins = np.empty(sample_count)
    for i, u_abs in _sample_rows(d, sample_count, seed):
        n_star, value = _golden_min(
            lambda n_s: _min_variance(u_abs, n_total, n_s, objective),
            1e-3,
            0.999 * n_total,
        )
        minima[i] = value
        argmins[i] = n_star
    return _stats(minima, seed, keep_values), _stats(argmins, seed, keep_values)


def ensemble_heisenberg_saturation(
    d: int,
    n_total: float,
    sample_count: int = 1000,
    seed: int = 0,
    keep_values: bool = False,
) -> EnsembleStats:
    """Statistics of min over n_s of 1/(f_max d); approaches 1/n_T^2."""
    stats, _ = ensemble_optimal_squeezing(
        d, n_total, sample_count, seed, objective="eqcr", keep_values=keep_values
    )
    return stats
