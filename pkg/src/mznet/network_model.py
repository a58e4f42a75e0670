"""Sensor-network configurations and closed-form network statistics.

This module holds the value types describing the two probe strategies
(one squeezed vacuum distributed by a linear circuit versus one squeezed
vacuum per interferometer) and the closed-form expressions for their
output statistics at the optimal working point: the inverse moment
matrix, the quantum Fisher information matrix (QFIM) and its
Sherman-Morrison inverse, the per-arm formulas of the separable
strategy, and the correlation structure of the measurement covariance
under uniform splitting.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateSlope,
    DimensionMismatch,
    NonUnitary,
    PhaseMismatch,
    SingularInformation,
)

__all__ = [
    "CircuitVector",
    "CoefficientVector",
    "EntangledConfig",
    "SeparableConfig",
    "squeeze_parameter_from_photons",
    "squeeze_factor",
    "inverse_moment_matrix",
    "qfim",
    "qfim_inverse",
    "separable_variance_terms",
    "separable_qfi_terms",
    "covariance_c2_structure",
    "circuit_vector_from_unitary",
    "qfim_general",
    "gamma_general",
    "inverse_moment_matrix_general",
    "entangled_config_from_json",
    "entangled_config_to_json",
]

#: Relative threshold below which the slope denominator |alpha|^2 - u^2 n_s
#: is considered degenerate (the closed forms lose all significant digits).
SLOPE_GUARD = 1e-9

_UNITARY_TOL = 1e-10


def squeeze_parameter_from_photons(n_s: float) -> float:
    """Squeeze parameter r with sinh^2 r = n_s."""
    if n_s < 0:
        raise ValueError("squeezed photon number must be nonnegative")
    return math.asinh(math.sqrt(n_s))


def squeeze_factor(n_s: float) -> float:
    """e^{2r} expressed through the squeezed photon number n_s = sinh^2 r.

    Uses e^{2r} = 1 + 2 n_s + 2 sqrt(n_s (n_s + 1)), exact and stable for
    every n_s >= 0.
    """
    if n_s < 0:
        raise ValueError("squeezed photon number must be nonnegative")
    return 1.0 + 2.0 * n_s + 2.0 * math.sqrt(n_s * (n_s + 1.0))


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class CircuitVector:
    """Signed magnitudes of the circuit row feeding the squeezed vacuum.

    ``entries[j]`` is the signed magnitude of the circuit matrix element
    coupling the injection port to interferometer ``j`` under phase
    matching.  The vector is normalized to unit Euclidean norm at
    construction (inputs within 1e-6 of unit norm are rescaled; anything
    farther off is rejected as a probable mistake).
    """

    entries: np.ndarray

    def __post_init__(self) -> None:
        entries = np.asarray(self.entries, dtype=float)
        if entries.ndim != 1 or entries.size == 0:
            raise DimensionMismatch("circuit vector must be a nonempty 1-d array")
        norm = float(np.linalg.norm(entries))
        if abs(norm - 1.0) > 1e-6:
            raise ValueError(f"circuit vector norm {norm!r} is not 1 within 1e-6")
        object.__setattr__(self, "entries", _frozen(entries / norm))

    @property
    def d(self) -> int:
        return self.entries.size


@dataclass(frozen=True)
class CoefficientVector:
    """Target linear combination v with the convention |v|^2 = 1/d.

    Any nonzero input vector is accepted and rescaled to the convention;
    ``was_rescaled`` records whether a rescaling actually happened so
    callers comparing against other conventions can trace it.
    """

    entries: np.ndarray
    was_rescaled: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        entries = np.asarray(self.entries, dtype=float)
        if entries.ndim != 1 or entries.size == 0:
            raise DimensionMismatch("coefficient vector must be a nonempty 1-d array")
        d = entries.size
        norm_sq = float(entries @ entries)
        if norm_sq <= 0.0:
            raise ValueError("coefficient vector must be nonzero")
        target = 1.0 / d
        rescaled = abs(norm_sq - target) > 1e-12 * target
        if rescaled:
            entries = entries * math.sqrt(target / norm_sq)
        object.__setattr__(self, "entries", _frozen(entries))
        object.__setattr__(self, "was_rescaled", bool(rescaled))

    @property
    def d(self) -> int:
        return self.entries.size

    @property
    def weight(self) -> float:
        """The spread statistic W = d^3 sum_j v_j^4 (equals 1 for the
        generalized average, d for a single-phase vector)."""
        d = self.d
        return float(d ** 3 * np.sum(self.entries ** 4))

    @classmethod
    def average(cls, d: int, signs=None) -> "CoefficientVector":
        """The generalized average (+-1, ..., +-1)/d."""
        s = np.ones(d) if signs is None else np.sign(np.asarray(signs, dtype=float))
        if s.size != d or np.any(s == 0):
            raise DimensionMismatch("signs must be d nonzero values")
        return cls(s / d)

    @classmethod
    def single_phase(cls, d: int, j: int = 0) -> "CoefficientVector":
        e = np.zeros(d)
        e[j] = 1.0 / math.sqrt(d)
        return cls(e)


@dataclass(frozen=True)
class EntangledConfig:
    """Resource allocation of the distributed (mode-entangled) strategy."""

    d: int
    circuit: CircuitVector
    coherent_intensities: np.ndarray
    squeezed_photons: float
    phase_mismatch: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.d < 1:
            raise DimensionMismatch("d must be a positive integer")
        intensities = np.asarray(self.coherent_intensities, dtype=float)
        if intensities.shape != (self.d,):
            raise DimensionMismatch("coherent_intensities must have length d")
        if np.any(intensities < 0):
            raise ValueError("coherent intensities must be nonnegative")
        if self.circuit.d != self.d:
            raise DimensionMismatch("circuit vector length must equal d")
        if self.squeezed_photons < 0:
            raise ValueError("squeezed photon number must be nonnegative")
        chi = self.phase_mismatch
        chi = np.zeros(self.d) if chi is None else np.asarray(chi, dtype=float)
        if chi.shape != (self.d,):
            raise DimensionMismatch("phase_mismatch must have length d")
        object.__setattr__(self, "coherent_intensities", _frozen(intensities))
        object.__setattr__(self, "phase_mismatch", _frozen(chi))

    @property
    def total_photons(self) -> float:
        return float(np.sum(self.coherent_intensities) + self.squeezed_photons)

    @property
    def squeeze_parameter(self) -> float:
        return squeeze_parameter_from_photons(self.squeezed_photons)

    @property
    def is_phase_matched(self) -> bool:
        return bool(np.all(self.phase_mismatch == 0.0))


@dataclass(frozen=True)
class SeparableConfig:
    """One independent displaced-squeezed interferometer per parameter."""

    d: int
    coherent_intensities: np.ndarray
    squeeze_magnitudes: np.ndarray

    def __post_init__(self) -> None:
        if self.d < 1:
            raise DimensionMismatch("d must be a positive integer")
        intensities = np.asarray(self.coherent_intensities, dtype=float)
        magnitudes = np.asarray(self.squeeze_magnitudes, dtype=float)
        if intensities.shape != (self.d,) or magnitudes.shape != (self.d,):
            raise DimensionMismatch("per-arm arrays must have length d")
        if np.any(intensities < 0) or np.any(magnitudes < 0):
            raise ValueError("per-arm resources must be nonnegative")
        object.__setattr__(self, "coherent_intensities", _frozen(intensities))
        object.__setattr__(self, "squeeze_magnitudes", _frozen(magnitudes))

    @property
    def squeezed_photons_per_arm(self) -> np.ndarray:
        return np.sinh(self.squeeze_magnitudes) ** 2

    @property
    def total_photons(self) -> float:
        return float(
            np.sum(self.coherent_intensities) + np.sum(self.squeezed_photons_per_arm)
        )

    @classmethod
    def from_photon_numbers(cls, intensities, squeezed_photons) -> "SeparableConfig":
        """Build from per-arm coherent intensities and squeezed photon numbers."""
        n = np.asarray(squeezed_photons, dtype=float)
        if np.any(n < 0):
            raise ValueError("squeezed photon numbers must be nonnegative")
        r = np.arcsinh(np.sqrt(n))
        intensities = np.asarray(intensities, dtype=float)
        return cls(d=intensities.size, coherent_intensities=intensities, squeeze_magnitudes=r)


# ---------------------------------------------------------------------------
# Closed forms at the phase-matched pi/2 working point
# ---------------------------------------------------------------------------


def _slope_denominators(alpha_sq: np.ndarray, u_sq_ns: np.ndarray) -> np.ndarray:
    """Denominators |alpha_j|^2 - u_j^2 n_s with the degeneracy guard."""
    scale = np.maximum(alpha_sq, u_sq_ns)
    den = alpha_sq - u_sq_ns
    bad = np.abs(den) < SLOPE_GUARD * scale
    bad |= scale == 0.0
    if np.any(bad):
        j = int(np.argmax(bad))
        raise DegenerateSlope(
            f"arm {j}: |alpha|^2 = {alpha_sq[j]!r} and u^2 n_s = {u_sq_ns[j]!r} "
            "give a vanishing mean-value slope"
        )
    return den


def _require_phase_matched(config: EntangledConfig) -> None:
    if not config.is_phase_matched:
        raise PhaseMismatch(
            "closed form requires zero phase offsets; evaluate the general "
            "configuration through the gaussian_oracle module instead"
        )


def inverse_moment_matrix(config: EntangledConfig) -> np.ndarray:
    """Closed-form inverse moment matrix at the pi/2 working point.

    (M^-1)_ij = (e^{-2r} - 1) w_i w_j
                + delta_ij (|a_j|^2 + u_j^2 n_s) / (|a_j|^2 - u_j^2 n_s)^2,
    with w_j = |a_j| u_j / (|a_j|^2 - u_j^2 n_s).
    """
    _require_phase_matched(config)
    u = config.circuit.entries
    alpha_sq = config.coherent_intensities
    n_s = config.squeezed_photons
    u_sq_ns = u * u * n_s
    den = _slope_denominators(alpha_sq, u_sq_ns)
    em2r = 1.0 / squeeze_factor(n_s)
    w = np.sqrt(alpha_sq) * u / den
    matrix = (em2r - 1.0) * np.outer(w, w)
    matrix[np.diag_indices_from(matrix)] += (alpha_sq + u_sq_ns) / den ** 2
    return matrix


def qfim(config: EntangledConfig) -> np.ndarray:
    """Closed-form QFIM at phase matching.

    (F_Q)_ij = |a_i||a_j| (e^{2r} - 1) u_i u_j
               + delta_ij (|a_j|^2 + u_j^2 n_s).
    """
    _require_phase_matched(config)
    u = config.circuit.entries
    alpha_sq = config.coherent_intensities
    n_s = config.squeezed_photons
    e2r = squeeze_factor(n_s)
    w = np.sqrt(alpha_sq) * u
    matrix = (e2r - 1.0) * np.outer(w, w)
    matrix[np.diag_indices_from(matrix)] += alpha_sq + u * u * n_s
    return matrix


def qfim_inverse(config: EntangledConfig) -> np.ndarray:
    """Inverse QFIM through the Sherman-Morrison rank-one update.

    With D_j = |a_j|^2 + u_j^2 n_s, w_j = |a_j| u_j and c = e^{2r} - 1:
    F^-1 = D^-1 - c (D^-1 w)(D^-1 w)^T / (1 + c K),  K = w^T D^-1 w.
    """
    _require_phase_matched(config)
    u = config.circuit.entries
    alpha_sq = config.coherent_intensities
    n_s = config.squeezed_photons
    diag = alpha_sq + u * u * n_s
    if np.any(diag == 0.0):
        j = int(np.argmax(diag == 0.0))
        raise SingularInformation(f"parameter {j} carries no information")
    c = squeeze_factor(n_s) - 1.0
    w = np.sqrt(alpha_sq) * u
    dw = w / diag
    kappa = float(w @ dw)
    matrix = -(c / (1.0 + c * kappa)) * np.outer(dw, dw)
    matrix[np.diag_indices_from(matrix)] += 1.0 / diag
    return matrix


def separable_variance_terms(config: SeparableConfig) -> np.ndarray:
    """Per-arm moment-based variance terms of the separable strategy.

    term_j = (|a'_j|^2 e^{-2 r'_j} + n'_j) / (|a'_j|^2 - n'_j)^2.
    """
    alpha_sq = config.coherent_intensities
    n = config.squeezed_photons_per_arm
    den = _slope_denominators(alpha_sq, n)
    em2r = np.exp(-2.0 * config.squeeze_magnitudes)
    return (alpha_sq * em2r + n) / den ** 2


def separable_qfi_terms(config: SeparableConfig) -> np.ndarray:
    """Per-arm quantum Fisher information F_j = |a'_j|^2 e^{2 r'_j} + n'_j."""
    alpha_sq = config.coherent_intensities
    n = config.squeezed_photons_per_arm
    return alpha_sq * np.exp(2.0 * config.squeeze_magnitudes) + n


def covariance_c2_structure(d: int, n_c: float, n_s: float) -> np.ndarray:
    """Scaled measurement covariance 4*Gamma under uniform splitting.

    4 Gamma = (n_c (e^{2r} - 1) / d) * ones + (n_c + n_s / d) * identity,
    valid for uniform intensities n_c and u_j = 1/sqrt(d).
    """
    if d < 1:
        raise DimensionMismatch("d must be a positive integer")
    if n_c < 0 or n_s < 0:
        raise ValueError("photon numbers must be nonnegative")
    e2r = squeeze_factor(n_s)
    matrix = np.full((d, d), n_c * (e2r - 1.0) / d)
    matrix[np.diag_indices_from(matrix)] += n_c + n_s / d
    return matrix


def _check_unitary(matrix: np.ndarray) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatch("matrix must be square")
    deviation = float(
        np.max(np.abs(matrix.conj().T @ matrix - np.eye(matrix.shape[0])))
    )
    if deviation > _UNITARY_TOL:
        raise NonUnitary(f"unitarity deviation {deviation:.3e} exceeds {_UNITARY_TOL}")
    return matrix


def circuit_vector_from_unitary(unitary, injection_port: int, signs) -> CircuitVector:
    """Signed row magnitudes u~_j = signs_j |U_{D,j}| of injection row D.

    ``injection_port`` is 1-based, matching the derivation's port index.
    """
    matrix = _check_unitary(unitary)
    d = matrix.shape[0]
    if not 1 <= injection_port <= d:
        raise DimensionMismatch(f"injection port must be in 1..{d}")
    s = np.asarray(signs, dtype=float)
    if s.shape != (d,) or not np.all(np.abs(s) == 1.0):
        raise DimensionMismatch("signs must be d entries of +-1")
    return CircuitVector(s * np.abs(matrix[injection_port - 1, :]))


# ---------------------------------------------------------------------------
# General (non-phase-matched) closed forms
# ---------------------------------------------------------------------------


def _phase_projected(u_complex: np.ndarray, chi: np.ndarray):
    rot = np.exp(1j * chi) * u_complex
    return rot.real, rot.imag


def qfim_general(alpha_sq, u_complex, n_s: float, chi) -> np.ndarray:
    """QFIM for arbitrary complex circuit row and phase offsets chi.

    F_ij = |a_i||a_j| [Re_i Re_j (e^{2r}-1) + Im_i Im_j (e^{-2r}-1)]
           + delta_ij (|a_i|^2 + |u_i|^2 n_s),
    with Re_i/Im_i the real/imaginary parts of e^{i chi_i} u_i.
    """
    alpha_sq = np.asarray(alpha_sq, dtype=float)
    u_complex = np.asarray(u_complex, dtype=complex)
    chi = np.asarray(chi, dtype=float)
    e2r = squeeze_factor(n_s)
    re, im = _phase_projected(u_complex, chi)
    amp = np.sqrt(alpha_sq)
    matrix = (e2r - 1.0) * np.outer(amp * re, amp * re)
    matrix += (1.0 / e2r - 1.0) * np.outer(amp * im, amp * im)
    matrix[np.diag_indices_from(matrix)] += alpha_sq + np.abs(u_complex) ** 2 * n_s
    return matrix


def gamma_general(alpha_sq, u_complex, n_s: float, chi) -> np.ndarray:
    """Measurement covariance Gamma at the pi/2 working point, general phases.

    Identical to the QFIM up to a factor 1/4 and the swap of the real and
    imaginary projections of e^{i chi_i} u_i.
    """
    alpha_sq = np.asarray(alpha_sq, dtype=float)
    u_complex = np.asarray(u_complex, dtype=complex)
    chi = np.asarray(chi, dtype=float)
    e2r = squeeze_factor(n_s)
    re, im = _phase_projected(u_complex, chi)
    amp = np.sqrt(alpha_sq)
    matrix = (e2r - 1.0) * np.outer(amp * im, amp * im)
    matrix += (1.0 / e2r - 1.0) * np.outer(amp * re, amp * re)
    matrix[np.diag_indices_from(matrix)] += alpha_sq + np.abs(u_complex) ** 2 * n_s
    return 0.25 * matrix


def inverse_moment_matrix_general(alpha_sq, u_complex, n_s: float, chi) -> np.ndarray:
    """Inverse moment matrix for general phases (assembled from Gamma and G)."""
    alpha_sq = np.asarray(alpha_sq, dtype=float)
    u_complex = np.asarray(u_complex, dtype=complex)
    chi = np.asarray(chi, dtype=float)
    u_abs_sq = np.abs(u_complex) ** 2
    den = _slope_denominators(alpha_sq, u_abs_sq * n_s)
    e2r = squeeze_factor(n_s)
    re, im = _phase_projected(u_complex, chi)
    amp = np.sqrt(alpha_sq)
    wi = amp * im / den
    wr = amp * re / den
    matrix = (e2r - 1.0) * np.outer(wi, wi) + (1.0 / e2r - 1.0) * np.outer(wr, wr)
    matrix[np.diag_indices_from(matrix)] += (alpha_sq + u_abs_sq * n_s) / den ** 2
    return matrix


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------


def _complex_from_json(x):
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return complex(x[0], x[1])
    raise ValueError(f"cannot interpret {x!r} as a (possibly complex) number")


def entangled_config_from_json(document: str | dict) -> EntangledConfig:
    """Load an entangled configuration from a JSON document.

    Keys: ``d``, ``alpha_sq`` (array), ``n_s``, optional ``chi`` (array),
    and either ``u_tilde`` (real array) or ``unitary``/``port``/``signs``
    (matrix entries may be numbers or ``[re, im]`` pairs).
    """
    doc = json.loads(document) if isinstance(document, str) else document
    d = int(doc["d"])
    alpha_sq = np.asarray(doc["alpha_sq"], dtype=float)
    n_s = float(doc["n_s"])
    chi = np.asarray(doc["chi"], dtype=float) if "chi" in doc else None
    if "u_tilde" in doc:
        circuit = CircuitVector(np.asarray(doc["u_tilde"], dtype=float))
    else:
        unitary = np.array(
            [[_complex_from_json(x) for x in row] for row in doc["unitary"]]
        )
        circuit = circuit_vector_from_unitary(
            unitary, int(doc["port"]), np.asarray(doc["signs"], dtype=float)
        )
    return EntangledConfig(
        d=d,
        circuit=circuit,
        coherent_intensities=alpha_sq,
        squeezed_photons=n_s,
        phase_mismatch=chi,
    )


def entangled_config_to_json(config: EntangledConfig) -> dict:
    doc = {
        "d": config.d,
        "u_tilde": config.circuit.entries.tolist(),
        "alpha_sq": config.coherent_intensities.tolist(),
        "n_s": config.squeezed_photons,
    }
    if not config.is_phase_matched:
        doc["chi"] = config.phase_mismatch.tolist()
    return doc
