"""Sensitivity figures of merit for linear combinations of phases.

Four variances of the combination v . theta, each per single measurement:
moment-based and quantum-Cramer-Rao, for the distributed (entangled) and
the per-arm (separable) strategy.  All are quadratic forms over the
closed-form matrices of :mod:`mznet.network_model`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import SingularInformation
from .network_model import (
    CoefficientVector,
    EntangledConfig,
    SeparableConfig,
    inverse_moment_matrix,
    qfim_inverse,
    separable_qfi_terms,
    separable_variance_terms,
)

__all__ = [
    "SensitivityReport",
    "variance_emom",
    "variance_smom",
    "variance_eqcr",
    "variance_sqcr",
]


def _as_coefficients(v, d: int) -> CoefficientVector:
    vec = v if isinstance(v, CoefficientVector) else CoefficientVector(np.asarray(v, dtype=float))
    if vec.d != d:
        raise ValueError(f"coefficient vector has length {vec.d}, expected {d}")
    return vec


def variance_emom(config: EntangledConfig, v) -> float:
    """Moment-based variance of v . theta for the distributed strategy."""
    vec = _as_coefficients(v, config.d)
    minv = inverse_moment_matrix(config)
    return float(vec.entries @ minv @ vec.entries)


def variance_smom(config: SeparableConfig, v) -> float:
    """Moment-based variance of v . theta for the separable strategy."""
    vec = _as_coefficients(v, config.d)
    terms = separable_variance_terms(config)
    return float(np.sum(vec.entries ** 2 * terms))


def variance_eqcr(config: EntangledConfig, v) -> float:
    """Quantum-Cramer-Rao variance of v . theta for the distributed strategy."""
    vec = _as_coefficients(v, config.d)
    diag = config.coherent_intensities + config.circuit.entries ** 2 * config.squeezed_photons
    dead = diag == 0.0
    if np.any(dead & (vec.entries != 0.0)):
        j = int(np.argmax(dead & (vec.entries != 0.0)))
        raise SingularInformation(f"v has weight on uninformative parameter {j}")
    if np.any(dead):
        # Drop the dead arms: they contribute nothing to the quadratic form.
        keep = ~dead
        sub = EntangledConfig(
            d=int(np.sum(keep)),
            circuit=type(config.circuit)(
                config.circuit.entries[keep]
                / np.linalg.norm(config.circuit.entries[keep])
            ),
            coherent_intensities=config.coherent_intensities[keep],
            squeezed_photons=config.squeezed_photons
            * float(np.sum(config.circuit.entries[keep] ** 2)),
            phase_mismatch=config.phase_mismatch[keep],
        )
        finv = qfim_inverse(sub)
        w = vec.entries[keep]
        return float(w @ finv @ w)
    finv = qfim_inverse(config)
    return float(vec.entries @ finv @ vec.entries)


def variance_sqcr(config: SeparableConfig, v) -> float:
    """Quantum-Cramer-Rao variance of v . theta for the separable strategy."""
    vec = _as_coefficients(v, config.d)
    qfi = separable_qfi_terms(config)
    dead = qfi == 0.0
    if np.any(dead & (vec.entries != 0.0)):
        j = int(np.argmax(dead & (vec.entries != 0.0)))
        raise SingularInformation(f"v has weight on uninformative arm {j}")
    keep = ~dead
    return float(np.sum(vec.entries[keep] ** 2 / qfi[keep]))


@dataclass(frozen=True)
class SensitivityReport:
    """The four figures of merit; entries are None when not computed."""

    emom: float | None = None
    smom: float | None = None
    eqcr: float | None = None
    sqcr: float | None = None
    v: tuple | None = None
    config: dict | None = None

    def to_json(self) -> str:
        doc = {}
        for key in ("emom", "smom", "eqcr", "sqcr"):
            value = getattr(self, key)
            if value is not None:
                doc[key] = value
        if self.v is not None:
            doc["v"] = list(self.v)
        if self.config is not None:
            doc["config"] = self.config
        return json.dumps(doc, indent=2, sort_keys=True)
