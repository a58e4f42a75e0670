"""Tests of the four figures of merit for linear phase combinations."""

import json
import math

import numpy as np
import pytest

from mznet.errors import SingularInformation
from mznet.estimation import (
    SensitivityReport,
    variance_emom,
    variance_eqcr,
    variance_smom,
    variance_sqcr,
)
from mznet.network_model import (
    CircuitVector,
    CoefficientVector,
    EntangledConfig,
    SeparableConfig,
    inverse_moment_matrix,
)


def balanced_config():
    return EntangledConfig(
        d=2,
        circuit=CircuitVector(np.array([1.0, 1.0]) / math.sqrt(2)),
        coherent_intensities=np.array([100.0, 100.0]),
        squeezed_photons=1.0,
    )


def test_emom_worked_example():
    value = variance_emom(balanced_config(), CoefficientVector.average(2))
    assert value == pytest.approx(8.9176e-4, rel=1e-4)
    assert value == pytest.approx(0.0008917596790677497, rel=1e-12)


def test_emom_is_quadratic_form():
    cfg = balanced_config()
    v = CoefficientVector(np.array([0.6, math.sqrt(0.5 - 0.36)]))
    minv = inverse_moment_matrix(cfg)
    assert variance_emom(cfg, v) == pytest.approx(
        float(v.entries @ minv @ v.entries), rel=1e-14
    )


def test_smom_worked_example():
    cfg = SeparableConfig.from_photon_numbers(
        np.array([100.0, 100.0]), np.array([1.0, 1.0])
    )
    value = variance_smom(cfg, CoefficientVector.average(2))
    e2r = 3.0 + 2.0 * math.sqrt(2.0)
    expected = 0.5 * (100.0 / e2r + 1.0) / 99.0 ** 2
    assert value == pytest.approx(expected, rel=1e-12)


def test_cramer_rao_dominance_per_combination():
    cfg = balanced_config()
    scfg = SeparableConfig.from_photon_numbers(
        np.array([100.0, 100.0]), np.array([1.0, 1.0])
    )
    rng = np.random.default_rng(4)
    for _ in range(20):
        w = rng.normal(size=2)
        v = CoefficientVector(w / np.linalg.norm(w) / math.sqrt(2))
        assert variance_eqcr(cfg, v) <= variance_emom(cfg, v) * (1 + 1e-12)
        assert variance_sqcr(scfg, v) <= variance_smom(scfg, v) * (1 + 1e-12)


def test_eqcr_dead_arm_handling():
    # All light is routed to arm 1; arm 2 carries no information.
    cfg = EntangledConfig(
        d=2, circuit=CircuitVector(np.array([1.0, 0.0])),
        coherent_intensities=np.array([50.0, 0.0]), squeezed_photons=2.0,
    )
    live = variance_eqcr(cfg, CoefficientVector.single_phase(2, 0))
    e2r = 1.0 + 4.0 + 2.0 * math.sqrt(6.0)
    assert live == pytest.approx(0.5 / (50.0 * e2r + 2.0), rel=1e-10)
    with pytest.raises(SingularInformation):
        variance_eqcr(cfg, CoefficientVector.average(2))


def test_sqcr_dead_arm_handling():
    cfg = SeparableConfig.from_photon_numbers(
        np.array([50.0, 0.0]), np.array([2.0, 0.0])
    )
    live = variance_sqcr(cfg, CoefficientVector.single_phase(2, 0))
    assert live > 0
    with pytest.raises(SingularInformation):
        variance_sqcr(cfg, CoefficientVector.average(2))


def test_vector_length_validation():
    with pytest.raises(ValueError):
        variance_emom(balanced_config(), CoefficientVector.average(3))


def test_report_json():
    report = SensitivityReport(emom=1e-3, eqcr=9e-4, v=(0.5, 0.5))
    doc = json.loads(report.to_json())
    assert doc["emom"] == 1e-3
    assert doc["eqcr"] == 9e-4
    assert "smom" not in doc
    assert doc["v"] == [0.5, 0.5]
