import math

import numpy as np
import pytest

from harmap.area import (
    area_monotonicity_check,
    area_quadrature,
    area_series,
    class_constants,
    is_normalized,
    schwarz_distortion,
    weighted_dirichlet_sum,
)
from harmap.core import DomainError, HypothesisError, InputError
from harmap.schemas import GRID_PRESETS
from harmap.series import HarmonicMap
from tests.factories import random_h_map, random_map

EXTREMAL = HarmonicMap.from_coefficients([0, 1], [0, 0, 0.5], label="extremal")
IDENTITY = HarmonicMap.from_coefficients([0, 1], [0], label="identity")


def test_area_series_examples():
    assert area_series(EXTREMAL, 0.5) == pytest.approx(0.21875, rel=1e-14)
    assert area_series(IDENTITY, 0.7) == pytest.approx(0.49, rel=1e-14)
    assert area_series(EXTREMAL, 0.0) == 0.0


def test_area_quadrature_examples():
    assert area_quadrature(EXTREMAL, 0.5) == pytest.approx(0.21875, rel=1e-8)
    assert area_quadrature(IDENTITY, 1.0) == pytest.approx(1.0, abs=1e-10)


def test_area_series_matches_quadrature():
    rng = np.random.default_rng(10)
    for _ in range(50):
        fmap = random_map(rng, degree=int(rng.integers(1, 9)))
        for r in np.linspace(0.1, 0.9, 9):
            series = area_series(fmap, r)
            quad = area_quadrature(fmap, r)
            assert abs(series - quad) <= 1e-6 * max(1.0, abs(series))


def test_area_radius_outside_unit_interval():
    with pytest.raises(DomainError):
        area_series(EXTREMAL, 1.5)
    with pytest.raises(DomainError):
        area_quadrature(EXTREMAL, -0.1)


def test_class_constants_extremal():
    cr = class_constants(EXTREMAL)
    assert cr.in_H and cr.normalized and cr.sense_preserving
    assert cr.alpha == 1.0
    assert cr.C == pytest.approx(0.5, abs=1e-12)
    assert math.isinf(cr.K_estimate)

    half = class_constants(EXTREMAL, r=0.5)
    assert half.K_estimate == pytest.approx(3.0, rel=1e-9)


def test_class_constants_identity():
    cr = class_constants(IDENTITY)
    assert (cr.C, cr.alpha, cr.K_estimate) == (1.0, 1.0, 1.0)


def test_class_constants_needs_degree_one():
    with pytest.raises(InputError):
        class_constants(HarmonicMap.from_coefficients([0.3], [0]))


def test_first_coefficient_controlled_by_area():
    assert EXTREMAL.h.coefficient(1) == pytest.approx(math.sqrt(2 * class_constants(EXTREMAL).C))
    rng = np.random.default_rng(11)
    for _ in range(10):
        cr = class_constants(random_h_map(rng), GRID_PRESETS["fast"])
        assert cr.alpha <= math.sqrt(2 * cr.C) * (1 + 1e-12)


def test_normalization():
    assert is_normalized(EXTREMAL)
    assert not is_normalized(HarmonicMap.from_coefficients([0, 1], [0, 0.1]))
    assert not is_normalized(HarmonicMap.from_coefficients([0.1, 1], [0]))


def test_area_monotone_for_sense_preserving_maps():
    assert area_monotonicity_check(EXTREMAL)
    assert area_monotonicity_check(IDENTITY)
    rng = np.random.default_rng(12)
    for _ in range(10):
        assert area_monotonicity_check(random_h_map(rng), grid=GRID_PRESETS["fast"])


def test_area_monotonicity_rejects_reversing_map():
    with pytest.raises(HypothesisError):
        area_monotonicity_check(HarmonicMap.from_coefficients([0, 0, 1], [0, 1]))


def test_schwarz_distortion():
    assert schwarz_distortion(0.5) == 3.0
    assert schwarz_distortion(0.0) == 1.0
    with pytest.raises(DomainError):
        schwarz_distortion(1.0)


def test_local_distortion_below_schwarz_bound():
    rng = np.random.default_rng(13)
    for _ in range(10):
        cr = class_constants(random_h_map(rng), GRID_PRESETS["fast"], r=0.5)
        assert cr.K_estimate <= schwarz_distortion(0.5) * (1 + 1e-9)


def test_weighted_dirichlet_sum_below_area_constant():
    assert weighted_dirichlet_sum(EXTREMAL) == pytest.approx(0.5)
    rng = np.random.default_rng(14)
    for _ in range(10):
        fmap = random_h_map(rng)
        assert weighted_dirichlet_sum(fmap) <= class_constants(fmap, GRID_PRESETS["fast"]).C * (1 + 1e-12)
