import math

import numpy as np
import pytest

from harmap.core import DomainError, InputError
from harmap.norms import (
    BoundaryFunction,
    _majorant_ratio,
    bloch_norm,
    bloch_seminorm,
    bmo_bound_majorant,
    bmo_norm,
    boundary_trace,
    colonna_ratio_sup,
    gradient_majorant_check,
    hyperbolic_distance,
    majorant_regularity_check,
    minimal_majorant_constant,
    poisson_extension,
    poisson_kernel,
    quasiregular_bmo_bound,
    quasiregular_gradient_check,
)
from harmap.area import class_constants
from harmap.schemas import GRID_PRESETS, Majorant
from harmap.series import HarmonicMap
from tests.factories import random_h_map

FAST = GRID_PRESETS["fast"]
EXTREMAL = HarmonicMap.from_coefficients([0, 1], [0, 0, 0.5], label="extremal")
IDENTITY = HarmonicMap.from_coefficients([0, 1], [0], label="identity")
LINEAR = Majorant(beta=1.0)


def test_hyperbolic_distance_examples():
    assert hyperbolic_distance(0.5 + 0j, 0j) == pytest.approx(math.atanh(0.5), rel=1e-15)
    assert hyperbolic_distance(0.3j, 0.3j) == 0.0
    with pytest.raises(DomainError):
        hyperbolic_distance(1 + 0j, 0j)


def test_hyperbolic_distance_symmetric_and_consistent():
    rng = np.random.default_rng(40)
    z = 0.999 * np.sqrt(rng.uniform(size=(10_000, 2))) * np.exp(2j * np.pi * rng.uniform(size=(10_000, 2)))
    for a, b in z:
        assert hyperbolic_distance(complex(a), complex(b)) == hyperbolic_distance(complex(b), complex(a))


def test_hyperbolic_distance_near_rim_is_symmetric():
    z, w = complex(0.9999 * np.exp(0.3j)), complex(0.9999 * np.exp(-0.3j))
    assert hyperbolic_distance(z, w) == hyperbolic_distance(w, z)
    assert hyperbolic_distance(z, w) > 5.0


def test_bloch_norms():
    assert bloch_norm(IDENTITY) == 1.0
    assert bloch_seminorm(EXTREMAL) == pytest.approx(32 / 27, rel=1e-4)
    shifted = HarmonicMap.from_coefficients([0.25, 1], [0])
    assert bloch_norm(shifted) == pytest.approx(1.25)


def test_colonna_ratio_close_to_seminorm():
    assert colonna_ratio_sup(IDENTITY) == pytest.approx(1.0, rel=0.02)
    assert colonna_ratio_sup(EXTREMAL) == pytest.approx(32 / 27, rel=0.02)
    assert colonna_ratio_sup(HarmonicMap.from_coefficients([0.7], [0.1j])) == 0.0


def test_colonna_identity_for_random_maps():
    rng = np.random.default_rng(41)
    for _ in range(20):
        fmap = random_h_map(rng)
        semi = bloch_seminorm(fmap, FAST)
        assert abs(colonna_ratio_sup(fmap) - semi) <= 0.02 * semi


def test_poisson_kernel():
    assert poisson_kernel(0.0, 0j) == 1.0
    assert poisson_kernel(0.0, 0.5 + 0j) == pytest.approx(3.0)
    theta = 2 * np.pi * np.arange(256) / 256
    assert np.mean(poisson_kernel(theta, 0.3 + 0.4j)) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(DomainError):
        poisson_kernel(0.0, 1j)


def test_boundary_function_sample_count():
    with pytest.raises(InputError):
        BoundaryFunction(np.ones(100))
    with pytest.raises(InputError):
        BoundaryFunction(np.ones(32))
    assert BoundaryFunction(np.ones(64)).angles.size == 64


def test_poisson_extension_reproduces_harmonic_data():
    theta = 2 * np.pi * np.arange(1024) / 1024
    z = 0.3 + 0.4j
    assert poisson_extension(BoundaryFunction(np.exp(1j * theta)), z) == pytest.approx(z, abs=1e-10)
    assert poisson_extension(BoundaryFunction(np.exp(-1j * theta)), z) == pytest.approx(z.conjugate(), abs=1e-10)

    rng = np.random.default_rng(42)
    pts = 0.9 * np.sqrt(rng.uniform(size=100)) * np.exp(2j * np.pi * rng.uniform(size=100))
    ones = poisson_extension(BoundaryFunction(np.ones(1024)), pts)
    assert np.allclose(ones, 1.0, atol=1e-12)


def test_poisson_extension_of_trace_matches_map():
    psi = boundary_trace(EXTREMAL, 0.5)
    z = np.array([0.1 + 0.2j, -0.4j, 0.6])
    assert psi.values.size == 1024
    assert psi.radius == 0.5
    # l'extension de la trace est f(r z)
    assert np.allclose(poisson_extension(psi, z), EXTREMAL.h(0.5 * z) + np.conj(EXTREMAL.g(0.5 * z)), atol=1e-12)


def test_bmo_identity_and_constant():
    assert bmo_norm(boundary_trace(IDENTITY, 0.5)) == pytest.approx(0.5, abs=1e-4)
    const = HarmonicMap.from_coefficients([0.4 + 0.1j], [0])
    assert bmo_norm(boundary_trace(const, 0.5)) <= 1e-12


def test_bmo_bound_values():
    bound = bmo_bound_majorant(1.0, 0.5, LINEAR)
    assert bound == pytest.approx(1.17741, abs=1e-5)
    for r in (0.1, 0.5, 0.9):
        closed = 2 * math.sqrt(r) * math.sqrt(abs(math.log(1 - r)))
        assert bmo_bound_majorant(1.0, r, LINEAR) == pytest.approx(closed, rel=1e-9)
        assert quasiregular_bmo_bound(1.0, 1.0, r) == pytest.approx(closed, rel=1e-12)
    with pytest.raises(DomainError):
        bmo_bound_majorant(1.0, 1.0, LINEAR)


def test_bmo_theorem_extremal():
    M = minimal_majorant_constant(EXTREMAL, LINEAR)
    assert M == pytest.approx(1.0, abs=1e-12)
    norm = bmo_norm(boundary_trace(EXTREMAL, 0.5))
    assert norm <= bmo_bound_majorant(M, 0.5, LINEAR)


def test_bmo_theorem_random_maps():
    rng = np.random.default_rng(43)
    for _ in range(20):
        fmap = random_h_map(rng)
        radii = np.linspace(0.1, 0.9, 9)
        norms = [bmo_norm(boundary_trace(fmap, r), FAST) for r in radii]
        for beta in (0.5, 1.0):
            omega = Majorant(beta=beta)
            M = minimal_majorant_constant(fmap, omega, FAST)
            for r, norm in zip(radii, norms, strict=True):
                assert norm <= bmo_bound_majorant(M, float(r), omega) + 1e-6


@pytest.mark.parametrize(
    ("beta", "M1", "M2"),
    [(0.5, 2.0, 2.0), (0.25, 4.0, 4.0 / 3.0)],
)
def test_majorant_regularity_power_family(beta, M1, M2):
    res = majorant_regularity_check(Majorant(beta=beta))
    assert res.cond1 and res.cond2
    assert not res.divergent
    assert res.M1 == pytest.approx(M1, rel=1e-6)
    assert res.M2 == pytest.approx(M2, rel=1e-6)


def test_majorant_regularity_linear_diverges():
    res = majorant_regularity_check(LINEAR)
    assert res.cond1
    assert res.M1 == pytest.approx(1.0, rel=1e-6)
    assert res.divergent
    assert not res.cond2
    assert math.isinf(res.M2)


def test_gradient_majorant_checks():
    assert gradient_majorant_check(IDENTITY, 1.0, LINEAR).passed
    assert gradient_majorant_check(EXTREMAL, 1.0, LINEAR).passed
    assert not gradient_majorant_check(EXTREMAL, 0.5, LINEAR).passed
    with pytest.raises(DomainError):
        gradient_majorant_check(EXTREMAL, 0.0, LINEAR)


def test_majorant_ratio_vanishes_on_rim():
    z = np.array([complex(np.nextafter(1.0, 2.0)), 1.0 + 0j, 1j, 0.5 + 0j])
    with np.errstate(invalid="raise"):
        ratio = _majorant_ratio(EXTREMAL, Majorant(beta=0.5))(z)
    assert list(ratio[:3]) == [0.0, 0.0, 0.0]
    assert ratio[3] == pytest.approx(1.5 / math.sqrt(2.0), rel=1e-14)


def test_quasiregular_gradient_bound():
    rng = np.random.default_rng(44)
    for _ in range(20):
        fmap = random_h_map(rng)
        cr = class_constants(fmap, FAST)
        assert quasiregular_gradient_check(fmap, cr.C, cr.K_estimate, FAST).passed
