"""Générateurs d'applications de test (numpy default_rng et stratégies hypothesis)."""

from __future__ import annotations

import numpy as np
from hypothesis import strategies as st

from harmap.series import HarmonicMap


def _tail(coeffs: np.ndarray, budget: float, start: int) -> np.ndarray:
    # met à l'échelle pour que sum n |c_n| = budget
    n = np.arange(start, start + coeffs.size)
    total = float(np.sum(n * np.abs(coeffs)))
    return coeffs if total == 0.0 else coeffs * (budget / total)


def h_map_from_parts(a_tail, b_tail, a_budget: float, b_budget: float, scale: float, label: str = "") -> HarmonicMap:
    """
    h = z + sum_{n>=2} a_n z^n avec sum n|a_n| <= 0.5, g = sum_{n>=2} b_n z^n avec
    sum n|b_n| <= 0.4: |h'| >= 0.5, |g'| <= 0.4, donc f dans H et |w| <= 0.8 sur D.
    """
    a = _tail(np.asarray(a_tail, dtype=complex), 0.5 * a_budget, 2)
    b = _tail(np.asarray(b_tail, dtype=complex), 0.4 * b_budget, 2)
    h = np.concatenate([[0, 1], a]) * scale
    g = np.concatenate([[0, 0], b]) * scale
    return HarmonicMap.from_coefficients(h, g, label=label)


def _complex_normal(rng: np.random.Generator, size: int) -> np.ndarray:
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)


def random_h_map(rng: np.random.Generator, degree: int = 6) -> HarmonicMap:
    return h_map_from_parts(
        _complex_normal(rng, degree - 1),
        _complex_normal(rng, degree - 1),
        rng.uniform(0.0, 1.0),
        rng.uniform(0.0, 1.0),
        rng.uniform(0.5, 2.0),
        label="random-H",
    )


def random_map(rng: np.random.Generator, degree: int = 8) -> HarmonicMap:
    """Polynôme harmonique quelconque (pas forcément direct)."""
    return HarmonicMap.from_coefficients(
        0.5 * _complex_normal(rng, degree + 1), 0.5 * _complex_normal(rng, degree + 1), label="random"
    )


def random_self_map(rng: np.random.Generator, degree: int = 5) -> HarmonicMap:
    """
    f = a0 + z/2 + ... avec |a0| <= 0.1, sum_{n>=2} n|a_n| <= 0.1 et sum n|b_n| <= 0.2:
    |f| <= 0.9 sur D et |w| <= 0.5.
    """
    a0 = 0.1 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
    a = _tail(_complex_normal(rng, degree - 1), 0.1 * rng.uniform(), 2)
    b = _tail(_complex_normal(rng, degree), 0.2 * rng.uniform(), 1)
    h = np.concatenate([[a0, 0.5], a])
    g = np.concatenate([[0], b])
    return HarmonicMap.from_coefficients(h, g, label="random-self")


def random_convex_map(rng: np.random.Generator, degree: int = 5) -> HarmonicMap:
    """
    h = z + sum a_n z^n, g = sum b_n z^n (n >= 2) avec sum n^2 (|a_n| + |b_n|) <= 0.15:
    la courbure des images de cercles reste positive, f pleinement convexe dans H.
    """
    n2 = np.arange(2, degree + 1) ** 2
    a, b = _complex_normal(rng, degree - 1), _complex_normal(rng, degree - 1)
    a *= 0.1 * rng.uniform() / float(np.sum(n2 * np.abs(a)))
    b *= 0.05 * rng.uniform() / float(np.sum(n2 * np.abs(b)))
    h = np.concatenate([[0, 1], a])
    g = np.concatenate([[0, 0], b])
    return HarmonicMap.from_coefficients(h, g, label="random-convex")


unit_floats =st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False)


@st.composite
def h_maps(draw, max_degree: int = 6) -> HarmonicMap:
    degree = draw(st.integers(2, max_degree))
    a = [complex(draw(unit_floats), draw(unit_floats)) for _ in range(degree - 1)]
    b = [complex(draw(unit_floats), draw(unit_floats)) for _ in range(degree - 1)]
    return h_map_from_parts(
        a,
        b,
        draw(st.floats(0.0, 1.0)),
        draw(st.floats(0.0, 1.0)),
        draw(st.floats(0.5, 2.0)),
        label="hypothesis-H",
    )


@st.composite
def disk_points(draw, radius: float = 0.95) -> complex:
    rho = draw(st.floats(0.0, radius))
    theta = draw(st.floats(0.0, 2.0 * np.pi))
    return complex(rho * np.cos(theta), rho * np.sin(theta))
