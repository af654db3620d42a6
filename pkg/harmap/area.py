from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_legendre

from .core import DomainError, HypothesisError, InputError, parallel_map
from .schemas import GRID_PRESETS, DiskGrid
from .series import HarmonicMap, dilatation_modulus, jacobian, sense_preserving_on
from .utils import grid_extremum

logger = logging.getLogger(__name__)

NORMALIZATION_TOL = 1e-12
# rayon utilisé pour tester le disque ouvert
OPEN_DISK_RADIUS = 1.0 - 1e-9
C_RADII = 257
QUAD_RTOL = 1e-9
QUAD_MAX_DOUBLINGS = 3


@dataclass(frozen=True)
class ClassReport:
    in_H: bool
    normalized: bool
    sense_preserving: bool
    alpha: float
    C: float
    K_estimate: float
    sup_dilatation: float
    r_checked: float


def _check_radius(r: float) -> None:
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"rayon hors de [0, 1]: {r}")


def _area_weights(fmap: HarmonicMap) -> np.ndarray:
    n = np.arange(fmap.degree + 1)
    return n * (np.abs(fmap.h.coeffs) ** 2 - np.abs(fmap.g.coeffs) ** 2)


def area_series(fmap: HarmonicMap, r: float) -> float:
    """S_f(r) = sum n(|a_n|^2 - |b_n|^2) r^{2n}, mesure dA = dxdy/pi."""
    _check_radius(r)
    w = _area_weights(fmap)
    return float(np.polynomial.polynomial.polyval(r * r, w))


def _quadrature_once(fmap: HarmonicMap, r: float, n_radial: int, n_angular: int) -> float:
    x, wts = roots_legendre(n_radial)
    rho = 0.5 * r * (x + 1.0)
    wts = 0.5 * r * wts
    theta = 2.0 * np.pi * np.arange(n_angular) / n_angular
    ring = np.exp(1j * theta)

    def ring_mean(i: int) -> float:
        return float(np.mean(jacobian(fmap, rho[i] * ring)))

    means = np.array(parallel_map(ring_mean, range(n_radial)))
    # (1/pi) * int_0^r int_0^{2pi} J rho dtheta drho
    return float(2.0 * np.sum(wts * rho * means))


def area_quadrature(fmap: HarmonicMap, r: float, grid: DiskGrid | None = None) -> float:
    """
    Oracle indépendant de area_series: Gauss-Legendre en rayon, trapèzes en angle.
    Le maillage est doublé jusqu'à accord relatif QUAD_RTOL (au plus 3 fois).
    """
    _check_radius(r)
    grid = grid or GRID_PRESETS["default"]
    if r == 0.0:
        return 0.0
    n_r, n_t = grid.n_radial, grid.n_angular
    prev = _quadrature_once(fmap, r, n_r, n_t)
    for doubling in range(QUAD_MAX_DOUBLINGS):
        n_r, n_t = 2 * n_r, 2 * n_t
        cur = _quadrature_once(fmap, r, n_r, n_t)
        diff = abs(cur - prev)
        logger.debug("quadrature %dx%d: %.15g (écart %.3g)", n_r, n_t, cur, diff)
        if diff <= QUAD_RTOL * max(1.0, abs(cur)):
            return cur
        prev = cur
    logger.warning("quadrature d'aire: pas d'accord à %.0e après %d doublements", QUAD_RTOL, QUAD_MAX_DOUBLINGS)
    return prev


def is_normalized(fmap: HarmonicMap) -> bool:
    """h(0) = g(0) = f_zbar(0) = 0."""
    return max(abs(fmap.h.coefficient(0)), abs(fmap.g.coefficient(0)), abs(fmap.g.coefficient(1))) <= NORMALIZATION_TOL


def schwarz_distortion(r: float) -> float:
    """K(r) = (1+r)/(1-r)."""
    if not 0.0 <= r < 1.0:
        raise DomainError(f"K(r) défini pour 0 <= r < 1, reçu {r}")
    return (1.0 + r) / (1.0 - r)


def sup_dilatation(fmap: HarmonicMap, r: float, grid: DiskGrid) -> float:
    ext = grid_extremum(lambda z: dilatation_modulus(fmap, z), r, grid)
    return 0.0 if math.isnan(ext.value) else ext.value


def class_constants(fmap: HarmonicMap, grid: DiskGrid | None = None, r: float = 1.0) -> ClassReport:
    """
    Constantes de classe du polynôme tronqué: C = max S_f sur [0, 1],
    alpha = |a_1|, K estimé sur le disque fermé de rayon r.
    """
    if fmap.degree < 1:
        raise InputError("degré >= 1 requis pour les constantes de classe")
    if not 0.0 < r <= 1.0:
        raise DomainError(f"rayon invalide: {r}")
    grid = grid or GRID_PRESETS["default"]

    radii = np.linspace(0.0, 1.0, C_RADII)
    areas = np.polynomial.polynomial.polyval(radii**2, _area_weights(fmap))
    C = float(np.max(areas))

    s = sup_dilatation(fmap, r, grid)
    K = math.inf if s >= 1.0 - NORMALIZATION_TOL else (1.0 + s) / (1.0 - s)

    normalized = is_normalized(fmap)
    sp = sense_preserving_on(fmap, OPEN_DISK_RADIUS, grid).passed
    return ClassReport(
        in_H=normalized and sp,
        normalized=normalized,
        sense_preserving=sp,
        alpha=abs(fmap.h.coefficient(1)),
        C=C,
        K_estimate=K,
        sup_dilatation=s,
        r_checked=r,
    )


def area_monotonicity_check(fmap: HarmonicMap, samples: int = 101, grid: DiskGrid | None = None) -> bool:
    if samples < 2:
        raise DomainError("au moins 2 rayons requis")
    grid = grid or GRID_PRESETS["default"]
    sense = sense_preserving_on(fmap, OPEN_DISK_RADIUS, grid)
    if not sense.passed:
        raise HypothesisError(f"application non directe (témoin {sense.witness})")
    radii = np.linspace(0.0, 1.0, samples)
    s = np.polynomial.polynomial.polyval(radii**2, _area_weights(fmap))
    slack = 1e-14 * max(1.0, float(np.max(np.abs(s))))
    return bool(np.all(np.diff(s) >= -slack))


def weighted_dirichlet_sum(fmap: HarmonicMap) -> float:
    """sum n/(n+1) |a_n|^2, aire de (1-|z|^2)|h'|^2 sur D; minore C pour f dans H."""
    n = np.arange(fmap.degree + 1)
    return float(np.sum(n / (n + 1.0) * np.abs(fmap.h.coeffs) ** 2))
