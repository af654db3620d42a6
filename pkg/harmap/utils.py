from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

from .core import parallel_map
from .schemas import DiskGrid

logger = logging.getLogger(__name__)

PointFunction = Callable[[np.ndarray], np.ndarray]

# nombre de lignes radiales par bloc de calcul
ROW_BLOCK = 16


@dataclass(frozen=True)
class GridExtremum:
    value: float
    point: complex | None


@dataclass(frozen=True)
class GridCheck:
    """Vérifie ratio <= 1 sur le maillage; `max_ratio` est le pire ratio trouvé."""

    passed: bool
    max_ratio: float
    witness: complex | None


def polar_points(radius: float, grid: DiskGrid) -> np.ndarray:
    """Points rho_j e^{i theta_k}, j = 0..n_radial (bord inclus), forme (n_radial+1, n_angular)."""
    rho = radius * np.arange(grid.n_radial + 1) / grid.n_radial
    theta = 2.0 * np.pi * np.arange(grid.n_angular) / grid.n_angular
    return rho[:, None] * np.exp(1j * theta)[None, :]


def circle_points(radius: float, n: int) -> np.ndarray:
    theta = 2.0 * np.pi * np.arange(n) / n
    return radius * np.exp(1j * theta)


def _evaluate_rows(fn: PointFunction, pts: np.ndarray) -> np.ndarray:
    blocks = [pts[i : i + ROW_BLOCK] for i in range(0, pts.shape[0], ROW_BLOCK)]
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.vstack(parallel_map(fn, blocks))


def grid_extremum(fn: PointFunction, radius: float, grid: DiskGrid, maximize: bool = True) -> GridExtremum:
    """
    Sup (ou inf) de fn sur le disque fermé de rayon `radius`.
    Les NaN (points dégénérés) sont ignorés. Chaque raffinement divise
    la maille par deux autour de l'extremum courant.
    """
    sign = 1.0 if maximize else -1.0

    def scored(z: np.ndarray) -> np.ndarray:
        return sign * np.asarray(fn(z), dtype=float)

    pts = polar_points(radius, grid)
    vals = _evaluate_rows(scored, pts)
    if np.all(np.isnan(vals)):
        return GridExtremum(math.nan, None)

    j, k = np.unravel_index(int(np.nanargmax(vals)), vals.shape)
    best, best_z = float(vals[j, k]), complex(pts[j, k])
    rho0 = radius * j / grid.n_radial
    th0 = 2.0 * np.pi * k / grid.n_angular
    d_rho = radius / grid.n_radial
    d_th = 2.0 * np.pi / grid.n_angular
    offsets = np.arange(-2, 3) / 2.0

    for depth in range(grid.refine_depth):
        rhos = np.clip(rho0 + d_rho * offsets, 0.0, radius)
        ths = th0 + d_th * offsets
        local = rhos[:, None] * np.exp(1j * ths)[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            lv = scored(local)
        d_rho /= 2.0
        d_th /= 2.0
        if np.all(np.isnan(lv)):
            continue
        a, b = np.unravel_index(int(np.nanargmax(lv)), lv.shape)
        if lv[a, b] > best:
            best, best_z = float(lv[a, b]), complex(local[a, b])
            rho0, th0 = float(rhos[a]), float(ths[b])
        logger.debug("raffinement %d: extremum %.12g", depth + 1, sign * best)

    return GridExtremum(sign * best, best_z)


def ratio_check(ratio: PointFunction, radius: float, grid: DiskGrid, tol: float = 1e-9) -> GridCheck:
    ext = grid_extremum(ratio, radius, grid)
    if math.isnan(ext.value):
        return GridCheck(True, 0.0, None)
    return GridCheck(ext.value <= 1.0 + tol, ext.value, ext.point)


def halton_disk(n: int, radius: float, seed: int, extra: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """
    n points quasi-aléatoires (Halton brouillé) uniformes en aire dans D_radius,
    plus `extra` coordonnées uniformes dans [0, 1).
    """
    sampler = qmc.Halton(d=2 + extra, scramble=True, seed=seed)
    u = sampler.random(n)
    z = radius * np.sqrt(u[:, 0]) * np.exp(2j * np.pi * u[:, 1])
    return z, u[:, 2:]


def winding_number(curve: np.ndarray, center: complex = 0.0) -> int:
    """Somme des incréments d'argument d'une courbe fermée échantillonnée."""
    shifted = np.asarray(curve) - center
    steps = np.angle(np.roll(shifted, -1) / shifted)
    return int(round(float(np.sum(steps)) / (2.0 * np.pi)))


def turning_number(curve: np.ndarray) -> int:
    edges = np.roll(curve, -1) - curve
    return winding_number(edges)
