from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .area import class_constants
from .bounds import E_CONST, R0, q_constant
from .core import DEFAULT_SEED, DomainError, HypothesisError, NumericalError, parallel_map
from .schemas import DiskGrid
from .series import HarmonicMap, evaluate, jacobian
from .utils import circle_points, halton_disk, winding_number

logger = logging.getLogger(__name__)

IDENTITY_RTOL = 1e-12
COLLISION_RTOL = 1e-10
WINDING_GUARD = 1e-12
PAIR_BLOCK = 256


@dataclass(frozen=True)
class UnivalenceResult:
    passed: bool
    degenerate: bool = False
    min_separation: float = math.inf
    witness: tuple[complex, complex] | None = None


@dataclass(frozen=True)
class CoveringResult:
    passed: bool
    min_modulus: float
    winding: int | None
    inconclusive: bool = False


@dataclass(frozen=True)
class LandauReport:
    C: float
    alpha: float
    Q: float
    rho: float
    R0: float
    r0rho: float
    univalent_check: bool | None = None
    covering_check: bool | None = None
    univalence: UnivalenceResult | None = None
    covering: CoveringResult | None = None


def landau_radii(C: float, alpha: float) -> LandauReport:
    """
    rho = 1 - 1/sqrt(1 + alpha/(e Q)), R0 = r0 rho (alpha - e Q rho/(1-rho)).
    Le disque certifié par la démonstration est D_{r0 rho}.
    """
    Q = q_constant(C)
    if not 0.0 < alpha < Q:
        raise DomainError(f"alpha doit être dans (0, Q(r0)) = (0, {Q:.10g}), reçu {alpha}")
    eQ = E_CONST * Q
    x = alpha / eQ
    s = math.sqrt(1.0 + x)
    # 1 - 1/s sans annulation pour alpha petit
    rho = x / (s * (s + 1.0))
    R0_ = R0 * rho * (alpha - eQ * rho / (1.0 - rho))

    tie = eQ * rho * (2.0 - rho) / (1.0 - rho) ** 2
    if abs(tie - alpha) > IDENTITY_RTOL * alpha:
        raise NumericalError(f"identité de Landau violée: {tie!r} != {alpha!r}")
    return LandauReport(C=C, alpha=alpha, Q=Q, rho=rho, R0=R0_, r0rho=R0 * rho)


def _closest_pair(values: np.ndarray, start: int) -> tuple[float, int, int]:
    block = values[start : start + PAIR_BLOCK]
    d = np.abs(block[:, None] - values[None, :])
    # seules les paires i < j comptent
    rows = np.arange(start, start + block.size)[:, None]
    d[np.arange(values.size)[None, :] <= rows] = np.inf
    k = int(np.argmin(d))
    i, j = np.unravel_index(k, d.shape)
    return float(d[i, j]), start + int(i), int(j)


def univalence_check(
    fmap: HarmonicMap, radius: float, samples: int = 2000, seed: int = DEFAULT_SEED
) -> UnivalenceResult:
    """
    Substitut numérique (pas une preuve): aucune collision f(z1) = f(z2) parmi
    `samples` points de Halton dans D_radius, et J_f > 0 en chacun.
    """
    if not 0.0 < radius < 1.0:
        raise DomainError(f"rayon invalide: {radius}")
    if samples < 2:
        raise DomainError("au moins 2 points requis")
    z, _ = halton_disk(samples, radius, seed)

    J = jacobian(fmap, z)
    if np.any(J <= 0.0):
        k = int(np.argmin(J))
        logger.debug("point dégénéré ou à sens inverse: z=%s J=%.3g", z[k], J[k])
        return UnivalenceResult(False, degenerate=True, witness=(complex(z[k]), complex(z[k])))

    w = evaluate(fmap, z)
    diameter = math.hypot(np.ptp(w.real), np.ptp(w.imag))
    tol = COLLISION_RTOL * diameter
    best = min(parallel_map(lambda s: _closest_pair(w, s), range(0, samples - 1, PAIR_BLOCK)))
    d, i, j = best
    if d <= tol:
        return UnivalenceResult(False, min_separation=d, witness=(complex(z[i]), complex(z[j])))
    return UnivalenceResult(True, min_separation=d)


def covering_check(
    fmap: HarmonicMap, disk_radius: float, target_radius: float, n_boundary: int = 4096
) -> CoveringResult:
    """f(D_disk) contient D_target si min |f| sur le cercle >= target et l'image fait un tour autour de 0."""
    if not 0.0 < disk_radius < 1.0:
        raise DomainError(f"rayon invalide: {disk_radius}")
    if not target_radius > 0.0:
        raise DomainError(f"rayon cible invalide: {target_radius}")
    curve = evaluate(fmap, circle_points(disk_radius, n_boundary))
    m = float(np.min(np.abs(curve)))
    if m < WINDING_GUARD:
        return CoveringResult(False, m, None, inconclusive=True)
    wn = winding_number(curve)
    ok = wn == 1 and m >= target_radius * (1.0 - WINDING_GUARD)
    return CoveringResult(ok, m, wn)


def landau_report(
    fmap: HarmonicMap,
    C: float | None = None,
    alpha: float | None = None,
    samples: int = 2000,
    n_boundary: int = 4096,
    seed: int = DEFAULT_SEED,
    grid: DiskGrid | None = None,
) -> LandauReport:
    if C is None or alpha is None:
        cr = class_constants(fmap, grid)
        if not cr.in_H:
            raise HypothesisError("le théorème de Landau suppose f dans H")
        C = cr.C if C is None else C
        alpha = cr.alpha if alpha is None else alpha

    radii = landau_radii(C, alpha)
    uni = univalence_check(fmap, radii.r0rho, samples, seed)
    cov = covering_check(fmap, radii.r0rho, radii.R0, n_boundary)
    logger.debug("landau: rho=%.10g univalent=%s couvrant=%s", radii.rho, uni.passed, cov.passed)
    return LandauReport(
        C=radii.C,
        alpha=radii.alpha,
        Q=radii.Q,
        rho=radii.rho,
        R0=radii.R0,
        r0rho=radii.r0rho,
        univalent_check=uni.passed,
        covering_check=cov.passed,
        univalence=uni,
        covering=cov,
    )
