from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import roots_legendre

from .area import OPEN_DISK_RADIUS, is_normalized, schwarz_distortion
from .core import DEFAULT_SEED, DomainError, HypothesisError
from .norms import majorant_regularity_check
from .schemas import GRID_PRESETS, DiskGrid, Majorant
from .series import HarmonicMap, big_lambda, derivatives, evaluate, jacobian, sense_preserving_on
from .utils import (
    GridCheck,
    circle_points,
    grid_extremum,
    halton_disk,
    polar_points,
    ratio_check,
    turning_number,
    winding_number,
)

logger = logging.getLogger(__name__)

MIN_PAIR_GAP = 1e-12
CLOSE_SCALE = 1e-3
FLAT_RTOL = 1e-12
FLAT_FRACTION = 0.01
IDENTITY_TOL = 1e-10
J_FLOOR = 1e-14
SEGMENT_NODES = 16


class LipschitzVariant(str, Enum):
    FULL = "full"
    MODULUS = "modulus"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class LipschitzEstimate:
    constant: float
    variant: LipschitzVariant
    r: float
    n_pairs: int


@dataclass(frozen=True)
class PairSet:
    z: np.ndarray
    w: np.ndarray
    on_boundary: np.ndarray


def pair_set(r: float, n_pairs: int, seed: int) -> PairSet:
    """
    Paires partagées par les trois variantes: points de Halton de D_r couplés
    à un autre point intérieur, à un voisin proche et à deux points de bord.
    """
    if not 0.0 < r < 1.0:
        raise DomainError(f"rayon invalide: {r}")
    if n_pairs < 2:
        raise DomainError("n_pairs >= 2 requis")
    z, extra = halton_disk(n_pairs, r, seed, extra=1)
    phase = np.exp(2j * np.pi * extra[:, 0])

    close = z + CLOSE_SCALE * r * phase
    over = np.abs(close) > r
    close[over] = r * close[over] / np.abs(close[over])
    radial = np.where(np.abs(z) > 0, r * z / np.where(np.abs(z) > 0, np.abs(z), 1.0), r)

    zs = np.concatenate([z, z, z, z])
    ws = np.concatenate([np.roll(z, 1), close, r * phase, radial])
    boundary = np.concatenate([np.zeros(2 * n_pairs, bool), np.ones(2 * n_pairs, bool)])
    keep = np.abs(zs - ws) >= MIN_PAIR_GAP
    return PairSet(zs[keep], ws[keep], boundary[keep])


def _estimate(fmap: HarmonicMap, omega: Majorant, pairs: PairSet, variant: LipschitzVariant) -> float:
    z, w = pairs.z, pairs.w
    if variant is LipschitzVariant.BOUNDARY:
        z, w = z[pairs.on_boundary], w[pairs.on_boundary]
    fz, fw = evaluate(fmap, z), evaluate(fmap, w)
    if variant is LipschitzVariant.FULL:
        num = np.abs(fz - fw)
    else:
        num = np.abs(np.abs(fz) - np.abs(fw))
    return float(np.max(num / omega(np.abs(z - w)), initial=0.0))


def lipschitz_estimate(
    fmap: HarmonicMap,
    omega: Majorant,
    r: float,
    variant: LipschitzVariant | str = LipschitzVariant.FULL,
    n_pairs: int = 4096,
    seed: int = DEFAULT_SEED,
) -> LipschitzEstimate:
    """Max de |f(z) - f(w)| / omega(|z - w|) (ou de son analogue en |f|): minore la vraie constante."""
    variant = LipschitzVariant(variant)
    pairs = pair_set(r, n_pairs, seed)
    return LipschitzEstimate(_estimate(fmap, omega, pairs, variant), variant, r, n_pairs)


@dataclass(frozen=True)
class EquivalenceReport:
    full: float
    modulus: float
    boundary: float
    K_r: float
    chain_constant: float
    chain: GridCheck
    implied_constant: float

    @property
    def nested(self) -> bool:
        # tolérance relative d'arrondi
        slack = 1.0 - FLAT_RTOL
        return self.full >= slack * self.modulus and self.modulus >= slack * self.boundary

    @property
    def passed(self) -> bool:
        return self.chain.passed and self.nested


def _segment_integral(fmap: HarmonicMap, z: np.ndarray, w: np.ndarray) -> np.ndarray:
    x, wts = roots_legendre(SEGMENT_NODES)
    t = 0.5 * (x + 1.0)
    pts = z[:, None] + t[None, :] * (w - z)[:, None]
    return 0.5 * np.abs(w - z) * (big_lambda(fmap, pts) @ wts)


def equivalence_witness(
    fmap: HarmonicMap,
    omega: Majorant,
    r: float,
    grid: DiskGrid | None = None,
    n_pairs: int = 4096,
    seed: int = DEFAULT_SEED,
) -> EquivalenceReport:
    """
    Chaîne quantitative de l'équivalence: Lambda_f(z) <= 6 M3 K(r) omega(d)/d,
    d = r - |z|, M3 la constante module-vers-bord.
    """
    grid = grid or GRID_PRESETS["default"]
    if not is_normalized(fmap):
        raise HypothesisError("hypothèse: h(0) = g(0) = f_zbar(0) = 0")
    sense = sense_preserving_on(fmap, r, grid)
    if not sense.passed:
        raise HypothesisError(f"application non directe sur D_{r:g} (témoin {sense.witness})")
    if not majorant_regularity_check(omega).cond1:
        raise HypothesisError("omega ne vérifie pas la première condition de régularité")

    pairs = pair_set(r, n_pairs, seed)
    full = _estimate(fmap, omega, pairs, LipschitzVariant.FULL)
    modulus = _estimate(fmap, omega, pairs, LipschitzVariant.MODULUS)
    boundary = _estimate(fmap, omega, pairs, LipschitzVariant.BOUNDARY)

    K = schwarz_distortion(r)
    chain_constant = 6.0 * boundary * K

    def ratio(z: np.ndarray) -> np.ndarray:
        d = r - np.abs(z)
        rhs = chain_constant * omega(np.where(d > 0, d, 1.0)) / np.where(d > 0, d, 1.0)
        return np.where(d > 0, big_lambda(fmap, z) / rhs, 0.0)

    chain = ratio_check(ratio, r, grid) if chain_constant > 0 else GridCheck(False, math.inf, None)

    # segments vers le bord de D_r restent dans le disque fermé
    seg = _segment_integral(fmap, pairs.z, pairs.w)
    implied = float(np.max(seg / omega(np.abs(pairs.z - pairs.w)), initial=0.0))
    logger.debug("équivalence: M=%.6g/%.6g/%.6g chaîne=%.6g", full, modulus, boundary, chain.max_ratio)
    return EquivalenceReport(full, modulus, boundary, K, chain_constant, chain, implied)


def schwarz_pick_ratio(fmap: HarmonicMap, K: float, z) -> np.ndarray:
    """Lambda_f(z) (1 - |z|^2) / (K (1 - |f(z)|^2))."""
    return big_lambda(fmap, z) * (1.0 - np.abs(z) ** 2) / (K * (1.0 - np.abs(evaluate(fmap, z)) ** 2))


def schwarz_pick_check(fmap: HarmonicMap, K: float, grid: DiskGrid | None = None, r: float = 0.99) -> GridCheck:
    if not K >= 1.0:
        raise DomainError(f"K >= 1 requis, reçu {K}")
    if not 0.0 < r <= 1.0:
        raise DomainError(f"rayon invalide: {r}")
    grid = grid or GRID_PRESETS["default"]

    sup_f = grid_extremum(lambda z: np.abs(evaluate(fmap, z)), r, grid).value
    if sup_f >= 1.0:
        raise HypothesisError(f"f n'envoie pas D dans D: sup |f| = {sup_f:.10g}")

    def distortion(z: np.ndarray) -> np.ndarray:
        fz, fzbar = derivatives(fmap, z)
        a, b = np.abs(fz), np.abs(fzbar)
        return (a + b) / np.abs(a - b)

    dist = grid_extremum(distortion, r, grid).value
    if dist > K * (1.0 + IDENTITY_TOL):
        raise HypothesisError(f"Lambda/lambda = {dist:.10g} > K = {K:.10g}")
    return ratio_check(lambda z: schwarz_pick_ratio(fmap, K, z), r, grid)


@dataclass(frozen=True)
class ConvexityResult:
    passed: bool
    failing_radius: float | None = None
    inconclusive: bool = False


def _curve_convex(curve: np.ndarray) -> tuple[bool, bool]:
    """(convexe, non concluant) pour une courbe fermée échantillonnée."""
    edges = np.roll(curve, -1) - curve
    cross = np.imag(np.conj(edges) * np.roll(edges, -1))
    centroid = curve.mean()
    scale = float(np.max(np.abs(curve - centroid)))
    flat = np.abs(cross) <= FLAT_RTOL * scale * scale
    if np.mean(flat) > FLAT_FRACTION:
        return False, True
    signs = np.sign(cross[~flat])
    one_sign = bool(np.all(signs > 0) or np.all(signs < 0))
    simple = abs(winding_number(curve, centroid)) == 1 and abs(turning_number(curve)) == 1
    return one_sign and simple, False


def fully_convex_check(fmap: HarmonicMap, radii: Sequence[float], n_boundary: int = 4096) -> ConvexityResult:
    """Image de chaque cercle |z| = r convexe: produits vectoriels de même signe et courbe simple."""
    if n_boundary < 64:
        raise DomainError("n_boundary >= 64 requis")
    for r in radii:
        if not 0.0 < r < 1.0:
            raise DomainError(f"rayon invalide: {r}")
        convex, inconclusive = _curve_convex(evaluate(fmap, circle_points(r, n_boundary)))
        if inconclusive:
            logger.debug("convexité non concluante en r=%g", r)
            return ConvexityResult(False, r, inconclusive=True)
        if not convex:
            return ConvexityResult(False, r)
    return ConvexityResult(True)


@dataclass(frozen=True)
class SandwichResult:
    passed: bool
    lower_ratio: float
    upper_ratio: float
    real_part_max: float
    real_part_bound: float
    h_collisions: int
    n_pairs: int

    @property
    def real_part_ok(self) -> bool:
        return self.real_part_max <= self.real_part_bound + IDENTITY_TOL


def sandwich_check(
    fmap: HarmonicMap,
    r: float,
    n_pairs: int = 10_000,
    seed: int = DEFAULT_SEED,
    grid: DiskGrid | None = None,
    ladder: int = 8,
) -> SandwichResult:
    """
    |f(z2) - f(z1)|/(1+r) <= |h(z2) - h(z1)| <= |f(z2) - f(z1)|/(1-r) sur D_r,
    pour f dans H pleinement convexe. Ratios <= 1 attendus.
    """
    if not 0.0 < r < 1.0:
        raise DomainError(f"rayon invalide: {r}")
    grid = grid or GRID_PRESETS["default"]
    if not is_normalized(fmap) or not sense_preserving_on(fmap, OPEN_DISK_RADIUS, grid).passed:
        raise HypothesisError("application hors de la classe H")
    convex = fully_convex_check(fmap, np.linspace(r / ladder, r, ladder))
    if not convex.passed:
        raise HypothesisError(f"convexité non vérifiée en r = {convex.failing_radius}")

    pairs = pair_set(r, n_pairs, seed)
    z1, z2 = pairs.z, pairs.w
    df = evaluate(fmap, z2) - evaluate(fmap, z1)
    dh = fmap.h(z2) - fmap.h(z1)
    dg = fmap.g(z2) - fmap.g(z1)
    adf, adh = np.abs(df), np.abs(dh)

    scale = float(np.max(np.abs(fmap.h(polar_points(r, grid)))))
    collisions = int(np.sum(adh <= MIN_PAIR_GAP * max(scale, 1.0)))
    live = adh > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        lower = float(np.max(adf[live] / ((1.0 + r) * adh[live]), initial=0.0))
        upper = float(np.max(adh * (1.0 - r) / adf, initial=0.0))
        real_part = float(np.max(np.real(np.conj(dg) / df), initial=-math.inf))
    ok = lower <= 1.0 + IDENTITY_TOL and upper <= 1.0 + IDENTITY_TOL and collisions == 0
    return SandwichResult(ok, lower, upper, real_part, r / (1.0 + r), collisions, int(z1.size))


@dataclass(frozen=True)
class IdentityCheck:
    passed: bool
    max_residual: float
    n_points: int


def _real_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrice réelle 2x2 de v -> a v + b conj(v)."""
    return np.stack(
        [
            np.stack([a.real + b.real, b.imag - a.imag], axis=-1),
            np.stack([a.imag + b.imag, a.real - b.real], axis=-1),
        ],
        axis=-2,
    )


def inverse_derivative_identity_check(fmap: HarmonicMap, grid: DiskGrid | None = None, points=None) -> IdentityCheck:
    """
    Df . D(f^-1) = I avec (f^-1)_zeta = conj(h')/J et (f^-1)_zetabar = -conj(g')/J.
    Les points où J <= 1e-14 sont ignorés.
    """
    grid = grid or GRID_PRESETS["default"]
    z = polar_points(1.0, grid).ravel() if points is None else np.atleast_1d(np.asarray(points, dtype=complex))
    J = jacobian(fmap, z)
    z = z[J > J_FLOOR]
    J = J[J > J_FLOOR]
    if z.size == 0:
        return IdentityCheck(True, 0.0, 0)
    hp, gp = fmap.dh(z), fmap.dg(z)
    forward = _real_matrix(hp, np.conj(gp))
    inverse = _real_matrix(np.conj(hp) / J, -np.conj(gp) / J)
    residual = float(np.max(np.abs(forward @ inverse - np.eye(2))))
    return IdentityCheck(residual <= IDENTITY_TOL, residual, int(z.size))
