"""
Constantes et bornes des trois estimations de coefficients (classes H(C),
quasi-régulière, H_alpha(C)), lemmes auxiliaires et vérification d'une
application donnée contre ces bornes.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from .area import ClassReport, class_constants, schwarz_distortion, weighted_dirichlet_sum
from .core import DomainError, HypothesisError
from .schemas import GRID_PRESETS, DiskGrid
from .series import ComplexSeries, HarmonicMap, big_lambda, rescale
from .utils import GridCheck, grid_extremum, ratio_check

logger = logging.getLogger(__name__)

# r0 = 1/phi, aussi le pas de la section dorée
R0 = (math.sqrt(5.0) - 1.0) / 2.0
E_CONST = math.e
SUP_TOL = 1e-12


@dataclass(frozen=True)
class BoundConstants:
    r0: float
    Q: float
    e_const: float
    C: float
    K: float = 1.0
    alpha: float = 0.0


@dataclass(frozen=True)
class MinimizeResult:
    t: float
    value: float
    converged: bool
    iterations: int


@dataclass(frozen=True)
class CoefficientCheck:
    passed: bool
    worst_index: int
    worst_ratio: float
    sup_modulus: float


@dataclass(frozen=True)
class BoundRow:
    n: int
    theorem: str
    value: float
    bound: float

    @property
    def margin(self) -> float:
        return self.bound - self.value


@dataclass
class BoundsReport:
    constants: ClassReport
    rows: list[BoundRow] = field(default_factory=list)
    skipped: dict[str, str] = field(default_factory=dict)
    dirichlet_sum: float | None = None

    @property
    def violations(self) -> list[BoundRow]:
        return [row for row in self.rows if row.margin < -SUP_TOL * max(1.0, row.bound)]

    @property
    def area_chain_ok(self) -> bool:
        if self.dirichlet_sum is None:
            return True
        return self.dirichlet_sum <= self.constants.C * (1.0 + SUP_TOL) + SUP_TOL

    @property
    def passed(self) -> bool:
        return not self.violations and self.area_chain_ok


def _require_positive(name: str, value: float) -> None:
    if not value > 0.0 or not math.isfinite(value):
        raise DomainError(f"{name} doit être > 0, reçu {value}")


def _check_index(n: int, lowest: int = 1) -> None:
    if n < lowest:
        raise DomainError(f"indice n >= {lowest} requis, reçu {n}")


def unit_radius_objective(r: float) -> float:
    """(1+r)/(r^2 (1-r)), minimale en r0 = (sqrt 5 - 1)/2."""
    return (1.0 + r) / (r * r * (1.0 - r))


def q_constant(C: float) -> float:
    _require_positive("C", C)
    return math.sqrt(unit_radius_objective(R0) * C)


def bound_constants(C: float, K: float = 1.0, alpha: float = 0.0) -> BoundConstants:
    _require_positive("C", C)
    if K < 1.0:
        raise DomainError(f"K >= 1 requis, reçu {K}")
    if alpha < 0.0:
        raise DomainError(f"alpha >= 0 requis, reçu {alpha}")
    return BoundConstants(r0=R0, Q=q_constant(C), e_const=E_CONST, C=C, K=K, alpha=alpha)


def _growth(n: int) -> float:
    # (1 + 1/(n-1))^(n-1), < e
    return (1.0 + 1.0 / (n - 1)) ** (n - 1)


def minimize_unit_interval(
    objective: Callable[[float], float],
    n_samples: int = 1024,
    xtol: float = 1e-10,
    max_iter: int = 200,
) -> MinimizeResult:
    """
    Infimum sur (0, 1): meilleur point parmi n_samples échantillons, puis
    section dorée sur l'intervalle formé par ses deux voisins.
    """
    ts = np.arange(1, n_samples + 1) / (n_samples + 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.array([objective(float(t)) for t in ts], dtype=float)
    if not np.any(np.isfinite(vals)):
        raise DomainError("objectif non fini sur tout l'échantillon")
    vals[~np.isfinite(vals)] = np.inf
    i = int(np.argmin(vals))
    best_t, best_v = float(ts[i]), float(vals[i])

    a = i / (n_samples + 1.0)
    b = (i + 2) / (n_samples + 1.0)
    x1 = b - R0 * (b - a)
    x2 = a + R0 * (b - a)
    f1, f2 = objective(x1), objective(x2)

    iterations = 0
    converged = False
    while iterations < max_iter:
        if b - a <= xtol * (1.0 + abs(best_t)):
            converged = True
            break
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - R0 * (b - a)
            f1 = objective(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + R0 * (b - a)
            f2 = objective(x2)
        for x, fx in ((x1, f1), (x2, f2)):
            if fx < best_v:
                best_t, best_v = x, fx
        iterations += 1

    if not converged:
        logger.warning("section dorée: pas de convergence après %d itérations (t=%.12g)", max_iter, best_t)
    return MinimizeResult(best_t, best_v, converged, iterations)


def optimal_radius() -> MinimizeResult:
    return minimize_unit_interval(unit_radius_objective)


def bound_HC(C: float, n: int) -> float:
    _require_positive("C", C)
    _check_index(n)
    if n == 1:
        return math.sqrt(2.0 * C)
    return 4.0 * q_constant(C) / (math.pi * R0 ** (n - 1)) * _growth(n)


def envelope_HC(C: float, n: int) -> float:
    """4 Q e / (pi r0^(n-1)), majorant strict de bound_HC pour n >= 2."""
    _check_index(n, 2)
    return 4.0 * q_constant(C) * E_CONST / (math.pi * R0 ** (n - 1))


def bound_quasiregular(C: float, K: float, n: int) -> float:
    _require_positive("C", C)
    if not K >= 1.0:
        raise DomainError(f"K >= 1 requis, reçu {K}")
    _check_index(n)
    root = math.sqrt(C * K)
    if n == 1:
        return root
    return 4.0 * root / math.pi * _growth(n)


def h_alpha_objective(Q: float, alpha: float, n: int) -> Callable[[float], float]:
    def objective(t: float) -> float:
        return (Q * Q - alpha * alpha * (1.0 - t) ** 2) / (t ** (n - 1) * (1.0 - t))

    return objective


def bound_H_alpha(C: float, alpha: float, n: int) -> float:
    Q = q_constant(C)
    if not 0.0 < alpha < Q:
        raise DomainError(f"alpha doit être dans (0, Q(r0)) = (0, {Q:.10g}), reçu {alpha}")
    _check_index(n, 2)
    res = minimize_unit_interval(h_alpha_objective(Q, alpha, n))
    return res.value / (n * R0 ** (n - 1) * Q)


def envelope_H_alpha(C: float, n: int) -> float:
    """(Q/r0^(n-1)) (1+1/(n-1))^(n-1), limite de bound_H_alpha quand alpha -> 0."""
    _check_index(n, 2)
    return q_constant(C) / R0 ** (n - 1) * _growth(n)


def envelope_H_alpha_e(C: float, n: int) -> float:
    _check_index(n, 2)
    return q_constant(C) * E_CONST / R0 ** (n - 1)


def _sup_modulus(fn: Callable[[np.ndarray], np.ndarray], grid: DiskGrid) -> float:
    return grid_extremum(lambda z: np.abs(fn(z)), 1.0, grid).value


def bounded_coeff_lemma_check(fmap: HarmonicMap, M: float, grid: DiskGrid | None = None) -> CoefficientCheck:
    """|c_0| <= M et |a_n| + |b_n| <= 4M/pi pour |f| <= M sur D."""
    _require_positive("M", M)
    grid = grid or GRID_PRESETS["default"]
    sup = _sup_modulus(lambda z: fmap.h(z) + np.conj(fmap.g(z)), grid)
    if sup > M * (1.0 + SUP_TOL):
        raise HypothesisError(f"sup |f| = {sup:.10g} > M = {M:.10g}")

    c0 = fmap.h.coefficient(0) + fmap.g.coefficient(0).conjugate()
    ratios = [abs(c0) / M]
    limit = 4.0 * M / math.pi
    for n in range(1, fmap.degree + 1):
        ratios.append((abs(fmap.h.coefficient(n)) + abs(fmap.g.coefficient(n))) / limit)
    worst = int(np.argmax(ratios))
    return CoefficientCheck(ratios[worst] <= 1.0 + SUP_TOL, worst, float(ratios[worst]), sup)


def schwarz_coeff_check(series: ComplexSeries, grid: DiskGrid | None = None) -> CoefficientCheck:
    """|c_0|^2 + |c_n| <= 1 pour une fonction analytique de D dans D."""
    grid = grid or GRID_PRESETS["default"]
    sup = _sup_modulus(series, grid)
    if sup > 1.0 + SUP_TOL:
        raise HypothesisError(f"sup |psi| = {sup:.10g} > 1")
    c0sq = abs(series.coefficient(0)) ** 2
    ratios = [c0sq + abs(series.coefficient(n)) for n in range(1, max(series.degree, 1) + 1)]
    worst = int(np.argmax(ratios))
    return CoefficientCheck(ratios[worst] <= 1.0 + SUP_TOL, worst + 1, float(ratios[worst]), sup)


def verify_map_bounds(fmap: HarmonicMap, grid: DiskGrid | None = None) -> BoundsReport:
    """
    Compare |a_n| + |b_n| à chaque borne applicable. Une borne dont
    l'hypothèse échoue est sautée avec sa raison.
    """
    grid = grid or GRID_PRESETS["default"]
    cr = class_constants(fmap, grid)
    report = BoundsReport(constants=cr)
    coeff = [abs(fmap.h.coefficient(n)) + abs(fmap.g.coefficient(n)) for n in range(fmap.degree + 1)]

    if cr.C <= 0.0:
        for name in ("H(C)", "quasiregular", "H_alpha(C)"):
            report.skipped[name] = "aire nulle (C = 0)"
        return report

    if cr.in_H:
        for n in range(1, fmap.degree + 1):
            value = cr.alpha if n == 1 else coeff[n]
            report.rows.append(BoundRow(n, "H(C)", value, bound_HC(cr.C, n)))
        report.dirichlet_sum = weighted_dirichlet_sum(fmap)
    else:
        report.skipped["H(C)"] = "application hors de la classe H"

    if math.isfinite(cr.K_estimate):
        for n in range(1, fmap.degree + 1):
            report.rows.append(BoundRow(n, "quasiregular", coeff[n], bound_quasiregular(cr.C, cr.K_estimate, n)))
    else:
        report.skipped["quasiregular"] = "dilatation non bornée par < 1 sur le disque fermé (K infini)"

    Q = q_constant(cr.C)
    if not cr.in_H:
        report.skipped["H_alpha(C)"] = "application hors de la classe H"
    elif not 0.0 < cr.alpha < Q:
        report.skipped["H_alpha(C)"] = f"alpha = {cr.alpha:.10g} hors de (0, Q(r0)) = (0, {Q:.10g})"
    elif fmap.degree < 2:
        report.skipped["H_alpha(C)"] = "aucun coefficient d'indice n >= 2"
    else:
        for n in range(2, fmap.degree + 1):
            report.rows.append(BoundRow(n, "H_alpha(C)", coeff[n], bound_H_alpha(cr.C, cr.alpha, n)))

    logger.debug("bornes: %d lignes, %d sautées", len(report.rows), len(report.skipped))
    return report


def interior_gradient_check(fmap: HarmonicMap, C: float, r: float, grid: DiskGrid | None = None) -> GridCheck:
    """Lambda_f(z)^2 <= C K(r) / (r - |z|)^2 sur D_r."""
    _require_positive("C", C)
    if not 0.0 < r < 1.0:
        raise DomainError(f"rayon invalide: {r}")
    grid = grid or GRID_PRESETS["default"]
    scale = C * schwarz_distortion(r)

    def ratio(z: np.ndarray) -> np.ndarray:
        return big_lambda(fmap, z) ** 2 * (r - np.abs(z)) ** 2 / scale

    return ratio_check(ratio, r, grid)


def rescaled_gradient_check(fmap: HarmonicMap, C: float, grid: DiskGrid | None = None) -> GridCheck:
    """F(zeta) = f(r0 zeta)/r0 vérifie Lambda_F(zeta) <= Q(r0)/(1 - |zeta|)."""
    grid = grid or GRID_PRESETS["default"]
    F = rescale(fmap, R0)
    Q = q_constant(C)

    def ratio(z: np.ndarray) -> np.ndarray:
        return big_lambda(F, z) * (1.0 - np.abs(z)) / Q

    return ratio_check(ratio, 1.0, grid)
