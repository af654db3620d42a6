from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .core import DEFAULT_SEED, DomainError, InputError, NumericalError
from .schemas import GRID_PRESETS, DiskGrid, Majorant
from .series import HarmonicMap, big_lambda, evaluate
from .utils import GridCheck, grid_extremum, halton_disk, ratio_check

logger = logging.getLogger(__name__)

BMO_SEARCH_RADIUS = 0.95
COLONNA_RADIUS = 0.98
COLONNA_SCALES = (0.25, 1e-3)
COLONNA_REFINE_SCALE = 1e-6
COLONNA_CANDIDATES = 8
COLONNA_ITERATIONS = 60
QUAD_TOL = 1e-10
POISSON_CHUNK = 256


def _require_open_disk(*points: complex) -> None:
    for p in points:
        if not abs(p) < 1.0:
            raise DomainError(f"point hors du disque ouvert: {p}")


def hyperbolic_distance(z: complex, w: complex) -> float:
    """sigma(z, w) = arctanh |(z - w)/(1 - conj(z) w)|; les deux formes fermées doivent coïncider."""
    _require_open_disk(z, w)
    # |z - w| et |1 - conj(z) w| sont exactement symétriques en (z, w)
    x = abs(z - w) / abs(1.0 - z.conjugate() * w)
    if x == 0.0:
        return 0.0
    a = math.atanh(x)
    b = 0.5 * (math.log1p(x) - math.log1p(-x))
    tol = 1e-13 * max(1.0, 1.0 / (1.0 - x))
    if abs(a - b) > tol * max(1.0, a):
        raise NumericalError(f"formes de sigma en désaccord: {a!r} / {b!r}")
    return a


def hyperbolic_distances(z: np.ndarray, w: np.ndarray) -> np.ndarray:
    x = np.abs(z - w) / np.abs(1.0 - np.conj(z) * w)
    return np.arctanh(x)


def bloch_seminorm(fmap: HarmonicMap, grid: DiskGrid | None = None) -> float:
    """sup (1 - |z|^2) Lambda_f(z) sur le disque fermé."""
    grid = grid or GRID_PRESETS["default"]
    return grid_extremum(lambda z: (1.0 - np.abs(z) ** 2) * big_lambda(fmap, z), 1.0, grid).value


def bloch_norm(fmap: HarmonicMap, grid: DiskGrid | None = None) -> float:
    return abs(complex(evaluate(fmap, 0j))) + bloch_seminorm(fmap, grid)


def _colonna_ratio(fmap: HarmonicMap, z: np.ndarray, w: np.ndarray) -> np.ndarray:
    sigma = hyperbolic_distances(z, w)
    diff = np.abs(evaluate(fmap, z) - evaluate(fmap, w))
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(sigma > 0, diff / sigma, 0.0)


def colonna_ratio_sup(fmap: HarmonicMap, n_pairs: int = 4096, seed: int = DEFAULT_SEED) -> float:
    """
    sup |f(z) - f(w)| / sigma(z, w) estimé par paires quasi-aléatoires,
    puis recherche par motifs autour des meilleures paires.
    Minore (et approche) bloch_seminorm.
    """
    if n_pairs < 1:
        raise DomainError("n_pairs >= 1 requis")
    z, extra = halton_disk(n_pairs, COLONNA_RADIUS, seed, extra=1)
    phi = 2.0 * np.pi * extra[:, 0]
    gap = 1.0 - np.abs(z)

    cand_z, cand_phi, cand_val = [], [], []
    for scale in COLONNA_SCALES:
        w = z + scale * gap * np.exp(1j * phi)
        vals = _colonna_ratio(fmap, z, w)
        top = np.argsort(vals)[::-1][:COLONNA_CANDIDATES]
        cand_z.extend(z[top])
        cand_phi.extend(phi[top])
        cand_val.extend(vals[top])
    best = float(max(cand_val))

    def score(x: float, y: float, p: float) -> float:
        zz = complex(x, y)
        if abs(zz) > COLONNA_RADIUS:
            return -math.inf
        ww = zz + COLONNA_REFINE_SCALE * (1.0 - abs(zz)) * complex(math.cos(p), math.sin(p))
        return float(_colonna_ratio(fmap, np.array([zz]), np.array([ww]))[0])

    for zc, pc in zip(cand_z, cand_phi, strict=True):
        point = np.array([zc.real, zc.imag, pc])
        steps = np.array([0.01, 0.01, 0.1])
        current = score(*point)
        for _ in range(COLONNA_ITERATIONS):
            moved = False
            for axis in range(3):
                for sign in (1.0, -1.0):
                    trial = point.copy()
                    trial[axis] += sign * steps[axis]
                    v = score(*trial)
                    if v > current:
                        point, current, moved = trial, v, True
            if not moved:
                steps /= 2.0
        best = max(best, current)
    logger.debug("colonna: sup empirique %.10g", best)
    return best


def poisson_kernel(theta, z: complex):
    """P(e^{i theta}, z) = (1 - |z|^2)/|e^{i theta} - z|^2."""
    _require_open_disk(z)
    return (1.0 - abs(z) ** 2) / np.abs(np.exp(1j * np.asarray(theta)) - z) ** 2


@dataclass(frozen=True, eq=False)
class BoundaryFunction:
    values: np.ndarray
    radius: float | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        n = v.size
        if v.ndim != 1 or n < 64 or n & (n - 1):
            raise InputError(f"échantillons de bord: puissance de 2 >= 64 requise, reçu {n}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def angles(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.values.size) / self.values.size


def boundary_trace(fmap: HarmonicMap, r: float, n_samples: int = 1024) -> BoundaryFunction:
    """psi_r(theta) = f(r e^{i theta})."""
    if not 0.0 < r < 1.0:
        raise DomainError(f"rayon invalide: {r}")
    theta = 2.0 * np.pi * np.arange(n_samples) / n_samples
    return BoundaryFunction(evaluate(fmap, r * np.exp(1j * theta)), radius=r)


def _kernel_matrix(boundary: BoundaryFunction, z: np.ndarray) -> np.ndarray:
    e = np.exp(1j * boundary.angles)[None, :]
    zz = z[:, None]
    return (1.0 - np.abs(zz) ** 2) / np.abs(e - zz) ** 2


def poisson_extension(boundary: BoundaryFunction, z):
    """Intégrale de Poisson par trapèzes uniformes; z scalaire ou tableau, |z| < 1."""
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(np.abs(zs) >= 1.0):
        raise DomainError("point hors du disque ouvert")
    flat = zs.ravel()
    out = np.empty(flat.size, dtype=complex)
    for i in range(0, flat.size, POISSON_CHUNK):
        P = _kernel_matrix(boundary, flat[i : i + POISSON_CHUNK])
        out[i : i + POISSON_CHUNK] = P @ boundary.values / boundary.values.size
    out = out.reshape(zs.shape)
    return complex(out[0]) if np.ndim(z) == 0 else out


def garsia_quantity(boundary: BoundaryFunction, z: np.ndarray) -> np.ndarray:
    """((1/2pi) int |psi - f_psi(z)|^2 P(e^{i theta}, z) d theta)^{1/2}, vectorisé en z."""
    zs = np.asarray(z, dtype=complex)
    flat = zs.ravel()
    out = np.empty(flat.size)
    n = boundary.values.size
    for i in range(0, flat.size, POISSON_CHUNK):
        P = _kernel_matrix(boundary, flat[i : i + POISSON_CHUNK])
        ext = P @ boundary.values / n
        dev = np.abs(boundary.values[None, :] - ext[:, None]) ** 2
        out[i : i + POISSON_CHUNK] = np.sqrt(np.sum(dev * P, axis=1) / n)
    return out.reshape(zs.shape)


def bmo_norm(boundary: BoundaryFunction, grid: DiskGrid | None = None) -> float:
    grid = grid or GRID_PRESETS["default"]
    return grid_extremum(lambda z: garsia_quantity(boundary, z), BMO_SEARCH_RADIUS, grid).value


def _check_bmo_args(M: float, r: float) -> None:
    if not M > 0.0:
        raise DomainError(f"M > 0 requis, reçu {M}")
    if not 0.0 < r < 1.0:
        raise DomainError(f"rayon invalide: {r}")


def bmo_bound_majorant(M: float, r: float, omega: Majorant) -> float:
    """2 sqrt(omega(1)) M r sqrt(int_0^1 omega(1/(1 - r t)) dt)."""
    _check_bmo_args(M, r)
    inner, err = quad(lambda t: omega(1.0 / (1.0 - r * t)), 0.0, 1.0, epsabs=QUAD_TOL, epsrel=QUAD_TOL)
    logger.debug("borne BMO: intégrale %.15g (erreur %.2g)", inner, err)
    return 2.0 * math.sqrt(omega(1.0)) * M * r * math.sqrt(inner)


def quasiregular_bmo_bound(C: float, K: float, r: float) -> float:
    """2 sqrt(r) sqrt(KC) sqrt|log(1 - r)|."""
    if not C > 0.0 or not K >= 1.0:
        raise DomainError(f"C > 0 et K >= 1 requis, reçu C={C}, K={K}")
    _check_bmo_args(1.0, r)
    return 2.0 * math.sqrt(r) * math.sqrt(K * C) * math.sqrt(abs(math.log1p(-r)))


@dataclass(frozen=True)
class RegularityResult:
    cond1: bool
    cond2: bool
    M1: float
    M2: float
    M_witness: float
    divergent: bool = False


def majorant_regularity_check(omega: Majorant, delta0: float = 1.0, n_samples: int = 32) -> RegularityResult:
    """
    int_0^delta omega(t)/t dt <= M omega(delta) et
    delta int_delta^inf omega(t)/t^2 dt <= M omega(delta), pour delta dans (0, delta0].
    La queue au-delà de T = 1e3 delta est sommée analytiquement (famille puissance).
    """
    if not delta0 > 0.0:
        raise DomainError(f"delta0 > 0 requis, reçu {delta0}")
    beta, c = omega.beta, omega.scale
    divergent = beta >= 1.0

    m1 = m2 = 0.0
    for delta in np.geomspace(1e-6 * delta0, delta0, n_samples):
        w = float(omega(delta))
        # t^(beta-1) en poids algébrique: singularité intégrable en 0
        first, _ = quad(lambda t: c, 0.0, delta, weight="alg", wvar=(beta - 1.0, 0.0), epsabs=0.0, epsrel=QUAD_TOL)
        m1 = max(m1, first / w)
        if divergent:
            continue
        T = 1e3 * delta
        body, _ = quad(lambda t: c * t ** (beta - 2.0), delta, T, epsabs=0.0, epsrel=QUAD_TOL, limit=200)
        tail = c * T ** (beta - 1.0) / (1.0 - beta)
        m2 = max(m2, delta * (body + tail) / w)

    if divergent:
        logger.debug("omega(t) = %g t^%g: queue de la seconde condition divergente", c, beta)
        m2 = math.inf
    return RegularityResult(
        cond1=math.isfinite(m1),
        cond2=not divergent,
        M1=m1,
        M2=m2,
        M_witness=max(m1, m2),
        divergent=divergent,
    )


def _majorant_ratio(fmap: HarmonicMap, omega: Majorant):
    def ratio(z: np.ndarray) -> np.ndarray:
        # |z| peut dépasser 1 d'un ulp sur le bord: poids +inf
        with np.errstate(divide="ignore"):
            weight = omega(1.0 / np.maximum(1.0 - np.abs(z), 0.0))
        return np.where(np.isinf(weight), 0.0, big_lambda(fmap, z) / weight)

    return ratio


def gradient_majorant_check(
    fmap: HarmonicMap, M: float, omega: Majorant, grid: DiskGrid | None = None, radius: float = 1.0
) -> GridCheck:
    """Lambda_f(z) <= M omega(1/(1 - |z|)); le bord (poids infini) est trivialement satisfait."""
    if not M > 0.0:
        raise DomainError(f"M > 0 requis, reçu {M}")
    grid = grid or GRID_PRESETS["default"]
    base = _majorant_ratio(fmap, omega)
    return ratio_check(lambda z: base(z) / M, radius, grid)


def minimal_majorant_constant(fmap: HarmonicMap, omega: Majorant, grid: DiskGrid | None = None) -> float:
    """Plus petit M accepté par gradient_majorant_check sur le maillage."""
    grid = grid or GRID_PRESETS["default"]
    return grid_extremum(_majorant_ratio(fmap, omega), 1.0, grid).value


def quasiregular_gradient_check(
    fmap: HarmonicMap, C: float, K: float, grid: DiskGrid | None = None, r: float = 0.9
) -> GridCheck:
    """Lambda_f(z) <= sqrt(CK)/(1 - |z|) sur le disque fermé D_r."""
    if not C > 0.0 or not K >= 1.0 or math.isinf(K):
        raise DomainError(f"C > 0 et 1 <= K < inf requis, reçu C={C}, K={K}")
    if not 0.0 < r < 1.0:
        raise DomainError(f"rayon invalide: {r}")
    grid = grid or GRID_PRESETS["default"]
    root = math.sqrt(C * K)
    return ratio_check(lambda z: big_lambda(fmap, z) * (1.0 - np.abs(z)) / root, r, grid)
