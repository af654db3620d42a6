"""
Représentation des applications harmoniques f = h + conj(g) par séries
entières tronquées, et données différentielles ponctuelles.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P

from .core import MAX_DEGREE, DomainError, InputError
from .schemas import DiskGrid
from .utils import polar_points

# tolérance sur |z| <= 1 pour les points calculés sur le cercle unité
DOMAIN_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ComplexSeries:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if c.ndim != 1 or c.size == 0:
            raise InputError("série vide ou mal formée")
        if not np.all(np.isfinite(c)):
            raise InputError("coefficients non finis")
        if c.size - 1 > MAX_DEGREE:
            raise InputError(f"degré {c.size - 1} > maximum {MAX_DEGREE}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, z):
        # Horner
        return P.polyval(z, self.coeffs)

    def coefficient(self, n: int) -> complex:
        return complex(self.coeffs[n]) if 0 <= n <= self.degree else 0j

    def derivative(self) -> ComplexSeries:
        d = P.polyder(self.coeffs)
        return ComplexSeries(d if d.size else np.zeros(1, dtype=complex))

    def padded(self, degree: int) -> ComplexSeries:
        if degree <= self.degree:
            return self
        out = np.zeros(degree + 1, dtype=complex)
        out[: self.coeffs.size] = self.coeffs
        return ComplexSeries(out)


@dataclass(frozen=True, eq=False)
class HarmonicMap:
    h: ComplexSeries
    g: ComplexSeries
    label: str = ""
    dh: ComplexSeries = field(init=False, repr=False)
    dg: ComplexSeries = field(init=False, repr=False)

    def __post_init__(self):
        n = max(self.h.degree, self.g.degree)
        object.__setattr__(self, "h", self.h.padded(n))
        object.__setattr__(self, "g", self.g.padded(n))
        object.__setattr__(self, "dh", self.h.derivative())
        object.__setattr__(self, "dg", self.g.derivative())

    @classmethod
    def from_coefficients(cls, h: Sequence[complex], g: Sequence[complex], label: str = "") -> HarmonicMap:
        return cls(ComplexSeries(np.asarray(h, dtype=complex)), ComplexSeries(np.asarray(g, dtype=complex)), label)

    @property
    def degree(self) -> int:
        return self.h.degree


@dataclass(frozen=True)
class LocalData:
    value: complex
    fz: complex
    fzbar: complex
    lambda_big: float
    lambda_small: float
    jacobian: float
    dilatation_mod: float
    degenerate: bool = False

    @property
    def sense_preserving(self) -> bool:
        return self.jacobian > 0


@dataclass(frozen=True)
class SenseCheck:
    passed: bool
    witness: complex | None = None


def check_domain(z, radius: float = 1.0) -> None:
    if np.any(np.abs(z) > radius + DOMAIN_TOL):
        raise DomainError(f"point hors du disque fermé de rayon {radius}")


def evaluate(fmap: HarmonicMap, z):
    """f(z) = h(z) + conj(g(z)); z scalaire ou tableau, |z| <= 1."""
    check_domain(z)
    return fmap.h(z) + np.conj(fmap.g(z))


def derivatives(fmap: HarmonicMap, z) -> tuple[np.ndarray, np.ndarray]:
    """(f_z, f_zbar) = (h'(z), conj(g'(z)))."""
    return fmap.dh(z), np.conj(fmap.dg(z))


def differential(fmap: HarmonicMap, z) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(Lambda_f, lambda_f, J_f) vectorisés."""
    fz, fzbar = derivatives(fmap, z)
    a, b = np.abs(fz), np.abs(fzbar)
    return a + b, np.abs(a - b), (a - b) * (a + b)


def big_lambda(fmap: HarmonicMap, z) -> np.ndarray:
    return np.abs(fmap.dh(z)) + np.abs(fmap.dg(z))


def jacobian(fmap: HarmonicMap, z) -> np.ndarray:
    a, b = np.abs(fmap.dh(z)), np.abs(fmap.dg(z))
    return (a - b) * (a + b)


def dilatation_modulus(fmap: HarmonicMap, z) -> np.ndarray:
    """|g'/h'|; +inf si h' = 0 != g', NaN si les deux s'annulent (ignoré par les sup)."""
    a, b = np.abs(fmap.dh(z)), np.abs(fmap.dg(z))
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(a > 0, b / np.where(a > 0, a, 1.0), np.where(b > 0, np.inf, np.nan))


def local_data(fmap: HarmonicMap, z: complex) -> LocalData:
    check_domain(z)
    fz, fzbar = derivatives(fmap, z)
    a, b = abs(complex(fz)), abs(complex(fzbar))
    degenerate = a == 0 and b == 0
    if degenerate:
        dil = 0.0
    elif a == 0:
        dil = float("inf")
    else:
        dil = b / a
    return LocalData(
        value=complex(evaluate(fmap, z)),
        fz=complex(fz),
        fzbar=complex(fzbar),
        lambda_big=a + b,
        lambda_small=abs(a - b),
        jacobian=(a - b) * (a + b),
        dilatation_mod=dil,
        degenerate=degenerate,
    )


def sense_preserving_on(fmap: HarmonicMap, r: float, grid: DiskGrid) -> SenseCheck:
    """|g'| < |h'| en chaque point du maillage de D_r; sinon renvoie le pire point."""
    if not 0.0 < r <= 1.0:
        raise DomainError(f"rayon invalide: {r}")
    pts = polar_points(r, grid)
    margin = np.abs(fmap.dh(pts)) - np.abs(fmap.dg(pts))
    if np.all(margin > 0):
        return SenseCheck(True)
    idx = np.unravel_index(int(np.argmin(margin)), margin.shape)
    return SenseCheck(False, complex(pts[idx]))


def rescale(fmap: HarmonicMap, r: float) -> HarmonicMap:
    """F(zeta) = f(r zeta) / r."""
    if not 0.0 < r <= 1.0:
        raise DomainError(f"rayon invalide: {r}")
    powers = r ** (np.arange(fmap.degree + 1) - 1.0)
    return HarmonicMap(
        ComplexSeries(fmap.h.coeffs * powers),
        ComplexSeries(fmap.g.coeffs * powers),
        label=f"{fmap.label}@{r:g}",
    )
