from __future__ import annotations

from typing import TYPE_CHECKING, Annotated, Any, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

if TYPE_CHECKING:
    from .series import HarmonicMap

FiniteFloat = Annotated[float, Field(allow_inf_nan=False)]
Pair = tuple[FiniteFloat, FiniteFloat]


class DiskGrid(BaseModel):
    # Maillage polaire partagé par tous les estimateurs sup/inf/intégrale
    model_config = ConfigDict(frozen=True)

    n_radial: int = Field(64, ge=8)
    n_angular: int = Field(256, ge=16)
    refine_depth: int = Field(2, ge=0)


GRID_PRESETS: dict[str, DiskGrid] = {
    "fast": DiskGrid(n_radial=32, n_angular=128),
    "default": DiskGrid(),
    "precise": DiskGrid(n_radial=128, n_angular=1024),
}


class Majorant(BaseModel):
    """omega(t) = scale * t**beta, 0 < beta <= 1."""

    model_config = ConfigDict(frozen=True)

    family: Literal["power"] = "power"
    beta: float = Field(1.0, gt=0.0, le=1.0)
    scale: float = Field(1.0, gt=0.0)

    def __call__(self, t):
        return self.scale * np.power(t, self.beta)


class Expectations(BaseModel):
    # Valeurs attendues (tests de régression)
    C: Optional[FiniteFloat] = None
    alpha: Optional[FiniteFloat] = None
    K: Optional[float] = None


class MappingSpecFile(BaseModel):
    label: str
    h: list[Pair] = Field(min_length=1)
    g: list[Pair] = Field(min_length=1)
    expected: Optional[Expectations] = None

    def to_map(self) -> HarmonicMap:
        from .series import HarmonicMap

        return HarmonicMap.from_coefficients(
            [complex(re, im) for re, im in self.h],
            [complex(re, im) for re, im in self.g],
            label=self.label,
        )


class CheckOutcome(BaseModel):
    name: str
    passed: bool
    value: Optional[float] = None
    bound: Optional[float] = None
    margin: Optional[float] = None
    detail: Optional[str] = None


class ReportDocument(BaseModel):
    command: str
    input_digest: Optional[str] = None
    seed: Optional[int] = None
    grid: Optional[str] = None
    results: dict[str, Any] = Field(default_factory=dict)
    rows: list[dict[str, Any]] = Field(default_factory=list)
    checks: list[CheckOutcome] = Field(default_factory=list)
    elapsed_seconds: Optional[float] = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)
