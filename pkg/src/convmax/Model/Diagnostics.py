from __future__ import annotations

from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


class DiameterQuery(BaseModel):
    model_config = ConfigDict(frozen=True)
    delta: float = Field(..., gt=0, lt=1)
    direction: tuple[float, ...]
    p: float = Field(..., ge=1)

    @field_validator("direction")
    @classmethod
    def check_unit(cls, value: tuple[float, ...]) -> tuple[float, ...]:
        if len(value) not in (1, 2):
            raise ValueError("direction must have 1 or 2 components")
        if abs(float(np.linalg.norm(value)) - 1.0) > 1e-12:
            raise ValueError("direction must be a unit vector, got %s" % (value,))
        return value


class LemmaConstants(BaseModel):
    """Explicit constants of the eps1-maximizer diameter bound.

    ``tau``, ``gamma``, ``a``, ``kappa``, ``delta_sharp`` and ``L_sharp``
    are the parameters of the underlying covering lemma before they are
    rounded up to ``delta`` and ``L``.
    """

    model_config = ConfigDict(frozen=True)
    eps1: float
    eps2: float
    delta: float
    L: float
    R: float
    N: float
    eps: float
    tau: float
    gamma: float
    a: float
    kappa: float
    delta_sharp: float
    L_sharp: float

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")


class TightnessReport(BaseModel):
    model_config = ConfigDict(frozen=True)
    per_delta: list[tuple[float, float]]
    escaped: bool

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")


class CubeTightness(BaseModel):
    """Smallest centred cube leaving at most ``delta`` of the mass outside.

    ``side`` is None when no proper sub-cube of the box works.
    """

    model_config = ConfigDict(frozen=True)
    exponent: float
    delta: float
    side: Optional[float]
    escaped: bool
    outside_mass: list[float]

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")
