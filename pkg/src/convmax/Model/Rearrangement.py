from __future__ import annotations

from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class StepRearrangement(BaseModel):
    """Piecewise constant decreasing rearrangement f*.

    ``levels[j]`` is the value of f* on [breakpoints[j], breakpoints[j+1]).
    Breakpoints are cell_measure times integer cell counts.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)
    breakpoints: np.ndarray
    levels: np.ndarray
    cell_measure: float

    @model_validator(mode="after")
    def check_shape(self) -> "StepRearrangement":
        if self.breakpoints.size != self.levels.size + 1:
            raise ValueError("need one more breakpoint than levels")
        if np.any(np.diff(self.breakpoints) <= 0):
            raise ValueError("breakpoints must increase strictly")
        if np.any(self.levels <= 0) or np.any(np.diff(self.levels) > 0):
            raise ValueError("levels must be positive and nonincreasing")
        return self

    @property
    def total_measure(self) -> float:
        return float(self.breakpoints[-1])

    def measure_above(self, level: float) -> float:
        """Measure of {f* > level}, read off the steps."""
        count = int(np.count_nonzero(self.levels > level))
        return float(self.breakpoints[count])

    def to_dict(self) -> dict:
        return {
            "breakpoints": self.breakpoints.tolist(),
            "levels": self.levels.tolist(),
            "total_measure": self.total_measure,
        }


class Verdict(str, Enum):
    MEMBER = "member"
    NONMEMBER_SMALL_T = "nonmember_small_t"
    NONMEMBER_LARGE_T = "nonmember_large_t"
    INCONCLUSIVE = "inconclusive"


class TailThresholds(BaseModel):
    """Ladder densities and thresholds of the tail diagnostics."""

    model_config = ConfigDict(frozen=True)
    points_per_decade: int = Field(32, ge=4)
    tail_points: Optional[int] = Field(None, ge=2)
    member_ratio: float = Field(0.1, gt=0, lt=1)
    cross_check_tolerance: float = Field(0.1, gt=0)

    @property
    def tail_length(self) -> int:
        """Ladder entries per tail, one decade unless set explicitly."""
        return self.tail_points or self.points_per_decade

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")


class TailDiagnostics(BaseModel):
    """Both tail forms of t^(1/q) f*(t) and lambda^q d_f(lambda).

    Every tail is ordered toward its limit: ``small_t_tail`` runs toward
    t -> 0, ``large_t_tail`` toward t -> infinity, ``lambda_form_small``
    toward lambda -> infinity and ``lambda_form_large`` toward lambda -> 0.
    """

    model_config = ConfigDict(frozen=True)
    q: float
    weak_norm: float
    small_t_tail: list[tuple[float, float]]
    large_t_tail: list[tuple[float, float]]
    lambda_form_small: list[tuple[float, float]]
    lambda_form_large: list[tuple[float, float]]
    cross_check_mismatch: float
    verdict: Verdict

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")
