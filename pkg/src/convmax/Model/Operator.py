from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

from .Grid import SampledFunction


class SeedProfile(str, Enum):
    """Starting functions of the power iteration."""

    GAUSSIAN = "gaussian"
    NARROW = "narrow"
    WIDE = "wide"
    OFFSET = "offset"
    RANDOM = "random"
    ALL = "all"


class OperatorNormEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)
    value: float
    trajectory: list[float]
    iterations: int
    converged: bool
    rel_change_at_stop: float

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")


class MaximizerResult(BaseModel):
    """Unit-norm candidate f with its estimate of ||K_k||_{p->r}.

    ``iterates`` is filled only when the caller asked to keep the
    normalized iterates, for tightness reports over the trajectory.
    """

    model_config = ConfigDict(frozen=True)
    f: SampledFunction
    estimate: OperatorNormEstimate
    eps1_level: float = Field(..., ge=0, le=1)
    seed_profile: SeedProfile = SeedProfile.GAUSSIAN
    iterates: list[SampledFunction] = []

    @property
    def phi(self) -> float:
        return self.estimate.value

    def to_dict(self) -> dict:
        return {
            "estimate": self.estimate.to_dict(),
            "eps1_level": self.eps1_level,
            "seed_profile": self.seed_profile.value,
        }
