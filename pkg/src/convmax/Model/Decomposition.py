from __future__ import annotations

from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from .Grid import SampledFunction


class HlsProvenance(str, Enum):
    CONFIGURED = "configured"
    DEFAULT_FORMULA = "default_formula"


class HlsConstant(BaseModel):
    """Constant C of the weak-type Young (Hardy-Littlewood-Sobolev) bound.

    Only its existence is known, so the default is C = 1 and every
    certificate states which value was used.
    """

    model_config = ConfigDict(frozen=True)
    C: float = Field(1.0, gt=0)
    provenance: HlsProvenance = HlsProvenance.DEFAULT_FORMULA

    @staticmethod
    def make(value: Optional[float] = None) -> "HlsConstant":
        if value is None:
            return HlsConstant()
        return HlsConstant(C=value, provenance=HlsProvenance.CONFIGURED)

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")


class Decomposition(BaseModel):
    """Split k = u + w + z + core with per-part operator norm bounds.

    u holds the values above M, w the nonzero values of v = k - u below
    delta_level, z what remains of y = v - w outside radius R, and core is
    bounded by M + delta_level and vanishes outside radius R.
    """

    model_config = ConfigDict(frozen=True)
    u: SampledFunction
    w: SampledFunction
    z: SampledFunction
    core: SampledFunction
    M: float
    delta_level: float
    R: float
    eps: float
    hls_constant: HlsConstant
    bound_u: float
    bound_w: float
    bound_z: float
    bound_total: float
    z_norm: float
    complement_norm: float

    @property
    def parts(self) -> dict[str, SampledFunction]:
        return {"u": self.u, "w": self.w, "z": self.z, "core": self.core}

    def certificate(self) -> dict:
        """The bookkeeping without the sampled parts."""
        return {
            "M": self.M,
            "delta_level": self.delta_level,
            "R": self.R,
            "eps": self.eps,
            "hls_constant": self.hls_constant.to_dict(),
            "bound_u": self.bound_u,
            "bound_w": self.bound_w,
            "bound_z": self.bound_z,
            "bound_total": self.bound_total,
            "bound_total_formula": "(2C+1)*eps",
            "z_norm": self.z_norm,
            "complement_norm": self.complement_norm,
        }

    def to_dict(self) -> dict:
        result = self.certificate()
        result.update({k: v.to_dict() for k, v in self.parts.items()})
        return result
