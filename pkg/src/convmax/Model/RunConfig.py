from __future__ import annotations

import itertools
from enum import Enum
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .Decomposition import HlsConstant
from .Exponents import ExponentTriple
from .Grid import Grid
from .Kernel import KernelSpec
from .Operator import SeedProfile
from .Rearrangement import TailThresholds


SCHEMA_VERSION = "1.0"


class Command(str, Enum):
    NORMS = "norms"
    REARRANGE = "rearrange"
    TAILS = "tails"
    DECOMPOSE = "decompose"
    OPNORM = "opnorm"
    MAXIMIZE = "maximize"
    DIAMETER = "diameter"
    TIGHTNESS = "tightness"
    SWEEP = "sweep"


class RunConfig(BaseModel):
    """Validated parameters of one command run.

    Construction parses the kernel spec, the grid and the exponent triple,
    so an invalid combination is rejected before any computation starts.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)
    command: Command
    kernel: str = "gauss:sigma=1"
    function: Optional[str] = None
    dim: int = Field(1, ge=1, le=2)
    grid_points: int = Field(1024, ge=8)
    half_width: float = Field(8.0, gt=0)
    p: float = 2.0
    r: float = 4.0
    q: Optional[float] = Field(None, gt=0)
    s: Optional[float] = Field(None, gt=0)
    T: Optional[float] = Field(None, gt=0)
    eps: float = Field(0.1, gt=0)
    hls_constant: Optional[float] = Field(None, gt=0)
    max_iter: int = Field(500, ge=1)
    tol: float = Field(1e-9, gt=0)
    seed_profile: SeedProfile = SeedProfile.GAUSSIAN
    seed: int = 0
    equal_exponents: bool = False
    deltas: list[float] = [0.05]
    directions: int = Field(16, ge=1)
    sequence_dir: Optional[str] = None
    dump_parts: bool = False
    dump_maximizer: bool = False
    thresholds: TailThresholds = TailThresholds()
    output_dir: str = "."

    @field_validator("deltas")
    @classmethod
    def check_deltas(cls, value: list[float]) -> list[float]:
        if not value:
            raise ValueError("at least one delta is required")
        bad = [d for d in value if not 0 < d < 1]
        if bad:
            raise ValueError("every delta must lie in (0, 1), got %s" % bad)
        return sorted(set(value))

    @model_validator(mode="after")
    def check_preconditions(self) -> "RunConfig":
        KernelSpec.parse(self.kernel)
        if self.function is not None:
            KernelSpec.parse(self.function)
        ExponentTriple.make(self.p, self.r, diagnostic=self.equal_exponents)
        if self.grid_points % 2:
            raise ValueError(
                "grid_points must be even, got %d" % self.grid_points
            )
        return self

    @property
    def grid(self) -> Grid:
        return Grid(
            dim=self.dim,
            half_width=self.half_width,
            points_per_axis=self.grid_points,
        )

    @property
    def triple(self) -> ExponentTriple:
        return ExponentTriple.make(
            self.p, self.r, diagnostic=self.equal_exponents
        )

    @property
    def kernel_spec(self) -> KernelSpec:
        return KernelSpec.parse(self.kernel)

    @property
    def function_spec(self) -> Optional[KernelSpec]:
        return KernelSpec.parse(self.function) if self.function else None

    @property
    def hls(self) -> HlsConstant:
        return HlsConstant.make(self.hls_constant)

    def to_dict(self) -> dict:
        """Resolved configuration as embedded in every artifact.

        The output directory is left out so that artifacts do not depend on
        where they were written.
        """
        data = self.model_dump(mode="json", exclude={"output_dir"})
        data["kernel"] = str(self.kernel_spec)
        if self.function is not None:
            data["function"] = str(self.function_spec)
        data["exponents"] = self.triple.to_dict()
        data["hls"] = self.hls.to_dict()
        return data

    @staticmethod
    def from_dict(obj) -> "RunConfig":
        return RunConfig.model_validate(obj, from_attributes=False)


class SweepConfig(BaseModel):
    """Parameter lists whose cross product forms the sweep cells."""

    model_config = ConfigDict(frozen=True)
    command: Command
    kernels: list[str]
    grid_points: list[int] = [1024]
    half_width: list[float] = [8.0]
    dim: int = Field(1, ge=1, le=2)
    p: list[float] = [2.0]
    r: list[float] = [4.0]
    eps: list[float] = [0.1]
    workers: int = Field(1, ge=1)
    options: dict[str, Any] = {}

    @field_validator("command")
    @classmethod
    def check_command(cls, value: Command) -> Command:
        if value == Command.SWEEP:
            raise ValueError("a sweep cannot run nested sweeps")
        return value

    def cells(self) -> list[dict]:
        """Per-cell RunConfig arguments, in a fixed order."""
        cells = []
        for kernel, points, width, p, r, eps in itertools.product(
            self.kernels,
            self.grid_points,
            self.half_width,
            self.p,
            self.r,
            self.eps,
        ):
            cell = dict(self.options)
            cell.update(
                command=self.command,
                kernel=kernel,
                grid_points=points,
                half_width=width,
                dim=self.dim,
                p=p,
                r=r,
                eps=eps,
            )
            cells.append(cell)
        return cells

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")

    @staticmethod
    def from_dict(obj) -> "SweepConfig":
        return SweepConfig.model_validate(obj, from_attributes=False)
