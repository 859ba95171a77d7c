from __future__ import annotations

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..Helper.Exceptions import DomainException, GridMismatchException

logger = logging.getLogger(__name__)


class Grid(BaseModel):
    """Uniform centred grid on the box [-half_width, half_width]^dim.

    Cell centres on every axis sit at (i - N/2) * h with h = 2 * half_width / N,
    so the origin is the centre of cell N/2.
    """

    model_config = ConfigDict(frozen=True)
    dim: int = Field(1, ge=1, le=2)
    half_width: float = Field(..., gt=0)
    points_per_axis: int = Field(..., ge=8)

    @field_validator("points_per_axis")
    @classmethod
    def check_even(cls, value: int) -> int:
        if value % 2:
            raise ValueError("points_per_axis must be even, got %d" % value)
        return value

    @model_validator(mode="after")
    def warn_non_power_of_two(self) -> "Grid":
        n = self.points_per_axis
        if n & (n - 1):
            logger.warning(
                "points_per_axis=%d is not a power of two; FFTs will be slower", n
            )
        return self

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.points_per_axis

    @property
    def cell_measure(self) -> float:
        return (2.0 * self.half_width / self.points_per_axis) ** self.dim

    @property
    def box_measure(self) -> float:
        return (2.0 * self.half_width) ** self.dim

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points_per_axis,) * self.dim

    @property
    def size(self) -> int:
        return self.points_per_axis**self.dim

    @property
    def origin_index(self) -> tuple[int, ...]:
        return (self.points_per_axis // 2,) * self.dim

    def axis(self) -> np.ndarray:
        """Cell centres along one axis."""
        n = self.points_per_axis
        return (np.arange(n) - n // 2) * self.spacing

    def coordinates(self) -> tuple[np.ndarray, ...]:
        return np.meshgrid(*([self.axis()] * self.dim), indexing="ij")

    def radius(self) -> np.ndarray:
        """Euclidean distance of every cell centre to the origin."""
        if self.dim == 1:
            return np.abs(self.axis())
        x, y = self.coordinates()
        return np.hypot(x, y)

    def index_radius_squared(self) -> np.ndarray:
        """Squared cell-centre radius in units of the spacing, as integers."""
        offsets = np.arange(self.points_per_axis) - self.points_per_axis // 2
        grids = np.meshgrid(*([offsets] * self.dim), indexing="ij")
        return sum(g.astype(np.int64) ** 2 for g in grids)

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")


class SampledFunction(BaseModel):
    """Cell values of a function on a ``Grid``.

    ``values`` is a read-only float array shaped like the grid. Signed values
    are allowed; every value must be finite.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)
    grid: Grid
    values: np.ndarray

    @model_validator(mode="before")
    @classmethod
    def coerce_values(cls, data: dict) -> dict:
        data = dict(data)
        grid = data["grid"]
        if not isinstance(grid, Grid):
            grid = Grid.model_validate(grid)
        values = np.array(data["values"], dtype=np.float64)
        if values.size != grid.size:
            raise ValueError(
                "got %d values for a grid of %d cells" % (values.size, grid.size)
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("sampled values must be finite")
        values = values.reshape(grid.shape)
        values.setflags(write=False)
        data["grid"] = grid
        data["values"] = values
        return data

    def lp_norm(self, p: float) -> float:
        """(sum |value|^p * cell_measure)^(1/p)."""
        if not p >= 1:
            raise DomainException("p >= 1", p)
        a = np.abs(self.values)
        peak = a.max()
        if peak == 0:
            return 0.0
        # scaled by the peak so large p cannot overflow
        return float(
            peak * (np.sum((a / peak) ** p) * self.grid.cell_measure) ** (1.0 / p)
        )

    def with_values(self, values: np.ndarray) -> "SampledFunction":
        return SampledFunction(grid=self.grid, values=values)

    def abs(self) -> "SampledFunction":
        return self.with_values(np.abs(self.values))

    def scaled(self, c: float) -> "SampledFunction":
        return self.with_values(c * self.values)

    def normalized(self, p: float) -> "SampledFunction":
        norm = self.lp_norm(p)
        if norm == 0:
            raise DomainException("||f||_p > 0", 0.0)
        return self.with_values(self.values / norm)

    def is_zero(self) -> bool:
        return not np.any(self.values)

    def is_nonnegative(self) -> bool:
        return bool(np.all(self.values >= 0))

    def check_same_grid(self, other: "SampledFunction") -> None:
        if self.grid != other.grid:
            raise GridMismatchException(self.grid, other.grid)

    def to_dict(self) -> dict:
        return {
            "grid": self.grid.to_dict(),
            "values": self.values.ravel().tolist(),
        }
