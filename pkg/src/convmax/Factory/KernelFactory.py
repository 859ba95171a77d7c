import math
import logging

import numpy as np
from pydantic import ValidationError
from scipy.integrate import quad

from ..Model.Grid import Grid, SampledFunction
from ..Model.Kernel import KernelKind, KernelSpec
from ..Helper.Helper import Cache, Helper
from ..Helper.Exceptions import SamplesFileException


class KernelFactory:
    """Factory class turning kernel specs into sampled functions."""

    def __init__(self, log_level: int = logging.INFO) -> None:
        """Initialize the KernelFactory.

        Args:
            log_level (int, optional): The logging level. Defaults to logging.INFO.
        """
        self.logger: logging.Logger = Helper.start_logger(
            self.__class__.__name__, log_level=log_level
        )
        self.cache = Cache()
        self.__builders = {
            KernelKind.POWER: self.__power,
            KernelKind.POWER_TRUNCATED: self.__power_truncated,
            KernelKind.POWER_CAPPED: self.__power_capped,
            KernelKind.GAUSSIAN: self.__gaussian,
            KernelKind.INDICATOR: self.__indicator,
        }

    def materialize(self, spec: KernelSpec, grid: Grid) -> SampledFunction:
        """Sample ``spec`` at the cell centres of ``grid``.

        Power kernels get the exact cell average of |x|^(-n/q) in the origin
        cell instead of the (infinite) centre value.

        Raises:
            SamplesFileException: For ``samples`` specs whose file is
                missing or does not match the grid.
        """
        if spec.kind == KernelKind.SAMPLES:
            return self.read_samples(spec.params["path"], grid)

        key = "%s|%s" % (spec, grid.model_dump_json())
        if key in self.cache:
            return self.cache.get(key)

        values = self.__builders[spec.kind](spec.params, grid)
        self.logger.debug("Materialized %s on %s", spec, grid)
        return self.cache.set(key, SampledFunction(grid=grid, values=values))

    @staticmethod
    def origin_cell_average(a: float, grid: Grid) -> float:
        """Average of |x|^(-a) over the origin cell, 0 < a < dim.

        In 2-D the square splits into eight triangles
        0 <= theta <= pi/4, 0 <= rho <= (h/2)/cos(theta).
        """
        half = grid.spacing / 2.0
        if grid.dim == 1:
            return half ** (-a) / (1.0 - a)

        correction, _ = quad(lambda t: math.cos(t) ** (a - 2.0) - 1.0, 0.0, math.pi / 4)
        integral = 8.0 * half ** (2.0 - a) / (2.0 - a) * (math.pi / 4 + correction)
        return integral / grid.spacing**2

    def __power(self, params: dict, grid: Grid) -> np.ndarray:
        a = grid.dim / params["q"]
        radius = grid.radius()
        values = np.where(radius > 0, radius, 1.0) ** (-a)
        values[grid.origin_index] = self.origin_cell_average(a, grid)
        return values

    def __power_truncated(self, params: dict, grid: Grid) -> np.ndarray:
        values = self.__power(params, grid)
        values[grid.radius() > params["R"]] = 0.0
        return values

    def __power_capped(self, params: dict, grid: Grid) -> np.ndarray:
        return np.minimum(self.__power(params, grid), params["M"])

    def __gaussian(self, params: dict, grid: Grid) -> np.ndarray:
        return np.exp(-(grid.radius() ** 2) / (2.0 * params["sigma"] ** 2))

    def __indicator(self, params: dict, grid: Grid) -> np.ndarray:
        return (grid.radius() <= params["radius"]).astype(np.float64)

    def read_samples(self, path: str, grid: Grid) -> SampledFunction:
        """Read a ``x[,y],value`` CSV written row-major by grid index."""
        header, table = Helper.read_csv(path)
        columns = ["x", "y"][: grid.dim]
        if header != columns + ["value"]:
            raise SamplesFileException(
                ValueError(
                    "header %s does not match %s" % (header, columns + ["value"])
                ),
                path,
            )
        if table.shape != (grid.size, grid.dim + 1):
            raise SamplesFileException(
                ValueError(
                    "%d rows for a grid of %d cells" % (table.shape[0], grid.size)
                ),
                path,
            )

        coordinates = table[:, : grid.dim]
        if not self.__is_row_major(coordinates):
            raise SamplesFileException(
                ValueError("coordinates are not monotone in row-major order"),
                path,
            )
        expected = np.column_stack([c.ravel() for c in grid.coordinates()])
        if not np.allclose(coordinates, expected, rtol=0, atol=1e-9 * grid.spacing):
            raise SamplesFileException(
                ValueError("coordinates do not match the cell centres of %s" % grid),
                path,
            )

        try:
            f = SampledFunction(grid=grid, values=table[:, -1])
        except ValidationError as e:
            raise SamplesFileException(e, path)

        self.logger.info("Read %d samples from %s", grid.size, path)
        return f

    @staticmethod
    def __is_row_major(coordinates: np.ndarray) -> bool:
        x = coordinates[:, 0]
        if coordinates.shape[1] == 1:
            return bool(np.all(np.diff(x) > 0))

        y = coordinates[:, 1]
        same_row = np.diff(x) == 0
        return bool(
            np.all(np.diff(x) >= 0) and np.all(np.diff(y)[same_row] > 0)
        )

    def write_samples(self, f: SampledFunction, path: str):
        """Write ``f`` in the layout ``read_samples`` expects."""
        columns = ["x", "y"][: f.grid.dim]
        coordinates = [c.ravel() for c in f.grid.coordinates()]
        return Helper.write_csv(
            path, columns + ["value"], coordinates + [f.values.ravel()]
        )
