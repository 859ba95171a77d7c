import math
import logging
from typing import Sequence

import numpy as np

from ..Model.Diagnostics import (
    CubeTightness,
    DiameterQuery,
    LemmaConstants,
    TightnessReport,
)
from ..Model.Exponents import ExponentTriple
from ..Model.Grid import Grid, SampledFunction
from ..Helper.Helper import Helper
from ..Helper.Exceptions import DomainException, InfeasibilityException
from .OperatorFactory import OperatorFactory


MASS_SLACK = 1e-12
NORMALIZATION_TOLERANCE = 1e-8


def sample_directions(dim: int, count: int = 16) -> list[tuple[float, ...]]:
    """Unit directions for the slab search.

    In 1-D these are +1 and -1; in 2-D ``count`` angles evenly spaced over
    [0, pi), since v and -v describe the same slabs.
    """
    if dim == 1:
        return [(1.0,), (-1.0,)]
    angles = np.pi * np.arange(count) / count
    return [(float(np.cos(a)), float(np.sin(a))) for a in angles]


def axis_directions(dim: int) -> list[tuple[float, ...]]:
    return [tuple(float(i == d) for i in range(dim)) for d in range(dim)]


class DiagnosticsFactory:
    """delta-diameters, tightness of sequences and the lemma constants."""

    def __init__(self, log_level: int = logging.INFO) -> None:
        self.logger: logging.Logger = Helper.start_logger(
            self.__class__.__name__, log_level=log_level
        )
        self.operator = OperatorFactory(log_level=log_level)

    def delta_diameter(self, f: SampledFunction, query: DiameterQuery) -> float:
        """Width of the thinnest slab {a < (x, v) < b} holding 1 - delta of |f|^p.

        Slab edges sit on cell edges; a slab covering the sorted projections
        s_i..s_j has width s_j - s_i + h * sum |v_d|.

        Raises:
            InfeasibilityException: If the whole grid holds less than 1 - delta.
        """
        grid = f.grid
        if len(query.direction) != grid.dim:
            raise DomainException("direction of dimension %d" % grid.dim, query.direction)

        direction = np.asarray(query.direction)
        projection = sum(
            c.ravel() * v for c, v in zip(grid.coordinates(), direction)
        )
        masses = np.abs(f.values.ravel()) ** query.p * grid.cell_measure
        target = (1.0 - query.delta) * (1.0 - MASS_SLACK)
        if masses.sum() < target:
            raise InfeasibilityException(
                "grid holds %.6g of the L_p mass, less than 1 - delta = %.6g"
                % (masses.sum(), 1.0 - query.delta)
            )

        order = np.argsort(projection, kind="stable")
        positions = projection[order]
        cumulative = np.concatenate(([0.0], np.cumsum(masses[order])))
        start = np.arange(positions.size)
        stop = np.searchsorted(cumulative, cumulative[:-1] + target, side="left")
        valid = stop <= positions.size
        extent = grid.spacing * np.sum(np.abs(direction))
        widths = positions[stop[valid] - 1] - positions[start[valid]] + extent
        return float(widths.min())

    @staticmethod
    def lemma_constants(
        eps1: float, trip: ExponentTriple, R: float, N: float
    ) -> LemmaConstants:
        """Constants of the diameter bound for eps1-maximizers.

        delta = 6 eps1 / (1 - 2^(1 - r/p)) and L = 8 R eps1^(-p/r); the
        sharper covering-lemma values use tau = eps2 and kappa = 2 tau.
        """
        if not 0 < eps1 < 1.0 / 3.0:
            raise DomainException("0 < eps1 < 1/3", eps1)
        gamma = trip.r / trip.p
        if not gamma > 1:
            raise DomainException("r/p > 1", gamma)
        if not R > 0:
            raise DomainException("R > 0", R)

        eps2 = 3.0 * eps1 / (1.0 + eps1)
        tau = eps2
        kappa = 2.0 * tau
        return LemmaConstants(
            eps1=eps1,
            eps2=eps2,
            delta=6.0 * eps1 / (1.0 - 2.0 ** (1.0 - gamma)),
            L=8.0 * R * eps1 ** (-1.0 / gamma),
            R=R,
            N=N,
            eps=eps1 * N,
            tau=tau,
            gamma=gamma,
            a=R,
            kappa=kappa,
            delta_sharp=2.0 * tau / (1.0 - 2.0 ** (1.0 - gamma)),
            L_sharp=8.0 * R * (kappa - tau) ** (-1.0 / gamma),
        )

    def check_diameter_bound(
        self,
        f: SampledFunction,
        constants: LemmaConstants,
        trip: ExponentTriple,
        directions: int = 16,
    ) -> bool:
        """Whether every sampled direction gives a delta-diameter <= L."""
        if constants.delta >= 1:
            return True

        for direction in sample_directions(f.grid.dim, directions):
            query = DiameterQuery(delta=constants.delta, direction=direction, p=trip.p)
            diameter = self.delta_diameter(f, query)
            if diameter > constants.L:
                self.logger.info(
                    "Diameter %.6g along %s exceeds L=%.6g", diameter, direction, constants.L
                )
                return False
        return True

    def tightness_report(
        self, sequence: Sequence[SampledFunction], p: float, deltas: Sequence[float]
    ) -> TightnessReport:
        """Sup over the sequence and the axis directions, per delta.

        A query that cannot be satisfied on the grid marks the sequence as
        escaped and counts with the full box width.
        """
        if not sequence:
            raise DomainException("non-empty sequence", 0)
        for j, f in enumerate(sequence):
            norm = f.lp_norm(p)
            if abs(norm - 1.0) > NORMALIZATION_TOLERANCE:
                self.logger.warning("Element %d has ||f||_p = %.6g, not 1", j, norm)

        grid = sequence[0].grid
        escaped = False
        per_delta = []
        for delta in sorted(deltas):
            widest = 0.0
            for direction in axis_directions(grid.dim):
                query = DiameterQuery(delta=delta, direction=direction, p=p)
                for f in sequence:
                    try:
                        diameter = self.delta_diameter(f, query)
                    except InfeasibilityException:
                        escaped = True
                        diameter = 2.0 * grid.half_width
                    widest = max(widest, diameter)
            per_delta.append((float(delta), widest))

        self.logger.info("Tightness report: %s (escaped=%s)", per_delta, escaped)
        return TightnessReport(per_delta=per_delta, escaped=escaped)

    @staticmethod
    def cube_sides(grid: Grid) -> list[float]:
        """Proper centred sub-cube sides h * 2^j of the box."""
        count = int(math.log2(grid.points_per_axis))
        return [grid.spacing * 2**j for j in range(count) if 2**j < grid.points_per_axis]

    def cube_tightness(
        self, sequence: Sequence[SampledFunction], exponent: float, delta: float
    ) -> CubeTightness:
        """Smallest centred cube Q with sup_j of the mass of |g_j|^exponent outside Q at most delta."""
        if not sequence:
            raise DomainException("non-empty sequence", 0)
        grid = sequence[0].grid
        reach = np.max(np.abs(np.stack(grid.coordinates())), axis=0)

        outside_mass = []
        for side in self.cube_sides(grid):
            outside = reach > side / 2.0
            worst = max(
                float(np.sum(np.abs(g.values[outside]) ** exponent) * grid.cell_measure)
                for g in sequence
            )
            outside_mass.append(worst)
            if worst <= delta:
                return CubeTightness(
                    exponent=exponent,
                    delta=delta,
                    side=side,
                    escaped=False,
                    outside_mass=outside_mass,
                )

        self.logger.info("No proper sub-cube keeps the outside mass below %s", delta)
        return CubeTightness(
            exponent=exponent,
            delta=delta,
            side=None,
            escaped=True,
            outside_mass=outside_mass,
        )

    def tightness_under_kernel(
        self,
        k: SampledFunction,
        sequence: Sequence[SampledFunction],
        trip: ExponentTriple,
        delta: float,
    ) -> CubeTightness:
        """``cube_tightness`` of g_j = k * f_j in L_r."""
        images = [self.operator.convolve(k, f) for f in sequence]
        return self.cube_tightness(images, trip.r, delta)
