import logging

import numpy as np

from ..Model.Exponents import ExponentTriple
from ..Model.Grid import SampledFunction
from ..Model.Decomposition import Decomposition, HlsConstant
from ..Helper.Helper import Helper
from ..Helper.Exceptions import (
    DegenerateInputException,
    DomainException,
    InfeasibilityException,
)
from .RearrangementFactory import geometric_ladder


LEVEL_POINTS_PER_DECADE = 64
CORE_TOLERANCE = 1e-12


class DecompositionFactory:
    """Truncation of a kernel into a bounded compactly supported core.

    The parts u (large values), w (small values of v = k - u) and z (far
    field of y = v - w) each carry an operator norm bound, and
    bound_total = (2C + 1) eps bounds the operator with kernel k - core.

    Notes:
        w cuts the small values of v, not of u, and the ladder condition is
        lambda^q d(lambda) < (eps/C)^q; core = k - (u + w + z).
    """

    def __init__(self, log_level: int = logging.INFO) -> None:
        self.logger: logging.Logger = Helper.start_logger(
            self.__class__.__name__, log_level=log_level
        )

    @staticmethod
    def level_cut_above(k: SampledFunction, M: float) -> SampledFunction:
        """u = k where |k| > M, else 0."""
        if not M > 0:
            raise DomainException("M > 0", M)
        return k.with_values(np.where(np.abs(k.values) > M, k.values, 0.0))

    @staticmethod
    def level_cut_below(v: SampledFunction, delta_level: float) -> SampledFunction:
        """w = v where 0 < |v| < delta_level, else 0."""
        if not delta_level > 0:
            raise DomainException("delta_level > 0", delta_level)
        magnitude = np.abs(v.values)
        keep = (magnitude > 0) & (magnitude < delta_level)
        return v.with_values(np.where(keep, v.values, 0.0))

    @staticmethod
    def __level_ladder(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Ladder over the positive magnitudes and the sorted magnitudes."""
        magnitudes = np.sort(np.abs(values).ravel())
        positive = magnitudes[magnitudes > 0]
        ladder = geometric_ladder(positive[0], positive[-1], LEVEL_POINTS_PER_DECADE)
        return ladder, magnitudes

    @staticmethod
    def __weak_profile(
        ladder: np.ndarray, magnitudes: np.ndarray, q: float, cell_measure: float
    ) -> np.ndarray:
        """lambda^q d(lambda) with the strict distribution function."""
        above = magnitudes.size - np.searchsorted(magnitudes, ladder, side="right")
        return ladder**q * cell_measure * above

    def choose_thresholds(
        self,
        k: SampledFunction,
        trip: ExponentTriple,
        eps: float,
        C: HlsConstant = HlsConstant(),
    ) -> tuple[float, float, float]:
        """Scan the level ladders for M and delta_level, then the radii for R.

        Raises:
            InfeasibilityException: If lambda^q d_v(lambda) already fails at
                the smallest sampled level while v still reaches the box
                edge, so no delta_level exists on this grid.
        """
        if not eps > 0:
            raise DomainException("eps > 0", eps)
        if k.is_zero():
            raise DegenerateInputException("kernel is identically zero")

        q = trip.q
        cell_measure = k.grid.cell_measure
        target = (eps / C.C) ** q

        ladder, magnitudes = self.__level_ladder(k.values)
        holds = self.__weak_profile(ladder, magnitudes, q, cell_measure) < target
        failing = np.flatnonzero(~holds)
        M = float(ladder[failing[-1] + 1] if failing.size else ladder[0])

        v = k.values - self.level_cut_above(k, M).values
        if not np.any(v):
            delta_level = M
        else:
            ladder, magnitudes = self.__level_ladder(v)
            holds = self.__weak_profile(ladder, magnitudes, q, cell_measure) < target
            if holds[0]:
                failing = np.flatnonzero(~holds)
                delta_level = float(
                    ladder[failing[0] - 1] if failing.size else ladder[-1]
                )
            elif self.__reaches_edge(k.with_values(v)):
                raise InfeasibilityException(
                    "lambda^q d_v(lambda) = %.6g >= (eps/C)^q = %.6g at the "
                    "smallest sampled level %.6g and v does not vanish at the "
                    "box edge; the kernel shows no decay toward small levels "
                    "(eps=%s, C=%s)"
                    % (
                        self.__weak_profile(ladder[:1], magnitudes, q, cell_measure)[0],
                        target,
                        ladder[0],
                        eps,
                        C.C,
                    )
                )
            else:
                # below min |v| the profile is lambda^q |supp v|
                support = cell_measure * np.count_nonzero(v)
                delta_level = float(min(ladder[0], (target / support) ** (1.0 / q)))

        y = v - self.level_cut_below(k.with_values(v), delta_level).values
        R = self.__choose_radius(k.with_values(y), q, eps)

        self.logger.info(
            "Thresholds for eps=%s: M=%.6g delta_level=%.6g R=%.6g", eps, M, delta_level, R
        )
        return M, delta_level, R

    @staticmethod
    def __reaches_edge(v: SampledFunction) -> bool:
        """Whether v is nonzero in an outermost cell of the box."""
        values = v.values
        for axis in range(values.ndim):
            first = np.take(values, 0, axis=axis)
            last = np.take(values, -1, axis=axis)
            if np.any(first) or np.any(last):
                return True
        return False

    @staticmethod
    def __choose_radius(y: SampledFunction, q: float, eps: float) -> float:
        """Smallest cell-centre radius with the L_q mass beyond it below eps^q."""
        radii, inverse = np.unique(y.grid.radius().ravel(), return_inverse=True)
        mass = np.bincount(
            inverse, weights=np.abs(y.values.ravel()) ** q, minlength=radii.size
        ) * y.grid.cell_measure
        # beyond[j] = mass at radii strictly larger than radii[j]
        beyond = np.append(np.cumsum(mass[::-1])[::-1][1:], 0.0)
        return float(radii[np.argmax(beyond < eps**q)])

    def decompose(
        self,
        k: SampledFunction,
        trip: ExponentTriple,
        eps: float,
        C: HlsConstant = HlsConstant(),
    ) -> Decomposition:
        """Build u, w, z and the core from disjoint cell masks.

        Every cell of k lands in exactly one part, so u + w + z + core
        reproduces k exactly.
        """
        M, delta_level, R = self.choose_thresholds(k, trip, eps, C)

        magnitude = np.abs(k.values)
        in_u = magnitude > M
        in_w = ~in_u & (magnitude > 0) & (magnitude < delta_level)
        in_z = ~in_u & ~in_w & (k.grid.radius() > R)
        in_core = ~(in_u | in_w | in_z)

        def part(mask):
            return k.with_values(np.where(mask, k.values, 0.0))

        complement = part(~in_core)
        z = part(in_z)
        decomposition = Decomposition(
            u=part(in_u),
            w=part(in_w),
            z=z,
            core=part(in_core),
            M=M,
            delta_level=delta_level,
            R=R,
            eps=eps,
            hls_constant=C,
            bound_u=C.C * eps,
            bound_w=C.C * eps,
            bound_z=eps,
            bound_total=(2.0 * C.C + 1.0) * eps,
            z_norm=z.lp_norm(trip.q),
            complement_norm=complement.lp_norm(trip.q),
        )
        self.logger.info(
            "Decomposition certificate: bound_total=%.6g (C=%s, %s)",
            decomposition.bound_total,
            C.C,
            C.provenance.value,
        )
        return decomposition

    @staticmethod
    def verify_core(
        core: SampledFunction, M: float, delta_level: float, R: float
    ) -> bool:
        """Check boundedness by M + delta_level and support in |x| <= R."""
        bound = (M + delta_level) * (1.0 + CORE_TOLERANCE)
        bounded = bool(np.max(np.abs(core.values)) <= bound)
        slack = CORE_TOLERANCE * max(R, core.grid.spacing)
        outside = core.grid.radius() > R + slack
        return bounded and not np.any(core.values[outside])

    @staticmethod
    def reconstruct(decomposition: Decomposition) -> SampledFunction:
        parts = decomposition.parts.values()
        values = sum(p.values for p in parts)
        return decomposition.core.with_values(values)

    @staticmethod
    def complement(decomposition: Decomposition) -> SampledFunction:
        """The kernel k - core = u + w + z."""
        d = decomposition
        return d.u.with_values(d.u.values + d.w.values + d.z.values)

