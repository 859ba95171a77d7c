import math
import logging

import numpy as np

from ..Model.Grid import SampledFunction
from ..Model.Rearrangement import (
    StepRearrangement,
    TailDiagnostics,
    TailThresholds,
    Verdict,
)
from ..Helper.Helper import Helper
from ..Helper.Exceptions import DegenerateInputException, DomainException


def inclusion_constant(q: float, s: float) -> float:
    """C = (q/s)(1 - 2^(-s/q)), the integral of t^(s/q-1) over [T/2, T] for T = 1."""
    return (q / s) * (1.0 - 2.0 ** (-s / q))


def geometric_ladder(low: float, high: float, points_per_decade: int) -> np.ndarray:
    decades = math.log10(high / low) if high > low else 0.0
    count = max(int(math.ceil(decades * points_per_decade)), 1) + 1
    return np.geomspace(low, high, count)


class RearrangementFactory:
    """Distribution functions, rearrangements and Lorentz quasi-norms.

    All integrals over the rearrangement use the exact closed form on each
    step, never a quadrature in t.
    """

    def __init__(self, log_level: int = logging.INFO) -> None:
        self.logger: logging.Logger = Helper.start_logger(
            self.__class__.__name__, log_level=log_level
        )

    @staticmethod
    def lp_norm(f: SampledFunction, p: float) -> float:
        return f.lp_norm(p)

    @staticmethod
    def distribution_function(f: SampledFunction, level: float) -> float:
        """Measure of {|f| > level}."""
        if not level >= 0:
            raise DomainException("lambda >= 0", level)
        count = np.count_nonzero(np.abs(f.values) > level)
        return f.grid.cell_measure * int(count)

    @staticmethod
    def decreasing_rearrangement(f: SampledFunction) -> StepRearrangement:
        """Sort |values| descending and merge equal neighbours into steps.

        Raises:
            DegenerateInputException: If f vanishes identically.
        """
        magnitudes = np.abs(f.values).ravel()
        magnitudes = magnitudes[magnitudes > 0]
        if magnitudes.size == 0:
            raise DegenerateInputException("f is identically zero")

        ordered = magnitudes[np.argsort(-magnitudes, kind="stable")]
        ends = np.append(np.flatnonzero(np.diff(ordered) != 0) + 1, ordered.size)
        breakpoints = np.concatenate(([0.0], f.grid.cell_measure * ends))
        return StepRearrangement(
            breakpoints=breakpoints,
            levels=ordered[ends - 1],
            cell_measure=f.grid.cell_measure,
        )

    def step_values(
        self, f: SampledFunction, t: np.ndarray, left: bool = False
    ) -> np.ndarray:
        """Evaluate f* at ``t``.

        The right-continuous value is returned by default; ``left`` gives the
        left limit f*(t-). Beyond the support f* is zero.
        """
        t = np.asarray(t, dtype=np.float64)
        if f.is_zero():
            return np.zeros_like(t)
        step = self.decreasing_rearrangement(f)
        return self.__evaluate(step, t, left)

    @staticmethod
    def __evaluate(step: StepRearrangement, t: np.ndarray, left: bool) -> np.ndarray:
        side = "left" if left else "right"
        index = np.searchsorted(step.breakpoints, t, side=side) - 1
        padded = np.append(step.levels, 0.0)
        index = np.clip(index, 0, step.levels.size)
        return padded[index]

    def weak_norm(self, f: SampledFunction, q: float) -> float:
        """sup_t t^(1/q) f*(t), taken at the right edge of every step."""
        if not q > 0:
            raise DomainException("q > 0", q)
        if f.is_zero():
            return 0.0
        step = self.decreasing_rearrangement(f)
        return float(np.max(step.breakpoints[1:] ** (1.0 / q) * step.levels))

    def lorentz_norm(self, f: SampledFunction, q: float, s: float) -> float:
        """(integral of (t^(1/q) f*(t))^s dt/t)^(1/s), exact per step."""
        if not q > 0:
            raise DomainException("q > 0", q)
        if not 0 < s < math.inf:
            raise DomainException("0 < s < inf", s)
        if f.is_zero():
            return 0.0

        step = self.decreasing_rearrangement(f)
        return float(np.sum(self.__step_integrals(step, q, s)) ** (1.0 / s))

    @staticmethod
    def __step_integrals(step: StepRearrangement, q: float, s: float) -> np.ndarray:
        powers = step.breakpoints ** (s / q)
        return step.levels**s * (q / s) * np.diff(powers)

    def symmetric_decreasing(self, f: SampledFunction) -> SampledFunction:
        """Discrete Schwarz symmetrization of |f|.

        Cells are filled by increasing centre radius, ties broken by flat
        index, with the magnitudes sorted descending.
        """
        grid = f.grid
        radius = grid.index_radius_squared().ravel()
        fill_order = np.lexsort((np.arange(radius.size), radius))
        magnitudes = np.abs(f.values).ravel()
        ordered = magnitudes[np.argsort(-magnitudes, kind="stable")]

        values = np.empty_like(magnitudes)
        values[fill_order] = ordered
        return f.with_values(values.reshape(grid.shape))

    def rearrangement_table(self, f: SampledFunction, q: float) -> dict:
        """Columns t, f_star, t_pow_q_times_f_star at the step right edges."""
        step = self.decreasing_rearrangement(f)
        t = step.breakpoints[1:]
        return {
            "t": t,
            "f_star": step.levels,
            "t_pow_q_times_f_star": t ** (1.0 / q) * step.levels,
        }

    def tail_diagnostics(
        self,
        f: SampledFunction,
        q: float,
        thresholds: TailThresholds = TailThresholds(),
    ) -> TailDiagnostics:
        """Grid-scale proxy for t^(1/q) f*(t) -> 0 at both ends.

        A tail whose value at the end of the ladder is not below
        ``member_ratio * weak_norm`` marks the function as a nonmember on
        that side; tails that fall below the threshold without decreasing
        monotonically, or disagreeing forms, give ``inconclusive``.
        """
        if not q > 0:
            raise DomainException("q > 0", q)
        if f.is_zero():
            return TailDiagnostics(
                q=q,
                weak_norm=0.0,
                small_t_tail=[],
                large_t_tail=[],
                lambda_form_small=[],
                lambda_form_large=[],
                cross_check_mismatch=0.0,
                verdict=Verdict.MEMBER,
            )

        grid = f.grid
        n = thresholds.tail_length
        step = self.decreasing_rearrangement(f)
        weak = self.weak_norm(f, q)

        t = geometric_ladder(
            grid.cell_measure, grid.box_measure, thresholds.points_per_decade
        )
        t_form = t ** (1.0 / q) * self.__evaluate(step, t, left=True)

        magnitudes = np.sort(np.abs(f.values).ravel())
        positive = magnitudes[magnitudes > 0]
        lam = geometric_ladder(positive[0], positive[-1], thresholds.points_per_decade)
        at_least = magnitudes.size - np.searchsorted(magnitudes, lam, side="left")
        lam_form = lam**q * grid.cell_measure * at_least

        small_t = list(zip(t[:n][::-1].tolist(), t_form[:n][::-1].tolist()))
        large_t = list(zip(t[-n:].tolist(), t_form[-n:].tolist()))
        lambda_small = list(zip(lam[-n:].tolist(), lam_form[-n:].tolist()))
        lambda_large = list(zip(lam[:n][::-1].tolist(), lam_form[:n][::-1].tolist()))

        t_sup = float(t_form.max())
        lam_sup = float(lam_form.max() ** (1.0 / q))
        mismatch = abs(t_sup - lam_sup) / max(t_sup, lam_sup)

        threshold = thresholds.member_ratio * weak
        if small_t[-1][1] >= threshold:
            verdict = Verdict.NONMEMBER_SMALL_T
        elif large_t[-1][1] >= threshold:
            verdict = Verdict.NONMEMBER_LARGE_T
        elif (
            not self.__decreasing(small_t)
            or not self.__decreasing(large_t)
            or mismatch > thresholds.cross_check_tolerance
        ):
            verdict = Verdict.INCONCLUSIVE
        else:
            verdict = Verdict.MEMBER

        self.logger.info(
            "Tail verdict %s (q=%s, weak norm %.6g, cross-check mismatch %.3g)",
            verdict.value,
            q,
            weak,
            mismatch,
        )
        return TailDiagnostics(
            q=q,
            weak_norm=weak,
            small_t_tail=small_t,
            large_t_tail=large_t,
            lambda_form_small=lambda_small,
            lambda_form_large=lambda_large,
            cross_check_mismatch=mismatch,
            verdict=verdict,
        )

    @staticmethod
    def __decreasing(tail: list[tuple[float, float]]) -> bool:
        values = np.array([v for _, v in tail])
        return bool(np.all(np.diff(values) <= 1e-12 * max(values.max(), 1e-300)))

    def tail_integral(self, f: SampledFunction, q: float, s: float, t: float) -> float:
        """Integral of (tau^(1/q) f*(tau))^s dtau/tau over [t, infinity)."""
        if f.is_zero():
            return 0.0
        step = self.decreasing_rearrangement(f)
        return self.__tail_integral(step, q, s, t)

    def __tail_integral(self, step: StepRearrangement, q: float, s: float, t: float) -> float:
        b = step.breakpoints
        lower = np.maximum(b[:-1], t)
        upper = b[1:]
        mask = upper > lower
        pieces = step.levels[mask] ** s * (q / s) * (
            upper[mask] ** (s / q) - lower[mask] ** (s / q)
        )
        return float(np.sum(pieces))

    def truncation_point(self, f: SampledFunction, q: float, s: float, eps: float) -> float:
        """Smallest T_eps whose tail Lorentz integral does not exceed eps.

        Solved exactly inside the step that crosses eps; zero when the whole
        integral is already at most eps.
        """
        if not eps > 0:
            raise DomainException("eps > 0", eps)
        if f.is_zero():
            return 0.0

        step = self.decreasing_rearrangement(f)
        pieces = self.__step_integrals(step, q, s)
        # tails[j] = integral beyond breakpoints[j]
        tails = np.append(np.cumsum(pieces[::-1])[::-1], 0.0)
        if tails[0] <= eps:
            return 0.0

        j = int(np.argmax(tails <= eps))
        level = step.levels[j - 1]
        right = step.breakpoints[j]
        power = right ** (s / q) - (eps - tails[j]) * (s / q) / level**s
        return float(max(power, 0.0) ** (q / s))

    def inclusion_margin(
        self, f: SampledFunction, q: float, s: float, T: float, eps: float
    ) -> float:
        """C (f*(T) T^(1/q))^s minus the tail integral beyond T_eps.

        For T >= 2 T_eps the margin is never positive, which certifies
        f*(T) T^(1/q) <= (eps/C)^(1/s).

        Notes:
            The bound is sometimes written with (eps/C)^(-1/s). That sign
            does not follow from the estimate above; +1/s is used.

        Raises:
            DomainException: If T < 2 T_eps or s is not finite.
        """
        if not 0 < s < math.inf:
            raise DomainException("0 < s < inf", s)
        t_eps = self.truncation_point(f, q, s, eps)
        if T < 2.0 * t_eps:
            raise DomainException("T >= 2 T_eps = %.6g" % (2.0 * t_eps), T)

        value = float(self.step_values(f, np.array([T]))[0])
        margin = inclusion_constant(q, s) * (value * T ** (1.0 / q)) ** s
        margin -= self.tail_integral(f, q, s, t_eps)
        self.logger.debug("Inclusion margin at T=%.6g: %.6g", T, margin)
        return float(margin)

    def head_point(self, f: SampledFunction, q: float, s: float, eps: float) -> float:
        """Largest T'_eps with integral over (0, T'_eps] not exceeding eps."""
        if not eps > 0:
            raise DomainException("eps > 0", eps)
        if f.is_zero():
            return math.inf

        step = self.decreasing_rearrangement(f)
        heads = np.concatenate(([0.0], np.cumsum(self.__step_integrals(step, q, s))))
        if heads[-1] <= eps:
            return math.inf

        j = int(np.argmax(heads > eps))
        level = step.levels[j - 1]
        left = step.breakpoints[j - 1]
        power = left ** (s / q) + (eps - heads[j - 1]) * (s / q) / level**s
        return float(power ** (q / s))

    def small_t_inclusion_margin(
        self, f: SampledFunction, q: float, s: float, T: float, eps: float
    ) -> float:
        """(q/s)(f*(T) T^(1/q))^s minus the head integral up to T'_eps.

        Companion of ``inclusion_margin`` for t -> 0: never positive for
        0 < T <= T'_eps.
        """
        if not 0 < s < math.inf:
            raise DomainException("0 < s < inf", s)
        t_head = self.head_point(f, q, s, eps)
        if not 0 < T <= t_head:
            raise DomainException("0 < T <= T'_eps = %.6g" % t_head, T)

        value = float(self.step_values(f, np.array([T]))[0])
        head = self.tail_integral(f, q, s, 0.0) - self.tail_integral(
            f, q, s, min(t_head, self.decreasing_rearrangement(f).total_measure)
        )
        return float((q / s) * (value * T ** (1.0 / q)) ** s - head)
