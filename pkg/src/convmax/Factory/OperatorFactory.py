import logging
from typing import Callable, Optional

import numpy as np
import scipy.fft
from scipy.signal import fftconvolve

from ..Model.Decomposition import HlsConstant
from ..Model.Exponents import ExponentTriple
from ..Model.Grid import Grid, SampledFunction
from ..Model.Operator import MaximizerResult, OperatorNormEstimate, SeedProfile
from ..Helper.Helper import Helper
from ..Helper.Exceptions import DegenerateInputException, DomainException
from .RearrangementFactory import RearrangementFactory


DETERMINISTIC_PROFILES = (
    SeedProfile.GAUSSIAN,
    SeedProfile.NARROW,
    SeedProfile.WIDE,
    SeedProfile.OFFSET,
)


class OperatorFactory:
    """Convolution operators K_k: L_p -> L_r on a grid.

    ``power_iterate`` is the nonlinear power method for ||K_k||_{p->r}:
    g = k * f, h = |g|^(r-1) sign g, u = K_k^T h, f = |u|^(1/(p-1)) sign u,
    renormalized in L_p. The Rayleigh value ||k * f||_r never decreases
    along the iteration.
    """

    def __init__(self, log_level: int = logging.INFO) -> None:
        self.logger: logging.Logger = Helper.start_logger(
            self.__class__.__name__, log_level=log_level
        )
        self.rearrangement = RearrangementFactory(log_level=log_level)

    @staticmethod
    def __window(grid: Grid, offset: int) -> tuple[slice, ...]:
        n = grid.points_per_axis
        return (slice(offset, offset + n),) * grid.dim

    def convolve(self, k: SampledFunction, f: SampledFunction) -> SampledFunction:
        """Zero-padded linear convolution k * f, cropped back to the box."""
        k.check_same_grid(f)
        grid = k.grid
        full = fftconvolve(k.values, f.values, mode="full")
        window = self.__window(grid, grid.points_per_axis // 2)
        return f.with_values(full[window] * grid.cell_measure)

    def correlate(self, k: SampledFunction, h: SampledFunction) -> SampledFunction:
        """Transpose of ``convolve``: x -> sum_y k(y - x) h(y) cell_measure."""
        k.check_same_grid(h)
        grid = k.grid
        full = fftconvolve(h.values, np.flip(k.values), mode="full")
        window = self.__window(grid, grid.points_per_axis // 2 - 1)
        return h.with_values(full[window] * grid.cell_measure)

    @staticmethod
    def __symbol(k: SampledFunction) -> np.ndarray:
        return scipy.fft.fftn(scipy.fft.ifftshift(k.values))

    def convolve_periodic(self, k: SampledFunction, f: SampledFunction) -> SampledFunction:
        """Circular convolution on the grid torus (diagnostic mode)."""
        k.check_same_grid(f)
        values = scipy.fft.ifftn(scipy.fft.fftn(f.values) * self.__symbol(k)).real
        return f.with_values(values * k.grid.cell_measure)

    def correlate_periodic(self, k: SampledFunction, h: SampledFunction) -> SampledFunction:
        k.check_same_grid(h)
        values = scipy.fft.ifftn(
            scipy.fft.fftn(h.values) * np.conj(self.__symbol(k))
        ).real
        return h.with_values(values * k.grid.cell_measure)

    def fourier_symbol_max(self, k: SampledFunction) -> float:
        """cell_measure * max |DFT k|, the exact 2 -> 2 norm of the periodic operator."""
        return float(k.grid.cell_measure * np.max(np.abs(self.__symbol(k))))

    @staticmethod
    def young_bound(k: SampledFunction, trip: ExponentTriple) -> float:
        """||k||_q, an upper bound of ||K_k||_{p->r} by Young's inequality."""
        return k.lp_norm(trip.q)

    def weak_bound(
        self, k: SampledFunction, trip: ExponentTriple, C: HlsConstant = HlsConstant()
    ) -> float:
        """C * ||k||_{q,inf}; a certified bound only with a valid C."""
        return C.C * self.rearrangement.weak_norm(k, trip.q)

    def rayleigh(self, k: SampledFunction, f: SampledFunction, trip: ExponentTriple) -> float:
        """||k * f||_r / ||f||_p."""
        norm = f.lp_norm(trip.p)
        if norm == 0:
            raise DegenerateInputException("||f||_p = 0")
        apply, _ = self.__operators(trip)
        return apply(k, f).lp_norm(trip.r) / norm

    def __operators(self, trip: ExponentTriple) -> tuple[Callable, Callable]:
        if trip.diagnostic:
            return self.convolve_periodic, self.correlate_periodic
        return self.convolve, self.correlate

    @staticmethod
    def __dual_power(values: np.ndarray, exponent: float) -> np.ndarray:
        """|v|^exponent sign v, with v scaled by its peak first."""
        peak = np.max(np.abs(values))
        return np.sign(values) * (np.abs(values) / peak) ** exponent

    def power_iterate(
        self,
        k: SampledFunction,
        trip: ExponentTriple,
        f0: SampledFunction,
        max_iter: int = 500,
        tol: float = 1e-9,
        keep_iterates: bool = False,
        seed_profile: SeedProfile = SeedProfile.GAUSSIAN,
    ) -> MaximizerResult:
        """Estimate ||K_k||_{p->r} and a maximizer candidate.

        Nonnegative kernels run on |f|, which keeps every iterate
        nonnegative. The iteration stops once the relative change of the
        Rayleigh value drops below ``tol``.

        Raises:
            DegenerateInputException: If ||f0||_p = 0 or k * f0 vanishes.
        """
        if max_iter < 1:
            raise DomainException("max_iter >= 1", max_iter)
        if not tol > 0:
            raise DomainException("tol > 0", tol)
        k.check_same_grid(f0)
        if f0.lp_norm(trip.p) == 0:
            raise DegenerateInputException("||f0||_p = 0")

        apply, transpose = self.__operators(trip)
        nonnegative = k.is_nonnegative()
        f = (f0.abs() if nonnegative else f0).normalized(trip.p)
        g = apply(k, f)
        phi = g.lp_norm(trip.r)
        if phi == 0:
            raise DegenerateInputException("k * f0 vanishes identically")

        trajectory = [phi]
        iterates = [f] if keep_iterates else []
        rel_change = 1.0
        converged = False
        for iteration in range(1, max_iter + 1):
            h = g.with_values(self.__dual_power(g.values, trip.r - 1.0))
            u = transpose(k, h)
            if u.is_zero():
                self.logger.warning("Adjoint step vanished at iteration %d", iteration)
                break

            values = self.__dual_power(u.values, 1.0 / (trip.p - 1.0))
            f = f.with_values(np.abs(values) if nonnegative else values).normalized(trip.p)
            g = apply(k, f)
            phi_next = g.lp_norm(trip.r)
            rel_change = abs(phi_next - phi) / phi_next
            phi = phi_next
            trajectory.append(phi)
            if keep_iterates:
                iterates.append(f)

            if iteration % 100 == 0:
                self.logger.debug(
                    "Iteration %d: phi=%.15g rel_change=%.3e", iteration, phi, rel_change
                )
            if rel_change < tol:
                converged = True
                self.logger.info(
                    "Power iteration converged at %d iterations, estimate %.12g",
                    iteration,
                    phi,
                )
                break
        else:
            self.logger.info(
                "Power iteration stopped after %d iterations (rel_change %.3e)",
                max_iter,
                rel_change,
            )

        estimate = OperatorNormEstimate(
            value=phi,
            trajectory=trajectory,
            iterations=len(trajectory) - 1,
            converged=converged,
            rel_change_at_stop=rel_change,
        )
        return MaximizerResult(
            f=f,
            estimate=estimate,
            eps1_level=min(max(rel_change, 0.0), 1.0),
            seed_profile=seed_profile,
            iterates=iterates,
        )

    @staticmethod
    def certify_eps1(result: MaximizerResult, reference_value: float) -> float:
        """eps1 = 1 - Phi(f) / reference_value, clamped to [0, 1]."""
        if not reference_value > 0:
            raise DomainException("reference_value > 0", reference_value)
        return float(min(max(1.0 - result.phi / reference_value, 0.0), 1.0))

    @staticmethod
    def seed_function(
        grid: Grid, profile: SeedProfile = SeedProfile.GAUSSIAN, seed: int = 0
    ) -> SampledFunction:
        """Starting function of the power iteration, not yet normalized."""
        width = {
            SeedProfile.GAUSSIAN: grid.half_width / 8.0,
            SeedProfile.NARROW: grid.half_width / 16.0,
            SeedProfile.WIDE: grid.half_width / 4.0,
            SeedProfile.OFFSET: grid.half_width / 8.0,
            SeedProfile.RANDOM: grid.half_width / 4.0,
        }[profile]
        coordinates = grid.coordinates()
        if profile == SeedProfile.OFFSET:
            coordinates = [coordinates[0] - grid.half_width / 4.0, *coordinates[1:]]
        squared = sum(c**2 for c in coordinates)
        values = np.exp(-squared / (2.0 * width**2))
        if profile == SeedProfile.RANDOM:
            rng = np.random.default_rng(seed)
            values = values * (0.5 + rng.random(grid.shape))
        return SampledFunction(grid=grid, values=values)

    def maximize(
        self,
        k: SampledFunction,
        trip: ExponentTriple,
        profile: SeedProfile = SeedProfile.GAUSSIAN,
        seed: int = 0,
        max_iter: int = 500,
        tol: float = 1e-9,
        keep_iterates: bool = False,
        f0: Optional[SampledFunction] = None,
    ) -> MaximizerResult:
        """Run the power iteration from one profile, or keep the best of all."""
        if f0 is not None:
            return self.power_iterate(k, trip, f0, max_iter, tol, keep_iterates)

        profiles = (
            DETERMINISTIC_PROFILES + (SeedProfile.RANDOM,)
            if profile == SeedProfile.ALL
            else (profile,)
        )
        best = None
        for candidate in profiles:
            result = self.power_iterate(
                k,
                trip,
                self.seed_function(k.grid, candidate, seed),
                max_iter,
                tol,
                keep_iterates,
                seed_profile=candidate,
            )
            self.logger.debug("Profile %s: estimate %.12g", candidate.value, result.phi)
            if best is None or result.phi > best.phi:
                best = result
        return best
