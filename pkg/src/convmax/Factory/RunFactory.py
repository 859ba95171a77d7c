import logging
from pathlib import Path

import jsonschema
import numpy as np
from pydantic import ValidationError

from ..Model.Diagnostics import DiameterQuery
from ..Model.Grid import SampledFunction
from ..Model.Operator import MaximizerResult
from ..Model.RunConfig import SCHEMA_VERSION, Command, RunConfig
from ..Helper.Helper import Hasher, Helper
from ..Helper.Exceptions import ConvmaxException, DomainException
from .KernelFactory import KernelFactory
from .RearrangementFactory import RearrangementFactory, inclusion_constant
from .DecompositionFactory import DecompositionFactory
from .OperatorFactory import OperatorFactory
from .DiagnosticsFactory import DiagnosticsFactory, sample_directions


# result field summarizing a run in the sweep table
HEADLINE = {
    Command.NORMS: "lorentz_norm",
    Command.REARRANGE: "weak_norm",
    Command.TAILS: "weak_norm",
    Command.DECOMPOSE: "complement_norm",
    Command.OPNORM: "estimate",
    Command.MAXIMIZE: "estimate",
    Command.DIAMETER: "max_diameter",
    Command.TIGHTNESS: "max_diameter",
}


class RunFactory:
    """Runs one command for a validated ``RunConfig`` and writes its artifacts.

    Library errors are raised by the other factories; this class turns them
    into exit statuses: 0 on success, 2 for domain, infeasibility and
    validation errors, 1 for I/O errors.
    """

    def __init__(self, config: RunConfig, log_level: int = logging.INFO) -> None:
        self.config = config
        self.errors: list[str] = []
        self.logger: logging.Logger = Helper.start_logger(
            self.__class__.__name__, log_level=log_level
        )
        self.kernels = KernelFactory(log_level=log_level)
        self.rearrangement = RearrangementFactory(log_level=log_level)
        self.decomposition = DecompositionFactory(log_level=log_level)
        self.operator = OperatorFactory(log_level=log_level)
        self.diagnostics = DiagnosticsFactory(log_level=log_level)
        self.output_dir = Path(config.output_dir)
        self.__handlers = {
            Command.NORMS: self.__norms,
            Command.REARRANGE: self.__rearrange,
            Command.TAILS: self.__tails,
            Command.DECOMPOSE: self.__decompose,
            Command.OPNORM: self.__opnorm,
            Command.MAXIMIZE: self.__maximize,
            Command.DIAMETER: self.__diameter,
            Command.TIGHTNESS: self.__tightness,
        }

    def __error_handler(self, e: Exception, exit_code: int) -> int:
        """Log and record an error, returning the exit status to report."""
        self.errors.append(f"Error RunFactory: {e}")
        self.logger.error("%s failed: %s", self.config.command.value, e)
        return exit_code

    def run(self) -> int:
        """Execute the command, write ``<command>.json`` and return the exit status."""
        try:
            result = self.execute(write=True)
            path = Helper.write_json(
                self.output_dir / f"{self.config.command.value}.json",
                self.artifact(result),
            )
            self.logger.info("Wrote %s", path)
            return 0
        except ConvmaxException as e:
            return self.__error_handler(e, e.exit_code)
        except (ValidationError, jsonschema.ValidationError) as e:
            return self.__error_handler(e, 2)
        except OSError as e:
            return self.__error_handler(e, 1)

    def execute(self, write: bool = False) -> dict:
        """Compute the command result; CSV side artifacts only when ``write``."""
        if self.config.command not in self.__handlers:
            raise DomainException("command other than sweep", self.config.command.value)
        self.logger.debug("Running %s", self.config.command.value)
        return self.__handlers[self.config.command](write)

    @property
    def run_id(self) -> str:
        return str(Hasher().create_uuid(Helper.canonical_json(self.config.to_dict())))

    def artifact(self, result: dict) -> dict:
        artifact = {
            "schema_version": SCHEMA_VERSION,
            "command": self.config.command.value,
            "run_id": self.run_id,
            "config": self.config.to_dict(),
            "result": result,
        }
        Helper.validate_json_schema(artifact, "Artifact.json")
        return artifact

    def __kernel(self) -> SampledFunction:
        return self.kernels.materialize(self.config.kernel_spec, self.config.grid)

    def __path(self, name: str) -> Path:
        return self.output_dir / name

    def __norms(self, write: bool) -> dict:
        f = self.__kernel()
        q = self.config.q or self.config.triple.q
        s = self.config.s or q
        result = {
            "q": q,
            "s": s,
            "lp_norm": f.lp_norm(q) if q >= 1 else None,
            "weak_norm": self.rearrangement.weak_norm(f, q),
            "lorentz_norm": self.rearrangement.lorentz_norm(f, q, s),
            "inclusion_constant": inclusion_constant(q, s),
        }
        if self.config.T is not None:
            eps = self.config.eps
            result["truncation_point"] = self.rearrangement.truncation_point(f, q, s, eps)
            result["inclusion_margin"] = self.rearrangement.inclusion_margin(
                f, q, s, self.config.T, eps
            )
        return result

    def __rearrange(self, write: bool) -> dict:
        f = self.__kernel()
        q = self.config.q or self.config.triple.q
        table = self.rearrangement.rearrangement_table(f, q)
        if write:
            Helper.write_csv(
                self.__path("rearrange.csv"), list(table.keys()), list(table.values())
            )
        return {
            "q": q,
            "steps": int(table["t"].size),
            "total_measure": float(table["t"][-1]),
            "weak_norm": float(table["t_pow_q_times_f_star"].max()),
        }

    def __tails(self, write: bool) -> dict:
        q = self.config.q or self.config.triple.q
        diagnostics = self.rearrangement.tail_diagnostics(
            self.__kernel(), q, self.config.thresholds
        )
        return diagnostics.to_dict()

    def __decompose(self, write: bool) -> dict:
        k = self.__kernel()
        decomposition = self.decomposition.decompose(
            k, self.config.triple, self.config.eps, self.config.hls
        )
        result = decomposition.certificate()
        result["core_verified"] = self.decomposition.verify_core(
            decomposition.core,
            decomposition.M,
            decomposition.delta_level,
            decomposition.R,
        )
        if write and self.config.dump_parts:
            for name, part in decomposition.parts.items():
                self.kernels.write_samples(part, self.__path(f"decompose_{name}.csv"))
        return result

    def __iterate(self, keep_iterates: bool = False) -> tuple[SampledFunction, MaximizerResult]:
        k = self.__kernel()
        result = self.operator.maximize(
            k,
            self.config.triple,
            profile=self.config.seed_profile,
            seed=self.config.seed,
            max_iter=self.config.max_iter,
            tol=self.config.tol,
            keep_iterates=keep_iterates,
        )
        return k, result

    def __write_trajectory(self, result: MaximizerResult) -> None:
        trajectory = np.asarray(result.estimate.trajectory)
        rel_change = np.concatenate(
            ([np.nan], np.abs(np.diff(trajectory)) / trajectory[1:])
        )
        Helper.write_csv(
            self.__path(f"{self.config.command.value}_trajectory.csv"),
            ["iter", "phi", "rel_change"],
            [np.arange(trajectory.size), trajectory, rel_change],
        )

    def __opnorm(self, write: bool) -> dict:
        k, result = self.__iterate()
        trip = self.config.triple
        summary = {
            "estimate": result.phi,
            "iterations": result.estimate.iterations,
            "converged": result.estimate.converged,
            "rel_change_at_stop": result.estimate.rel_change_at_stop,
            "seed_profile": result.seed_profile.value,
            "young_bound": self.operator.young_bound(k, trip),
            "weak_bound": self.operator.weak_bound(k, trip, self.config.hls),
        }
        if trip.diagnostic:
            summary["fourier_symbol_max"] = self.operator.fourier_symbol_max(k)
        if write:
            self.__write_trajectory(result)
        return summary

    def __maximize(self, write: bool) -> dict:
        k, result = self.__iterate()
        trip = self.config.triple
        young = self.operator.young_bound(k, trip)
        summary = {
            "estimate": result.phi,
            "iterations": result.estimate.iterations,
            "converged": result.estimate.converged,
            "eps1_level": result.eps1_level,
            "eps1_vs_young_bound": self.operator.certify_eps1(result, young),
            "young_bound": young,
            "seed_profile": result.seed_profile.value,
            "diameters": self.__diameter_rows(result.f.normalized(trip.p), trip.p),
        }
        summary["max_diameter"] = max(row["diameter"] for row in summary["diameters"])
        if write:
            self.__write_trajectory(result)
            if self.config.dump_maximizer:
                self.kernels.write_samples(result.f, self.__path("maximizer.csv"))
        return summary

    def __diameter_rows(self, f: SampledFunction, p: float) -> list[dict]:
        rows = []
        for delta in self.config.deltas:
            for direction in sample_directions(f.grid.dim, self.config.directions):
                query = DiameterQuery(delta=delta, direction=direction, p=p)
                rows.append(
                    {
                        "delta": delta,
                        "direction_x": direction[0],
                        "direction_y": direction[1] if len(direction) > 1 else 0.0,
                        "diameter": self.diagnostics.delta_diameter(f, query),
                    }
                )
        return rows

    def __diameter(self, write: bool) -> dict:
        spec = self.config.function_spec or self.config.kernel_spec
        p = self.config.p
        f = self.kernels.materialize(spec, self.config.grid).normalized(p)
        rows = self.__diameter_rows(f, p)
        if write:
            header = ["delta", "direction_x", "direction_y", "diameter"]
            Helper.write_csv(
                self.__path("diameter.csv"),
                header,
                [[row[h] for row in rows] for h in header],
            )
        return {
            "function": str(spec),
            "p": p,
            "rows": rows,
            "max_diameter": max(row["diameter"] for row in rows),
        }

    def __read_sequence(self) -> list[SampledFunction]:
        directory = Path(self.config.sequence_dir)
        files = sorted(directory.glob("*.csv"))
        if not files:
            raise DomainException("sequence directory with CSV snapshots", str(directory))
        self.logger.info("Reading %d snapshots from %s", len(files), directory)
        return [self.kernels.read_samples(str(path), self.config.grid) for path in files]

    def __tightness(self, write: bool) -> dict:
        trip = self.config.triple
        k = self.__kernel()
        if self.config.sequence_dir:
            sequence = self.__read_sequence()
        else:
            _, result = self.__iterate(keep_iterates=True)
            sequence = result.iterates

        report = self.diagnostics.tightness_report(sequence, trip.p, self.config.deltas)
        cubes = [
            self.diagnostics.tightness_under_kernel(k, sequence, trip, delta).to_dict()
            for delta in self.config.deltas
        ]
        return {
            "sequence_length": len(sequence),
            "report": report.to_dict(),
            "image_cubes": cubes,
            "max_diameter": max(d for _, d in report.per_delta),
        }
