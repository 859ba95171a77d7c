import logging
from multiprocessing import Pool
from pathlib import Path

import jsonschema
from pydantic import ValidationError

from ..Model.RunConfig import SCHEMA_VERSION, RunConfig, SweepConfig
from ..Helper.Helper import Helper
from ..Helper.Exceptions import ConvmaxException, SweepConfigException
from .RunFactory import HEADLINE, RunFactory


SWEEP_COLUMNS = [
    "index",
    "kernel",
    "grid_points",
    "half_width",
    "p",
    "r",
    "eps",
    "status",
    "exit_code",
    "value",
]


def _run_cell(args: tuple[int, dict, int]) -> dict:
    """Run one sweep cell; failures become records instead of exceptions."""
    index, cell, log_level = args
    record = {
        "schema_version": SCHEMA_VERSION,
        "index": index,
        "cell": dict(cell, command=str(cell["command"].value)),
        "run_id": None,
        "config": None,
        "status": "ok",
        "exit_code": 0,
        "error": None,
        "result": None,
    }
    try:
        factory = RunFactory(RunConfig.from_dict(cell), log_level=log_level)
        record.update(run_id=factory.run_id, config=factory.config.to_dict())
        record["result"] = factory.execute()
    except ConvmaxException as e:
        record.update(status="error", exit_code=e.exit_code, error=str(e))
    except ValidationError as e:
        record.update(status="error", exit_code=2, error=str(e))
    return record


class SweepFactory:
    """Cross product of parameter lists, run cell by cell.

    Cells are independent, so they may run in a process pool; records are
    always written in cell order, which keeps the output independent of the
    number of workers.
    """

    def __init__(
        self, path_config: str, output_dir: str = ".", log_level: int = logging.INFO
    ) -> None:
        self.path_config = path_config
        self.output_dir = Path(output_dir) / "sweep"
        self.log_level = log_level
        self.errors: list[str] = []
        self.logger: logging.Logger = Helper.start_logger(
            self.__class__.__name__, log_level=log_level
        )

    def load(self) -> SweepConfig:
        """Read and validate the sweep file.

        Raises:
            SweepConfigException: If the file breaks the schema or a value
                is out of range.
        """
        data = Helper.read_json(self.path_config)
        try:
            Helper.validate_json_schema(data, "SweepConfig.json")
            return SweepConfig.from_dict(data)
        except jsonschema.ValidationError as e:
            raise SweepConfigException(e.message)
        except ValidationError as e:
            raise SweepConfigException(str(e))

    def run(self) -> int:
        try:
            config = self.load()
            cells = config.cells()
            if not cells:
                raise SweepConfigException("the parameter grid is empty")

            self.logger.info(
                "Sweeping %s over %d cells with %d workers",
                config.command.value,
                len(cells),
                config.workers,
            )
            records = self.execute(cells, config.workers)
            self.write(records, config)
            failed = [r["index"] for r in records if r["status"] != "ok"]
            if failed:
                self.logger.warning("Cells %s failed", failed)
            return 0
        except ConvmaxException as e:
            return self.__error_handler(e, e.exit_code)
        except jsonschema.ValidationError as e:
            return self.__error_handler(e, 2)
        except OSError as e:
            return self.__error_handler(e, 1)

    def __error_handler(self, e: Exception, exit_code: int) -> int:
        self.errors.append(f"Error SweepFactory: {e}")
        self.logger.error("Sweep failed: %s", e)
        return exit_code

    def execute(self, cells: list[dict], workers: int = 1) -> list[dict]:
        tasks = [(i, cell, self.log_level) for i, cell in enumerate(cells)]
        if workers == 1:
            return [_run_cell(task) for task in tasks]

        with Pool(workers) as pool:
            return list(pool.imap(_run_cell, tasks))

    def write(self, records: list[dict], config: SweepConfig) -> None:
        headline = HEADLINE[config.command]
        rows = []
        for record in records:
            Helper.validate_json_schema(record, "SweepCell.json")
            Helper.write_json(
                self.output_dir / ("cell_%04d.json" % record["index"]), record
            )
            cell = record["cell"]
            value = (record["result"] or {}).get(headline)
            rows.append(
                [
                    str(record["index"]),
                    '"%s"' % cell["kernel"],
                    str(cell["grid_points"]),
                    repr(float(cell["half_width"])),
                    repr(float(cell["p"])),
                    repr(float(cell["r"])),
                    repr(float(cell["eps"])),
                    record["status"],
                    str(record["exit_code"]),
                    "" if value is None else repr(float(value)),
                ]
            )

        path = Helper.write_table(self.output_dir / "sweep.csv", SWEEP_COLUMNS, rows)
        self.logger.info("Wrote %d cells to %s", len(records), path)
