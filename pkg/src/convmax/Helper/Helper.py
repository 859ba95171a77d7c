import logging
import os
import sys
import json
import hashlib
from uuid import UUID
from pathlib import Path

import numpy as np
from jsonschema import validate

from .Exceptions import JsonFileParseException, SamplesFileException


SCHEMA_DIRECTORY = Path(__file__).parents[1] / "Schema"


class Helper:
    """Utility class for common helper functions."""

    @staticmethod
    def validate_json_schema(data: dict, schema_name: str):
        """Validate a JSON document against one of the bundled schemas.

        Args:
            data (dict): Parsed JSON document.
            schema_name (str): File name inside the ``Schema`` folder.
        """
        js_schema = Helper.read_json(SCHEMA_DIRECTORY / schema_name)
        validate(data, schema=js_schema)

    @staticmethod
    def read_json(path: str):
        """Read JSON data from a file.

        Args:
            path (str): Path to the JSON file.

        Returns:
            dict: JSON data.
        """
        with open(path, encoding="utf-8", mode="r") as f:
            try:
                __json = json.load(f)
            except Exception as e:
                raise JsonFileParseException(e, str(path))

        return __json

    @staticmethod
    def canonical_json(data: object) -> str:
        """Serialize ``data`` so that equal inputs give equal bytes."""
        return json.dumps(data, sort_keys=True, indent=4, allow_nan=False)

    @staticmethod
    def write_json(path: str, data: object) -> Path:
        """Write ``data`` as canonical JSON and return the written path."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, encoding="utf-8", mode="w", newline="\n") as f:
            f.write(Helper.canonical_json(data))
            f.write("\n")

        return path

    @staticmethod
    def write_csv(path: str, header: list[str], columns: list) -> Path:
        """Write equally long columns as a CSV file with a fixed header.

        Floats are written with 17 significant digits so that reading the
        file back reproduces every value bit for bit.
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        table = np.column_stack([np.asarray(c, dtype=float) for c in columns])
        np.savetxt(
            path,
            table,
            fmt="%.17g",
            delimiter=",",
            header=",".join(header),
            comments="",
        )
        return path

    @staticmethod
    def write_table(path: str, header: list[str], rows: list[list[str]]) -> Path:
        """Write already formatted text cells as CSV, one list per row."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(
            path,
            np.array(rows, dtype=object).reshape(len(rows), len(header)),
            fmt="%s",
            delimiter=",",
            header=",".join(header),
            comments="",
        )
        return path

    @staticmethod
    def read_csv(path: str) -> tuple[list[str], np.ndarray]:
        """Read a numeric CSV file with a header line.

        Returns:
            tuple: The header names and a 2-D array with one row per line.
        """
        try:
            with open(path, encoding="utf-8", mode="r") as f:
                header = [h.strip() for h in f.readline().strip().split(",")]
            table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        except (OSError, ValueError) as e:
            raise SamplesFileException(e, str(path))

        return header, table

    @staticmethod
    def start_logger(
        log_name: str = "convmax",
        log_directory: str = str(Path.cwd() / "Logs"),
        enable_write_log: bool = False,
        log_level: int = logging.INFO,
    ) -> logging.Logger:
        """Initialize and configure a logger.

        Handlers are attached once per logger name; later calls only update
        the level and point the console handler at the current stderr.

        Args:
            log_name (str, optional): Name of the logger. Defaults to "convmax".
            log_directory (str, optional): Directory to store log files.
            enable_write_log (bool, optional): Enable writing logs to file. Defaults to False.
            log_level (int, optional): Logging level. Defaults to logging.INFO.

        Returns:
            logging.Logger: Initialized logger object.
        """
        logger = logging.getLogger(log_name)
        logger.setLevel(log_level)

        stream_handlers = [
            h
            for h in logger.handlers
            if isinstance(h, logging.StreamHandler)
            and not isinstance(h, logging.FileHandler)
        ]
        for handler in stream_handlers:
            handler.setStream(sys.stderr)

        if enable_write_log and not any(
            isinstance(h, logging.FileHandler) for h in logger.handlers
        ):
            log_path = os.path.join(log_directory, "%s.log" % log_name)
            os.makedirs(log_directory, exist_ok=True)

            # Remove Old Log file
            if os.path.exists(log_path):
                os.remove(log_path)

            formatter = logging.Formatter(
                "%(asctime)s - %(name)s - %(levelname)s: %(message)s"
            )
            file_handler = logging.FileHandler(log_path)
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)

        if not stream_handlers:
            stream_handler = logging.StreamHandler(sys.stderr)
            stream_handler.setFormatter(ColorFormatter())
            logger.addHandler(stream_handler)
            logger.propagate = False

        return logger

    @staticmethod
    def parse_log_level(log_level: str) -> int:
        """Translate a level name into its ``logging`` constant.

        Unknown names fall back to INFO with a warning.
        """
        log_level_upper = str(log_level).upper()
        if not isinstance(getattr(logging, log_level_upper, None), int):
            logger = Helper.start_logger("main", log_level=logging.INFO)
            logger.warning(f"Invalid log level: {log_level} defaulting to INFO")
            return logging.INFO

        return getattr(logging, log_level_upper)


class ColorFormatter(logging.Formatter):
    """Logging Formatter to add colors to the console output"""

    grey = "\x1b[90m"
    green = "\x1b[92m"
    yellow = "\x1b[93m"
    red = "\x1b[91m"
    reset = "\x1b[0m"
    format = "%(asctime)s - %(name)s - %(levelname)s: %(message)s"

    FORMATS = {
        logging.DEBUG: grey + format + reset,
        logging.INFO: green + format + reset,
        logging.WARNING: yellow + format + reset,
        logging.ERROR: red + format + reset,
        logging.CRITICAL: red + format + reset,
    }

    def format(self, record):
        record.levelname = "WARN" if record.levelname == "WARNING" else record.levelname
        log_fmt = self.FORMATS.get(record.levelno)
        formatter = logging.Formatter(log_fmt)
        return formatter.format(record)


class Cache:
    """Keyed store for values that are expensive to rebuild."""

    def __init__(self):
        self.__dict = {}

    def __contains__(self, key: str) -> bool:
        return key in self.__dict

    def get(self, key: str) -> object:
        """Get a value from the cache by key.

        Args
            key (str): identifier to retrieve the value for.

        Returns
        ---------------
        The value matching the given key.
        """
        return self.__dict[key]["value"]

    def set(self, key: str, value: object) -> object:
        """Set the value in cache by key and return it."""
        self.__dict[key] = {
            "type": type(value),
            "value": value,
        }
        return value


class Hasher:
    allowed_algorithms = ["SHA256"]

    def __init__(self, algorithm: str = "SHA256"):
        if algorithm not in Hasher.allowed_algorithms:
            raise Hasher.UnknownAlgorithmException(algorithm)

    def hash(self, input: str):
        return hashlib.sha256(input.encode())

    def create_uuid(self, input: str) -> UUID:
        """Derive a stable UUID from ``input``, used as run identifier."""
        return UUID(self.hash(input).hexdigest()[::2])

    class UnknownAlgorithmException(Exception):
        def __init__(self, algorithm: str):
            super().__init__("Unknown algorithm: %s" % algorithm)
