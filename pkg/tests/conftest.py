from pytest_cases import fixture
from typing import Union
import os

from convmax.Factory import (
    DecompositionFactory,
    DiagnosticsFactory,
    KernelFactory,
    OperatorFactory,
    RearrangementFactory,
)
from convmax.Helper import Helper
from convmax.Model import Grid


# Set Input Parameter for tests
def pytest_addoption(parser):
    parser.addoption(
        "--factory-log-level",
        action="store",
        help="Log level of the factories under test",
    )
    parser.addoption(
        "--grid-points",
        action="store",
        help="Cells per axis of the default 1-D grid",
    )


def pytest_configure(config):
    """Pre run."""
    config.log_level = Helper.parse_log_level(
        __get_variable(config, "factory-log-level", "WARNING")
    )
    config.grid_points = int(__get_variable(config, "grid-points", "1024"))


@fixture
def log_level(request) -> int:
    return request.config.log_level


@fixture
def grid(request) -> Grid:
    """Default 1-D grid on [-8, 8]."""
    return Grid(dim=1, half_width=8.0, points_per_axis=request.config.grid_points)


@fixture
def grid_2d() -> Grid:
    return Grid(dim=2, half_width=8.0, points_per_axis=128)


@fixture
def kernels(log_level: int) -> KernelFactory:
    return KernelFactory(log_level=log_level)


@fixture
def rearrangement(log_level: int) -> RearrangementFactory:
    return RearrangementFactory(log_level=log_level)


@fixture
def decomposition(log_level: int) -> DecompositionFactory:
    return DecompositionFactory(log_level=log_level)


@fixture
def operator(log_level: int) -> OperatorFactory:
    return OperatorFactory(log_level=log_level)


@fixture
def diagnostics(log_level: int) -> DiagnosticsFactory:
    return DiagnosticsFactory(log_level=log_level)


def __get_variable(config, variable: str, default: str = None) -> str:
    variable_from_env = __get_variable_from_env(variable)
    variable_from_cli = __get_variable_from_cli(config, variable)

    return variable_from_cli or variable_from_env or default


def __get_variable_from_env(var: str) -> Union[str, None]:
    variable_name = "CONVMAX_%s" % var.upper().replace("-", "_")

    if variable_name in os.environ:
        return os.environ[variable_name]
    else:
        return None


def __get_variable_from_cli(config, var: str) -> Union[str, None]:
    return config.getoption("--%s" % var)
