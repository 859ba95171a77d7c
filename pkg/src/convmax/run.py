from typing import Annotated, Optional

import typer
from pydantic import ValidationError

from .Factory.RunFactory import RunFactory
from .Factory.SweepFactory import SweepFactory
from .Model.Operator import SeedProfile
from .Model.Rearrangement import TailThresholds
from .Model.RunConfig import Command, RunConfig
from .Helper.Helper import Helper
from .Helper.Exceptions import ConvmaxException


Kernel = Annotated[
    str,
    typer.Option(
        "--kernel",
        "-k",
        help='Kernel spec "name:key=value,...", e.g. "power_truncated:q=1.5,R=1".',
    ),
]
Dim = Annotated[Optional[int], typer.Option("--dim", help="Dimension, 1 or 2.")]
GridPoints = Annotated[
    Optional[int],
    typer.Option("--grid-points", "-n", help="Even number of cells per axis."),
]
HalfWidth = Annotated[
    Optional[float],
    typer.Option("--half-width", help="Box is [-half_width, half_width]^dim."),
]
P = Annotated[Optional[float], typer.Option("--p", help="Domain exponent p > 1.")]
R = Annotated[Optional[float], typer.Option("--r", help="Target exponent r > p.")]
Q = Annotated[
    Optional[float],
    typer.Option("--q", help="Lorentz index q; defaults to the Young exponent."),
]
S = Annotated[
    Optional[float],
    typer.Option("--s", help="Lorentz second index s; defaults to q."),
]
Eps = Annotated[Optional[float], typer.Option("--eps", help="Truncation level eps > 0.")]
HlsConstantOption = Annotated[
    Optional[float],
    typer.Option(
        "--hls-constant", help="Weak-type Young constant C; 1 when not given."
    ),
]
MaxIter = Annotated[
    Optional[int], typer.Option("--max-iter", help="Iteration cap of the power method.")
]
Tol = Annotated[
    Optional[float],
    typer.Option("--tol", help="Stop once the relative change of Phi is below tol."),
]
Profile = Annotated[
    Optional[SeedProfile],
    typer.Option(
        "--seed-profile",
        help="Starting function of the power method.",
        case_sensitive=False,
    ),
]
Seed = Annotated[
    Optional[int], typer.Option("--seed", help="Seed of the random profile.")
]
EqualExponents = Annotated[
    bool,
    typer.Option(
        "--equal-exponents",
        help="Diagnostic mode p = r on the periodic grid operator.",
    ),
]
Deltas = Annotated[
    Optional[list[float]],
    typer.Option("--delta", help="Mass fraction allowed outside; repeatable."),
]
OutputDir = Annotated[
    str,
    typer.Option(
        "--output-dir",
        "-o",
        envvar="CONVMAX_OUTPUT_DIR",
        help="Directory for JSON and CSV artifacts.",
    ),
]
LogLevel = Annotated[
    str,
    typer.Option(
        "--log-level",
        "-l",
        help="Set log level: NOTSET, DEBUG, INFO, WARN, ERROR, CRITICAL (default INFO).",
    ),
]


def _run(command: Command, options: dict, log_level: str) -> None:
    """Validate the collected options, run the command and exit with its status."""
    log_level_int = Helper.parse_log_level(log_level)
    logger = Helper.start_logger("main", log_level=log_level_int)

    values = {k: v for k, v in options.items() if _given(v)}
    try:
        config = RunConfig(command=command, **values)
    except (ConvmaxException, ValidationError) as e:
        logger.error("Invalid configuration for %s: %s", command.value, e)
        raise typer.Exit(code=2)

    exit_code = RunFactory(config, log_level=log_level_int).run()
    if exit_code:
        raise typer.Exit(code=exit_code)


def norms(
    kernel: Kernel = "gauss:sigma=1",
    q: Q = None,
    s: S = None,
    T: Annotated[
        Optional[float],
        typer.Option("--T", help="Point of the inclusion margin check."),
    ] = None,
    eps: Eps = None,
    p: P = None,
    r: R = None,
    dim: Dim = None,
    grid_points: GridPoints = None,
    half_width: HalfWidth = None,
    output_dir: OutputDir = ".",
    log_level: LogLevel = "INFO",
):
    """L_q, weak L_q and Lorentz L_{q,s} norms of a sampled kernel."""
    _run(Command.NORMS, _options(locals()), log_level)


def rearrange(
    kernel: Kernel = "gauss:sigma=1",
    q: Q = None,
    p: P = None,
    r: R = None,
    dim: Dim = None,
    grid_points: GridPoints = None,
    half_width: HalfWidth = None,
    output_dir: OutputDir = ".",
    log_level: LogLevel = "INFO",
):
    """Write the decreasing rearrangement as rearrange.csv."""
    _run(Command.REARRANGE, _options(locals()), log_level)


def tails(
    kernel: Kernel = "gauss:sigma=1",
    q: Q = None,
    p: P = None,
    r: R = None,
    dim: Dim = None,
    grid_points: GridPoints = None,
    half_width: HalfWidth = None,
    points_per_decade: Annotated[
        int, typer.Option("--points-per-decade", help="Density of both ladders.")
    ] = 32,
    member_ratio: Annotated[
        float,
        typer.Option(
            "--member-ratio",
            help="A tail ending above member_ratio * weak norm fails membership.",
        ),
    ] = 0.1,
    output_dir: OutputDir = ".",
    log_level: LogLevel = "INFO",
):
    """Tail behaviour of t^(1/q) f*(t) at both ends and the membership verdict."""
    options = _options(locals(), "points_per_decade", "member_ratio")
    options["thresholds"] = TailThresholds(
        points_per_decade=points_per_decade, member_ratio=member_ratio
    )
    _run(Command.TAILS, options, log_level)


def decompose(
    kernel: Kernel = "gauss:sigma=1",
    p: P = None,
    r: R = None,
    eps: Eps = None,
    hls_constant: HlsConstantOption = None,
    dim: Dim = None,
    grid_points: GridPoints = None,
    half_width: HalfWidth = None,
    dump_parts: Annotated[
        bool,
        typer.Option("--dump-parts", help="Write decompose_<part>.csv for u, w, z, core."),
    ] = False,
    output_dir: OutputDir = ".",
    log_level: LogLevel = "INFO",
):
    """eps-truncation of the kernel with its operator norm certificate."""
    _run(Command.DECOMPOSE, _options(locals()), log_level)


def opnorm(
    kernel: Kernel = "gauss:sigma=1",
    p: P = None,
    r: R = None,
    hls_constant: HlsConstantOption = None,
    dim: Dim = None,
    grid_points: GridPoints = None,
    half_width: HalfWidth = None,
    max_iter: MaxIter = None,
    tol: Tol = None,
    seed_profile: Profile = None,
    seed: Seed = None,
    equal_exponents: EqualExponents = False,
    output_dir: OutputDir = ".",
    log_level: LogLevel = "INFO",
):
    """Estimate ||K_k||_{p->r} next to its Young and weak-type bounds."""
    _run(Command.OPNORM, _options(locals()), log_level)


def maximize(
    kernel: Kernel = "gauss:sigma=1",
    p: P = None,
    r: R = None,
    dim: Dim = None,
    grid_points: GridPoints = None,
    half_width: HalfWidth = None,
    max_iter: MaxIter = None,
    tol: Tol = None,
    seed_profile: Profile = None,
    seed: Seed = None,
    equal_exponents: EqualExponents = False,
    delta: Deltas = None,
    dump_maximizer: Annotated[
        bool, typer.Option("--dump-maximizer", help="Write maximizer.csv.")
    ] = False,
    output_dir: OutputDir = ".",
    log_level: LogLevel = "INFO",
):
    """Search a maximizer of K_k and report its delta-diameters."""
    _run(Command.MAXIMIZE, _with_deltas(_options(locals())), log_level)


def diameter(
    kernel: Kernel = "gauss:sigma=1",
    function: Annotated[
        Optional[str],
        typer.Option(
            "--function",
            "-f",
            help="Function spec to measure; the kernel itself when not given.",
        ),
    ] = None,
    p: P = None,
    r: R = None,
    dim: Dim = None,
    grid_points: GridPoints = None,
    half_width: HalfWidth = None,
    delta: Deltas = None,
    directions: Annotated[
        Optional[int],
        typer.Option("--directions", help="Number of sampled directions in 2-D."),
    ] = None,
    output_dir: OutputDir = ".",
    log_level: LogLevel = "INFO",
):
    """delta-diameter of the L_p-normalized function per direction."""
    _run(Command.DIAMETER, _with_deltas(_options(locals())), log_level)


def tightness(
    kernel: Kernel = "gauss:sigma=1",
    p: P = None,
    r: R = None,
    dim: Dim = None,
    grid_points: GridPoints = None,
    half_width: HalfWidth = None,
    delta: Deltas = None,
    sequence_dir: Annotated[
        Optional[str],
        typer.Option(
            "--sequence-dir",
            help="Directory of x[,y],value CSV snapshots; the power iterates when not given.",
        ),
    ] = None,
    max_iter: MaxIter = None,
    tol: Tol = None,
    seed_profile: Profile = None,
    output_dir: OutputDir = ".",
    log_level: LogLevel = "INFO",
):
    """Tightness of a sequence and of its images under the kernel."""
    _run(Command.TIGHTNESS, _with_deltas(_options(locals())), log_level)


def sweep(
    config: Annotated[
        str, typer.Option("--config", "-c", help="File path to the sweep JSON file.")
    ],
    output_dir: OutputDir = ".",
    log_level: LogLevel = "INFO",
):
    """Run one command over the cross product of a sweep file's parameter lists."""
    log_level_int = Helper.parse_log_level(log_level)
    Helper.start_logger("main", log_level=log_level_int)
    exit_code = SweepFactory(
        path_config=config, output_dir=output_dir, log_level=log_level_int
    ).run()
    if exit_code:
        raise typer.Exit(code=exit_code)


def _given(value) -> bool:
    """Unset options are None, False or an empty repeatable list."""
    if isinstance(value, (list, tuple)):
        return len(value) > 0
    return value is not None and value is not False


def _options(options: dict, *names: str) -> dict:
    return {k: v for k, v in options.items() if k not in ("log_level",) + names}


def _with_deltas(options: dict) -> dict:
    options["deltas"] = options.pop("delta")
    return options
