from .Helper import Helper, Cache, Hasher, ColorFormatter
from .Exceptions import (
    ConvmaxException,
    DomainException,
    InfeasibilityException,
    DegenerateInputException,
    GridMismatchException,
    SweepConfigException,
    SamplesFileException,
    JsonFileParseException,
)
