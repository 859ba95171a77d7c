from .KernelFactory import KernelFactory
from .RearrangementFactory import RearrangementFactory
from .DecompositionFactory import DecompositionFactory
from .OperatorFactory import OperatorFactory
from .DiagnosticsFactory import DiagnosticsFactory
from .RunFactory import RunFactory
from .SweepFactory import SweepFactory
