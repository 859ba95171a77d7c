from .Exponents import ExponentTriple
from .Grid import Grid, SampledFunction
from .Kernel import KernelSpec, KernelKind
from .Rearrangement import (
    StepRearrangement,
    TailDiagnostics,
    TailThresholds,
    Verdict,
)
from .Decomposition import Decomposition, HlsConstant, HlsProvenance
from .Operator import MaximizerResult, OperatorNormEstimate, SeedProfile
from .Diagnostics import (
    CubeTightness,
    DiameterQuery,
    LemmaConstants,
    TightnessReport,
)
from .RunConfig import Command, RunConfig, SweepConfig, SCHEMA_VERSION
