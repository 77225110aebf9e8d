"""Complex probability over forward/backward trajectory pairs on a lattice."""
from .core import (
    ExplicitEvent,
    MeasureContext,
    Path,
    SymbolicEvent,
    TrajectoryPair,
    adjoint,
    adjoint_event,
    classify,
    expand_symbolic,
    measure,
    verify_axioms,
)
from .density import (
    DensityMatrix,
    WaveFunction,
    assemble_density,
    diagonal_pattern,
    evolve_density,
    slit_wavefunctions,
)
from .errors import (
    CapacityError,
    ConstraintError,
    CTPError,
    DegenerateExperimentError,
    DomainError,
    InvalidPathError,
    InvariantViolation,
)
from .experiments import (
    ScreenPattern,
    SlitExperiment,
    classical_baseline,
    event_decomposition,
    find_null_events,
    pattern,
    preset,
    slit_amplitudes,
)
from .lattice import (
    LatticeConfig,
    enumerate_paths,
    kernel,
    path_amplitude,
    path_sum_fast,
    path_sum_naive,
    propagate,
)
from .sampling import born_check, lln_check, normalize, sample

__version__ = "0.1.0"
