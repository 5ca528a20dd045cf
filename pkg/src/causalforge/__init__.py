"""causalforge: simulate, learn, and score causal structure."""

__version__ = "0.1.0"

from causalforge.exceptions import (
    CausalForgeError,
    DegenerateVariable,
    FormatError,
    InsufficientSamples,
    InvalidConfig,
    InvalidGraph,
    NotADag,
    NumericError,
    PriorConflict,
    ShapeError,
    SimulationOverflow,
    SingularCovariance,
    SingularDesign,
    StageError,
)

__all__ = [
    "__version__",
    "CausalForgeError",
    "DegenerateVariable",
    "FormatError",
    "InsufficientSamples",
    "InvalidConfig",
    "InvalidGraph",
    "NotADag",
    "NumericError",
    "PriorConflict",
    "ShapeError",
    "SimulationOverflow",
    "SingularCovariance",
    "SingularDesign",
    "StageError",
]
