"""q-deformed post-selected weak measurement with Arik-Coon coherent pointers."""
from .config import CoherentLabel, MeasurementConfig, Observable, WeakValue, make_config
from .errors import (
    ConfigError,
    DimensionMismatch,
    DimensionOverflow,
    DomainError,
    NonConvergence,
    NonPositiveNorm,
    ZeroMeanPhoton,
)
from .qspecial import DeformationParameter, QExpResult, q_exp

__version__ = "0.1.0"

__all__ = [
    "CoherentLabel",
    "ConfigError",
    "DeformationParameter",
    "DimensionMismatch",
    "DimensionOverflow",
    "DomainError",
    "MeasurementConfig",
    "NonConvergence",
    "NonPositiveNorm",
    "Observable",
    "QExpResult",
    "WeakValue",
    "ZeroMeanPhoton",
    "make_config",
    "q_exp",
]
