"""Finite Bose systems, Gentile statistics and restricted integer partitions."""

__version__ = "0.1.0"

from .asymptotics import SpectrumModel, SaddlePoint
from .equivalence import EquivalenceReport, validate_equivalence
from .partition_core import CountResult, PartitionConstraint, count
from .thermo import GentileGas, ThermoState

__all__ = [
    "__version__",
    "CountResult",
    "EquivalenceReport",
    "GentileGas",
    "PartitionConstraint",
    "SaddlePoint",
    "SpectrumModel",
    "ThermoState",
    "count",
    "validate_equivalence",
]
