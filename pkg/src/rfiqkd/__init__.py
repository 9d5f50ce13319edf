"""Certified key-rate analysis for two-dimensional sources with an unknown frame rotation."""

from .channel import ChannelParams, ideal_table, sampled_table
from .core import (
    A_MAX,
    EPS,
    PAIRS,
    AnalysisSettings,
    CheckingPair,
    CoefficientPoint,
    InconsistentTableError,
    InnerProductBound,
    KeyRateReport,
    Mode,
    PhaseInterval,
    ProbabilityTable,
    Side,
    TableError,
    validate_table,
)
from .keyrate import analyze, binary_entropy
from .kernels import BACKEND

__all__ = [
    "A_MAX",
    "BACKEND",
    "EPS",
    "PAIRS",
    "AnalysisSettings",
    "ChannelParams",
    "CheckingPair",
    "CoefficientPoint",
    "InconsistentTableError",
    "InnerProductBound",
    "KeyRateReport",
    "Mode",
    "PhaseInterval",
    "ProbabilityTable",
    "Side",
    "TableError",
    "analyze",
    "binary_entropy",
    "ideal_table",
    "sampled_table",
    "validate_table",
]
