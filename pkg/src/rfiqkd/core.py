"""Shared data model: probability tables, coefficient points, intervals, reports.

Index convention for every table in this package: row = Alice's state index,
column = Bob's. Indices 0 and 1 are encoding states, 2 and 3 checking states.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

#: Slack used when comparing computed quantities against interval endpoints.
EPS = 1e-9
#: Search cap on checking-state coefficients.
A_MAX = 3.0


class Mode(str, enum.Enum):
    RFI = "rfi"
    NONRFI = "nonrfi"


class TableError(ValueError):
    """Raised when a table cannot be parsed or fails validation."""


class InconsistentTableError(ValueError):
    """Observations incompatible with the two-dimensional source assumption."""

    def __init__(self, message: str, failures: Sequence[str] = ()):
        super().__init__(message)
        self.failures = list(failures)


@dataclass(frozen=True)
class ProbabilityTable:
    """Conditional probabilities ``p[i][j]`` of Charlie announcing outcome 1.

    The grid is copied into a read-only float64 array. Construction does not
    validate; call :func:`validate_table` for findings.
    """

    p: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.p, dtype=np.float64, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "p", arr)

    @property
    def size(self) -> int:
        return int(self.p.shape[0]) if self.p.ndim == 2 else 0

    def __getitem__(self, ij: tuple[int, int]) -> float:
        return float(self.p[ij])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProbabilityTable):
            return NotImplemented
        return self.p.shape == other.p.shape and bool(np.array_equal(self.p, other.p))

    def __hash__(self) -> int:
        return hash((self.p.shape, self.p.tobytes()))

    @property
    def key_total(self) -> float:
        """p00 + p11 + p01 + p10."""
        p = self.p
        return float(p[0, 0] + p[1, 1] + p[0, 1] + p[1, 0])

    def to_dict(self) -> dict[str, Any]:
        return {"size": self.size, "p": [[float(v) for v in row] for row in self.p]}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ProbabilityTable":
        """Parse the table format, or its counts variant (``shots`` + ``counts``)."""
        try:
            size = int(data["size"])
            if "p" in data:
                grid = np.asarray(data["p"], dtype=np.float64)
            elif "counts" in data:
                shots = int(data["shots"])
                counts = np.asarray(data["counts"], dtype=np.float64)
                if shots < 1:
                    raise TableError("shots must be a positive integer")
                if np.any(counts < 0) or np.any(counts > shots) or np.any(counts != np.floor(counts)):
                    raise TableError("counts must be integers in [0, shots]")
                grid = counts / shots
            else:
                raise TableError("table needs either 'p' or 'shots'+'counts'")
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, TableError):
                raise
            raise TableError(f"malformed table: {exc}") from exc
        if grid.shape != (size, size):
            raise TableError(f"grid shape {grid.shape} does not match size {size}")
        return cls(grid)

    def dumps(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def loads(cls, text: str) -> "ProbabilityTable":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise TableError(f"not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise TableError("table must be a JSON object")
        return cls.from_dict(data)


def validate_table(table: ProbabilityTable, mode: Mode | str = Mode.RFI) -> list[str]:
    """Return every violation found in ``table``; an empty list means ok."""
    mode = Mode(mode)
    errors: list[str] = []
    p = table.p
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        return [f"table must be square, got shape {p.shape}"]
    n = p.shape[0]
    if mode is Mode.RFI and n != 4:
        errors.append(f"size must be 4 in RFI mode, got {n}")
    elif mode is Mode.NONRFI and n < 3:
        errors.append(f"size must be at least 3 in non-RFI mode, got {n}")
    for i in range(n):
        for j in range(n):
            v = p[i, j]
            if not math.isfinite(v):
                errors.append(f"entry p[{i}][{j}] is not finite")
            elif v < 0.0 or v > 1.0:
                errors.append(f"entry p[{i}][{j}] = {v!r} out of range [0, 1]")
    return errors


@dataclass(frozen=True)
class CoefficientPoint:
    """Amplitudes of one checking state over one side's two encoding states."""

    a0: float
    a1: float

    def as_tuple(self) -> tuple[float, float]:
        return (self.a0, self.a1)


class Side(str, enum.Enum):
    ALICE = "alice"
    BOB = "bob"


@dataclass(frozen=True)
class CheckingPair:
    """Alice checking index ``k`` and Bob checking index ``l``, both in {2, 3}."""

    k: int
    l: int

    def __post_init__(self) -> None:
        if self.k not in (2, 3) or self.l not in (2, 3):
            raise ValueError(f"checking indices must be 2 or 3, got ({self.k}, {self.l})")

    @property
    def label(self) -> str:
        return f"{self.k}{self.l}"

    @property
    def phase_offsets(self) -> tuple[int, int]:
        """Coefficients of (B, C) in the composite phase A + x*B + y*C."""
        return (self.l - 2, self.k - 2)


PAIRS: tuple[CheckingPair, ...] = (
    CheckingPair(2, 2),
    CheckingPair(2, 3),
    CheckingPair(3, 2),
    CheckingPair(3, 3),
)


@dataclass(frozen=True)
class AnalysisSettings:
    """Numerical knobs shared by the bound, modulus and key-rate stages.

    ``grid_coeff`` fixes the coefficient grid spacing ``A_MAX / (grid_coeff - 1)``;
    the product scan samples each feasible polygon at that spacing, clamped to
    ``[min_axis_points, max_axis_points]`` per axis.
    """

    grid_coeff: int = 301
    min_axis_points: int = 9
    max_axis_points: int = 41
    pattern_iters: int = 50
    r_step: float = 1e-3
    angle_step_deg: float = 1.0
    modulus_method: str = "arc"
    eps: float = EPS
    eps_n: float = 1e-12
    baseline_positive_branch: bool = True

    def __post_init__(self) -> None:
        if self.grid_coeff < 2:
            raise ValueError("grid_coeff must be at least 2")
        if not 2 <= self.min_axis_points <= self.max_axis_points:
            raise ValueError("need 2 <= min_axis_points <= max_axis_points")
        if not 0.0 < self.r_step <= 0.5:
            raise ValueError("r_step must lie in (0, 0.5]")
        if not 0.0 < self.angle_step_deg <= 45.0:
            raise ValueError("angle_step_deg must lie in (0, 45]")
        if self.modulus_method not in ("arc", "grid"):
            raise ValueError("modulus_method must be 'arc' or 'grid'")

    def to_dict(self) -> dict[str, Any]:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass(frozen=True)
class PhaseInterval:
    """Bounds on Re[e^{i Phi} <G00|G11>] for one checking pair."""

    lower: float
    upper: float
    diagnostics: dict[str, Any] = field(default_factory=dict, compare=False, repr=False)

    def contains(self, x: float, slack: float = EPS) -> bool:
        return self.lower - slack <= x <= self.upper + slack

    @property
    def width(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class InnerProductBound:
    """Certified lower bound ``omega`` on r = |<G00|G11>|.

    ``witness`` is ``(r, A, B, C)`` in radians, or None when no angles were
    needed (baseline mode).
    """

    omega: float
    witness: tuple[float, float, float, float] | None = None
    diagnostics: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class KeyRateReport:
    e_bit: float
    e_phase: float
    omega: float
    intervals: dict[str, PhaseInterval]
    rate: float
    mode: Mode
    diagnostics: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "mode": self.mode.value,
            "e_bit": self.e_bit,
            "e_phase": self.e_phase,
            "omega": self.omega,
            "rate": self.rate,
            "intervals": {k: [v.lower, v.upper] for k, v in self.intervals.items()},
            "diagnostics": self.diagnostics,
        }
