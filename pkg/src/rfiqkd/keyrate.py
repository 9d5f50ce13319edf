"""Bit/phase error rates and the asymptotic key rate R = 1 - H(e_b) - H(e_p)."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .coefficients import consistency_check
from .core import (
    PAIRS,
    AnalysisSettings,
    CheckingPair,
    KeyRateReport,
    Mode,
    ProbabilityTable,
    TableError,
    validate_table,
)
from .modulus import PhaseSystem, min_modulus_baseline, min_modulus_rfi
from .phase_bounds import conservative_interval


class NoKeyEventsError(ValueError):
    """p00 + p11 + p01 + p10 is zero: no rounds survive for the key."""


@dataclass(frozen=True)
class ErrorRates:
    e_bit: float
    e_phase: float
    delta_bound: float
    s_total: float


def binary_entropy(x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary entropy needs x in [0, 1], got {x!r}")
    if x == 0.0 or x == 1.0:
        return 0.0
    # evaluate on min(x, 1-x) so that H(x) == H(1-x) bit for bit
    y = min(x, 1.0 - x)
    return -y * math.log2(y) - (1.0 - y) * math.log2(1.0 - y)


def bit_error_rate(table: ProbabilityTable) -> float:
    s = table.key_total
    if s <= 0.0:
        raise NoKeyEventsError("no key events: p00 + p11 + p01 + p10 = 0")
    return (table[0, 1] + table[1, 0]) / s


def delta_bound(p00: float, p11: float, omega: float) -> float:
    """Upper bound on the phase-error excess numerator, with the optimal phase choice."""
    if not 0.0 <= omega <= 1.0:
        raise ValueError(f"omega must lie in [0, 1], got {omega!r}")
    return p00 + p11 - 2.0 * math.sqrt(p00 * p11) * omega


def phase_error_rate(e_bit: float, delta: float, s_total: float) -> float:
    if s_total <= 0.0:
        raise NoKeyEventsError("no key events: p00 + p11 + p01 + p10 = 0")
    return min(1.0, e_bit + delta / (2.0 * s_total))


def error_rates(table: ProbabilityTable, omega: float) -> ErrorRates:
    e_bit = bit_error_rate(table)
    s = table.key_total
    delta = delta_bound(table[0, 0], table[1, 1], omega)
    return ErrorRates(e_bit, phase_error_rate(e_bit, delta, s), delta, s)


def key_rate(e_bit: float, e_phase: float) -> tuple[float, float]:
    """Returns ``(clamped, raw)``; negative raw rates mean abort."""
    raw = 1.0 - binary_entropy(e_bit) - binary_entropy(min(1.0, e_phase))
    return max(0.0, raw), raw


def analyze(
    table: ProbabilityTable,
    mode: Mode | str = Mode.RFI,
    settings: AnalysisSettings | None = None,
) -> KeyRateReport:
    """Full pipeline from an observed table to a :class:`KeyRateReport`.

    Raises:
        TableError: the table fails validation for ``mode``.
        InconsistentTableError: no coefficients or moduli are consistent with it.
        NoKeyEventsError: the key-generating cells are all zero.
    """
    mode = Mode(mode)
    settings = settings or AnalysisSettings()
    problems = validate_table(table, mode)
    if problems:
        raise TableError("; ".join(problems))
    if table.key_total <= 0.0:
        raise NoKeyEventsError("no key events: p00 + p11 + p01 + p10 = 0")

    pairs = PAIRS if mode is Mode.RFI else (CheckingPair(2, 2),)
    indices = (2, 3) if mode is Mode.RFI else (2,)
    regions = consistency_check(table, indices, settings.eps)
    intervals = {pair.label: conservative_interval(table, pair, settings, regions) for pair in pairs}

    if mode is Mode.RFI:
        bound = min_modulus_rfi(PhaseSystem(tuple(intervals[p.label] for p in PAIRS)), settings)
    else:
        bound = min_modulus_baseline(intervals["22"], settings.baseline_positive_branch)

    rates = error_rates(table, bound.omega)
    rate, raw = key_rate(rates.e_bit, rates.e_phase)
    diagnostics = {
        "raw_rate": raw,
        "delta_bound": rates.delta_bound,
        "s_total": rates.s_total,
        "modulus": dict(bound.diagnostics),
        "witness": list(bound.witness) if bound.witness is not None else None,
        "pairs": {k: v.diagnostics for k, v in intervals.items()},
        "settings": settings.to_dict(),
    }
    if table[0, 0] * table[1, 1] == 0.0:
        diagnostics["note"] = "p00*p11 = 0: phase-error bound does not depend on omega"
    return KeyRateReport(rates.e_bit, rates.e_phase, bound.omega, intervals, rate, mode, diagnostics)
