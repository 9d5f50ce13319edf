"""Certified lower bound on r = |<G00|G11>| from the four phase intervals.

Writing <G00|G11> = r e^{i delta}, the four bounded quantities are r cos of the
composite phases u = A, v = A+B, w = A+C and v + w - u = A+B+C. A modulus r is
admissible when angles exist that put all four inside their intervals.

For fixed r each constraint admits a union of at most two arcs of angles, so
admissibility reduces to whether the Minkowski combination S_v + S_w - S_u of
arcs meets S_{v+w-u}. Arc sums are arcs, which makes the test exact
(``method="arc"``); ``method="grid"`` is the discretized scan over an angle
grid with Lipschitz slack, kept as an independent route.

r-discretization is made rigorous by testing whole cells [r_prev, r]: each
constraint may use any modulus inside the cell, which only enlarges the
admissible set, so a feasible r can never slip between grid points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from . import kernels
from .core import EPS, AnalysisSettings, InconsistentTableError, InnerProductBound, PhaseInterval

TWO_PI = 2.0 * math.pi
_ANG_TOL = 1e-12

Arc = tuple[float, float]  # (start, length), start in [0, 2pi)


@dataclass(frozen=True)
class PhaseSystem:
    """Intervals for the composites A, A+B, A+C, A+B+C, i.e. pairs 22, 23, 32, 33."""

    intervals: tuple[PhaseInterval, PhaseInterval, PhaseInterval, PhaseInterval]

    @classmethod
    def from_bounds(cls, bounds: Sequence[tuple[float, float]]) -> "PhaseSystem":
        return cls(tuple(PhaseInterval(float(lo), float(hi)) for lo, hi in bounds))

    def swapped(self) -> "PhaseSystem":
        """Exchange the (2,3) and (3,2) intervals, i.e. B <-> C."""
        i = self.intervals
        return PhaseSystem((i[0], i[2], i[1], i[3]))


def wrap(angle: float) -> float:
    """Map an angle to (-pi, pi]."""
    a = math.fmod(angle, TWO_PI)
    if a <= -math.pi:
        a += TWO_PI
    elif a > math.pi:
        a -= TWO_PI
    return a


def feasible_at(r: float, u: float, v: float, w: float, system: PhaseSystem, slack: float = EPS) -> bool:
    values = (r * math.cos(u), r * math.cos(v), r * math.cos(w), r * math.cos(v + w - u))
    return all(iv.lower - slack <= x <= iv.upper + slack for iv, x in zip(system.intervals, values))


def cosine_ranges(lower: float, upper: float, r_lo: float, r_hi: float) -> list[tuple[float, float]]:
    """Values c = cos(phi) with r*c in [lower, upper] for some r in [r_lo, r_hi].

    Returns disjoint sorted intervals inside [-1, 1].
    """
    out: list[tuple[float, float]] = []
    # c >= 0: r*c spans [r_lo*c, r_hi*c]
    hi = 1.0 if r_lo == 0.0 else min(1.0, upper / r_lo)
    lo = 0.0 if r_hi == 0.0 else max(0.0, lower / r_hi)
    if r_lo == 0.0 and upper < 0.0:
        hi = -1.0
    if r_hi == 0.0 and lower > 0.0:
        hi = -1.0
    pos = (lo, hi) if lo <= hi else None
    # c <= 0: r*c spans [r_hi*c, r_lo*c]
    hi = 0.0 if r_hi == 0.0 else min(0.0, upper / r_hi)
    lo = -1.0 if r_lo == 0.0 else max(-1.0, lower / r_lo)
    if r_lo == 0.0 and lower > 0.0:
        lo = 1.0
    if r_hi == 0.0 and upper < 0.0:
        lo = 1.0
    neg = (lo, hi) if lo <= hi else None
    if neg and pos and neg[1] >= pos[0]:
        return [(neg[0], pos[1])]
    return [x for x in (neg, pos) if x]


def arcs_for(c_ranges: Sequence[tuple[float, float]]) -> list[Arc]:
    """Angle arcs whose cosine falls in any of ``c_ranges``."""
    arcs: list[Arc] = []
    for clo, chi in c_ranges:
        alpha = math.acos(max(-1.0, min(1.0, chi)))
        beta = math.acos(max(-1.0, min(1.0, clo)))
        if alpha == 0.0 and beta == math.pi:
            return [(0.0, TWO_PI)]
        if alpha == 0.0:
            arcs.append(((-beta) % TWO_PI, 2.0 * beta))
        elif beta == math.pi:
            arcs.append((alpha, TWO_PI - 2.0 * alpha))
        else:
            arcs.append((alpha, beta - alpha))
            arcs.append(((-beta) % TWO_PI, beta - alpha))
    return arcs


def _split(offset: float, lengths: Sequence[float]) -> list[float]:
    """Distribute ``offset`` greedily over parts no longer than ``lengths``."""
    parts = []
    rest = offset
    for ln in lengths:
        d = min(ln, max(0.0, rest))
        parts.append(d)
        rest -= d
    return parts


def _meet(su: Arc, sv: Arc, sw: Arc, s4: Arc) -> tuple[float, float, float] | None:
    """Angles (u, v, w) with u, v, w in their arcs and v + w - u in ``s4``, if any."""
    start = sv[0] + sw[0] - su[0] - su[1]
    length = su[1] + sv[1] + sw[1]
    if length >= TWO_PI - _ANG_TOL:
        # full circle: hit the start of s4 (or its only point)
        offset = (s4[0] - start) % TWO_PI
    else:
        d = (s4[0] - start) % TWO_PI
        if d <= length + _ANG_TOL:
            offset = min(d, length)
        elif (start - s4[0]) % TWO_PI <= s4[1] + _ANG_TOL:
            offset = 0.0
        else:
            return None
    du, dv, dw = _split(offset, (su[1], sv[1], sw[1]))
    return su[0] + su[1] - du, sv[0] + dv, sw[0] + dw


def _arc_cell(system: PhaseSystem, r_lo: float, r_hi: float, slack: float):
    arcs = []
    for iv in system.intervals:
        a = arcs_for(cosine_ranges(iv.lower - slack, iv.upper + slack, r_lo, r_hi))
        if not a:
            return None
        arcs.append(a)
    for su, sv, sw, s4 in product(*arcs):
        hit = _meet(su, sv, sw, s4)
        if hit is not None:
            return hit
    return None


def _grid_cell(system: PhaseSystem, r: float, n: int, slack: float, gap: float):
    """Discretized test at modulus ``r`` on an ``n``-point angle grid.

    Rounding u, v, w to the grid moves each of them by at most half a step and
    the composite by 1.5 steps; |d(r cos phi)/d phi| <= r converts that into
    value slack. ``gap`` covers moduli between r-grid points.
    """
    step = TWO_PI / n
    cos_grid = r * np.cos(np.arange(n) * step)
    masks = []
    for idx, iv in enumerate(system.intervals):
        reach = (1.5 if idx == 3 else 0.5) * step * r + gap + slack
        masks.append(((cos_grid >= iv.lower - reach) & (cos_grid <= iv.upper + reach)).astype(np.uint8))
    m_u, m_v, m_w, m_4 = masks
    if not (m_u.any() and m_v.any() and m_w.any() and m_4.any()):
        return None
    vw = np.asarray(kernels.cyclic_sumset(m_v, m_w), dtype=bool)
    u4 = np.asarray(kernels.cyclic_sumset(m_u, m_4), dtype=bool)
    both = np.flatnonzero(vw & u4)
    if len(both) == 0:
        return None
    s = int(both[0])
    iu = next(i for i in np.flatnonzero(m_u) if m_4[(s - i) % n])
    iv_ = next(i for i in np.flatnonzero(m_v) if m_w[(s - i) % n])
    return iu * step, iv_ * step, ((s - iv_) % n) * step


def min_modulus_rfi(system: PhaseSystem, settings: AnalysisSettings | None = None) -> InnerProductBound:
    """Smallest admissible r, swept upward in steps of ``settings.r_step``.

    Returns omega = (first admissible grid modulus) - r_step, which by the cell
    test is never above the true minimum.

    Raises:
        InconsistentTableError: if no r in [0, 1] is admissible.
    """
    settings = settings or AnalysisSettings()
    dr, eps = settings.r_step, settings.eps
    n_r = int(math.ceil(1.0 / dr - 1e-9))
    n_ang = max(4, int(round(360.0 / settings.angle_step_deg)))

    if all(iv.lower - eps <= 0.0 <= iv.upper + eps for iv in system.intervals):
        return InnerProductBound(0.0, (0.0, 0.0, 0.0, 0.0), {"method": settings.modulus_method, "first_feasible_r": 0.0})

    for j in range(1, n_r + 1):
        r_lo, r_hi = (j - 1) * dr, min(1.0, j * dr)
        if settings.modulus_method == "arc":
            hit = _arc_cell(system, r_lo, r_hi, eps)
        else:
            hit = _grid_cell(system, r_hi, n_ang, eps, r_hi - r_lo)
        if hit is not None:
            u, v, w = hit
            witness = (r_hi, wrap(u), wrap(v - u), wrap(w - u))
            omega = max(0.0, min(1.0, r_lo))
            return InnerProductBound(
                omega,
                witness,
                {"method": settings.modulus_method, "first_feasible_r": r_hi, "r_step": dr},
            )
    raise InconsistentTableError("phase intervals are mutually contradictory: no modulus in [0, 1] is admissible")


def min_modulus_baseline(interval22: PhaseInterval, positive_branch: bool = True) -> InnerProductBound:
    """Single-pair bound: Re[...] <= U < 0 forces r >= -U; with the mirrored
    argument, Re[...] >= L > 0 forces r >= L."""
    candidates = [0.0, -interval22.upper]
    if positive_branch:
        candidates.append(interval22.lower)
    omega = min(1.0, max(candidates))
    diag = {"method": "baseline"}
    if positive_branch and interval22.lower > 0.0 and interval22.lower >= -interval22.upper:
        diag["note"] = "symmetric extension of the negative-upper-bound argument"
    return InnerProductBound(omega, None, diag)
