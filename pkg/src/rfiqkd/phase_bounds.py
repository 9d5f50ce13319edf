"""Triangle-inequality bounds on Re[e^{i Phi_kl} <G00|G11>] and their extremization.

For checking pair (k, l) the vector relation

    sqrt(p_kl)|G_kl> = sqrt(p00) a0 b0 |G00> + sqrt(p11) a1 b1 e^{i Phi}|G11>
                       + sqrt(p01) a0 b1 (...) + sqrt(p10) a1 b0 (...)

bounds the norm of the first two terms from above and below; expanding that
norm isolates the real part. The interval for the pair is the widest range of
those bounds over both sides' feasible coefficient polygons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .coefficients import FeasibleRegion, consistency_check, feasible_region, side_row_spec
from .core import (
    A_MAX,
    AnalysisSettings,
    CheckingPair,
    CoefficientPoint,
    PhaseInterval,
    ProbabilityTable,
    Side,
)


@dataclass(frozen=True)
class PairBoundInput:
    p_kl: float
    p00: float
    p11: float
    p01: float
    p10: float
    a: CoefficientPoint
    b: CoefficientPoint


def _denominator(inp: PairBoundInput) -> float:
    return 2.0 * math.sqrt(inp.p00 * inp.p11) * inp.a.a0 * inp.a.a1 * inp.b.a0 * inp.b.a1


def _parts(inp: PairBoundInput) -> tuple[float, float, float]:
    cross = math.sqrt(inp.p01) * inp.a.a0 * inp.b.a1 + math.sqrt(inp.p10) * inp.a.a1 * inp.b.a0
    sq = inp.p00 * (inp.a.a0 * inp.b.a0) ** 2 + inp.p11 * (inp.a.a1 * inp.b.a1) ** 2
    return math.sqrt(inp.p_kl), cross, sq


def upper_bound_at(inp: PairBoundInput, eps_n: float = 1e-12) -> float:
    n = _denominator(inp)
    if n <= eps_n:
        return 1.0
    s, cross, sq = _parts(inp)
    # clip both ends: raw lower <= raw upper, and clipping keeps that order
    return min(1.0, max(-1.0, ((s + cross) ** 2 - sq) / n))


def lower_bound_at(inp: PairBoundInput, eps_n: float = 1e-12) -> float:
    n = _denominator(inp)
    if n <= eps_n:
        return -1.0
    s, cross, sq = _parts(inp)
    # reverse triangle inequality only gives norm >= 0 once cross terms dominate
    return max(-1.0, min(1.0, (max(0.0, s - cross) ** 2 - sq) / n))


class _Slicer:
    """Scalar, allocation-free view of a :class:`FeasibleRegion` for local search."""

    def __init__(self, region: FeasibleRegion):
        self.ylo, self.yhi = region.y_range
        v = [(float(x), float(y)) for x, y in region.vertices]
        self.edges = list(zip(v, v[1:] + v[:1]))

    def __call__(self, ty: float, tx: float) -> tuple[float, float]:
        y = min(self.yhi, self.ylo + ty * (self.yhi - self.ylo))
        lo, hi = math.inf, -math.inf
        for (px, py), (qx, qy) in self.edges:
            if not min(py, qy) <= y <= max(py, qy):
                continue
            if py == qy:
                lo, hi = min(lo, px, qx), max(hi, px, qx)
            else:
                x = px + (y - py) / (qy - py) * (qx - px)
                lo, hi = min(lo, x), max(hi, x)
        return lo + tx * (hi - lo), y


def _axis_points(region: FeasibleRegion, settings: AnalysisSettings) -> int:
    h = A_MAX / (settings.grid_coeff - 1)
    m = int(math.ceil(region.extent / h)) + 1
    return max(settings.min_axis_points, min(settings.max_axis_points, m))


def _raw(sign: int, probs: tuple[float, ...], a: tuple[float, float], b: tuple[float, float], eps_n: float) -> float:
    s, al, be, p00, p11 = probs
    n = 2.0 * math.sqrt(p00 * p11) * a[0] * a[1] * b[0] * b[1]
    if n <= eps_n:
        return float(sign)
    cross = al * a[0] * b[1] + be * a[1] * b[0]
    sq = p00 * (a[0] * b[0]) ** 2 + p11 * (a[1] * b[1]) ** 2
    if sign > 0:
        return ((s + cross) ** 2 - sq) / n
    return (max(0.0, s - cross) ** 2 - sq) / n


def _pattern_search(sign, probs, alice, bob, start, steps, iters, eps_n):
    """Coordinate pattern search over unit-square coordinates of both polygons.

    Maximizes ``sign * raw_bound``; every trial point is feasible by construction.
    """
    x = [float(v) for v in start]
    step = list(steps)

    def value(t):
        return sign * _raw(sign, probs, alice(t[0], t[1]), bob(t[2], t[3]), eps_n)

    best = value(x)
    for _ in range(iters):
        improved = False
        for d in range(4):
            for direction in (1.0, -1.0):
                trial = list(x)
                trial[d] = min(1.0, max(0.0, x[d] + direction * step[d]))
                if trial[d] == x[d]:
                    continue
                v = value(trial)
                if v > best:
                    best, x, improved = v, trial, True
                    break
        if not improved:
            step = [s * 0.5 for s in step]
    return sign * best, x


def conservative_interval(
    table: ProbabilityTable,
    pair: CheckingPair,
    settings: AnalysisSettings | None = None,
    regions: dict[str, FeasibleRegion] | None = None,
) -> PhaseInterval:
    """Interval containing Re[e^{i Phi_kl} <G00|G11>] for every feasible coefficient choice.

    ``regions`` may carry precomputed polygons from :func:`consistency_check`;
    otherwise they are built here.

    Raises:
        InconsistentTableError: if either side's feasible set is empty.
    """
    settings = settings or AnalysisSettings()
    if regions is None:
        regions = consistency_check(table, indices=sorted({pair.k, pair.l}), eps=settings.eps)
    alice = regions.get(f"alice{pair.k}") or feasible_region(side_row_spec(table, Side.ALICE, pair.k), settings.eps)
    bob = regions.get(f"bob{pair.l}") or feasible_region(side_row_spec(table, Side.BOB, pair.l), settings.eps)

    p = table.p
    probs = (
        math.sqrt(p[pair.k, pair.l]),
        math.sqrt(p[0, 1]),
        math.sqrt(p[1, 0]),
        float(p[0, 0]),
        float(p[1, 1]),
    )
    ma, mb = _axis_points(alice, settings), _axis_points(bob, settings)
    a0, a1, uva = alice.sample(ma)
    b0, b1, uvb = bob.sample(mb)
    umax, iua, iub, lmin, ila, ilb = kernels.bound_scan(
        np.ascontiguousarray(a0), np.ascontiguousarray(a1),
        np.ascontiguousarray(b0), np.ascontiguousarray(b1),
        *probs, settings.eps_n,
    )

    sa, sb = _Slicer(alice), _Slicer(bob)
    steps = (1.0 / (ma - 1), 1.0 / (ma - 1), 1.0 / (mb - 1), 1.0 / (mb - 1))
    start_u = (*uva[iua], *uvb[iub])
    start_l = (*uva[ila], *uvb[ilb])
    u_ref, tu = _pattern_search(1, probs, sa, sb, start_u, steps, settings.pattern_iters, settings.eps_n)
    l_ref, tl = _pattern_search(-1, probs, sa, sb, start_l, steps, settings.pattern_iters, settings.eps_n)
    upper_raw = max(float(umax), u_ref)
    lower_raw = min(float(lmin), l_ref)

    pa_u, pb_u = sa(tu[0], tu[1]), sb(tu[2], tu[3])
    pa_l, pb_l = sa(tl[0], tl[1]), sb(tl[2], tl[3])
    on_cap = any(abs(v - A_MAX) < 1e-9 for v in (*pa_u, *pb_u, *pa_l, *pb_l))
    diagnostics = {
        "upper_raw": upper_raw,
        "lower_raw": lower_raw,
        "upper_point": {"alice": list(pa_u), "bob": list(pb_u)},
        "lower_point": {"alice": list(pa_l), "bob": list(pb_l)},
        "samples": [ma * ma, mb * mb],
        "on_coefficient_cap": on_cap,
    }
    upper = min(1.0, max(-1.0, upper_raw))
    lower = max(-1.0, min(1.0, lower_raw))
    return PhaseInterval(lower, upper, diagnostics)
