"""Feasible checking-state coefficients under the two-dimensional source assumption.

A checking state c0|phi_0> + c1 e^{i theta}|phi_1> pushed through Eve's
outcome-1 operation links the observed probabilities row by row (Alice) or
column by column (Bob)::

    sqrt(p_kn) |G_kn> = sqrt(p_0n) c0 |G_0n> + sqrt(p_1n) c1 e^{i theta} |G_1n>

With the Gamma overlaps unknown, the only scalar consequence is the triangle
inequality on norms, i.e.
``(sqrt(p_0n) c0 - sqrt(p_1n) c1)^2 <= p_kn <= (sqrt(p_0n) c0 + sqrt(p_1n) c1)^2``.
For non-negative coefficients each side of that is linear in (c0, c1), so the
feasible set of one side is a convex polygon. :class:`FeasibleRegion` keeps
the half-plane form and a clipped vertex list.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    A_MAX,
    EPS,
    CoefficientPoint,
    InconsistentTableError,
    ProbabilityTable,
    Side,
)


@dataclass(frozen=True)
class SideRowSpec:
    """Observed triples ``(p_check, p_enc0, p_enc1)`` constraining one checking state.

    For Alice's state ``k`` the triples are ``(p_k0, p_00, p_10)`` and
    ``(p_k1, p_01, p_11)``; for Bob's state ``l`` they are ``(p_0l, p_00, p_01)``
    and ``(p_1l, p_10, p_11)``.
    """

    side: Side
    index: int
    triples: tuple[tuple[float, float, float], tuple[float, float, float]]

    @property
    def label(self) -> str:
        return f"{self.side.value} k={self.index}"


def side_row_spec(table: ProbabilityTable, side: Side | str, index: int) -> SideRowSpec:
    side = Side(side)
    p = table.p
    if side is Side.ALICE:
        triples = ((p[index, 0], p[0, 0], p[1, 0]), (p[index, 1], p[0, 1], p[1, 1]))
    else:
        triples = ((p[0, index], p[0, 0], p[0, 1]), (p[1, index], p[1, 0], p[1, 1]))
    return SideRowSpec(side, index, tuple(tuple(float(x) for x in t) for t in triples))


def is_feasible(point: CoefficientPoint, spec: SideRowSpec, eps: float = EPS) -> bool:
    a0, a1 = point.a0, point.a1
    if not (0.0 <= a0 <= A_MAX and 0.0 <= a1 <= A_MAX):
        return False
    # normalization with unknown encoding overlap; eps absorbs rounding only
    if (a0 - a1) ** 2 > 1.0 + eps or (a0 + a1) ** 2 < 1.0 - eps:
        return False
    for pk, p0, p1 in spec.triples:
        residual = abs(pk - p0 * a0 * a0 - p1 * a1 * a1)
        if residual > 2.0 * math.sqrt(p0 * p1) * a0 * a1 + eps:
            return False
    return True


def _halfplanes(spec: SideRowSpec, eps: float) -> np.ndarray:
    """Rows ``(a, b, c)`` meaning ``a*x + b*y <= c`` with x = a0, y = a1."""
    rows = [
        (-1.0, 0.0, 0.0),
        (0.0, -1.0, 0.0),
        (1.0, 0.0, A_MAX),
        (0.0, 1.0, A_MAX),
        (1.0, -1.0, math.sqrt(1.0 + eps)),
        (-1.0, 1.0, math.sqrt(1.0 + eps)),
        (-1.0, -1.0, -math.sqrt(max(1.0 - eps, 0.0))),
    ]
    for pk, p0, p1 in spec.triples:
        s0, s1 = math.sqrt(p0), math.sqrt(p1)
        hi = math.sqrt(pk + eps)
        lo = math.sqrt(max(pk - eps, 0.0))
        rows.append((s0, -s1, hi))
        rows.append((-s0, s1, hi))
        if s0 == 0.0 and s1 == 0.0:
            # 0 >= lo must hold outright; encode as 0 <= -lo
            rows.append((0.0, 0.0, -lo))
        else:
            rows.append((-s0, -s1, -lo))
    return np.array(rows, dtype=np.float64)


def _clip(poly: list[tuple[float, float]], a: float, b: float, c: float) -> list[tuple[float, float]]:
    """Sutherland-Hodgman clip of a convex polygon against ``a x + b y <= c``."""
    out: list[tuple[float, float]] = []
    n = len(poly)
    for idx in range(n):
        px, py = poly[idx]
        qx, qy = poly[(idx + 1) % n]
        fp = a * px + b * py - c
        fq = a * qx + b * qy - c
        if fp <= 0.0:
            out.append((px, py))
        if (fp < 0.0 < fq) or (fq < 0.0 < fp):
            t = fp / (fp - fq)
            out.append((px + t * (qx - px), py + t * (qy - py)))
    return out


@dataclass(frozen=True)
class FeasibleRegion:
    """Convex polygon of coefficient points passing :func:`is_feasible`."""

    spec: SideRowSpec
    halfplanes: np.ndarray
    vertices: np.ndarray  # (n, 2); empty when infeasible

    @property
    def empty(self) -> bool:
        return len(self.vertices) == 0

    @property
    def y_range(self) -> tuple[float, float]:
        return float(self.vertices[:, 1].min()), float(self.vertices[:, 1].max())

    @property
    def extent(self) -> float:
        span = self.vertices.max(axis=0) - self.vertices.min(axis=0)
        return float(span.max())

    def slice_x(self, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Interval ``[lo(y), hi(y)]`` of a0 values at each a1 = y.

        Cut from the polygon edges rather than the half-planes, so every point
        is a convex combination of vertices even when a normal is near zero.
        """
        ylo, yhi = self.y_range
        y = np.clip(np.asarray(y, dtype=np.float64), ylo, yhi)
        lo = np.full_like(y, np.inf)
        hi = np.full_like(y, -np.inf)
        v = self.vertices
        for (px, py), (qx, qy) in zip(v, np.roll(v, -1, axis=0)):
            on = (y >= min(py, qy)) & (y <= max(py, qy))
            if py == qy:
                x0, x1 = min(px, qx), max(px, qx)
                lo = np.where(on, np.minimum(lo, x0), lo)
                hi = np.where(on, np.maximum(hi, x1), hi)
                continue
            x = px + (y - py) / (qy - py) * (qx - px)
            lo = np.where(on, np.minimum(lo, x), lo)
            hi = np.where(on, np.maximum(hi, x), hi)
        return lo, hi

    def point(self, ty: float, tx: float) -> tuple[float, float]:
        """Map unit-square coordinates onto the polygon (a1 first, then a0 within the slice)."""
        ylo, yhi = self.y_range
        y = ylo + ty * (yhi - ylo)
        lo, hi = self.slice_x(np.array([y]))
        return float(lo[0] + tx * (hi[0] - lo[0])), y

    def sample(self, m: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``m`` x ``m`` points covering the polygon, boundary included.

        Returns ``(a0, a1, uv)`` where ``uv`` holds the unit-square coordinates
        ``(ty, tx)`` of every point.
        """
        t = np.linspace(0.0, 1.0, m)
        ylo, yhi = self.y_range
        ys = ylo + t * (yhi - ylo)
        lo, hi = self.slice_x(ys)
        a0 = lo[:, None] + t[None, :] * (hi - lo)[:, None]
        a1 = np.broadcast_to(ys[:, None], a0.shape)
        uv = np.stack(np.meshgrid(t, t, indexing="ij"), axis=-1).reshape(-1, 2)
        return a0.ravel().copy(), a1.ravel().copy(), uv


def feasible_region(spec: SideRowSpec, eps: float = EPS) -> FeasibleRegion:
    hp = _halfplanes(spec, eps)
    poly: list[tuple[float, float]] = [(0.0, 0.0), (A_MAX, 0.0), (A_MAX, A_MAX), (0.0, A_MAX)]
    for a, b, c in hp:
        if a == 0.0 and b == 0.0:
            if c < 0.0:
                poly = []
            continue
        poly = _clip(poly, a, b, c)
        if not poly:
            break
    verts = np.array(poly, dtype=np.float64).reshape(-1, 2)
    return FeasibleRegion(spec, hp, verts)


def grid_tolerance(spec: SideRowSpec, grid_n: int, eps: float = EPS) -> float:
    """Lipschitz slack making an ``grid_n`` grid miss no feasible point.

    Half the grid diagonal times the largest half-plane normal.
    """
    h = A_MAX / (grid_n - 1)
    norms = np.hypot(*_halfplanes(spec, eps)[:, :2].T)
    return float(norms.max()) * h * math.sqrt(0.5)


def enumerate_feasible(spec: SideRowSpec, grid_n: int = 301, eps: float = EPS) -> list[CoefficientPoint]:
    """Uniform-grid points over [0, A_MAX]^2 within half a grid diagonal of the feasible set.

    Raises:
        InconsistentTableError: if no grid point qualifies.
    """
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    h = A_MAX / (grid_n - 1)
    reach = h * math.sqrt(0.5)
    g = np.linspace(0.0, A_MAX, grid_n)
    x, y = np.meshgrid(g, g, indexing="ij")
    ok = np.ones_like(x, dtype=bool)
    for a, b, c in _halfplanes(spec, eps):
        # each row is Lipschitz with constant |(a, b)|
        ok &= a * x + b * y <= c + math.hypot(a, b) * reach
    pts = [CoefficientPoint(float(u), float(v)) for u, v in zip(x[ok], y[ok])]
    if not pts:
        raise InconsistentTableError(
            f"inconsistent table: no feasible coefficients for {spec.label}", [spec.label]
        )
    return pts


def side_specs(table: ProbabilityTable, indices: Sequence[int] = (2, 3)) -> list[SideRowSpec]:
    return [side_row_spec(table, side, k) for side in (Side.ALICE, Side.BOB) for k in indices]


def consistency_check(
    table: ProbabilityTable, indices: Sequence[int] = (2, 3), eps: float = EPS
) -> dict[str, FeasibleRegion]:
    """Feasible regions for every checking state, keyed ``"alice2"``, ``"bob3"``, ...

    Raises:
        InconsistentTableError: listing every side/index whose region is empty.
    """
    regions: dict[str, FeasibleRegion] = {}
    failures: list[str] = []
    for spec in side_specs(table, indices):
        region = feasible_region(spec, eps)
        if region.empty:
            failures.append(spec.label)
        regions[f"{spec.side.value}{spec.index}"] = region
    if failures:
        raise InconsistentTableError(
            "observations inconsistent with two-dimensional source assumption: "
            + ", ".join(failures),
            failures,
        )
    return regions
