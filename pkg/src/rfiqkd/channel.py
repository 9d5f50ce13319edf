"""Reference tables for a depolarizing channel with an unknown z-rotation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ProbabilityTable


@dataclass(frozen=True)
class ChannelParams:
    """Bit error rate ``e_b`` in [0, 0.5] and rotation angle ``theta`` (radians)."""

    e_b: float
    theta: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.e_b) and 0.0 <= self.e_b <= 0.5):
            raise ValueError(f"e_b must lie in [0, 0.5], got {self.e_b!r}")
        if not math.isfinite(self.theta):
            raise ValueError(f"theta must be finite, got {self.theta!r}")


def ideal_table(params: ChannelParams) -> ProbabilityTable:
    """Exact 4x4 table of the depolarization-plus-rotation model.

    Encoding rows/columns carry (1-e_b)/2 on the key diagonal and e_b/2 off it;
    mixed encoding/checking cells are 1/4; the checking block depends on theta.
    """
    eb, th = params.e_b, params.theta
    p = np.full((4, 4), 0.25)
    p[0, 0] = p[1, 1] = 0.5 * (1.0 - eb)
    p[0, 1] = p[1, 0] = 0.5 * eb
    p[2, 2] = p[3, 3] = 0.25 * (1.0 - eb) * (1.0 + math.cos(th)) + 0.5 * eb
    p[2, 3] = 0.25 * (1.0 - eb) * (1.0 + math.cos(0.5 * math.pi + th)) + 0.5 * eb
    p[3, 2] = 0.25 * (1.0 - eb) * (1.0 + math.cos(0.5 * math.pi - th)) + 0.5 * eb
    # rounding of cos near +-1 can push a cell a few ulp outside [0, 1]
    np.clip(p, 0.0, 1.0, out=p)
    return ProbabilityTable(p)


def sampled_table(
    params: ChannelParams, shots: int, seed: int
) -> tuple[ProbabilityTable, np.ndarray]:
    """Binomial estimate of :func:`ideal_table` with ``shots`` trials per cell.

    Uses numpy's PCG64 generator seeded with ``seed``; cells are drawn in
    row-major order from a single stream, so output is fixed per seed.

    Returns:
        The estimated table and the integer success counts.
    """
    if int(shots) != shots or shots < 1:
        raise ValueError(f"shots must be a positive integer, got {shots!r}")
    exact = ideal_table(params).p
    rng = np.random.Generator(np.random.PCG64(seed))
    counts = rng.binomial(int(shots), exact).astype(np.int64)
    return ProbabilityTable(counts / shots), counts
