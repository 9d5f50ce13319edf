"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``."""

from __future__ import annotations

import numpy as np

_CHUNK = 1 << 20


def bound_scan(a0, a1, b0, b1, s, al, be, p00, p11, eps_n):
    a0 = np.asarray(a0, dtype=np.float64)
    a1 = np.asarray(a1, dtype=np.float64)
    b0 = np.asarray(b0, dtype=np.float64)
    b1 = np.asarray(b1, dtype=np.float64)
    root = 2.0 * np.sqrt(p00 * p11)
    rows = max(1, _CHUNK // max(1, len(b0)))
    best_u = (-np.inf, 0, 0)
    best_l = (np.inf, 0, 0)
    for start in range(0, len(a0), rows):
        x0 = a0[start:start + rows, None]
        x1 = a1[start:start + rows, None]
        n = root * x0 * x1 * b0[None, :] * b1[None, :]
        cross = al * x0 * b1[None, :] + be * x1 * b0[None, :]
        sq = p00 * (x0 * b0[None, :]) ** 2 + p11 * (x1 * b1[None, :]) ** 2
        degenerate = n <= eps_n
        with np.errstate(divide="ignore", invalid="ignore"):
            u = np.where(degenerate, 1.0, ((s + cross) ** 2 - sq) / n)
            l = np.where(degenerate, -1.0, (np.maximum(s - cross, 0.0) ** 2 - sq) / n)
        iu = int(np.argmax(u))
        il = int(np.argmin(l))
        if u.flat[iu] > best_u[0]:
            best_u = (float(u.flat[iu]), start + iu // u.shape[1], iu % u.shape[1])
        if l.flat[il] < best_l[0]:
            best_l = (float(l.flat[il]), start + il // l.shape[1], il % l.shape[1])
    return best_u[0], best_u[1], best_u[2], best_l[0], best_l[1], best_l[2]


def cyclic_sumset(a, b):
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    out = np.zeros(len(a), dtype=bool)
    for i in np.flatnonzero(a):
        out |= np.roll(b, i)
    return out.astype(np.uint8)
