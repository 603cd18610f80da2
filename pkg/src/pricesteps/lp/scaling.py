"""Power-of-two row/column equilibration.

Scaling by powers of two is exact in binary floating point, so unscaling
recovers the original numbers bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp


@dataclass(frozen=True)
class Scaling:
    row: np.ndarray  # r_i: scaled row i = r_i * row i
    col: np.ndarray  # s_j: x_j = s_j * x'_j

    def unscale_primal(self, xs):
        return xs * self.col

    def unscale_dual(self, ys):
        return ys * self.row

    def unscale_reduced(self, ds):
        return ds / self.col


def _pow2(v: np.ndarray) -> np.ndarray:
    out = np.ones_like(v)
    ok = v > 0
    out[ok] = np.exp2(-np.round(np.log2(v[ok])))
    return out


def equilibrate(A: sp.csr_matrix, passes: int = 2) -> Scaling:
    """Alternate max-abs row and column scaling, rounded to powers of two."""
    m, n = A.shape
    r = np.ones(m)
    s = np.ones(n)
    absA = abs(A).tocsr()
    for _ in range(passes):
        scaled = sp.diags(r) @ absA @ sp.diags(s)
        rmax = scaled.max(axis=1).toarray().ravel() if m and n else np.zeros(m)
        r = r * _pow2(rmax)
        scaled = sp.diags(r) @ absA @ sp.diags(s)
        cmax = scaled.max(axis=0).toarray().ravel() if n and m else np.zeros(n)
        s = s * _pow2(cmax)
    return Scaling(row=r, col=s)


def apply(scaling: Scaling, c, A, b, lo, hi):
    """Return (c', A', b', lo', hi') for the scaled problem."""
    R = sp.diags(scaling.row)
    S = sp.diags(scaling.col)
    with np.errstate(invalid="ignore"):
        lo_s = lo / scaling.col
        hi_s = hi / scaling.col
    return c * scaling.col, (R @ A @ S).tocsr(), b * scaling.row, lo_s, hi_s
