"""Compiled exhaustive pair scans for witness evaluation.

For every 0-input row the scan looks for the 1-input minimising the overlap
(sum or max of ``a_x(i) a_y(i)`` over differing positions).  With ``root``
the inputs are probabilities and each term is ``sqrt(p_x(i) p_y(i))``, which
is exact whenever the product is a representable square.  Partial overlaps
only grow, so a column is abandoned as soon as it cannot beat the row's best.
"""

import os

import numba
import numpy as np

_threads = os.environ.get("ADVTK_THREADS")
if _threads:
    numba.set_num_threads(max(1, min(int(_threads), numba.config.NUMBA_NUM_THREADS)))


@numba.njit(cache=True, nogil=True)
def _row_scan(xs, ax, ys, ay, use_max, global_prune, root, best_out, arg_out):
    n = xs.shape[1]
    m = ys.shape[0]
    gbest = np.inf
    for r in range(xs.shape[0]):
        best = gbest if global_prune else np.inf
        arg = -1
        for c in range(m):
            acc = 0.0
            pruned = False
            for i in range(n):
                if xs[r, i] != ys[c, i]:
                    t = ax[r, i] * ay[c, i]
                    if root:
                        t = np.sqrt(t)
                    if use_max:
                        if t > acc:
                            acc = t
                    else:
                        acc += t
                    if acc >= best:
                        pruned = True
                        break
            if not pruned and acc < best:
                best = acc
                arg = c
        best_out[r] = best
        arg_out[r] = arg
        if arg >= 0 and best < gbest:
            gbest = best


def pair_scan(xs, ax, ys, ay, use_max, global_prune=False, root=False):
    """Per-row minimum overlap and the column attaining it (smallest index on ties).

    With ``global_prune`` a row only records a column when it improves on every
    earlier row; other rows report ``-1``.  The overall minimum is unaffected.
    """
    xs = np.ascontiguousarray(xs, dtype=np.int16)
    ys = np.ascontiguousarray(ys, dtype=np.int16)
    ax = np.ascontiguousarray(ax, dtype=np.float64)
    ay = np.ascontiguousarray(ay, dtype=np.float64)
    rows = xs.shape[0]
    best = np.empty(rows, dtype=np.float64)
    arg = np.empty(rows, dtype=np.int64)
    _row_scan(xs, ax, ys, ay, bool(use_max), bool(global_prune), bool(root), best, arg)
    return best, arg


@numba.njit(cache=True, nogil=True)
def _pair_values(xs, ax, ys, ay, rows, cols, use_max, root, out):
    n = xs.shape[1]
    for t in range(rows.shape[0]):
        r = rows[t]
        c = cols[t]
        acc = 0.0
        for i in range(n):
            if xs[r, i] != ys[c, i]:
                v = ax[r, i] * ay[c, i]
                if root:
                    v = np.sqrt(v)
                if use_max:
                    if v > acc:
                        acc = v
                else:
                    acc += v
        out[t] = acc


def pair_values(xs, ax, ys, ay, rows, cols, use_max, root=False):
    """Overlap for an explicit list of ``(row, col)`` pairs."""
    out = np.empty(len(rows), dtype=np.float64)
    _pair_values(
        np.ascontiguousarray(xs, dtype=np.int16),
        np.ascontiguousarray(ax, dtype=np.float64),
        np.ascontiguousarray(ys, dtype=np.int16),
        np.ascontiguousarray(ay, dtype=np.float64),
        np.ascontiguousarray(rows, dtype=np.int64),
        np.ascontiguousarray(cols, dtype=np.int64),
        bool(use_max),
        bool(root),
        out,
    )
    return out
