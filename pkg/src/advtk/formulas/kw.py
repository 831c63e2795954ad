"""Karchmer-Wigderson rectangles: partitions from formulas, coloring covers and
the exact rectangle partition number."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .. import config
from ..errors import DomainError, FormulaMismatchError, ResourceCapError, VerificationError
from ..linalg import Rectangle, RectanglePartition
from .ast import AND, Leaf, find_mismatch, leaf_count, num_vars

_SUBRECT_CAP = 2_000_000


def _diff(f):
    if f.k < 2 or not f.has_both_labels():
        raise DomainError("the relation needs both labels present")
    X, Y = f.X, f.Y
    return X[:, None, :] != Y[None, :, :]


@dataclass(frozen=True)
class KWPartition:
    """Rectangles over X x Y, one per formula leaf, colored by the leaf variable."""

    partition: RectanglePartition

    @property
    def rectangles(self):
        return self.partition.rectangles

    @property
    def colors(self):
        return self.partition.colors

    @property
    def shape(self):
        return self.partition.shape

    def __len__(self):
        return len(self.partition)

    @property
    def nonempty_count(self):
        return len(self.partition.nonempty)

    def is_disjoint(self):
        return self.partition.is_disjoint()

    def is_cover(self):
        return self.partition.is_cover()

    def _indicators(self):
        nx, ny = self.shape
        keep = [k for k, R in enumerate(self.rectangles) if not R.is_empty]
        Rr = np.zeros((len(keep), nx), dtype=np.int64)
        Rc = np.zeros((len(keep), ny), dtype=np.int64)
        for t, k in enumerate(keep):
            R = self.rectangles[k]
            Rr[t, list(R.rows)] = 1
            Rc[t, list(R.cols)] = 1
        return keep, Rr, Rc

    def _violations(self, f, keep, Rr, Rc):
        """Cells per nonempty rectangle where its color does not separate the pair."""
        same = ~_diff(f)
        colors = np.asarray(self.colors, dtype=np.int64)[keep]
        return np.einsum("li,ijl,lj->l", Rr, same[:, :, colors], Rc)

    def is_monochromatic(self, f):
        keep, Rr, Rc = self._indicators()
        return not np.any(self._violations(f, keep, Rr, Rc))

    def problems(self, f):
        out = []
        if self.shape != (int(np.sum(f.labels == 0)), int(np.sum(f.labels == 1))):
            out.append("grid shape does not match the function")
            return out
        for R in self.partition.nonempty:
            R.check(self.shape)
        keep, Rr, Rc = self._indicators()
        cov = Rr.T @ Rc
        if np.any(cov > 1):
            out.append("rectangles overlap")
        if np.any(cov < 1):
            out.append("rectangles do not cover X x Y")
        if np.any(self._violations(f, keep, Rr, Rc)):
            out.append("some rectangle is not monochromatic for its color")
        return out

    def is_valid(self, f):
        return not self.problems(f)


def _subformula_values(phi, P, memo):
    """Value of every gate on the rows of ``P``, keyed by node id (one bottom-up pass)."""
    if isinstance(phi, Leaf):
        v = P[:, phi.var].astype(bool)
        if phi.negated:
            v = ~v
    else:
        a = _subformula_values(phi.left, P, memo)
        b = _subformula_values(phi.right, P, memo)
        v = (a & b) if phi.op == AND else (a | b)
    memo[id(phi)] = v
    return v


def kw_partition(phi, f):
    """Rectangles visited by the protocol that follows ``phi``.

    At an AND gate the 0-side player moves to the first child that is 0 on x;
    at an OR gate the 1-side player moves to the first child that is 1 on y.
    Leaves nobody reaches give empty rectangles, so the output always has
    ``leaf_count(phi)`` entries.
    """
    if f.k != 2:
        raise DomainError("the protocol is defined for binary inputs")
    if not f.has_both_labels():
        raise DomainError("the relation needs both labels present")
    if num_vars(phi) > f.n:
        raise DomainError("formula uses variables beyond the function's arity")
    vx, vy = {}, {}
    if _subformula_values(phi, f.X, vx).any() or not _subformula_values(phi, f.Y, vy).all():
        raise FormulaMismatchError(find_mismatch(phi, f))
    rects, colors = [], []

    def walk(node, rows, cols):
        if isinstance(node, Leaf):
            rects.append(Rectangle(rows.tolist(), cols.tolist()))
            colors.append(node.var)
            return
        if node.op == AND:
            left = ~vx[id(node.left)][rows]
            walk(node.left, rows[left], cols)
            walk(node.right, rows[~left], cols)
        else:
            left = vy[id(node.left)][cols]
            walk(node.left, rows, cols[left])
            walk(node.right, rows, cols[~left])

    nx, ny = f.X.shape[0], f.Y.shape[0]
    walk(phi, np.arange(nx), np.arange(ny))
    P = KWPartition(RectanglePartition((nx, ny), rects, colors))
    problems = P.problems(f)
    if problems or len(P) != leaf_count(phi):
        raise VerificationError("protocol produced an invalid partition: " + "; ".join(problems))
    return P


def color_cover(P, f):
    """Cell sets ``S_c``: the union of rectangles whose least valid color is ``c``."""
    diff = _diff(f)
    if P.shape != diff.shape[:2]:
        raise DomainError("partition shape does not match the function")
    masks = [np.zeros(P.shape, dtype=bool) for _ in range(f.n)]
    for R in P.partition.nonempty:
        ok = np.all(diff[np.ix_(R.rows, R.cols)], axis=(0, 1))
        if not ok.any():
            raise DomainError("invalid partition: a rectangle has no valid color")
        masks[int(np.argmax(ok))] |= R.mask(P.shape)
    if not np.all(np.logical_or.reduce(masks)):
        raise DomainError("invalid partition: cells left uncovered")
    return masks


# ---- exact rectangle partition number -----------------------------------------------


class PartitionNumber(NamedTuple):
    value: int
    partition: RectanglePartition
    lower_bound: int
    nodes: int


def _bits(idx):
    m = 0
    for i in idx:
        m |= 1 << int(i)
    return m


def _nonempty_subsets(items):
    items = list(items)
    for mask in range(1, 1 << len(items)):
        yield [items[b] for b in range(len(items)) if mask >> b & 1]


def _monochromatic_rectangles(f):
    """Every monochromatic sub-rectangle, as (cell bitmask, rows, cols, least color)."""
    X, Y = f.X, f.Y
    nx, ny = X.shape[0], Y.shape[0]
    rect = {}
    count = 0
    for i in range(f.n):
        symbols = sorted(set(X[:, i].tolist()))
        for keep in range(1, 1 << len(symbols)):
            T = {symbols[b] for b in range(len(symbols)) if keep >> b & 1}
            rows = [r for r in range(nx) if X[r, i] in T]
            cols = [c for c in range(ny) if Y[c, i] not in T]
            if not cols:
                continue
            count += ((1 << len(rows)) - 1) * ((1 << len(cols)) - 1)
            if count > _SUBRECT_CAP:
                raise ResourceCapError("too many monochromatic sub-rectangles to enumerate")
            for rs in _nonempty_subsets(rows):
                for cs in _nonempty_subsets(cols):
                    m = 0
                    for r in rs:
                        m |= _bits(r * ny + c for c in cs)
                    if m not in rect:
                        rect[m] = (tuple(rs), tuple(cs), i)
                    elif i < rect[m][2]:
                        rect[m] = (tuple(rs), tuple(cs), i)
    return rect


def _spectral_floor(f):
    from ..adversary.spectral import hamming_one_matrix, spectral_value

    h1 = hamming_one_matrix(f)
    if not h1.any():
        return 1
    return max(1, math.ceil(spectral_value(f, h1) ** 2 - 1e-6))


def rectangle_partition_number(f, lower_bound=None, cap=None):
    """Exact minimum number of disjoint monochromatic rectangles covering X x Y.

    Branch and bound: the uncovered cell with the fewest usable rectangles is
    branched on, larger rectangles first; a branch is cut when the rectangles
    used plus ``ceil(uncovered / largest rectangle)`` cannot beat the best
    partition so far.  The search stops early once it meets ``lower_bound``
    (by default the squared spectral value of the distance-1 indicator,
    rounded up, for binary inputs).
    """
    cap = config.RECTANGLE_SEARCH_CAP if cap is None else cap
    if not f.has_both_labels():
        raise DomainError("the relation needs both labels present")
    nx, ny = int(np.sum(f.labels == 0)), int(np.sum(f.labels == 1))
    if nx * ny > cap:
        raise ResourceCapError(f"{nx}x{ny} grid exceeds the exact search cap {cap}")
    if lower_bound is None:
        lower_bound = _spectral_floor(f) if f.k == 2 else 1
    rects = _monochromatic_rectangles(f)
    masks = sorted(rects, key=lambda m: (-m.bit_count(), m))
    ncells = nx * ny
    full = (1 << ncells) - 1
    by_cell = [[m for m in masks if m >> c & 1] for c in range(ncells)]
    biggest = masks[0].bit_count()
    # every single cell is monochromatic, so the cells alone are a partition
    best = [ncells, [1 << c for c in range(ncells)]]
    seen = {}
    nodes = [0]

    def search(covered, chosen):
        nodes[0] += 1
        if best[0] <= lower_bound:
            return
        if covered == full:
            if len(chosen) < best[0]:
                best[0], best[1] = len(chosen), list(chosen)
            return
        left = ncells - covered.bit_count()
        if len(chosen) + -(-left // biggest) >= best[0]:
            return
        if seen.get(covered, ncells + 1) <= len(chosen):
            return
        seen[covered] = len(chosen)
        cell, options = None, None
        rest = full & ~covered
        while rest:
            low = rest & -rest
            c = low.bit_length() - 1
            rest ^= low
            opts = [m for m in by_cell[c] if not m & covered]
            if options is None or len(opts) < len(options):
                cell, options = c, opts
                if len(opts) <= 1:
                    break
        for m in options:
            chosen.append(m)
            search(covered | m, chosen)
            chosen.pop()

    search(0, [])
    value, chosen = best
    parts = [rects[m] for m in chosen]
    partition = RectanglePartition(
        (nx, ny), [Rectangle(r, c) for r, c, _ in parts], [col for _, _, col in parts]
    )
    if not partition.is_partition():
        raise VerificationError("search returned an invalid partition")
    return PartitionNumber(value, partition, int(lower_bound), nodes[0])
