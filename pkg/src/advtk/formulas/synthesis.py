"""Exact minimum formula size by dynamic programming over truth tables."""

from __future__ import annotations

from typing import NamedTuple, Optional

import numpy as np

from .. import config
from ..boolfn import _all_points
from ..errors import DomainError, ResourceCapError, VerificationError
from .ast import AND, OR, Gate, Leaf, truth_table

_CHUNK = 1 << 22


class SynthesisResult(NamedTuple):
    """``size`` is ``None`` when no formula with at most ``cap`` leaves exists."""

    size: Optional[int]
    formula: object
    cap: int

    @property
    def exceeded(self):
        return self.size is None

    def describe(self):
        return f"greater than {self.cap}" if self.size is None else str(self.size)

    def __str__(self):
        return self.describe()


def _table_code(labels):
    """Truth table as an integer: bit ``c`` is the value on input code ``c``."""
    return int(sum(int(b) << c for c, b in enumerate(labels)))


def _literal_codes(n):
    pts = _all_points(n)
    out = []
    for i in range(n):
        pos = _table_code(pts[:, i])
        full = (1 << (1 << n)) - 1
        out.append((Leaf(i), pos))
        out.append((Leaf(i, True), full ^ pos))
    return out


class _Search:
    """Levels of truth tables ordered by minimum formula size, with back-pointers."""

    def __init__(self, n):
        self.n = n
        if n > config.SYNTHESIS_ARITY_CAP:
            raise ResourceCapError(f"formula search is limited to {config.SYNTHESIS_ARITY_CAP} variables")
        self.dtype = np.uint16
        self.seen = {}
        lits = _literal_codes(n)
        codes = []
        for leaf, c in lits:
            if c not in self.seen:
                self.seen[c] = leaf
                codes.append(c)
        self.levels = {1: np.array(codes, dtype=self.dtype)}

    def grow(self, s):
        found = []
        for i in range(1, s // 2 + 1):
            j = s - i
            A, B = self.levels.get(i), self.levels.get(j)
            if A is None or B is None or A.size == 0 or B.size == 0:
                continue
            for op in (AND, OR):
                for start in range(0, A.size, max(1, _CHUNK // max(1, B.size))):
                    a = A[start : start + max(1, _CHUNK // max(1, B.size))]
                    vals = (a[:, None] & B[None, :]) if op == AND else (a[:, None] | B[None, :])
                    flat = vals.ravel()
                    uniq, first = np.unique(flat, return_index=True)
                    for code, idx in zip(uniq.tolist(), first.tolist()):
                        if code in self.seen:
                            continue
                        ra, rb = divmod(idx, B.size)
                        self.seen[code] = (op, int(a[ra]), int(B[rb]))
                        found.append(code)
        self.levels[s] = np.array(sorted(found), dtype=self.dtype)
        return self.levels[s]

    def build(self, code):
        entry = self.seen[code]
        if isinstance(entry, Leaf):
            return entry
        op, a, b = entry
        return Gate(op, self.build(a), self.build(b))


def min_formula_size(f, cap=None):
    """Smallest formula for a total binary ``f`` with at most 4 variables.

    Returns a :class:`SynthesisResult`; when every formula with at most ``cap``
    leaves fails, ``size`` is ``None`` (printed as "greater than cap").
    ``cap=None`` searches until the function is found.  Constant functions
    cost two leaves (``x1 & !x1``).
    """
    if not f.is_total or f.k != 2:
        raise DomainError("formula search needs a total binary function")
    target = _table_code(f.labels)
    search = _Search(f.n)
    limit = cap if cap is not None else 10**9
    s = 1
    while target not in search.seen:
        s += 1
        if s > limit:
            return SynthesisResult(None, None, cap)
        search.grow(s)
    phi = search.build(target)
    size = s
    if not np.array_equal(truth_table(phi, f.n), f.labels):
        raise VerificationError("synthesised formula does not compute the target")
    return SynthesisResult(size, phi, cap if cap is not None else size)


def formula_size_table(n, cap=None):
    """Minimum formula size of every function on ``n <= 4`` variables, keyed by table code."""
    search = _Search(n)
    total = 1 << (1 << n)
    s = 1
    sizes = {c: 1 for c in search.seen}
    while len(search.seen) < total and (cap is None or s < cap):
        s += 1
        for c in search.grow(s).tolist():
            sizes[c] = s
    return sizes
