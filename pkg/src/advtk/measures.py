"""Sensitivity, certificate complexity and block sensitivity."""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from . import config
from .errors import DomainError, ResourceCapError


def _side_filter(side):
    if side not in (0, 1, "max"):
        raise DomainError("side must be 0, 1 or 'max'")


def sensitivity_profile(f):
    """Per-input sensitivity, aligned with ``f.codes``.

    Position ``i`` is sensitive at ``x`` when some single-position change of
    ``x`` stays inside the domain and flips the label.
    """
    codes = f.codes
    pts = f.points().astype(np.int64)
    sens_bits = np.zeros((codes.size, f.n), dtype=bool)
    for i in range(f.n):
        w = f.k ** (f.n - 1 - i)
        for v in range(f.k):
            delta = (v - pts[:, i]) * w
            moved = delta != 0
            lab = f.lookup_codes(codes + delta)
            sens_bits[:, i] |= moved & (lab >= 0) & (lab != f.labels)
    return sens_bits


def sensitivity(f, side="max"):
    """``s_0``, ``s_1`` or ``s`` (side ``'max'``); 0 for a constant function."""
    _side_filter(side)
    if f.domain_size == 0:
        raise DomainError("empty domain")
    counts = sensitivity_profile(f).sum(axis=1)
    if side == "max":
        return int(counts.max())
    sel = counts[f.labels == side]
    return int(sel.max()) if sel.size else 0


def _diff_masks(a, others):
    """Bitmask (bit i = position i) of positions where ``a`` differs from each row."""
    bits = (others != a[None, :]).astype(np.int64)
    return bits @ (1 << np.arange(a.size, dtype=np.int64))


def _minimal_sets(masks):
    masks = np.unique(masks)
    order = np.argsort([bin(int(m)).count("1") for m in masks], kind="stable")
    kept = []
    for m in masks[order]:
        m = int(m)
        if not any((k & m) == k for k in kept):
            kept.append(m)
    return np.array(kept, dtype=np.int64)


@lru_cache(maxsize=None)
def _combination_masks(n, s):
    combos = list(itertools.combinations(range(n), s))
    masks = np.array([sum(1 << i for i in c) for c in combos], dtype=np.int64)
    return combos, masks


def min_certificate(point, opposite, n):
    """Lexicographically least minimum certificate of ``point`` against ``opposite``.

    A certificate must differ somewhere from every in-domain input carrying the
    other label, i.e. it is a hitting set of the difference sets.
    """
    if opposite.shape[0] == 0:
        return ()
    diffs = _minimal_sets(_diff_masks(point, opposite))
    for s in range(1, n + 1):
        combos, masks = _combination_masks(n, s)
        ok = np.all((masks[:, None] & diffs[None, :]) != 0, axis=1)
        hit = np.flatnonzero(ok)
        if hit.size:
            return combos[hit[0]]
    raise DomainError("inputs with equal strings and different labels")  # pragma: no cover


def min_certificates(f, side, pair_cap=None):
    """Minimum certificate (as a position tuple) for every input with label ``side``."""
    pair_cap = config.SPECTRAL_CELL_CAP if pair_cap is None else pair_cap
    pts = f.points()
    mine = pts[f.labels == side]
    other = pts[f.labels != side]
    if mine.shape[0] * max(other.shape[0], 1) > pair_cap:
        raise ResourceCapError(
            f"certificate search over {mine.shape[0]}x{other.shape[0]} pairs exceeds cap {pair_cap}"
        )
    return [min_certificate(x, other, f.n) for x in mine]


def certificate_complexity(f, side):
    """``C_0`` or ``C_1``: the largest minimum-certificate size on that side."""
    if side not in (0, 1):
        raise DomainError("side must be 0 or 1")
    if not np.any(f.labels == side):
        raise DomainError(f"no inputs with label {side}")
    return max(len(c) for c in min_certificates(f, side))


def block_sensitivity(f, cap=None):
    """Maximum number of disjoint sensitive blocks, over all inputs (total binary f)."""
    cap = config.BLOCK_SENSITIVITY_ARITY_CAP if cap is None else cap
    if not f.is_total or f.k != 2:
        raise DomainError("block sensitivity requires a total binary function")
    n = f.n
    if n > cap:
        raise ResourceCapError(f"block sensitivity arity {n} exceeds cap {cap}")
    labels = f.labels
    size = 1 << n
    # code bit (n-1-i) holds position i; blocks use the same bit layout
    all_blocks = np.arange(1, size, dtype=np.int64)
    best = 0
    for code in range(size):
        flipped = labels[code ^ all_blocks] != labels[code]
        sensitive = all_blocks[flipped]
        if sensitive.size == 0:
            continue
        minimal = _minimal_sets(sensitive)
        best = max(best, _max_packing(tuple(int(b) for b in minimal), size - 1))
        if best == n:
            break
    return best


def _max_packing(blocks, universe):
    """Largest number of pairwise disjoint ``blocks`` (bitmasks)."""

    @lru_cache(maxsize=None)
    def solve(avail):
        usable = [b for b in blocks if b & avail == b]
        if not usable:
            return 0
        low = avail & -avail
        # either the lowest available position stays unused, or a block covers it
        res = solve(avail & ~low)
        for b in usable:
            if b & low:
                res = max(res, 1 + solve(avail & ~b))
        return res

    return solve(universe)
