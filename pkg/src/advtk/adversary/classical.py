"""Hamming-distance-1 formula size bounds: Khrapchenko, Koutsoupias, Håstad.

These return formula-size (squared) bounds, as their theorem statements do.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..boolfn import parse_restriction, restriction_classes, restriction_code, restriction_weights, validate_filter
from ..errors import DomainError
from ..linalg import spectral_norm
from .spectral import _side_rows


def _distance_one(f, A, B):
    if f.k != 2:
        raise DomainError("Hamming-distance-1 bounds need a binary alphabet")
    if not f.has_both_labels():
        raise DomainError("function has a single label")
    ra, rb = _side_rows(f, A, 0), _side_rows(f, B, 1)
    X, Y = f.X[ra], f.Y[rb]
    dist = (X[:, None, :] != Y[None, :, :]).sum(axis=2)
    return dist == 1, ra.size, rb.size


def khrapchenko(f, A=None, B=None):
    """``|C|^2 / (|A| |B|)`` as an exact fraction; ``A``/``B`` default to all of X/Y."""
    C, na, nb = _distance_one(f, A, B)
    c = int(C.sum())
    return Fraction(c * c, na * nb)


def koutsoupias(f, A=None, B=None):
    """Squared spectral norm of the distance-1 indicator on ``A x B``."""
    C, _, _ = _distance_one(f, A, B)
    return spectral_norm(C.astype(float)) ** 2


def hastad_bound(f, p, delta=None):
    """Exact restriction-enumeration value of Håstad's bound.

    ``delta`` is a filter (set of restriction strings); ``None`` means all
    restrictions.  Events are: restricted function constant 0, constant 1, or
    a single literal.  Returns 0 when the literal event has probability 0.
    """
    if f.k != 2 or not f.is_total:
        raise DomainError("Håstad's bound needs a total binary function")
    status, literal = restriction_classes(f)
    weights, _ = restriction_weights(f.n, p)
    if delta is None:
        in_delta = np.ones(weights.size, dtype=bool)
    else:
        delta = {parse_restriction(r, f.n) for r in delta}
        if not validate_filter(delta, f.n):
            raise DomainError("restriction set is not a filter")
        in_delta = np.zeros(weights.size, dtype=bool)
        in_delta[[restriction_code(r) for r in delta]] = True
    pr_delta = float(weights[in_delta].sum())
    if pr_delta == 0.0:
        raise DomainError("filter has probability zero")
    w = np.where(in_delta, weights, 0.0)
    pa = float(w[status == 0].sum()) / pr_delta
    pb = float(w[status == 1].sum()) / pr_delta
    pc = float(w[literal].sum()) / pr_delta
    if pc == 0.0:
        return 0.0
    return pc * pc / (pa * pb) * ((1 - p) / (2 * p)) ** 2
