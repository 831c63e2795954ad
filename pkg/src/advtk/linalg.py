"""Dense real matrix kernel: norms, masks, rectangles and exact rank."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from . import config
from .errors import DomainError

_GRAM_SIDE = 512


def _as_matrix(A):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise DomainError("expected a 2-D matrix")
    if not np.all(np.isfinite(A)):
        raise DomainError("matrix entries must be finite")
    return A


def _power(M, v, tol, max_iter):
    """Power iteration on a symmetric PSD matrix given as a callable."""
    lam_prev = -1.0
    lam = 0.0
    for _ in range(max_iter):
        z = M(v)
        lam = float(v @ z)
        nz = np.linalg.norm(z)
        if nz == 0.0:
            return 0.0, v, False
        v = z / nz
        if abs(lam - lam_prev) <= tol * abs(lam):
            break
        lam_prev = lam
    return lam, v, True


def _power_squaring(G, v, tol, max_squarings=80):
    """Power iteration run through repeated squaring of an explicit Gram matrix.

    After ``k`` squarings the vector is ``G^(2^k) v``, which converges even
    when the top two eigenvalues are nearly tied and plain iteration would
    need millions of steps.
    """
    P = G / np.linalg.norm(G)
    lam_prev = -1.0
    lam = 0.0
    for _ in range(max_squarings):
        z = P @ v
        nz = np.linalg.norm(z)
        if nz == 0.0:
            return 0.0, v, False
        w = z / nz
        lam = float(w @ (G @ w))
        if abs(lam - lam_prev) <= tol * abs(lam):
            return lam, w, True
        lam_prev = lam
        P = P @ P
        norm = np.linalg.norm(P)
        if norm == 0.0:
            break
        P /= norm
    return lam, w, True


def spectral_norm(A, tol=1e-14, max_iter=10**6, return_vector=False):
    """Largest singular value by power iteration on the Gram matrix.

    Starts from the normalised all-ones vector.  A second run from a fixed
    seed-0 pseudorandom vector is made when the first run stalls (the start is
    orthogonal to the range) or when ``A`` has negative entries, where the
    all-ones start may miss the top singular direction; the larger result wins.
    Gram matrices with at most 512 rows are formed explicitly and iterated by
    repeated squaring.
    """
    A = _as_matrix(A)
    r, c = A.shape
    if A.size == 0 or not np.any(A):
        return (0.0, np.zeros(c)) if return_vector else 0.0
    # scale to unit max entry so the Gram matrix neither underflows nor overflows
    scale = float(np.max(np.abs(A)))
    A = A / scale
    if c <= r:
        dim = c
        G = A.T @ A if c <= _GRAM_SIDE else None
        M = lambda v: A.T @ (A @ v)
    else:
        dim = r
        G = A @ A.T if r <= _GRAM_SIDE else None
        M = lambda v: A @ (A.T @ v)
    if G is not None:
        run = lambda v: _power_squaring(G, v, tol)
    else:
        run = lambda v: _power(M, v, tol, max_iter)
    lam, v, ok = run(np.full(dim, 1.0 / np.sqrt(dim)))
    if not ok or lam <= 0.0 or np.any(A < 0):
        w = np.random.default_rng(0).standard_normal(dim)
        lam2, v2, _ = run(w / np.linalg.norm(w))
        if lam2 > lam:
            lam, v = lam2, v2
    sigma = scale * float(np.sqrt(max(lam, 0.0)))
    if return_vector:
        if c > r:
            # v lives on the row side; return the matching right vector
            v = A.T @ v
            nv = np.linalg.norm(v)
            v = v / nv if nv else v
        return sigma, v
    return sigma


def top_singular_triplet(A, v0=None, iters=None, tol=1e-12):
    """Top singular triplet ``(sigma, u, v)`` for use inside optimizers.

    Small matrices go through a dense SVD; larger ones through a warm-started
    power iteration capped at ``iters`` steps.
    """
    A = np.asarray(A, dtype=float)
    r, c = A.shape
    if min(r, c) <= 48 and iters is None:
        U, s, Vt = np.linalg.svd(A, full_matrices=False)
        return float(s[0]), U[:, 0], Vt[0]
    v = np.full(c, 1.0 / np.sqrt(c)) if v0 is None else v0
    lam_prev = -1.0
    for _ in range(iters or 200):
        w = A @ v
        z = A.T @ w
        lam = float(v @ z)
        nz = np.linalg.norm(z)
        if nz == 0.0:
            return 0.0, np.zeros(r), v
        v = z / nz
        if abs(lam - lam_prev) <= tol * lam:
            break
        lam_prev = lam
    u = A @ v
    s = float(np.linalg.norm(u))
    return s, (u / s if s else u), v


def norm_one(A):
    """Maximum absolute column sum."""
    A = _as_matrix(A)
    return float(np.abs(A).sum(axis=0).max()) if A.size else 0.0


def norm_inf(A):
    """Maximum absolute row sum."""
    A = _as_matrix(A)
    return float(np.abs(A).sum(axis=1).max()) if A.size else 0.0


def frobenius_norm(A):
    return float(np.linalg.norm(_as_matrix(A)))


# ---- cells and rectangles ---------------------------------------------------


def cells_to_mask(S, shape):
    """Boolean mask of a cell set given as a mask or as ``(row, col)`` pairs."""
    if isinstance(S, np.ndarray) and S.dtype == bool:
        if S.shape != tuple(shape):
            raise DomainError(f"mask shape {S.shape} does not match {tuple(shape)}")
        return S
    mask = np.zeros(shape, dtype=bool)
    for cell in S:
        r, c = (int(t) for t in cell)
        if not (0 <= r < shape[0] and 0 <= c < shape[1]):
            raise DomainError(f"cell {(r, c)} outside a {shape[0]}x{shape[1]} grid")
        mask[r, c] = True
    return mask


def mask_subset(A, S):
    """Copy of ``A`` with every entry outside the cell set ``S`` set to zero."""
    A = _as_matrix(A)
    return np.where(cells_to_mask(S, A.shape), A, 0.0)


@dataclass(frozen=True)
class Rectangle:
    rows: tuple
    cols: tuple

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(sorted(int(r) for r in self.rows)))
        object.__setattr__(self, "cols", tuple(sorted(int(c) for c in self.cols)))
        if len(set(self.rows)) != len(self.rows) or len(set(self.cols)) != len(self.cols):
            raise DomainError("rectangle has repeated indices")

    @property
    def is_empty(self):
        return not self.rows or not self.cols

    @property
    def area(self):
        return len(self.rows) * len(self.cols)

    def mask(self, shape):
        m = np.zeros(shape, dtype=bool)
        if not self.is_empty:
            m[np.ix_(self.rows, self.cols)] = True
        return m

    def check(self, shape):
        if self.is_empty:
            raise DomainError("rectangle must have nonempty row and column sets")
        if self.rows[0] < 0 or self.rows[-1] >= shape[0] or self.cols[0] < 0 or self.cols[-1] >= shape[1]:
            raise DomainError(f"rectangle indices fall outside a {shape[0]}x{shape[1]} grid")


@dataclass(frozen=True)
class RectanglePartition:
    """Rectangles over an ``r x c`` grid with an optional color per rectangle.

    Empty rectangles may appear (they arise from unreachable formula leaves);
    they are ignored by the disjointness and cover checks.
    """

    shape: tuple
    rectangles: tuple
    colors: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "shape", tuple(int(s) for s in self.shape))
        object.__setattr__(self, "rectangles", tuple(self.rectangles))
        if self.colors is not None:
            object.__setattr__(self, "colors", tuple(int(c) for c in self.colors))
            if len(self.colors) != len(self.rectangles):
                raise DomainError("one color per rectangle required")

    def __len__(self):
        return len(self.rectangles)

    @property
    def nonempty(self):
        return [R for R in self.rectangles if not R.is_empty]

    def coverage(self):
        """Number of rectangles covering each cell."""
        count = np.zeros(self.shape, dtype=np.int64)
        for R in self.nonempty:
            R.check(self.shape)
            count[np.ix_(R.rows, R.cols)] += 1
        return count

    def is_disjoint(self):
        return bool(np.all(self.coverage() <= 1))

    def is_cover(self):
        return bool(np.all(self.coverage() >= 1))

    def is_partition(self):
        cov = self.coverage()
        return bool(np.all(cov == 1))


def submatrix(A, R):
    """The ``|rows| x |cols|`` block of ``A`` selected by rectangle ``R``."""
    A = _as_matrix(A)
    R.check(A.shape)
    return A[np.ix_(R.rows, R.cols)]


class KeyLemmaResult(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def key_lemma_check(A, P, tol=config.NORM_TOL):
    """Compare ``||A||^2`` with the sum of squared block norms over a partition."""
    A = _as_matrix(A)
    if tuple(P.shape) != A.shape:
        raise DomainError("partition shape does not match the matrix")
    if not P.is_partition():
        raise DomainError("rectangles do not form a partition of the grid")
    lhs = spectral_norm(A) ** 2
    rhs = sum(spectral_norm(submatrix(A, R)) ** 2 for R in P.nonempty)
    return KeyLemmaResult(lhs, rhs, lhs <= rhs + tol)


# ---- exact rank ---------------------------------------------------------------


def _to_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (float, np.floating)):
        if not np.isfinite(x):
            raise DomainError(f"non-rational entry {x!r}")
        return Fraction(float(x))
    raise DomainError(f"non-rational entry {x!r}")


def rank_exact(A):
    """Exact rank via fraction-free (Bareiss) elimination on integer-scaled rows."""
    rows = [[_to_fraction(x) for x in row] for row in (A.tolist() if isinstance(A, np.ndarray) else A)]
    if not rows or not rows[0]:
        return 0
    M = []
    for row in rows:
        den = 1
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
        M.append([int(x * den) for x in row])
    nr, nc = len(M), len(M[0])
    rank = 0
    prev = 1
    for col in range(nc):
        piv = next((r for r in range(rank, nr) if M[r][col] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        p = M[rank][col]
        for r in range(rank + 1, nr):
            a = M[r][col]
            row_r, row_p = M[r], M[rank]
            for cc in range(col, nc):
                row_r[cc] = (p * row_r[cc] - a * row_p[cc]) // prev
        prev = p
        rank += 1
        if rank == nr:
            break
    return rank


def _masked_rational(A, mask):
    A_list = A.tolist() if isinstance(A, np.ndarray) else [list(r) for r in A]
    return [[x if mask[i, j] else 0 for j, x in enumerate(row)] for i, row in enumerate(A_list)]


def rectangle_measure_bound(A, measure, cover):
    """``mu(full grid) / max_S mu(A masked to S)`` for a covering ``cover``.

    ``measure`` is ``'spectral_sq'`` (squared spectral norm) or ``'rank'``.  Any
    rectangle partition embedded in the covering has at least this many parts.
    """
    if measure not in ("spectral_sq", "rank"):
        raise DomainError("measure must be 'spectral_sq' or 'rank'")
    if measure == "rank":
        shape = (len(A), len(A[0])) if not isinstance(A, np.ndarray) else A.shape
    else:
        A = _as_matrix(A)
        shape = A.shape
    masks = [cells_to_mask(S, shape) for S in cover]
    if not masks:
        raise DomainError("empty covering")
    if not np.all(np.logical_or.reduce(masks)):
        raise DomainError("cell sets do not cover the grid")
    if measure == "spectral_sq":
        full = spectral_norm(A) ** 2
        if full == 0.0:
            raise DomainError("all-zero matrix")
        return full / max(spectral_norm(np.where(m, A, 0.0)) ** 2 for m in masks)
    full = rank_exact(A)
    if full == 0:
        raise DomainError("all-zero matrix")
    return Fraction(full, max(rank_exact(_masked_rational(A, m)) for m in masks))
