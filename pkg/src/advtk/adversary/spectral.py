"""Dual objects: spectral adversary matrices, probability schemes, index selections."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import config
from ..errors import DomainError, NoCrossPairsError, ResourceCapError
from ..linalg import spectral_norm


def difference_masks(f, cap=None):
    """``D[i, x, y]`` is true when 0-input ``x`` and 1-input ``y`` differ at ``i``."""
    if not f.has_both_labels():
        raise NoCrossPairsError("no cross pairs: the function has a single label")
    X, Y = f.X, f.Y
    cap = config.SPECTRAL_CELL_CAP if cap is None else cap
    if X.shape[0] * Y.shape[0] > cap:
        raise ResourceCapError(f"{X.shape[0]}x{Y.shape[0]} cells exceed cap {cap}")
    return np.stack([X[:, i][:, None] != Y[:, i][None, :] for i in range(f.n)])


def hamming_one_matrix(f, D=None):
    """Indicator of cross pairs at Hamming distance exactly 1."""
    D = difference_masks(f) if D is None else D
    return (D.sum(axis=0) == 1).astype(float)


def check_adversary_matrix(f, gamma):
    gamma = np.asarray(gamma, dtype=float)
    nx, ny = int(np.sum(f.labels == 0)), int(np.sum(f.labels == 1))
    if gamma.shape != (nx, ny):
        raise DomainError(f"adversary matrix must be {nx}x{ny}, got {gamma.shape}")
    if np.any(gamma < 0) or not np.all(np.isfinite(gamma)):
        raise DomainError("adversary matrix must be finite and nonnegative")
    if not np.any(gamma):
        raise DomainError("adversary matrix is identically zero")
    return gamma


def spectral_value(f, gamma, D=None):
    """``||Gamma|| / max_i ||Gamma_i||``: a certified lower bound on sumPI."""
    gamma = check_adversary_matrix(f, gamma)
    D = difference_masks(f) if D is None else D
    if np.any((gamma > 0) & ~D.any(axis=0)):
        raise DomainError("malformed adversary matrix: weight on a pair of identical strings")
    denom = max(spectral_norm(np.where(D[i], gamma, 0.0)) for i in range(f.n))
    return spectral_norm(gamma) / denom


# ---- probability schemes ---------------------------------------------------------


@dataclass(frozen=True)
class ProbSchemeWitness:
    """Distributions ``q`` on X x Y, ``p_A`` on X, ``p_B`` on Y and the conditional families.

    ``px[x, i]`` is a distribution over Y and ``py[y, i]`` one over X.
    """

    q: np.ndarray
    pA: np.ndarray
    pB: np.ndarray
    px: np.ndarray
    py: np.ndarray

    def validate(self, f, tol=config.DIST_TOL):
        nx, ny = int(np.sum(f.labels == 0)), int(np.sum(f.labels == 1))
        shapes = {
            "q": (nx, ny),
            "pA": (nx,),
            "pB": (ny,),
            "px": (nx, f.n, ny),
            "py": (ny, f.n, nx),
        }
        for name, shape in shapes.items():
            arr = getattr(self, name)
            if arr.shape != shape:
                raise DomainError(f"{name} must have shape {shape}, got {arr.shape}")
            if np.any(arr < 0):
                raise DomainError(f"{name} has negative entries")
        checks = [
            ("q", self.q.sum()),
            ("pA", self.pA.sum()),
            ("pB", self.pB.sum()),
        ]
        for name, s in checks:
            if abs(s - 1.0) > tol:
                raise DomainError(f"{name} sums to {s!r}")
        for name in ("px", "py"):
            sums = getattr(self, name).sum(axis=2)
            if np.any(np.abs(sums - 1.0) > tol):
                raise DomainError(f"some {name} distribution does not sum to 1")
        return self


def prob_scheme_value(f, W, D=None):
    """``min sqrt(pA pB p'_{x,i}(y) p'_{y,i}(x)) / q(x,y)`` over supported triples."""
    W.validate(f)
    D = difference_masks(f) if D is None else D
    if not np.any(W.q > 0):
        raise DomainError("q vanishes on every cross pair")
    best = np.inf
    xs, ys = np.nonzero(W.q > 0)
    for x, y in zip(xs, ys):
        idx = np.flatnonzero(D[:, x, y])
        num = W.pA[x] * W.pB[y] * W.px[x, idx, y] * W.py[y, idx, x]
        best = min(best, float(np.min(np.sqrt(num))) / W.q[x, y])
    return best


def _side_rows(f, subset, label):
    """Row indices (within X or Y) of a subset given as strings or row numbers."""
    size = int(np.sum(f.labels == label))
    if subset is None:
        return np.arange(size)
    rows = []
    for s in subset:
        if isinstance(s, (int, np.integer)):
            r = int(s)
            if not 0 <= r < size:
                raise DomainError(f"row {r} out of range")
        else:
            r, lab = f.index_of(s)
            if lab != label:
                raise DomainError(f"{s} does not have label {label}")
        rows.append(r)
    rows = np.unique(np.asarray(rows, dtype=np.int64))
    if rows.size == 0:
        raise DomainError("subsets must be nonempty")
    return rows


def khrapchenko_scheme(f, A=None, B=None):
    """The probability scheme that reproduces Khrapchenko's bound on ``A x B``."""
    D = difference_masks(f)
    ra, rb = _side_rows(f, A, 0), _side_rows(f, B, 1)
    nx, ny = D.shape[1], D.shape[2]
    pairs = np.zeros((nx, ny), dtype=bool)
    pairs[np.ix_(ra, rb)] = D.sum(axis=0)[np.ix_(ra, rb)] == 1
    C = int(pairs.sum())
    if C == 0:
        raise DomainError("no Hamming-distance-1 pairs between A and B")
    q = pairs / C
    pA = np.zeros(nx)
    pA[ra] = 1.0 / ra.size
    pB = np.zeros(ny)
    pB[rb] = 1.0 / rb.size
    px = np.full((nx, f.n, ny), 1.0 / ny)
    py = np.full((ny, f.n, nx), 1.0 / nx)
    for x, y in zip(*np.nonzero(pairs)):
        i = int(np.flatnonzero(D[:, x, y])[0])
        px[x, i] = 0.0
        px[x, i, y] = 1.0
        py[y, i] = 0.0
        py[y, i, x] = 1.0
    return ProbSchemeWitness(q, pA, pB, px, py)


# ---- index selections --------------------------------------------------------------


def index_selection_problems(f, P, D=None):
    """Reasons why ``P`` fails to be an index selection (empty when valid)."""
    D = difference_masks(f) if D is None else D
    P = np.asarray(P)
    if P.shape != D.shape:
        return [f"selection must have shape {D.shape}, got {P.shape}"]
    problems = []
    if not np.all((P == 0) | (P == 1)):
        problems.append("entries must be 0 or 1")
    if not np.all(P.sum(axis=0) == 1):
        problems.append("selections do not sum to the all-ones matrix")
    if np.any((P != 0) & ~D):
        problems.append("some pair selects a position where the strings agree")
    return problems


def validate_index_selection(f, P, D=None):
    return not index_selection_problems(f, P, D)


def index_selection_value(f, P, A, D=None):
    """``||A|| / max_i ||A o P_i||`` for a valid selection ``P``."""
    problems = index_selection_problems(f, P, D)
    if problems:
        raise DomainError("invalid index selection: " + "; ".join(problems))
    A = check_adversary_matrix(f, A)
    P = np.asarray(P, dtype=bool)
    denom = max(spectral_norm(np.where(P[i], A, 0.0)) for i in range(P.shape[0]))
    if denom == 0.0:
        raise DomainError("every masked matrix vanishes")
    return spectral_norm(A) / denom


def smallest_index_selection(f, D=None):
    """Select, for each cross pair, the smallest position where it differs."""
    D = difference_masks(f) if D is None else D
    first = np.argmax(D, axis=0)
    return np.stack([first == i for i in range(D.shape[0])])


def selection_from_witness(f, p, D=None):
    """Selection induced by a maxPI witness: the position maximising the overlap term."""
    D = difference_masks(f) if D is None else D
    ax = np.sqrt(p.side(f, 0))
    ay = np.sqrt(p.side(f, 1))
    terms = np.where(D, ax.T[:, :, None] * ay.T[:, None, :], -1.0)
    best = np.argmax(terms, axis=0)
    return np.stack([best == i for i in range(D.shape[0])])
