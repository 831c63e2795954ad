"""Primal witnesses: per-input index distributions and their exact evaluation."""

from __future__ import annotations

from typing import NamedTuple, Optional

import numpy as np

from .. import config
from ..boolfn import BooleanFunction, format_code
from ..errors import DomainError, InfiniteWitnessError, NoCrossPairsError, ResourceCapError
from ..measures import min_certificates
from ._kernels import pair_scan, pair_values


class ProbabilityFamily:
    """A distribution over positions for every domain input of ``func``.

    ``dist`` has one row per input, in the order of ``func.codes``.
    """

    __slots__ = ("func", "dist")

    def __init__(self, func, dist, tol=config.DIST_TOL):
        dist = np.array(dist, dtype=np.float64)
        if dist.shape != (func.domain_size, func.n):
            raise DomainError(f"expected a {func.domain_size}x{func.n} distribution array")
        if np.any(dist < 0) or not np.all(np.isfinite(dist)):
            raise DomainError("probabilities must be finite and nonnegative")
        sums = dist.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > tol)
        if bad.size:
            x = format_code(func.codes[bad[0]], func.n, func.k)
            raise DomainError(f"distribution for {x} sums to {sums[bad[0]]!r}")
        dist.setflags(write=False)
        self.func = func
        self.dist = dist

    @classmethod
    def uniform(cls, func):
        return cls(func, np.full((func.domain_size, func.n), 1.0 / func.n))

    @classmethod
    def from_callable(cls, func, fn):
        return cls(func, [fn(tuple(int(s) for s in x)) for x in func.points()])

    @classmethod
    def from_mapping(cls, func, mapping):
        rows = np.full((func.domain_size, func.n), np.nan)
        for x, vec in mapping.items():
            code = func.encode(x)
            pos = int(np.searchsorted(func.codes, code))
            if pos >= func.domain_size or func.codes[pos] != code:
                raise DomainError(f"witness input {x!r} is outside the domain")
            rows[pos] = [float(v) for v in vec]
        missing = np.flatnonzero(np.isnan(rows).any(axis=1))
        if missing.size:
            raise DomainError(
                f"witness does not cover input {format_code(func.codes[missing[0]], func.n, func.k)}"
            )
        return cls(func, rows)

    def to_mapping(self):
        return {x: self.dist[i].tolist() for i, x in enumerate(self.func.input_strings())}

    def rows_for(self, f):
        """Row of this family for every domain input of ``f``."""
        if f.n != self.func.n or f.k != self.func.k:
            raise DomainError("witness arity or alphabet does not match the function")
        pos = np.searchsorted(self.func.codes, f.codes)
        pos = np.minimum(pos, self.func.domain_size - 1)
        if not np.array_equal(self.func.codes[pos], f.codes):
            raise DomainError("witness does not cover the domain of the function")
        return pos

    def side(self, f, label):
        return self.dist[self.rows_for(f)[f.labels == label]]

    def restrict(self, f):
        return ProbabilityFamily(f, self.dist[self.rows_for(f)])

    def __repr__(self):
        return f"ProbabilityFamily({self.func!r})"


class WitnessEvaluation(NamedTuple):
    value: float
    x: Optional[str]
    y: Optional[str]
    sampled: bool = False


def _cross_sides(f):
    if not f.has_both_labels():
        raise NoCrossPairsError("no cross pairs: the function has a single label")
    return f.X, f.Y


def evaluate_witness(f, p, kind="sum", mode="full", samples=100_000, seed=0, cap=None):
    """Value of a primal witness on ``f`` together with a worst pair.

    ``kind`` selects the sum (sumPI) or max (maxPI) overlap.  ``mode='full'``
    scans every cross pair and yields an exact certificate; ``mode='sampled'``
    scans ``samples`` random pairs and only gives an estimate from below.
    """
    if kind not in ("sum", "max"):
        raise DomainError("kind must be 'sum' or 'max'")
    X, Y = _cross_sides(f)
    px = p.side(f, 0)
    py = p.side(f, 1)
    use_max = kind == "max"
    xcodes, ycodes = f.side_codes(0), f.side_codes(1)
    if mode == "full":
        cap = config.PAIR_SCAN_CAP if cap is None else cap
        if X.shape[0] * Y.shape[0] > cap:
            raise ResourceCapError(f"{X.shape[0]}x{Y.shape[0]} cross pairs exceed scan cap {cap}")
        best, arg = pair_scan(X, px, Y, py, use_max, global_prune=True, root=True)
        r = int(np.argmin(best))
        c = int(arg[r])
        denom = float(best[r])
        sampled = False
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        rows = rng.integers(0, X.shape[0], size=samples)
        cols = rng.integers(0, Y.shape[0], size=samples)
        vals = pair_values(X, px, Y, py, rows, cols, use_max, root=True)
        t = int(np.argmin(vals))
        r, c, denom = int(rows[t]), int(cols[t]), float(vals[t])
        sampled = True
    else:
        raise DomainError("mode must be 'full' or 'sampled'")
    xs = format_code(xcodes[r], f.n, f.k)
    ys = format_code(ycodes[c], f.n, f.k)
    if denom <= 0.0:
        raise InfiniteWitnessError(xs, ys)
    return WitnessEvaluation(1.0 / denom, xs, ys, sampled)


def eval_sumpi_witness(f, p, **kwargs):
    """Upper certificate on sumPI: the worst reciprocal of the summed overlap."""
    return evaluate_witness(f, p, kind="sum", **kwargs).value


def eval_maxpi_witness(f, p, **kwargs):
    """Upper certificate on maxPI: the worst reciprocal of the largest overlap term."""
    return evaluate_witness(f, p, kind="max", **kwargs).value


def certificate_witness(f):
    """Uniform weight on a minimum certificate of each input.

    Total functions use the lexicographically least minimum certificate on
    both sides.  Partial functions do so only on the side with the smaller
    certificate complexity (ties go to side 0) and use the uniform
    distribution on the other side.
    """
    if not f.has_both_labels():
        raise NoCrossPairsError("certificate witness needs both labels present")
    dist = np.zeros((f.domain_size, f.n))
    certs = {s: min_certificates(f, s) for s in (0, 1)}
    sides = (0, 1)
    if not f.is_total:
        c0 = max(len(c) for c in certs[0])
        c1 = max(len(c) for c in certs[1])
        sides = (0,) if c0 <= c1 else (1,)
    for s in (0, 1):
        rows = np.flatnonzero(f.labels == s)
        if s in sides:
            for r, cert in zip(rows, certs[s]):
                dist[r, list(cert)] = 1.0 / len(cert)
        else:
            dist[rows] = 1.0 / f.n
    return ProbabilityFamily(f, dist)


def certificate_barrier(f):
    """``sqrt(C0 C1)`` for total f, ``min(sqrt(n C0), sqrt(n C1))`` for partial f."""
    c0 = max(len(c) for c in min_certificates(f, 0))
    c1 = max(len(c) for c in min_certificates(f, 1))
    if f.is_total:
        return float(np.sqrt(c0 * c1))
    return float(min(np.sqrt(f.n * c0), np.sqrt(f.n * c1)))


def compose_functions(h, gs):
    """``h(g_1(block_1), ..., g_n(block_n))`` for total binary functions."""
    if len(gs) != h.n:
        raise DomainError(f"need {h.n} inner functions, got {len(gs)}")
    if not h.is_total or any(not g.is_total or g.k != 2 for g in gs) or h.k != 2:
        raise DomainError("composition requires total binary functions")
    m = sum(g.n for g in gs)
    codes = np.arange(2**m, dtype=np.int64)
    outer = np.zeros_like(codes)
    shift = m
    for g in gs:
        shift -= g.n
        outer = (outer << 1) | g.labels[(codes >> shift) & ((1 << g.n) - 1)].astype(np.int64)
    return BooleanFunction.from_truth_table(m, h.labels[outer])


def compose_witness(h_wit, g_wits, f=None):
    """Mixture witness for ``f = h(g_1, ..., g_n)``.

    Position ``i`` in block ``j`` receives ``p_{g(x)}(j) * p_{j, x_block_j}(i)``.
    ``f`` defaults to the composition of the witnesses' functions; when given,
    it must agree with that composition on its domain.
    """
    h = h_wit.func
    if len(g_wits) != h.n:
        raise DomainError(f"need {h.n} inner witnesses, got {len(g_wits)}")
    gs = [w.func for w in g_wits]
    m = sum(g.n for g in gs)
    if f is None:
        f = compose_functions(h, gs)
    if f.n != m:
        raise DomainError(f"composed arity {m} does not match function arity {f.n}")
    if any(g.k != f.k for g in gs):
        raise DomainError("alphabet mismatch between inner functions and f")
    pts = f.points().astype(np.int64)
    g_vals = np.empty((f.domain_size, h.n), dtype=np.int64)
    g_rows = []
    off = 0
    for j, (g, w) in enumerate(zip(gs, g_wits)):
        blk = pts[:, off : off + g.n]
        bcodes = blk @ (g.k ** np.arange(g.n - 1, -1, -1, dtype=np.int64))
        pos = np.minimum(np.searchsorted(g.codes, bcodes), g.domain_size - 1)
        if not np.array_equal(g.codes[pos], bcodes):
            raise DomainError(f"block {j} leaves the domain of inner function {j}")
        g_vals[:, j] = g.labels[pos]
        g_rows.append(pos)
        off += g.n
    hcodes = g_vals @ (h.k ** np.arange(h.n - 1, -1, -1, dtype=np.int64))
    hpos = np.minimum(np.searchsorted(h.codes, hcodes), h.domain_size - 1)
    if not np.array_equal(h.codes[hpos], hcodes):
        raise DomainError("inner values leave the domain of the outer function")
    if not np.array_equal(h.labels[hpos], f.labels):
        bad = int(np.flatnonzero(h.labels[hpos] != f.labels)[0])
        raise DomainError(
            f"f disagrees with the composition at {format_code(f.codes[bad], f.n, f.k)}"
        )
    q = np.empty((f.domain_size, m))
    off = 0
    for j, (g, w) in enumerate(zip(gs, g_wits)):
        q[:, off : off + g.n] = h_wit.dist[hpos, j][:, None] * w.dist[g_rows[j]]
        off += g.n
    return ProbabilityFamily(f, q)


def iterate_witness(w, d, f=None):
    """Witness for the ``d``-th iteration built by repeated composition."""
    from ..boolfn import iterate

    if d < 1:
        raise DomainError("iteration depth must be positive")
    cur = w
    for level in range(2, d + 1):
        target = f if (f is not None and level == d) else iterate(w.func, level)
        cur = compose_witness(w, [cur] * w.func.n, target)
    return cur


# ---- named witnesses ------------------------------------------------------------


def ambainis_witness(f):
    """2/5 on each sensitive position, 1/10 on each insensitive one."""
    from ..measures import sensitivity_profile

    sens = sensitivity_profile(f)
    counts = sens.sum(axis=1)
    if np.any(counts != 2) or f.n != 4:
        raise DomainError("the named witness needs sensitivity exactly 2 on every 4-bit input")
    return ProbabilityFamily(f, np.where(sens, 0.4, 0.1))


def collision_maxpi_witness(f):
    """Uniform on all-distinct inputs; 1/2 on position 0 and on its partner otherwise."""
    dist = np.zeros((f.domain_size, f.n))
    pts = f.points()
    pos = f.labels == 1
    dist[pos] = 1.0 / f.n
    neg = np.flatnonzero(~pos)
    same = pts[neg, 1:] == pts[neg, :1]
    if np.any(same.sum(axis=1) != 1):
        raise DomainError("some 0-input has no unique partner for position 0")
    dist[neg, 0] = 0.5
    dist[neg, 1 + np.argmax(same, axis=1)] = 0.5
    return ProbabilityFamily(f, dist)
