"""Search for good adversary certificates.

The estimators follow the scikit-learn conventions: hyperparameters go to
``__init__``, ``fit`` takes either a :class:`~advtk.boolfn.BooleanFunction` or
an ``(X, y)`` pair of input symbols and labels, and results land in trailing
underscore attributes.  Whatever the optimizer finds, the reported ``value_``
is recomputed by the exact evaluators, so it is always a valid bound.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .. import config
from .._validation import check_function, check_is_fitted
from ..errors import ResourceCapError
from ..linalg import top_singular_triplet
from ._kernels import pair_scan
from .spectral import difference_masks, hamming_one_matrix, spectral_value
from .witnesses import ProbabilityFamily, certificate_witness, evaluate_witness

_SMALL_SIDE = 48


class SpectralAdversary(BaseEstimator):
    """Gradient ascent for the spectral adversary ratio.

    ``G`` is parametrised as ``B * B`` so it stays nonnegative, and each step
    follows the gradient of the smoothed objective ``log N(G) - softmax_i log
    N(G_i)``.  For small matrices ``N`` is a Schatten norm whose exponent grows
    towards the spectral norm; for large ones it is the spectral norm itself,
    with the gradient taken from top singular vectors.  After each step ``G``
    is rescaled so that the largest ``||G_i||`` equals one.  Restart 0 starts
    from the distance-1 indicator, restart 1 from the all-ones matrix and later
    restarts from seeded uniform noise.

    Attributes
    ----------
    gamma_ : ndarray of shape (|X|, |Y|)
    value_ : float
        ``spectral_value`` of ``gamma_``; a lower bound on sumPI.
    history_ : list of float
        Best (uncertified) ratio seen by each restart.
    """

    def __init__(self, max_iter=400, n_restarts=4, step_size=0.02, temperature=0.1,
                 random_state=0, cell_cap=None):
        self.max_iter = max_iter
        self.n_restarts = n_restarts
        self.step_size = step_size
        self.temperature = temperature
        self.random_state = random_state
        self.cell_cap = cell_cap

    def _starts(self, D, rng):
        cross = D.any(axis=0).astype(float)
        h1 = (D.sum(axis=0) == 1).astype(float)
        out = []
        for r in range(max(1, self.n_restarts)):
            if r == 0 and h1.any():
                out.append(h1 + 1e-2 * cross)
            elif r <= 1:
                out.append(cross.copy())
            else:
                out.append(rng.uniform(0.25, 1.0, size=cross.shape) * cross)
        return out

    @staticmethod
    def _smoothed(mats, power, warm):
        """Per-matrix (smoothed norm, gradient of its log, spectral norm)."""
        if min(mats.shape[1:]) <= _SMALL_SIDE:
            U, s, Vt = np.linalg.svd(mats, full_matrices=False)
            top = s[:, 0]
            safe = np.where(top > 0, top, 1.0)
            S = safe * ((s / safe[:, None]) ** power).sum(axis=1) ** (1.0 / power)
            wts = (s / S[:, None]) ** (power - 1) / S[:, None]
            G = np.einsum("mik,mk,mkj->mij", U, wts, Vt)
            return np.where(top > 0, S, 0.0), G, top
        S = np.empty(mats.shape[0])
        G = np.zeros_like(mats)
        for j, M in enumerate(mats):
            sig, u, v = top_singular_triplet(M, v0=warm[j], iters=12)
            S[j] = sig
            if sig > 0:
                G[j] = np.outer(u, v) / sig
                warm[j] = v
        return S, G, S.copy()

    def _ascend(self, f, gamma, D):
        n = D.shape[0]
        exact = min(D.shape[1:]) <= _SMALL_SIDE
        Df = D.astype(float)
        cross = D.any(axis=0)
        B = np.sqrt(gamma) * cross
        m1 = np.zeros_like(B)
        m2 = np.zeros_like(B)
        warm = [None] * (n + 1)
        best_val, best = -np.inf, gamma
        iters = max(1, self.max_iter)
        for t in range(iters):
            frac = t / max(1, iters - 1)
            power = 4.0 * 64.0**frac
            tau = self.temperature * 0.01**frac
            G = B * B
            mats = np.concatenate([G[None], Df * G[None]])
            S, grads, top = self._smoothed(mats, power, warm)
            denom = top[1:].max()
            if denom <= 0:
                break
            if exact:
                val = top[0] / denom
            elif t % 25 == 0 or t == iters - 1:
                # warm power iterations are inexact, so checkpoints are certified
                val = spectral_value(f, G, D)
            else:
                val = -np.inf
            if val > best_val:
                best_val, best = val, G / denom
            if self.max_iter <= 0:
                break
            live = S[1:] > 0
            logs = np.full(n, -np.inf)
            logs[live] = np.log(S[1:][live])
            w = np.exp((logs - logs.max()) / tau)
            w /= w.sum()
            grad = grads[0] - np.einsum("i,ixy->xy", w, grads[1:] * Df)
            g = 2.0 * B * grad
            m1 = 0.9 * m1 + 0.1 * g
            m2 = 0.999 * m2 + 0.001 * g * g
            step = m1 / (1 - 0.9 ** (t + 1)) / (np.sqrt(m2 / (1 - 0.999 ** (t + 1))) + 1e-12)
            B = np.abs(B + self.step_size * step) * cross
            B /= np.sqrt(denom)
        return best_val, best

    def fit(self, X, y=None):
        f = check_function(X, y)
        D = difference_masks(f, cap=self.cell_cap)
        rng = np.random.default_rng(self.random_state)
        self.history_ = []
        best_val, best = -np.inf, None
        for g0 in self._starts(D, rng):
            val, gam = self._ascend(f, g0, D)
            self.history_.append(float(val))
            if val > best_val:
                best_val, best = val, gam
        h1 = hamming_one_matrix(f, D)
        if h1.any():
            best = max((best, h1), key=lambda g: spectral_value(f, g, D))
        self.gamma_ = best
        self.value_ = spectral_value(f, best, D)
        self.n_features_in_ = f.n
        return self


def optimize_spectral(f, seed=0, iterations=400, restarts=4, cell_cap=None):
    """Convenience wrapper returning ``(gamma, certified value)``."""
    est = SpectralAdversary(max_iter=iterations, n_restarts=restarts,
                            random_state=seed, cell_cap=cell_cap).fit(f)
    return est.gamma_, est.value_


# ---- primal witnesses ------------------------------------------------------------


class _PairSet:
    """Cross pairs the optimizer currently looks at, with their difference masks."""

    def __init__(self, X, Y, rows, cols):
        self.rows = np.asarray(rows, dtype=np.int64)
        self.cols = np.asarray(cols, dtype=np.int64)
        self.D = X[self.rows] != Y[self.cols]

    @classmethod
    def full(cls, X, Y):
        r, c = np.divmod(np.arange(X.shape[0] * Y.shape[0], dtype=np.int64), Y.shape[0])
        return cls(X, Y, r, c)


class _PrimalOptimizer(BaseEstimator):
    _kind = "sum"

    def __init__(self, max_iter=400, n_restarts=4, temperature_blocks=8, step_size=0.03,
                 temperature=0.2, random_state=0, dense_pair_cap=2**23, rounds=3,
                 scan_cap=None, certificate_start=True):
        self.max_iter = max_iter
        self.n_restarts = n_restarts
        self.temperature_blocks = temperature_blocks
        self.step_size = step_size
        self.temperature = temperature
        self.random_state = random_state
        self.dense_pair_cap = dense_pair_cap
        self.rounds = rounds
        self.scan_cap = scan_cap
        self.certificate_start = certificate_start

    # -- objective pieces -------------------------------------------------------

    def _overlap(self, T, r):
        """Overlap per pair and its derivative with respect to each term."""
        if self._kind == "sum":
            return T.sum(axis=1), None
        m = T.max(axis=1)
        safe = np.where(m > 0, m, 1.0)
        ratio = T / safe[:, None]
        s = safe * (ratio**r).sum(axis=1) ** (1.0 / r)
        s = np.where(m > 0, s, 0.0)
        ds = np.where(s[:, None] > 0, (T / np.where(s > 0, s, 1.0)[:, None]) ** (r - 1), 0.0)
        return s, ds

    def _hard(self, T):
        return T.sum(axis=1) if self._kind == "sum" else T.max(axis=1)

    def _descend(self, aX, aY, pairs, iters):
        """Adam on the smoothed max of the log-reciprocals, on sphere-normalised rows."""
        nx, n = aX.shape
        params = np.vstack([aX, aY])
        m1 = np.zeros_like(params)
        m2 = np.zeros_like(params)
        blocks = max(1, self.temperature_blocks)
        per = max(1, iters // blocks)
        best_denom, best = -np.inf, params.copy()
        beta1, beta2, eps = 0.9, 0.999, 1e-12
        rows, cols, D = pairs.rows, pairs.cols, pairs.D
        for t in range(iters + 1):
            b = min(t // per, blocks - 1)
            tau = self.temperature / 2**b
            r = 4.0 * 2**b
            aX, aY = params[:nx], params[nx:]
            T = aX[rows] * aY[cols] * D
            hard = self._hard(T).min()
            if hard > best_denom:
                best_denom, best = hard, params.copy()
            if t == iters:
                break
            s, ds = self._overlap(T, r)
            logit = -np.log(np.maximum(s, 1e-300))
            z = (logit - logit.max()) / tau
            pi = np.exp(z)
            pi /= pi.sum()
            coef = -pi / np.maximum(s, 1e-300)
            dT = coef[:, None] * (D if ds is None else ds * D)
            g = np.empty_like(params)
            for i in range(n):
                g[:nx, i] = np.bincount(rows, weights=dT[:, i] * aY[cols, i], minlength=nx)
                g[nx:, i] = np.bincount(cols, weights=dT[:, i] * aX[rows, i], minlength=aY.shape[0])
            m1 = beta1 * m1 + (1 - beta1) * g
            m2 = beta2 * m2 + (1 - beta2) * g * g
            step = m1 / (1 - beta1 ** (t + 1)) / (np.sqrt(m2 / (1 - beta2 ** (t + 1))) + eps)
            params = np.maximum(params - self.step_size * step, 0.0)
            params = _normalise_rows(params)
        return best

    # -- driver ----------------------------------------------------------------

    def _starts(self, f, rng):
        starts = []
        if self.certificate_start:
            try:
                starts.append(certificate_witness(f).dist)
            except ResourceCapError:
                pass
        starts.append(np.full((f.domain_size, f.n), 1.0 / f.n))
        while len(starts) < max(1, self.n_restarts):
            starts.append(rng.dirichlet(np.ones(f.n), size=f.domain_size))
        return starts

    def fit(self, X, y=None):
        f = check_function(X, y)
        rng = np.random.default_rng(self.random_state)
        Xs, Ys = f.X, f.Y
        xrows = np.flatnonzero(f.labels == 0)
        yrows = np.flatnonzero(f.labels == 1)
        n_pairs = Xs.shape[0] * Ys.shape[0]
        dense = n_pairs * f.n <= self.dense_pair_cap
        scan_cap = config.PAIR_SCAN_CAP if self.scan_cap is None else self.scan_cap
        if n_pairs > scan_cap:
            raise ResourceCapError(f"{n_pairs} cross pairs exceed scan cap {scan_cap}")
        full = _PairSet.full(Xs, Ys) if dense else None
        use_max = self._kind == "max"
        self.history_ = []
        best_val, best_dist = np.inf, None
        for dist in self._starts(f, rng):
            a = np.sqrt(dist)
            aX, aY = a[xrows], a[yrows]
            if dense:
                params = self._descend(aX, aY, full, self.max_iter)
                aX, aY = params[: xrows.size], params[xrows.size :]
            else:
                aX, aY = self._generate(Xs, Ys, aX, aY, use_max)
            new = np.empty_like(a)
            new[xrows], new[yrows] = aX, aY
            cand = ProbabilityFamily(f, _clean(new**2))
            val = evaluate_witness(f, cand, kind=self._kind, cap=scan_cap).value
            self.history_.append(float(val))
            if val < best_val:
                best_val, best_dist = val, cand
        self.witness_ = best_dist
        self.value_ = float(best_val)
        self.n_features_in_ = f.n
        return self

    def _generate(self, Xs, Ys, aX, aY, use_max):
        """Constraint generation: optimise on worst pairs, rescan, repeat.

        Each rescan is exact, so the best iterate seen (the start included)
        is the one returned; descending on a partial pair set can overshoot.
        """
        rows = np.empty(0, dtype=np.int64)
        cols = np.empty(0, dtype=np.int64)
        best_denom, best = -np.inf, (aX, aY)
        rounds = max(1, self.rounds)
        for k in range(rounds + 1):
            by_row, argc = pair_scan(Xs, aX, Ys, aY, use_max)
            denom = float(by_row.min())
            if denom > best_denom:
                best_denom, best = denom, (aX, aY)
            if k == rounds:
                break
            _, argr = pair_scan(Ys, aY, Xs, aX, use_max)
            rows = np.concatenate([rows, np.arange(Xs.shape[0]), argr])
            cols = np.concatenate([cols, argc, np.arange(Ys.shape[0])])
            key = np.unique(rows * Ys.shape[0] + cols)
            rows, cols = np.divmod(key, Ys.shape[0])
            pairs = _PairSet(Xs, Ys, rows, cols)
            params = self._descend(aX, aY, pairs, self.max_iter)
            aX, aY = params[: Xs.shape[0]], params[Xs.shape[0] :]
        return best

    def transform(self, X):
        """Index distributions the fitted witness assigns to the rows of ``X``."""
        check_is_fitted(self, "witness_")
        f = self.witness_.func
        X = np.asarray(X, dtype=np.int64)
        codes = X @ (f.k ** np.arange(f.n - 1, -1, -1, dtype=np.int64))
        pos = np.minimum(np.searchsorted(f.codes, codes), f.domain_size - 1)
        if not np.array_equal(f.codes[pos], codes):
            raise ValueError("some rows are outside the fitted domain")
        return self.witness_.dist[pos]


def _normalise_rows(a):
    norms = np.linalg.norm(a, axis=1)
    dead = norms == 0
    if np.any(dead):
        a[dead] = 1.0 / np.sqrt(a.shape[1])
        norms[dead] = 1.0
    return a / norms[:, None]


def _clean(dist):
    dist = np.maximum(dist, 0.0)
    return dist / dist.sum(axis=1, keepdims=True)


class SumPIPrimal(_PrimalOptimizer):
    """Minimise the sumPI primal objective; ``value_`` is an upper bound on sumPI."""

    _kind = "sum"


class MaxPIPrimal(_PrimalOptimizer):
    """Minimise the maxPI primal objective; ``value_`` is an upper bound on maxPI."""

    _kind = "max"


def optimize_sumpi_primal(f, seed=0, iterations=400, restarts=4, **kwargs):
    est = SumPIPrimal(max_iter=iterations, n_restarts=restarts, random_state=seed, **kwargs).fit(f)
    return est.witness_, est.value_


def optimize_maxpi_primal(f, seed=0, iterations=400, restarts=4, **kwargs):
    est = MaxPIPrimal(max_iter=iterations, n_restarts=restarts, random_state=seed, **kwargs).fit(f)
    return est.witness_, est.value_
