"""Seeded random property suites for the matrix inequalities behind the
rectangle measures."""

from __future__ import annotations

import time

import numpy as np

from .config import NORM_TOL
from .linalg import (
    Rectangle,
    RectanglePartition,
    key_lemma_check,
    norm_inf,
    norm_one,
    rank_exact,
    spectral_norm,
    submatrix,
)

MAX_DIM = 10


def random_partition(rng, shape, stop=0.3):
    """Recursively split rows or columns into two random nonempty parts."""
    out = []

    def split(rows, cols):
        can_rows, can_cols = len(rows) > 1, len(cols) > 1
        if not (can_rows or can_cols) or rng.random() < stop:
            out.append(Rectangle(sorted(rows), sorted(cols)))
            return
        axis = rng.integers(2) if can_rows and can_cols else (0 if can_rows else 1)
        items = rows if axis == 0 else cols
        perm = rng.permutation(items)
        cut = int(rng.integers(1, len(items)))
        a, b = perm[:cut].tolist(), perm[cut:].tolist()
        if axis == 0:
            split(a, cols)
            split(b, cols)
        else:
            split(rows, a)
            split(rows, b)

    split(list(range(shape[0])), list(range(shape[1])))
    return RectanglePartition(shape, out)


def _shape(rng):
    return int(rng.integers(1, MAX_DIM + 1)), int(rng.integers(1, MAX_DIM + 1))


def key_lemma_suite(trials, rng):
    fails, worst = 0, -np.inf
    for _ in range(trials):
        shape = _shape(rng)
        A = rng.random(shape)
        r = key_lemma_check(A, random_partition(rng, shape))
        worst = max(worst, r.lhs - r.rhs)
        fails += not r.holds
    return fails, worst


def norm_product_suite(trials, rng):
    """||A||^2 <= ||A||_1 ||A||_inf."""
    fails, worst = 0, -np.inf
    for _ in range(trials):
        A = rng.standard_normal(_shape(rng))
        gap = spectral_norm(A) ** 2 - norm_one(A) * norm_inf(A)
        worst = max(worst, gap)
        fails += gap > NORM_TOL
    return fails, worst


def monotonicity_suite(trials, rng):
    """0 <= A <= B entrywise implies ||A|| <= ||B||."""
    fails, worst = 0, -np.inf
    for _ in range(trials):
        shape = _shape(rng)
        A = rng.random(shape)
        B = A + rng.random(shape) * (rng.random(shape) < 0.5)
        gap = spectral_norm(A) - spectral_norm(B)
        worst = max(worst, gap)
        fails += gap > NORM_TOL
    return fails, worst


def rank_subadditivity_suite(trials, rng):
    """rank(A) <= sum of block ranks over any rectangle partition."""
    fails, worst = 0, -np.inf
    for _ in range(trials):
        shape = _shape(rng)
        A = rng.integers(-2, 3, size=shape)
        P = random_partition(rng, shape)
        gap = rank_exact(A) - sum(rank_exact(submatrix(A, R)) for R in P.nonempty)
        worst = max(worst, gap)
        fails += gap > 0
    return fails, worst


SUITES = (
    ("key lemma", key_lemma_suite),
    ("spectral norm vs 1- and inf-norms", norm_product_suite),
    ("spectral norm monotonicity", monotonicity_suite),
    ("rank subadditivity", rank_subadditivity_suite),
)


def run_lemma_suites(trials=1000, seed=0, rank_trials=None):
    """Run every suite; each gets its own child stream of ``seed``."""
    streams = np.random.SeedSequence(seed).spawn(len(SUITES))
    results = []
    for (name, suite), ss in zip(SUITES, streams):
        t = trials if rank_trials is None or suite is not rank_subadditivity_suite else rank_trials
        start = time.perf_counter()
        fails, worst = suite(t, np.random.default_rng(ss))
        results.append({
            "name": name,
            "trials": t,
            "failures": int(fails),
            "worst_gap": float(worst),
            "seconds": round(time.perf_counter() - start, 3),
        })
    return results
