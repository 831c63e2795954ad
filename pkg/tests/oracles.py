"""Brute-force reference implementations.

Everything here works on plain dicts ``{tuple: label}`` and Python loops, so
it shares no code with the package under test.
"""

import itertools
import math
from fractions import Fraction

import numpy as np


def table_of(f):
    return {tuple(int(c, 36) for c in x): int(lab) for x, lab in f.items()}


def sides(table):
    X = sorted(x for x, v in table.items() if v == 0)
    Y = sorted(y for y, v in table.items() if v == 1)
    return X, Y


def flip(x, i):
    return x[:i] + (1 - x[i],) + x[i + 1:]


def sensitivity(table, side=None):
    best = 0
    for x, v in table.items():
        if side is not None and v != side:
            continue
        s = sum(1 for i in range(len(x)) if flip(x, i) in table and table[flip(x, i)] != v)
        best = max(best, s)
    return best


def certificate(table, x):
    n = len(x)
    v = table[x]
    for size in range(n + 1):
        for S in itertools.combinations(range(n), size):
            if all(table[y] == v for y in table if all(y[i] == x[i] for i in S)):
                return size
    raise AssertionError("unreachable")


def certificate_complexity(table, side):
    return max(certificate(table, x) for x, v in table.items() if v == side)


def block_sensitivity(table):
    n = len(next(iter(table)))
    best = 0
    for x, v in table.items():
        blocks = []
        for mask in range(1, 1 << n):
            y = tuple(x[i] ^ (mask >> i & 1) for i in range(n))
            if table[y] != v:
                blocks.append(mask)

        def grow(used, start, count):
            nonlocal best
            best = max(best, count)
            for j in range(start, len(blocks)):
                if not blocks[j] & used:
                    grow(used | blocks[j], j + 1, count + 1)

        grow(0, 0, 0)
    return best


def khrapchenko(table):
    X, Y = sides(table)
    c = sum(1 for x in X for y in Y if sum(a != b for a, b in zip(x, y)) == 1)
    return Fraction(c * c, len(X) * len(Y))


def witness_value(table, p, kind):
    """``p`` maps inputs to position distributions; kind 'sum' or 'max'."""
    X, Y = sides(table)
    worst = math.inf
    for x in X:
        for y in Y:
            terms = [math.sqrt(p[x][i] * p[y][i]) for i in range(len(x)) if x[i] != y[i]]
            ov = sum(terms) if kind == "sum" else max(terms)
            worst = min(worst, ov)
    return 1.0 / worst if worst > 0 else math.inf


def spectral_ratio(table, gamma):
    """||Gamma|| / max_i ||Gamma_i|| with numpy's SVD."""
    X, Y = sides(table)
    G = np.asarray(gamma, dtype=float)
    n = len(X[0])
    top = np.linalg.norm(G, 2)
    parts = []
    for i in range(n):
        mask = np.array([[x[i] != y[i] for y in Y] for x in X])
        parts.append(np.linalg.norm(np.where(mask, G, 0.0), 2))
    return top / max(parts)


def hamming_one(table):
    X, Y = sides(table)
    return np.array([[float(sum(a != b for a, b in zip(x, y)) == 1) for y in Y] for x in X])


def formula_sizes(n, cap):
    """{truth table bitmask: leaf count} for all functions of size <= cap.

    Bit ``c`` of a mask is the value on the input whose binary code is ``c``
    with variable 1 as the most significant bit.
    """
    full = (1 << (1 << n)) - 1
    by_size = {1: set()}
    for v in range(n):
        m = 0
        for c in range(1 << n):
            if c >> (n - 1 - v) & 1:
                m |= 1 << c
        by_size[1] |= {m, full ^ m}
    size_of = {m: 1 for m in by_size[1]}
    for s in range(2, cap + 1):
        new = set()
        for a in range(1, s // 2 + 1):
            for u in by_size[a]:
                for w in by_size[s - a]:
                    new.add(u & w)
                    new.add(u | w)
        new -= set(size_of)
        by_size[s] = new
        for m in new:
            size_of[m] = s
    return size_of


def mask_of(f):
    t = table_of(f)
    n = f.n
    m = 0
    for x, v in t.items():
        if v:
            c = int("".join(map(str, x)), 2)
            m |= 1 << c
    return m


def partition_ok(table, rects):
    """rects: list of (rows, cols, color) indexing the sorted sides."""
    X, Y = sides(table)
    count = {}
    for rows, cols, color in rects:
        for r in rows:
            for c in cols:
                if X[r][color] == Y[c][color]:
                    return False
                count[r, c] = count.get((r, c), 0) + 1
    return all(count.get((r, c), 0) == 1 for r in range(len(X)) for c in range(len(Y)))


def partition_number(table):
    """Exhaustive minimum partition for tiny grids."""
    X, Y = sides(table)
    n = len(X[0])
    cells = [(r, c) for r in range(len(X)) for c in range(len(Y))]
    rects = []
    for rs in range(1, 1 << len(X)):
        rows = [r for r in range(len(X)) if rs >> r & 1]
        for cs in range(1, 1 << len(Y)):
            cols = [c for c in range(len(Y)) if cs >> c & 1]
            for i in range(n):
                if all(X[r][i] != Y[c][i] for r in rows for c in cols):
                    rects.append(frozenset((r, c) for r in rows for c in cols))
                    break
    best = [len(cells)]

    def go(covered, used):
        if used >= best[0]:
            return
        free = [cell for cell in cells if cell not in covered]
        if not free:
            best[0] = used
            return
        for R in rects:
            if free[0] in R and not R & covered:
                go(covered | R, used + 1)

    go(frozenset(), 0)
    return best[0]


def hastad(table, p):
    n = len(next(iter(table)))
    pa = pb = pc = 0.0
    for rho in itertools.product((0, 1, None), repeat=n):
        free = [i for i in range(n) if rho[i] is None]
        w = p ** len(free) * ((1 - p) / 2) ** (n - len(free))
        sub = {}
        for z in itertools.product((0, 1), repeat=len(free)):
            x = list(rho)
            for i, b in zip(free, z):
                x[i] = b
            sub[z] = table[tuple(x)]
        vals = set(sub.values())
        if vals == {0}:
            pa += w
        elif vals == {1}:
            pb += w
        else:
            for j in range(len(free)):
                if all(v == z[j] for z, v in sub.items()) or all(v == 1 - z[j] for z, v in sub.items()):
                    pc += w
                    break
    if pc == 0:
        return 0.0
    return pc * pc / (pa * pb) * ((1 - p) / (2 * p)) ** 2


def all_tables(n):
    pts = list(itertools.product((0, 1), repeat=n))
    for bits in range(1 << (1 << n)):
        yield {x: bits >> i & 1 for i, x in enumerate(pts)}, bits
