"""Explicit Boolean and promise functions over finite alphabets.

A function stores its domain as a sorted array of mixed-radix codes (position
0 is the most significant digit), so sorting codes is the same as sorting the
input strings lexicographically.  The 0-inputs ``X`` and the 1-inputs ``Y`` are
always listed in that order, and every matrix elsewhere in the package is
indexed by those orderings.
"""

from __future__ import annotations

import itertools
from pathlib import Path

import numpy as np

from . import config
from .errors import DomainError, ResourceCapError

ALPHABET = "0123456789abcdefghijklmnopqrstuvwxyz"
STAR = "*"
_STAR_ALIASES = {"*": STAR, "⋆": STAR}


def _as_symbols(x, n, k):
    """Convert a string, tuple or list to a tuple of symbols, validating it."""
    if isinstance(x, str):
        try:
            sym = tuple(ALPHABET.index(c) for c in x)
        except ValueError:
            raise DomainError(f"bad symbol in input {x!r}") from None
    else:
        sym = tuple(int(c) for c in x)
    if len(sym) != n:
        raise DomainError(f"input {x!r} has length {len(sym)}, expected {n}")
    if any(s < 0 or s >= k for s in sym):
        raise DomainError(f"input {x!r} has a symbol outside alphabet of size {k}")
    return sym


class BooleanFunction:
    """A possibly partial function from ``Sigma^n`` to ``{0, 1}``.

    Instances are immutable.  Use the ``from_*`` constructors rather than
    calling ``__init__`` directly.
    """

    __slots__ = ("n", "k", "_codes", "_labels", "_total", "_points")

    def __init__(self, n, k, codes, labels):
        if n < 1:
            raise DomainError("arity must be positive")
        if k < 2 or k > len(ALPHABET):
            raise DomainError(f"alphabet size must be in [2, {len(ALPHABET)}]")
        codes = np.asarray(codes, dtype=np.int64)
        labels = np.asarray(labels, dtype=np.int8)
        if codes.shape != labels.shape or codes.ndim != 1:
            raise DomainError("codes and labels must be equal-length vectors")
        if codes.size and (codes.min() < 0 or codes.max() >= k**n):
            raise DomainError("input code out of range")
        if np.any((labels != 0) & (labels != 1)):
            raise DomainError("labels must be 0 or 1")
        order = np.argsort(codes, kind="stable")
        codes, labels = codes[order], labels[order]
        if codes.size > 1 and np.any(codes[1:] == codes[:-1]):
            raise DomainError("duplicate input in domain")
        codes.setflags(write=False)
        labels.setflags(write=False)
        self.n = int(n)
        self.k = int(k)
        self._codes = codes
        self._labels = labels
        self._total = codes.size == k**n
        self._points = None

    # ---- constructors -------------------------------------------------

    @classmethod
    def from_truth_table(cls, n, labels, k=2):
        """Total function from a dense label vector indexed by input code."""
        labels = np.asarray(labels)
        if labels.shape != (k**n,):
            raise DomainError(f"truth table must have {k**n} entries")
        return cls(n, k, np.arange(k**n, dtype=np.int64), labels)

    @classmethod
    def from_mapping(cls, n, mapping, k=2):
        """Function from ``{input: label}``; inputs are strings or symbol tuples."""
        codes, labels = [], []
        weights = k ** np.arange(n - 1, -1, -1, dtype=np.int64)
        for x, lab in mapping.items():
            sym = _as_symbols(x, n, k)
            codes.append(int(np.dot(sym, weights)))
            labels.append(int(lab))
        return cls(n, k, codes, labels)

    @classmethod
    def from_callable(cls, n, fn, k=2, domain=None):
        """Tabulate ``fn`` (called with a symbol tuple) on ``domain`` or all of ``Sigma^n``."""
        _check_table_size(n, k)
        if domain is None:
            domain = itertools.product(range(k), repeat=n)
        return cls.from_mapping(n, {tuple(x): int(fn(tuple(x))) for x in domain}, k=k)

    @classmethod
    def from_points(cls, points, labels, k=None):
        """Function from an ``(m, n)`` array of symbols and a label vector."""
        points = np.asarray(points, dtype=np.int64)
        if points.ndim != 2 or points.shape[1] < 1:
            raise DomainError("points must be a 2-D array with at least one column")
        n = points.shape[1]
        if k is None:
            k = max(2, int(points.max()) + 1) if points.size else 2
        if points.size and (points.min() < 0 or points.max() >= k):
            raise DomainError("symbol outside alphabet")
        weights = k ** np.arange(n - 1, -1, -1, dtype=np.int64)
        return cls(n, k, points @ weights, labels)

    # ---- basic properties ---------------------------------------------

    @property
    def is_total(self):
        return self._total

    @property
    def codes(self):
        return self._codes

    @property
    def labels(self):
        return self._labels

    @property
    def domain_size(self):
        return int(self._codes.size)

    def side_codes(self, side):
        return self._codes[self._labels == side]

    @property
    def X(self):
        """0-inputs as an ``(|X|, n)`` symbol array in lexicographic order."""
        return self.points()[self._labels == 0]

    @property
    def Y(self):
        """1-inputs as an ``(|Y|, n)`` symbol array in lexicographic order."""
        return self.points()[self._labels == 1]

    def points(self):
        """All domain inputs as an ``(|S|, n)`` symbol array."""
        if self._points is None:
            pts = decode(self._codes, self.n, self.k)
            pts.setflags(write=False)
            self._points = pts
        return self._points

    def has_both_labels(self):
        return bool(np.any(self._labels == 0) and np.any(self._labels == 1))

    def lookup_codes(self, codes):
        """Labels for an array of codes; ``-1`` marks codes outside the domain."""
        codes = np.asarray(codes, dtype=np.int64)
        if self._total:
            return self._labels[codes].astype(np.int8)
        pos = np.searchsorted(self._codes, codes)
        pos = np.minimum(pos, max(self._codes.size - 1, 0))
        out = np.full(codes.shape, -1, dtype=np.int8)
        if self._codes.size:
            hit = self._codes[pos] == codes
            out[hit] = self._labels[pos[hit]]
        return out

    def index_of(self, x):
        """Row of ``x`` inside its side ordering (``X`` or ``Y``) and its label."""
        code = self.encode(x)
        lab = int(self.lookup_codes([code])[0])
        if lab < 0:
            raise KeyError(self.format_input(x))
        side = self.side_codes(lab)
        return int(np.searchsorted(side, code)), lab

    def encode(self, x):
        sym = _as_symbols(x, self.n, self.k)
        code = 0
        for s in sym:
            code = code * self.k + s
        return code

    def format_input(self, x):
        if isinstance(x, str):
            return x
        return "".join(ALPHABET[int(s)] for s in x)

    def __call__(self, x):
        lab = int(self.lookup_codes([self.encode(x)])[0])
        if lab < 0:
            raise KeyError(f"{self.format_input(x)} is outside the domain")
        return lab

    def __contains__(self, x):
        try:
            return int(self.lookup_codes([self.encode(x)])[0]) >= 0
        except DomainError:
            return False

    def input_strings(self, side=None):
        codes = self._codes if side is None else self.side_codes(side)
        return [format_code(c, self.n, self.k) for c in codes]

    def items(self):
        for c, lab in zip(self._codes, self._labels):
            yield format_code(c, self.n, self.k), int(lab)

    def __eq__(self, other):
        if not isinstance(other, BooleanFunction):
            return NotImplemented
        return (
            self.n == other.n
            and self.k == other.k
            and np.array_equal(self._codes, other._codes)
            and np.array_equal(self._labels, other._labels)
        )

    def __hash__(self):
        return hash((self.n, self.k, self._codes.tobytes(), self._labels.tobytes()))

    def __repr__(self):
        kind = "total" if self._total else "partial"
        return (
            f"BooleanFunction(n={self.n}, k={self.k}, {kind}, "
            f"|X|={int(np.sum(self._labels == 0))}, |Y|={int(np.sum(self._labels == 1))})"
        )


def _check_table_size(n, k, cap=None):
    cap = config.TRUTH_TABLE_CAP if cap is None else cap
    if k**n > cap:
        raise ResourceCapError(f"truth table of size {k}^{n} exceeds cap {cap}")


def decode(codes, n, k):
    """Mixed-radix decoding of codes into an ``(m, n)`` uint8 symbol array."""
    codes = np.asarray(codes, dtype=np.int64).copy()
    out = np.empty((codes.size, n), dtype=np.uint8)
    for i in range(n - 1, -1, -1):
        out[:, i] = codes % k
        codes //= k
    return out


def format_code(code, n, k):
    digits = []
    code = int(code)
    for _ in range(n):
        code, r = divmod(code, k)
        digits.append(ALPHABET[r])
    return "".join(reversed(digits))


# ---- builtins ------------------------------------------------------------


def _all_points(n, k=2):
    return decode(np.arange(k**n, dtype=np.int64), n, k)


def parity(n):
    return BooleanFunction.from_truth_table(n, _all_points(n).sum(axis=1) % 2)


def or_(n):
    return BooleanFunction.from_truth_table(n, _all_points(n).any(axis=1))


def and_(n):
    return BooleanFunction.from_truth_table(n, _all_points(n).all(axis=1))


def maj3():
    return BooleanFunction.from_truth_table(3, _all_points(3).sum(axis=1) >= 2)


AMBAINIS_ONES = ("0000", "0001", "0011", "0111", "1111", "1110", "1100", "1000")


def ambainis():
    """1 exactly on monotone (non-decreasing or non-increasing) 4-bit strings."""
    labels = np.zeros(16, dtype=np.int8)
    labels[[int(s, 2) for s in AMBAINIS_ONES]] = 1
    return BooleanFunction.from_truth_table(4, labels)


def _perfect_matchings(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for j in range(len(rest)):
        for m in _perfect_matchings(rest[:j] + rest[j + 1 :]):
            yield [(first, rest[j])] + m


def collision(n):
    """Collision promise problem on ``n`` symbols over an alphabet of size ``n``.

    Label 1: all symbols distinct.  Label 0: every symbol occurs exactly twice
    (each position has exactly one partner).  Anything else is off the promise.
    """
    if n < 2 or n % 2:
        raise DomainError("collision requires an even n >= 2")
    if n > len(ALPHABET):
        raise DomainError("collision alphabet limited to 36 symbols")
    weights = n ** np.arange(n - 1, -1, -1, dtype=np.int64)
    pos = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    codes = [pos @ weights]
    labels = [np.ones(pos.shape[0], dtype=np.int8)]
    values = np.array(list(itertools.permutations(range(n), n // 2)), dtype=np.int64)
    for matching in _perfect_matchings(list(range(n))):
        neg = np.empty((values.shape[0], n), dtype=np.int64)
        for slot, (a, b) in enumerate(matching):
            neg[:, a] = values[:, slot]
            neg[:, b] = values[:, slot]
        codes.append(neg @ weights)
        labels.append(np.zeros(neg.shape[0], dtype=np.int8))
    return BooleanFunction(n, n, np.concatenate(codes), np.concatenate(labels))


BUILTINS = {
    "parity": (parity, ("n",)),
    "or": (or_, ("n",)),
    "and": (and_, ("n",)),
    "maj3": (maj3, ()),
    "recmaj": (lambda h: iterate(maj3(), h), ("h",)),
    "ambainis": (ambainis, ()),
    "ambainis_iter": (lambda d: iterate(ambainis(), d), ("d",)),
    "collision": (collision, ("n",)),
}


def builtin(name, *params):
    """Construct a named function; ``params`` follow the order in ``BUILTINS``."""
    try:
        fn, names = BUILTINS[name]
    except KeyError:
        raise DomainError(f"unknown builtin {name!r}; choose from {sorted(BUILTINS)}") from None
    if len(params) != len(names):
        raise DomainError(f"builtin {name!r} takes parameters {names}, got {params}")
    return fn(*(int(p) for p in params))


# ---- iteration and restriction -------------------------------------------


def iterate(f, d, cap=None):
    """The ``d``-th iteration of a total binary function.

    Block ``j`` of the input (``n^(d-1)`` consecutive symbols) feeds argument
    ``j`` of the outer copy of ``f``.
    """
    if d < 1:
        raise DomainError("iteration depth must be positive")
    if not f.is_total or f.k != 2:
        raise DomainError("iterate requires a total binary function")
    if d == 1:
        return f
    n = f.n
    _check_table_size(n**d, 2, cap)
    table = f.labels.astype(np.int64)
    block = n
    for _ in range(d - 1):
        N = block * n
        codes = np.arange(2**N, dtype=np.int64)
        outer = np.zeros(codes.size, dtype=np.int64)
        mask = (1 << block) - 1
        for j in range(n):
            shift = block * (n - 1 - j)
            outer = (outer << 1) | table[(codes >> shift) & mask]
        table = f.labels.astype(np.int64)[outer]
        block = N
    return BooleanFunction.from_truth_table(block, table)


def parse_restriction(rho, n, k=2):
    """Normalise a restriction to a string over the alphabet plus ``*``."""
    if not isinstance(rho, str):
        rho = "".join(STAR if s is None or s == STAR else ALPHABET[int(s)] for s in rho)
    rho = "".join(_STAR_ALIASES.get(c, c) for c in rho)
    if len(rho) != n:
        raise DomainError(f"restriction {rho!r} has length {len(rho)}, expected {n}")
    for c in rho:
        if c != STAR and (c not in ALPHABET or ALPHABET.index(c) >= k):
            raise DomainError(f"restriction {rho!r} has invalid symbol {c!r}")
    return rho


def restrict_inputs(f, rho):
    """Fix the non-star positions of ``rho``.

    Returns the function of the starred positions (in their original order),
    or the plain integer 0 or 1 when no star remains.
    """
    if not f.is_total:
        raise DomainError("restrict_inputs requires a total function")
    rho = parse_restriction(rho, f.n, f.k)
    stars = [i for i, c in enumerate(rho) if c == STAR]
    base = 0
    for c in rho:
        base = base * f.k + (0 if c == STAR else ALPHABET.index(c))
    if not stars:
        return int(f.lookup_codes([base])[0])
    m = len(stars)
    pts = _all_points(m, f.k).astype(np.int64)
    place = np.array([f.k ** (f.n - 1 - i) for i in stars], dtype=np.int64)
    table = f.lookup_codes(base + pts @ place)
    return BooleanFunction.from_truth_table(m, table, k=f.k)


def restrict_domain(f, subset):
    """Domain restriction to ``subset`` (strings, tuples or integer codes)."""
    codes = []
    for x in subset:
        codes.append(int(x) if isinstance(x, (int, np.integer)) else f.encode(x))
    codes = np.unique(np.asarray(codes, dtype=np.int64))
    labels = f.lookup_codes(codes)
    if np.any(labels < 0):
        bad = codes[labels < 0][0]
        raise DomainError(f"{format_code(bad, f.n, f.k)} is not in the domain")
    return BooleanFunction(f.n, f.k, codes, labels)


def restriction_weights(n, p, cap=None):
    """Weights of all ``3^n`` binary restrictions under the p-random distribution.

    Index ``r`` is the base-3 code of the restriction with digit 2 meaning star,
    position 0 most significant.
    """
    if not 0 < p < 1:
        raise DomainError("p must lie strictly between 0 and 1")
    cap = config.RESTRICTION_ARITY_CAP if cap is None else cap
    if n > cap:
        raise ResourceCapError(f"3^{n} restrictions exceed arity cap {cap}")
    stars = np.zeros(3**n, dtype=np.int64)
    codes = np.arange(3**n, dtype=np.int64)
    for _ in range(n):
        stars += codes % 3 == 2
        codes //= 3
    return p**stars * ((1 - p) / 2) ** (n - stars), stars


def restriction_code(rho):
    code = 0
    for c in rho:
        code = code * 3 + (2 if c == STAR else int(c))
    return code


def restriction_string(code, n):
    out = []
    for _ in range(n):
        code, r = divmod(int(code), 3)
        out.append(STAR if r == 2 else str(r))
    return "".join(reversed(out))


def enumerate_restrictions(n, p, cap=None):
    """All ``(restriction, weight)`` pairs for binary inputs, in base-3 order."""
    weights, _ = restriction_weights(n, p, cap)
    return [(restriction_string(r, n), float(w)) for r, w in enumerate(weights)]


def validate_filter(delta, n, k=2):
    """True iff ``delta`` is closed under fixing any single star to any symbol."""
    members = {parse_restriction(r, n, k) for r in delta}
    for rho in members:
        for i, c in enumerate(rho):
            if c != STAR:
                continue
            for s in ALPHABET[:k]:
                if rho[:i] + s + rho[i + 1 :] not in members:
                    return False
    return True


def restriction_classes(f, cap=None):
    """Classify every restriction of a total binary function.

    Returns ``(status, literal)`` flat over the ``3^n`` base-3 codes: status is
    0 or 1 when the restricted function is that constant and 2 otherwise;
    ``literal`` is true when the restricted function equals a single free
    variable or its negation.
    """
    if not f.is_total or f.k != 2:
        raise DomainError("restriction classes require a total binary function")
    n = f.n
    cap = config.RESTRICTION_ARITY_CAP if cap is None else cap
    if n > cap:
        raise ResourceCapError(f"3^{n} restrictions exceed arity cap {cap}")
    t = f.labels.astype(np.int8).reshape((2,) * n)
    for axis in range(n):
        a = np.take(t, 0, axis=axis)
        b = np.take(t, 1, axis=axis)
        star = np.where((a == b) & (a != 2), a, 2).astype(np.int8)
        t = np.concatenate([t, np.expand_dims(star, axis)], axis=axis)
    literal = np.zeros((3,) * n, dtype=bool)
    for axis in range(n):
        a = np.take(t, 0, axis=axis)
        b = np.take(t, 1, axis=axis)
        lit = (a != 2) & (b != 2) & (a != b)
        idx = [slice(None)] * n
        idx[axis] = 2
        literal[tuple(idx)] |= lit
    return t.reshape(-1), literal.reshape(-1)


# ---- .bf text format -----------------------------------------------------


def parse_bf(text, source="<string>"):
    """Parse the ``.bf`` truth-table format; errors carry line numbers."""
    header = None
    mapping = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 2:
                raise DomainError(f"{source}:{lineno}: header must be 'n k'")
            try:
                n, k = int(parts[0]), int(parts[1])
            except ValueError:
                raise DomainError(f"{source}:{lineno}: header must be two integers") from None
            if n < 1 or not 2 <= k <= len(ALPHABET):
                raise DomainError(f"{source}:{lineno}: need n >= 1 and 2 <= k <= 36")
            header = (n, k)
            continue
        n, k = header
        if len(parts) != 2 or parts[1] not in ("0", "1"):
            raise DomainError(f"{source}:{lineno}: expected '<input> <label>'")
        inp = parts[0]
        if len(inp) != n or any(c not in ALPHABET[:k] for c in inp):
            raise DomainError(f"{source}:{lineno}: invalid input {inp!r}")
        if inp in mapping:
            raise DomainError(f"{source}:{lineno}: duplicate input {inp!r}")
        mapping[inp] = int(parts[1])
    if header is None:
        raise DomainError(f"{source}: missing header")
    return BooleanFunction.from_mapping(header[0], mapping, k=header[1])


def read_bf(path):
    path = Path(path)
    return parse_bf(path.read_text(), source=str(path))


def format_bf(f):
    lines = [f"{f.n} {f.k}"]
    lines.extend(f"{x} {lab}" for x, lab in f.items())
    return "\n".join(lines) + "\n"


def write_bf(f, path):
    Path(path).write_text(format_bf(f))
