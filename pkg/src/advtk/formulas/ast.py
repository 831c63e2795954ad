"""De Morgan formulas in negation normal form.

Text grammar: variables ``x1 .. xn``, ``!`` for negation, ``&`` and ``|`` with
the usual precedence (``!`` binds tightest, then ``&``, then ``|``) and
parentheses.  Variables are numbered from 1 in text and from 0 in the API.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from ..boolfn import BooleanFunction, _all_points
from ..errors import DomainError, FormulaSyntaxError, ResourceCapError

AND = "and"
OR = "or"
_SYMBOL = {AND: "&", OR: "|"}
LEAF_CAP = 2**20


@dataclass(frozen=True)
class Leaf:
    var: int
    negated: bool = False

    def __post_init__(self):
        if self.var < 0:
            raise DomainError("variable index must be nonnegative")


@dataclass(frozen=True)
class Gate:
    op: str
    left: "Formula"
    right: "Formula"

    def __post_init__(self):
        if self.op not in (AND, OR):
            raise DomainError(f"unknown gate {self.op!r}")


Formula = Union[Leaf, Gate]


# ---- parsing ---------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(x(\d+))|(.))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace is left
            break
        start = m.start(1) if m.group(1) else m.start(3)
        if m.group(1):
            idx = int(m.group(2))
            if idx < 1:
                raise FormulaSyntaxError("variables are numbered from x1", start)
            tokens.append(("var", idx - 1, start))
        elif m.group(3) in "!&|()":
            tokens.append((m.group(3), None, start))
        else:
            raise FormulaSyntaxError(f"unexpected character {m.group(3)!r}", start)
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind):
        tok = self.peek()
        if tok[0] != kind:
            want = "end of input" if kind == "end" else repr(kind)
            got = "end of input" if tok[0] == "end" else repr(tok[0] if tok[0] != "var" else "x")
            raise FormulaSyntaxError(f"expected {want}, found {got}", tok[2])
        self.i += 1
        return tok

    def disjunction(self):
        node = self.conjunction()
        while self.peek()[0] == "|":
            self.i += 1
            node = Gate(OR, node, self.conjunction())
        return node

    def conjunction(self):
        node = self.unary()
        while self.peek()[0] == "&":
            self.i += 1
            node = Gate(AND, node, self.unary())
        return node

    def unary(self):
        tok = self.peek()
        if tok[0] == "!":
            self.i += 1
            return negate(self.unary())
        if tok[0] == "(":
            self.i += 1
            node = self.disjunction()
            self.take(")")
            return node
        if tok[0] == "var":
            self.i += 1
            return Leaf(tok[1])
        what = "end of input" if tok[0] == "end" else repr(tok[0])
        raise FormulaSyntaxError(f"expected a variable, '!' or '(', found {what}", tok[2])


def parse_formula(text, n=None):
    """Parse formula text; interior negations are pushed to the leaves."""
    p = _Parser(text)
    node = p.disjunction()
    p.take("end")
    if n is not None and num_vars(node) > n:
        raise DomainError(f"formula uses x{num_vars(node)} but the function has {n} variables")
    return node


def negate(phi):
    """De Morgan dual with complemented leaves; the size is unchanged."""
    if isinstance(phi, Leaf):
        return Leaf(phi.var, not phi.negated)
    return Gate(OR if phi.op == AND else AND, negate(phi.left), negate(phi.right))


# ---- structure -------------------------------------------------------------------


def leaf_count(phi):
    if isinstance(phi, Leaf):
        return 1
    return leaf_count(phi.left) + leaf_count(phi.right)


def depth(phi):
    if isinstance(phi, Leaf):
        return 0
    return 1 + max(depth(phi.left), depth(phi.right))


def num_vars(phi):
    """One more than the largest variable index used."""
    if isinstance(phi, Leaf):
        return phi.var + 1
    return max(num_vars(phi.left), num_vars(phi.right))


def leaves(phi):
    """Leaves in left-to-right order."""
    if isinstance(phi, Leaf):
        return [phi]
    return leaves(phi.left) + leaves(phi.right)


def to_text(phi):
    """Fully parenthesised text in the parser's grammar."""
    if isinstance(phi, Leaf):
        return ("!" if phi.negated else "") + f"x{phi.var + 1}"
    return f"({to_text(phi.left)}{_SYMBOL[phi.op]}{to_text(phi.right)})"


# ---- semantics -------------------------------------------------------------------


def _eval_rows(phi, X):
    if isinstance(phi, Leaf):
        col = X[:, phi.var].astype(bool)
        return ~col if phi.negated else col
    a = _eval_rows(phi.left, X)
    b = _eval_rows(phi.right, X)
    return (a & b) if phi.op == AND else (a | b)


def eval_formula(phi, x):
    """Value on one input (string or sequence of bits) or on the rows of a 2-D array."""
    if isinstance(x, str):
        x = [int(c) for c in x]
    X = np.asarray(x)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    if X.shape[1] < num_vars(phi):
        raise DomainError("input shorter than the formula's variable range")
    if np.any((X != 0) & (X != 1)):
        raise DomainError("formulas take binary inputs")
    out = _eval_rows(phi, X).astype(np.int8)
    return int(out[0]) if single else out


def truth_table(phi, n=None):
    """Labels on all of {0,1}^n in lexicographic order."""
    n = num_vars(phi) if n is None else n
    return eval_formula(phi, _all_points(n))


def formula_function(phi, n=None):
    n = num_vars(phi) if n is None else n
    return BooleanFunction.from_truth_table(n, truth_table(phi, n))


def find_mismatch(phi, f):
    """First domain input where ``phi`` and ``f`` disagree, or ``None``."""
    if f.k != 2:
        raise DomainError("formulas compute functions on binary inputs")
    vals = eval_formula(phi, f.points())
    bad = np.flatnonzero(vals != f.labels)
    if bad.size == 0:
        return None
    return f.input_strings()[bad[0]]


def _shift(phi, offset):
    if isinstance(phi, Leaf):
        return Leaf(phi.var + offset, phi.negated)
    return Gate(phi.op, _shift(phi.left, offset), _shift(phi.right, offset))


def iterate_formula(phi, d, n=None, cap=LEAF_CAP):
    """Formula for the ``d``-th iteration: leaf ``x_j`` becomes a fresh copy on block ``j``."""
    n = num_vars(phi) if n is None else n
    if d < 1:
        raise DomainError("iteration depth must be positive")
    if leaf_count(phi) ** d > cap:
        raise ResourceCapError(f"{leaf_count(phi)}^{d} leaves exceed cap {cap}")
    cur = phi
    for level in range(2, d + 1):
        block = n ** (level - 1)
        copies = {}

        def sub(node, cur=cur, block=block, copies=copies):
            if isinstance(node, Leaf):
                key = node.var
                if key not in copies:
                    copies[key] = _shift(cur, key * block)
                inner = copies[key]
                return negate(inner) if node.negated else inner
            return Gate(node.op, sub(node.left), sub(node.right))

        cur = sub(phi)
    return cur
