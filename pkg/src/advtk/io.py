"""Witness files (JSON).

Every file carries ``type`` (``sumpi``, ``maxpi``, ``spectral`` or
``probscheme``) and ``n``; ``k`` defaults to 2.  Numbers may be JSON numbers
or strings holding decimals or ``"a/b"`` rationals.  Inputs are named by their
strings, and matrix cells either by ``[x, y]`` strings or by ``[row, col]``
indices into the lexicographic orderings of X and Y.

``sumpi`` / ``maxpi``::

    {"type": "sumpi", "n": 3, "data": {"000": [0.5, 0.5, 0], ...}}

``spectral``: ``"matrix"`` (dense rows) or ``"entries"`` (``[x, y, w]``
triples, missing cells are 0).

``probscheme``: ``"q"`` entries, ``"pA"`` and ``"pB"`` keyed by input,
``"px"`` as ``[x, i, y, w]`` and ``"py"`` as ``[y, i, x, w]`` entries.  A
``(x, i)`` or ``(y, i)`` pair with no entries gets the uniform distribution.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .adversary.spectral import ProbSchemeWitness
from .adversary.witnesses import ProbabilityFamily
from .errors import DomainError

WITNESS_TYPES = ("sumpi", "maxpi", "spectral", "probscheme")


def parse_number(v):
    """A JSON number, or a string holding a decimal or ``a/b`` rational."""
    if isinstance(v, bool):
        raise DomainError(f"not a number: {v!r}")
    if isinstance(v, (int, float)):
        return float(v)
    if isinstance(v, str):
        try:
            return float(Fraction(v.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"not a number: {v!r}") from exc
    raise DomainError(f"not a number: {v!r}")


def _index(f, key, label):
    """Row (within X or Y) of an input string or a bare index."""
    size = int(np.sum(f.labels == label))
    if isinstance(key, int) and not isinstance(key, bool):
        if not 0 <= key < size:
            raise DomainError(f"index {key} out of range for side {label}")
        return key
    if not isinstance(key, str):
        raise DomainError(f"bad input reference {key!r}")
    try:
        row, lab = f.index_of(key)
    except KeyError as exc:
        raise DomainError(f"input {key!r} is outside the domain") from exc
    if lab != label:
        raise DomainError(f"input {key!r} has label {lab}, expected {label}")
    return row


def _cells(f, entries, name):
    nx, ny = int(np.sum(f.labels == 0)), int(np.sum(f.labels == 1))
    M = np.zeros((nx, ny))
    for e in entries:
        if not isinstance(e, (list, tuple)) or len(e) != 3:
            raise DomainError(f"{name} entries must be [x, y, value]")
        M[_index(f, e[0], 0), _index(f, e[1], 1)] = parse_number(e[2])
    return M


def _side_dist(f, data, label, name):
    size = int(np.sum(f.labels == label))
    out = np.zeros(size)
    if not isinstance(data, dict):
        raise DomainError(f"{name} must map inputs to probabilities")
    for key, v in data.items():
        ref = int(key) if key.isdigit() and len(key) != f.n else key
        out[_index(f, ref, label)] = parse_number(v)
    return out


def _conditional(f, entries, label, name):
    own = int(np.sum(f.labels == label))
    other = int(np.sum(f.labels == 1 - label))
    out = np.zeros((own, f.n, other))
    touched = np.zeros((own, f.n), dtype=bool)
    for e in entries:
        if not isinstance(e, (list, tuple)) or len(e) != 4:
            raise DomainError(f"{name} entries must be [input, position, input, value]")
        a = _index(f, e[0], label)
        i = int(e[1])
        if not 0 <= i < f.n:
            raise DomainError(f"position {i} out of range in {name}")
        b = _index(f, e[2], 1 - label)
        out[a, i, b] = parse_number(e[3])
        touched[a, i] = True
    out[~touched] = 1.0 / other
    return out


def witness_from_dict(doc, f):
    """Decode a witness document against ``f``; returns ``(type, object)``."""
    if not isinstance(doc, dict):
        raise DomainError("witness document must be a JSON object")
    kind = doc.get("type")
    if kind not in WITNESS_TYPES:
        raise DomainError(f"witness type must be one of {', '.join(WITNESS_TYPES)}")
    if doc.get("n") != f.n:
        raise DomainError(f"witness is for n={doc.get('n')}, function has n={f.n}")
    if int(doc.get("k", 2)) != f.k:
        raise DomainError(f"witness is for k={doc.get('k', 2)}, function has k={f.k}")
    if kind in ("sumpi", "maxpi"):
        data = doc.get("data")
        if not isinstance(data, dict):
            raise DomainError("probability witness needs a 'data' object keyed by input")
        mapping = {}
        for x, vec in data.items():
            if not isinstance(vec, list) or len(vec) != f.n:
                raise DomainError(f"distribution for {x!r} must list {f.n} numbers")
            mapping[x] = [parse_number(v) for v in vec]
        return kind, ProbabilityFamily.from_mapping(f, mapping)
    if kind == "spectral":
        if "matrix" in doc:
            M = np.array([[parse_number(v) for v in row] for row in doc["matrix"]], dtype=float)
        elif "entries" in doc:
            M = _cells(f, doc["entries"], "spectral")
        else:
            raise DomainError("spectral witness needs 'matrix' or 'entries'")
        return kind, M
    try:
        W = ProbSchemeWitness(
            q=_cells(f, doc["q"], "q"),
            pA=_side_dist(f, doc["pA"], 0, "pA"),
            pB=_side_dist(f, doc["pB"], 1, "pB"),
            px=_conditional(f, doc.get("px", []), 0, "px"),
            py=_conditional(f, doc.get("py", []), 1, "py"),
        )
    except KeyError as exc:
        raise DomainError(f"probability scheme is missing field {exc.args[0]!r}") from exc
    return kind, W.validate(f)


def load_witness(path, f):
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    return witness_from_dict(doc, f)


def witness_to_dict(obj, f, kind=None):
    """Encode a probability family (``kind`` sumpi/maxpi) or an adversary matrix."""
    if isinstance(obj, ProbabilityFamily):
        kind = kind or "sumpi"
        if kind not in ("sumpi", "maxpi"):
            raise DomainError("probability families are sumpi or maxpi witnesses")
        fam = obj.restrict(f)
        return {"type": kind, "n": f.n, "k": f.k, "data": fam.to_mapping()}
    if isinstance(obj, ProbSchemeWitness):
        xs, ys = f.input_strings(0), f.input_strings(1)
        nz = lambda a: zip(*np.nonzero(a))
        return {
            "type": "probscheme", "n": f.n, "k": f.k,
            "q": [[xs[a], ys[b], float(obj.q[a, b])] for a, b in nz(obj.q)],
            "pA": {xs[a]: float(obj.pA[a]) for a in np.flatnonzero(obj.pA)},
            "pB": {ys[b]: float(obj.pB[b]) for b in np.flatnonzero(obj.pB)},
            "px": [[xs[a], int(i), ys[b], float(obj.px[a, i, b])] for a, i, b in nz(obj.px)],
            "py": [[ys[b], int(i), xs[a], float(obj.py[b, i, a])] for b, i, a in nz(obj.py)],
        }
    M = np.asarray(obj, dtype=float)
    return {"type": "spectral", "n": f.n, "k": f.k, "matrix": M.tolist()}


def save_witness(obj, f, path, kind=None):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(witness_to_dict(obj, f, kind), fh, indent=1)
        fh.write("\n")
