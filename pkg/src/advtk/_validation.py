"""Input checks shared by the estimators and the CLI."""

import numpy as np

from .boolfn import BooleanFunction
from .errors import DomainError, NoCrossPairsError


def check_function(X, y=None, *, require_total=False, require_binary=False, require_cross=True):
    """Coerce ``(X, y)`` into a :class:`BooleanFunction` and validate it.

    ``X`` is either a function already or an ``(m, n)`` array of input symbols,
    in which case ``y`` holds the labels.
    """
    if isinstance(X, BooleanFunction):
        if y is not None:
            raise DomainError("labels must not be given together with a BooleanFunction")
        f = X
    else:
        if y is None:
            raise DomainError("labels y are required when X is an array of inputs")
        X = np.asarray(X)
        y = np.asarray(y).ravel()
        if X.ndim != 2 or X.shape[0] != y.shape[0]:
            raise DomainError("X must be (m, n) with one label per row")
        f = BooleanFunction.from_points(X, y)
    if require_total and not f.is_total:
        raise DomainError("a total function is required")
    if require_binary and f.k != 2:
        raise DomainError("a binary alphabet is required")
    if require_cross and not f.has_both_labels():
        raise NoCrossPairsError("no cross pairs: the function has a single label")
    return f


def check_probability(p, name="p", open_interval=True):
    p = float(p)
    ok = 0 < p < 1 if open_interval else 0 <= p <= 1
    if not ok:
        raise DomainError(f"{name} must lie in {'(0, 1)' if open_interval else '[0, 1]'}")
    return p


def check_epsilon(eps):
    eps = float(eps)
    if not 0 <= eps < 0.5:
        raise DomainError("error probability must satisfy 0 <= eps < 1/2")
    return eps


def check_is_fitted(est, attr):
    if not hasattr(est, attr):
        raise AttributeError(f"{type(est).__name__} is not fitted yet; call fit first")
