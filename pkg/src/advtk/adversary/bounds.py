"""Certified brackets on sumPI and maxPI, and the bounds derived from them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .. import config as _config
from .._validation import check_epsilon, check_function
from ..errors import DomainError, ResourceCapError
from .classical import khrapchenko
from .optimize import MaxPIPrimal, SpectralAdversary, SumPIPrimal
from .spectral import ProbSchemeWitness, prob_scheme_value, spectral_value
from .witnesses import ProbabilityFamily, certificate_witness, evaluate_witness


@dataclass(frozen=True)
class Certificate:
    """One bound together with the object that proves it.

    ``certified`` is false for values the caller vouches for (for example a
    composition-lemma value on an instance too large to verify directly).
    """

    method: str
    value: float
    witness: Any = field(default=None, repr=False, compare=False)
    certified: bool = True
    pair: tuple = None


@dataclass(frozen=True)
class Bracket:
    quantity: str
    lower: Certificate
    upper: Certificate
    candidates: tuple = field(default=(), repr=False)

    @property
    def width(self):
        return self.upper.value - self.lower.value

    @property
    def consistent(self):
        return self.lower.value <= self.upper.value + _config.BRACKET_TOL

    @property
    def certified(self):
        return self.lower.certified and self.upper.certified

    def to_dict(self):
        out = {"quantity": self.quantity}
        for side in ("lower", "upper"):
            c = getattr(self, side)
            out[side] = {"value": c.value, "method": c.method, "certified": c.certified}
            if c.pair is not None:
                out[side]["worst_pair"] = list(c.pair)
        out["width"] = self.width
        out["consistent"] = self.consistent
        return out


def _extra_lower(f, item):
    if isinstance(item, Certificate):
        return item
    if isinstance(item, ProbSchemeWitness):
        return Certificate("probability-scheme", prob_scheme_value(f, item), item)
    gamma = np.asarray(item, dtype=float)
    return Certificate("spectral", spectral_value(f, gamma), gamma)


def _extra_upper(f, item, kind, cap):
    if isinstance(item, Certificate):
        return item
    if not isinstance(item, ProbabilityFamily):
        raise DomainError("upper certificates must be probability families")
    ev = evaluate_witness(f, item, kind=kind, cap=cap)
    return Certificate(f"{kind}pi-witness", ev.value, item, pair=(ev.x, ev.y))


def _cells(f):
    return int(np.sum(f.labels == 0)) * int(np.sum(f.labels == 1))


def sumpi_lower_candidates(f, config=None):
    cfg = config or _config.OptimizerConfig()
    out = []
    if _cells(f) <= cfg.spectral_cell_cap:
        est = SpectralAdversary(
            max_iter=cfg.iterations, n_restarts=cfg.restarts, random_state=cfg.seed,
            cell_cap=cfg.spectral_cell_cap,
        ).fit(f)
        out.append(Certificate("spectral-optimizer", est.value_, est.gamma_))
        if f.k == 2:
            kh = khrapchenko(f)
            if kh > 0:
                out.append(Certificate("khrapchenko", math.sqrt(kh), kh))
    out.extend(_extra_lower(f, item) for item in cfg.extra_lower)
    return out


def _pick_lower(cands):
    if not cands:
        return Certificate("trivial", 0.0)
    # certified values win ties so that derived values never mask a real proof
    return max(cands, key=lambda c: (c.value, c.certified))


def _pick_upper(cands):
    if not cands:
        return Certificate("none", math.inf, certified=False)
    return min(cands, key=lambda c: (c.value, not c.certified))


def _upper_bracket(f, kind, cfg, lower, estimator):
    cands = []
    cap = cfg.pair_scan_cap
    try:
        cw = certificate_witness(f)
        ev = evaluate_witness(f, cw, kind=kind, cap=cap)
        cands.append(Certificate("certificate-witness", ev.value, cw, pair=(ev.x, ev.y)))
    except ResourceCapError:
        pass
    cands.extend(_extra_upper(f, item, kind, cap) for item in cfg.extra_upper)
    best = _pick_upper(cands)
    tight = best.value <= lower.value + 1e-9
    if not tight and _cells(f) <= cfg.optimizer_pair_cap:
        est = estimator(
            max_iter=cfg.iterations, n_restarts=cfg.restarts, random_state=cfg.seed,
            temperature_blocks=cfg.temperature_blocks, scan_cap=cap,
        ).fit(f)
        ev = evaluate_witness(f, est.witness_, kind=kind, cap=cap)
        cands.append(Certificate(f"{kind}pi-optimizer", ev.value, est.witness_, pair=(ev.x, ev.y)))
    return cands


def sumpi_bracket(f, config=None):
    """Lower and upper certificates on sumPI(f).

    Lower candidates: the spectral optimizer (which also tries the distance-1
    indicator), the square root of Khrapchenko's bound and any extra dual
    objects in ``config.extra_lower``.  Upper candidates: the certificate
    witness, the primal optimizer and the families in ``config.extra_upper``.
    The optimizer is skipped when an upper certificate already meets the
    lower bound.
    """
    f = check_function(f)
    cfg = config or _config.OptimizerConfig()
    lows = sumpi_lower_candidates(f, cfg)
    lower = _pick_lower(lows)
    ups = _upper_bracket(f, "sum", cfg, lower, SumPIPrimal)
    return Bracket("sumPI", lower, _pick_upper(ups), tuple(lows + ups))


def maxpi_bracket(f, config=None, sumpi=None):
    """Bracket on maxPI(f); the lower end comes from sumPI since maxPI >= sumPI."""
    f = check_function(f)
    cfg = config or _config.OptimizerConfig()
    if sumpi is not None:
        lows = [sumpi.lower]
    else:
        lows = sumpi_lower_candidates(f, cfg)
    lower = _pick_lower(lows)
    ups = _upper_bracket(f, "max", cfg, lower, MaxPIPrimal)
    return Bracket("maxPI", lower, _pick_upper(ups), tuple(lows + ups))


# ---- derived bounds ------------------------------------------------------------


def _check_value(v):
    v = float(v)
    if not v >= 0:
        raise DomainError("bound value must be nonnegative")
    return v


def quantum_bound(v, eps):
    """Bounded-error query lower bound ``(1 - 2 sqrt(eps (1 - eps))) v``."""
    eps = check_epsilon(eps)
    return (1.0 - 2.0 * math.sqrt(eps * (1.0 - eps))) * _check_value(v)


def formula_bound(v):
    """Formula size lower bound ``v^2`` from a sumPI or maxPI lower bound."""
    v = _check_value(v)
    return v * v


def prob_formula_bound(v, eps):
    """Probabilistic formula size lower bound ``((1 - 2 eps) v)^2``."""
    eps = check_epsilon(eps)
    return ((1.0 - 2.0 * eps) * _check_value(v)) ** 2
