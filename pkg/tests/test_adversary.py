import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sklearn.base import clone

from advtk import DomainError, InfiniteWitnessError, NoCrossPairsError, OptimizerConfig
from advtk import ambainis, collision, iterate, maj3, parity
from advtk.adversary import (
    MaxPIPrimal,
    ProbabilityFamily,
    SpectralAdversary,
    SumPIPrimal,
    ambainis_witness,
    certificate_barrier,
    certificate_witness,
    check_adversary_matrix,
    collision_maxpi_witness,
    compose_functions,
    compose_witness,
    eval_maxpi_witness,
    eval_sumpi_witness,
    evaluate_witness,
    formula_bound,
    hamming_one_matrix,
    hastad_bound,
    index_selection_value,
    iterate_witness,
    khrapchenko,
    khrapchenko_scheme,
    koutsoupias,
    maxpi_bracket,
    optimize_spectral,
    prob_formula_bound,
    prob_scheme_value,
    quantum_bound,
    selection_from_witness,
    smallest_index_selection,
    spectral_value,
    sumpi_bracket,
    validate_index_selection,
)
from advtk.boolfn import and_, or_

import oracles
from conftest import total, two_sided

FAST = OptimizerConfig(iterations=150, restarts=2)


def random_family(f, rng):
    return ProbabilityFamily(f, rng.dirichlet(np.ones(f.n), size=f.domain_size))


def as_dict(f, p):
    return {tuple(int(c) for c in x): p.dist[i] for i, x in enumerate(f.input_strings())}


# ---- primal witnesses --------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 254), st.integers(0, 2**32 - 1))
def test_witness_value_matches_oracle(bits, seed):
    f = total(3, bits)
    p = random_family(f, np.random.default_rng(seed))
    t = oracles.table_of(f)
    d = as_dict(f, p)
    s, m = eval_sumpi_witness(f, p), eval_maxpi_witness(f, p)
    assert s == pytest.approx(oracles.witness_value(t, d, "sum"), rel=1e-12)
    assert m == pytest.approx(oracles.witness_value(t, d, "max"), rel=1e-12)
    assert s <= m + 1e-12


def test_worst_pair_attains_value(rng):
    f = ambainis()
    p = random_family(f, rng)
    ev = evaluate_witness(f, p)
    x, y = ev.x, ev.y
    names = list(f.input_strings())
    px, py = p.dist[names.index(x)], p.dist[names.index(y)]
    ov = sum(math.sqrt(px[i] * py[i]) for i in range(4) if x[i] != y[i])
    assert ev.value == pytest.approx(1 / ov)


def test_sampled_is_below_full(rng):
    f = collision(4)
    p = random_family(f, rng)
    full = evaluate_witness(f, p)
    est = evaluate_witness(f, p, mode="sampled", samples=500, seed=3)
    assert est.sampled and est.value <= full.value + 1e-12


def test_zero_overlap_is_infinite():
    f = maj3()
    dist = np.zeros((8, 3))
    dist[:, 0] = 1.0
    with pytest.raises(InfiniteWitnessError):
        eval_sumpi_witness(f, ProbabilityFamily(f, dist))


def test_family_validation():
    f = maj3()
    with pytest.raises(DomainError):
        ProbabilityFamily(f, np.full((8, 3), 0.5))
    with pytest.raises(DomainError):
        ProbabilityFamily(f, -np.ones((8, 3)) / 3)
    with pytest.raises(DomainError):
        ProbabilityFamily.from_mapping(f, {"000": [1, 0, 0]})


def test_constant_function_has_no_pairs():
    f = total(2, 0)
    with pytest.raises(NoCrossPairsError):
        eval_sumpi_witness(f, ProbabilityFamily.uniform(f))


@pytest.mark.parametrize("n", [4, 6])
def test_collision_named_witnesses(n):
    f = collision(n)
    assert eval_sumpi_witness(f, ProbabilityFamily.uniform(f)) == pytest.approx(2.0, abs=1e-12)
    assert eval_maxpi_witness(f, collision_maxpi_witness(f)) == pytest.approx(math.sqrt(2 * n), abs=1e-9)


def test_ambainis_named_witness():
    f = ambainis()
    w = ambainis_witness(f)
    assert eval_sumpi_witness(f, w) == pytest.approx(2.5, abs=1e-12)
    with pytest.raises(DomainError):
        ambainis_witness(maj3())


def test_certificate_witness_and_barrier(funcs3):
    for f in funcs3:
        v = eval_maxpi_witness(f, certificate_witness(f))
        assert v <= certificate_barrier(f) + 1e-9


def test_certificate_witness_values():
    assert eval_maxpi_witness(maj3(), certificate_witness(maj3())) == pytest.approx(2.0)
    assert certificate_barrier(or_(3)) == pytest.approx(math.sqrt(3))
    # partial: min(sqrt(n C0), sqrt(n C1)) with C0 = 2, C1 = 3
    assert certificate_barrier(collision(4)) == pytest.approx(math.sqrt(8))


# ---- composition ------------------------------------------------------------


def test_compose_functions_and():
    f = compose_functions(and_(2), [or_(2), or_(2)])
    for x, lab in f.items():
        assert lab == int(("1" in x[:2]) and ("1" in x[2:]))


def test_iterated_maj_witness():
    g = iterate(maj3(), 2)
    w = iterate_witness(certificate_witness(maj3()), 2, g)
    assert eval_sumpi_witness(g, w) == pytest.approx(4.0, abs=1e-9)
    assert eval_maxpi_witness(g, w) == pytest.approx(4.0, abs=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 14), st.integers(1, 14), st.integers(0, 2**32 - 1))
def test_composition_is_submultiplicative(hb, gb, seed):
    rng = np.random.default_rng(seed)
    h, g = total(2, hb), total(2, gb)
    ph, pg = random_family(h, rng), random_family(g, rng)
    f = compose_functions(h, [g, g])
    q = compose_witness(ph, [pg, pg], f)
    np.testing.assert_allclose(q.dist.sum(axis=1), 1.0)
    for kind in ("sum", "max"):
        vq = evaluate_witness(f, q, kind=kind).value
        assert vq <= evaluate_witness(h, ph, kind=kind).value * evaluate_witness(g, pg, kind=kind).value * (1 + 1e-9)


def test_compose_rejects_wrong_target():
    with pytest.raises(DomainError):
        compose_witness(certificate_witness(maj3()), [certificate_witness(maj3())] * 3, parity(9))


# ---- dual objects -------------------------------------------------------------


def test_spectral_value_matches_oracle(funcs3, rng):
    for f in funcs3[::7]:
        t = oracles.table_of(f)
        G = rng.random((int(np.sum(f.labels == 0)), int(np.sum(f.labels == 1))))
        assert spectral_value(f, G) == pytest.approx(oracles.spectral_ratio(t, G), rel=1e-9)


def test_hamming_one_values():
    assert spectral_value(maj3(), hamming_one_matrix(maj3())) == pytest.approx(2.0, abs=1e-9)
    assert spectral_value(parity(4), hamming_one_matrix(parity(4))) == pytest.approx(4.0, abs=1e-9)


def test_adversary_matrix_checks():
    f = maj3()
    with pytest.raises(DomainError):
        check_adversary_matrix(f, np.ones((3, 4)))
    with pytest.raises(DomainError):
        check_adversary_matrix(f, -np.ones((4, 4)))
    with pytest.raises(DomainError):
        spectral_value(f, np.zeros((4, 4)))


def test_khrapchenko_scheme_reproduces_bound(funcs3):
    for f in funcs3[::5]:
        try:
            W = khrapchenko_scheme(f)
        except DomainError:
            continue
        assert prob_scheme_value(f, W) == pytest.approx(math.sqrt(khrapchenko(f)), rel=1e-9)


def test_index_selections(rng):
    f = ambainis()
    P = smallest_index_selection(f)
    assert validate_index_selection(f, P)
    G = rng.random((8, 8))
    # any valid selection makes a ratio at least the spectral value
    assert index_selection_value(f, P, G) >= spectral_value(f, G) - 1e-9
    Q = selection_from_witness(f, ambainis_witness(f))
    assert validate_index_selection(f, Q)
    bad = P.copy()
    bad[0] = ~bad[0]
    assert not validate_index_selection(f, bad)


# ---- classical bounds ---------------------------------------------------------


@pytest.mark.parametrize("n", range(2, 7))
def test_khrapchenko_parity(n):
    assert khrapchenko(parity(n)) == Fraction(n * n)


def test_khrapchenko_sweep(funcs3):
    for f in funcs3:
        t = oracles.table_of(f)
        assert khrapchenko(f) == oracles.khrapchenko(t)
        assert koutsoupias(f) == pytest.approx(np.linalg.norm(oracles.hamming_one(t), 2) ** 2, abs=1e-9)
        assert koutsoupias(f) >= float(khrapchenko(f)) - 1e-9


def test_khrapchenko_subsets():
    f = maj3()
    # A = weight-1 inputs, B = weight-2 inputs: 6 pairs, 36 / 9
    assert khrapchenko(f, ["001", "010", "100"], ["011", "101", "110"]) == 4
    with pytest.raises(DomainError):
        khrapchenko(f, ["011"], None)


@pytest.mark.parametrize("p", [0.1, 0.3, 0.5, 0.7, 0.9])
def test_hastad_oracle(funcs3, p):
    for f in funcs3[::9]:
        assert hastad_bound(f, p) == pytest.approx(oracles.hastad(oracles.table_of(f), p), rel=1e-9, abs=1e-12)


def test_hastad_rejects_partial():
    with pytest.raises(DomainError):
        hastad_bound(collision(4), 0.5)


# ---- optimizers ---------------------------------------------------------------


def test_spectral_optimizer_certified():
    f = ambainis()
    est = SpectralAdversary(max_iter=200, n_restarts=2).fit(f)
    assert est.value_ == pytest.approx(spectral_value(f, est.gamma_), rel=1e-12)
    assert est.value_ >= 2.45
    assert est.value_ <= eval_sumpi_witness(f, ambainis_witness(f)) + 1e-9


def test_spectral_optimizer_deterministic():
    a = optimize_spectral(or_(3), seed=5, iterations=80, restarts=2)
    b = optimize_spectral(or_(3), seed=5, iterations=80, restarts=2)
    assert a[1] == b[1] and np.array_equal(a[0], b[0])
    assert a[1] == pytest.approx(math.sqrt(3), abs=1e-6)


@pytest.mark.parametrize("cls, kind", [(SumPIPrimal, "sum"), (MaxPIPrimal, "max")])
def test_primal_optimizer_exact_value(cls, kind):
    f = ambainis()
    est = cls(max_iter=100, n_restarts=2).fit(f)
    assert est.value_ == pytest.approx(evaluate_witness(f, est.witness_, kind=kind).value, rel=1e-12)
    assert est.transform(f.points()).shape == (f.domain_size, f.n)
    assert est.value_ >= 2.5 - 1e-9 if kind == "max" else est.value_ >= 2.49


def test_estimator_api():
    est = SumPIPrimal(max_iter=7, random_state=3)
    params = est.get_params()
    assert params["max_iter"] == 7 and params["random_state"] == 3
    c = clone(est)
    assert c.get_params() == params and not hasattr(c, "value_")
    assert SpectralAdversary().set_params(max_iter=9).max_iter == 9


# ---- brackets -----------------------------------------------------------------


def test_maj3_brackets():
    s = sumpi_bracket(maj3(), FAST)
    m = maxpi_bracket(maj3(), FAST, sumpi=s)
    assert s.consistent and m.consistent and s.certified
    assert s.lower.value == pytest.approx(2.0, abs=1e-9) and s.upper.value == pytest.approx(2.0, abs=1e-9)
    d = m.to_dict()
    assert d["quantity"] == "maxPI" and d["upper"]["worst_pair"]


def test_bracket_extra_candidates():
    f = ambainis()
    s = sumpi_bracket(f, FAST.with_(extra_upper=(ambainis_witness(f),)))
    assert s.upper.value <= 2.5 + 1e-12


@pytest.mark.parametrize("bits", [0b10010110, 0b11101000, 0b00000110, 0b11111110, 0b01111000])
def test_duality_sandwich(bits):
    f = total(3, bits)
    s = sumpi_bracket(f, FAST)
    assert s.lower.value <= s.upper.value + 1e-6
    from advtk import block_sensitivity

    assert s.upper.value >= math.sqrt(block_sensitivity(f)) - 1e-6
    assert s.lower.value <= certificate_barrier(f) + 1e-6


def test_derived_bounds():
    assert quantum_bound(4.0, 0) == 4.0
    assert quantum_bound(2.0, 1 / 9) == pytest.approx(2 * (1 - 2 * math.sqrt(8) / 9))
    assert formula_bound(2.5) == 6.25
    assert prob_formula_bound(2.5, 0) == 6.25
    assert prob_formula_bound(3.0, 0.25) == pytest.approx(2.25)
    with pytest.raises(DomainError):
        quantum_bound(1.0, 0.5)
    with pytest.raises(DomainError):
        formula_bound(-1.0)
