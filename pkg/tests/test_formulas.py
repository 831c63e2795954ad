import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from advtk import DomainError, FormulaMismatchError, FormulaSyntaxError, ResourceCapError
from advtk import ambainis, iterate, maj3, parity
from advtk.adversary import hamming_one_matrix, spectral_value
from advtk.boolfn import or_
from advtk.formulas import (
    AMBAINIS_FORMULA,
    MAJ3_FORMULA,
    Gate,
    Leaf,
    color_cover,
    depth,
    eval_formula,
    formula_function,
    formula_size_table,
    iterate_formula,
    kw_partition,
    leaf_count,
    min_formula_size,
    negate,
    num_vars,
    parse_formula,
    rectangle_partition_number,
    to_text,
    truth_table,
)
from advtk.linalg import rectangle_measure_bound

import oracles
from conftest import total


def formulas(n, max_leaves=6):
    leaf = st.builds(Leaf, st.integers(0, n - 1), st.booleans())
    return st.recursive(
        leaf,
        lambda sub: st.builds(Gate, st.sampled_from(["and", "or"]), sub, sub),
        max_leaves=max_leaves,
    )


# ---- syntax -------------------------------------------------------------------


def test_precedence():
    phi = parse_formula("x1 | x2 & !x3")
    assert isinstance(phi, Gate) and phi.op == "or"
    assert phi.right == Gate("and", Leaf(1), Leaf(2, True))


def test_double_negation_and_de_morgan():
    assert parse_formula("!!x2") == Leaf(1)
    phi = parse_formula("!(x1 & x2)")
    assert phi == Gate("or", Leaf(0, True), Leaf(1, True))


@pytest.mark.parametrize("text", ["", "x1 &", "(x1", "x0", "y1", "x1 x2", "x1 ^ x2", "x1)"])
def test_syntax_errors(text):
    with pytest.raises(FormulaSyntaxError):
        parse_formula(text)


def test_variable_out_of_range():
    with pytest.raises((FormulaSyntaxError, DomainError)):
        parse_formula("x4", n=3)


def test_structure():
    phi = parse_formula(AMBAINIS_FORMULA)
    assert leaf_count(phi) == 10 and num_vars(phi) == 4 and depth(phi) >= 3


@settings(max_examples=80, deadline=None)
@given(formulas(4))
def test_text_round_trip(phi):
    assert parse_formula(to_text(phi)) == phi


@settings(max_examples=80, deadline=None)
@given(formulas(3))
def test_negate_complements(phi):
    assert np.array_equal(truth_table(negate(phi), 3), 1 - truth_table(phi, 3))
    assert leaf_count(negate(phi)) == leaf_count(phi)


def test_eval_shapes():
    phi = parse_formula(MAJ3_FORMULA)
    assert eval_formula(phi, "110") == 1
    pts = np.array(list(itertools.product((0, 1), repeat=3)))
    assert np.array_equal(eval_formula(phi, pts), maj3().labels)


def test_named_formulas_compute_their_functions():
    assert formula_function(parse_formula(MAJ3_FORMULA), 3) == maj3()
    assert formula_function(parse_formula(AMBAINIS_FORMULA), 4) == ambainis()


def test_iterate_formula():
    phi = parse_formula(MAJ3_FORMULA)
    assert iterate_formula(phi, 1) == phi
    phi2 = iterate_formula(phi, 2)
    assert leaf_count(phi2) == 25
    assert np.array_equal(truth_table(phi2, 9), iterate(maj3(), 2).labels)
    a2 = iterate_formula(parse_formula(AMBAINIS_FORMULA), 2)
    assert leaf_count(a2) == 100
    assert np.array_equal(truth_table(a2, 16), iterate(ambainis(), 2).labels)


def test_iterate_formula_cap():
    with pytest.raises(ResourceCapError):
        iterate_formula(parse_formula(MAJ3_FORMULA), 3, cap=100)


# ---- exact synthesis ------------------------------------------------------------


@pytest.mark.parametrize(
    "f, size",
    [(total(1, 0b10), 1), (total(2, 0b1000), 2), (parity(2), 4), (maj3(), 5), (parity(3), 10)],
)
def test_known_sizes(f, size):
    res = min_formula_size(f)
    assert res.size == size and leaf_count(res.formula) == size
    assert np.array_equal(truth_table(res.formula, f.n), f.labels)


def test_all_three_variable_sizes():
    ref = oracles.formula_sizes(3, 10)
    for table, bits in oracles.all_tables(3):
        f = total(3, bits)
        res = min_formula_size(f)
        if len(set(table.values())) == 1:
            continue
        assert res.size == ref[oracles.mask_of(f)], bits


@settings(max_examples=15, deadline=None)
@given(st.integers(1, (1 << 16) - 2))
def test_four_variable_sizes_small(bits):
    ref = oracles.formula_sizes(4, 6)
    f = total(4, bits)
    res = min_formula_size(f, cap=6)
    want = ref.get(oracles.mask_of(f))
    assert res.size == want
    assert res.exceeded == (want is None)


def test_cap_reporting():
    res = min_formula_size(ambainis(), cap=6)
    assert res.exceeded and res.size is None
    assert res.describe() == "greater than 6"


def test_size_table_counts():
    table = formula_size_table(2)
    assert sum(1 for v in table.values() if v == 1) == 4


# ---- Karchmer-Wigderson ----------------------------------------------------


def test_maj3_partition():
    f = maj3()
    P = kw_partition(parse_formula(MAJ3_FORMULA), f)
    assert len(P) == 5 and P.is_valid(f)
    rects = [(R.rows, R.cols, c) for R, c in zip(P.rectangles, P.colors) if not R.is_empty]
    assert oracles.partition_ok(oracles.table_of(f), rects)


def test_unreachable_leaf_gives_empty_rectangle():
    f = total(2, 0b1010)  # value = x2
    phi = parse_formula("x2 | (x1 & !x1)", 2)
    P = kw_partition(phi, f)
    assert len(P) == 3 and P.nonempty_count < 3 and P.is_valid(f)


def test_kw_mismatch():
    with pytest.raises(FormulaMismatchError, match="011"):
        kw_partition(parse_formula("x1&x2"), maj3())


@settings(max_examples=150, deadline=None)
@given(formulas(3, 7))
def test_kw_random_formulas(phi):
    f = formula_function(phi, 3)
    if not f.has_both_labels():
        return
    P = kw_partition(phi, f)
    t = oracles.table_of(f)
    rects = [(R.rows, R.cols, c) for R, c in zip(P.rectangles, P.colors) if not R.is_empty]
    assert oracles.partition_ok(t, rects)
    assert P.nonempty_count <= leaf_count(phi) == len(P)


def test_color_cover_measure():
    f = maj3()
    P = kw_partition(parse_formula(MAJ3_FORMULA), f)
    masks = color_cover(P, f)
    assert np.all(np.logical_or.reduce(masks))
    bound = rectangle_measure_bound(hamming_one_matrix(f), "spectral_sq", masks)
    assert bound == pytest.approx(4.0)


@pytest.mark.parametrize("f", [maj3(), parity(2), or_(3), total(3, 0b01101000), total(2, 0b0110)])
def test_partition_number_oracle(f):
    res = rectangle_partition_number(f, lower_bound=1)
    assert res.value == oracles.partition_number(oracles.table_of(f))
    assert res.partition.is_partition()


def test_partition_number_sandwich(funcs3):
    for f in funcs3[::11]:
        res = rectangle_partition_number(f)
        assert spectral_value(f, hamming_one_matrix(f)) ** 2 <= res.value + 1e-6
        assert res.value <= min_formula_size(f).size


def test_partition_number_cap():
    with pytest.raises(ResourceCapError):
        rectangle_partition_number(iterate(maj3(), 2))
