import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from advtk import DomainError, ambainis, builtin, collision, iterate, maj3, parity, parse_bf, read_bf, write_bf
from advtk.boolfn import BooleanFunction, enumerate_restrictions, format_bf, restrict_inputs

from conftest import total


def test_maj3_table():
    f = maj3()
    assert [lab for _, lab in f.items()] == [0, 0, 0, 1, 0, 1, 1, 1]
    assert f.is_total and f.k == 2 and f("110") == 1


def test_ambainis_ones():
    f = ambainis()
    ones = sorted(x for x, lab in f.items() if lab)
    assert ones == sorted(["0000", "0001", "0011", "0111", "1111", "1110", "1100", "1000"])


def test_parity_sides():
    f = parity(4)
    assert f.X.shape == (8, 4) and f.Y.shape == (8, 4)
    assert np.all(f.X.sum(axis=1) % 2 == 0)


@pytest.mark.parametrize("n", [4, 6])
def test_collision_domain(n):
    f = collision(n)
    assert not f.is_total and f.k == n
    for x, lab in f.items():
        counts = sorted(x.count(c) for c in set(x))
        if lab:
            assert len(set(x)) == n
        else:
            assert counts == [2] * (n // 2)


def test_collision_sizes():
    f = collision(4)
    # 4! one-to-one inputs; 3 pairings of positions times 4*3 ordered value pairs
    assert np.sum(f.labels == 1) == 24
    assert np.sum(f.labels == 0) == 36


def test_collision_rejects_odd():
    with pytest.raises(DomainError):
        collision(5)


def test_iterate_matches_definition():
    f = maj3()
    g = iterate(f, 2)
    assert g.n == 9
    for x in itertools.product("01", repeat=9):
        s = "".join(x)
        inner = "".join(str(f(s[3 * j: 3 * j + 3])) for j in range(3))
        assert g(s) == f(inner)


def test_iterate_one_is_identity():
    assert iterate(ambainis(), 1) == ambainis()


def test_builtin_lookup():
    assert builtin("recmaj", 1) == maj3()
    with pytest.raises(DomainError):
        builtin("nope")
    with pytest.raises(DomainError):
        builtin("parity")


def test_bf_round_trip(tmp_path):
    f = collision(4)
    path = tmp_path / "col.bf"
    write_bf(f, path)
    assert read_bf(path) == f


@pytest.mark.parametrize(
    "text",
    ["", "3\n", "2 2\n00 1\n00 0\n", "2 2\n0a 1\n", "2 2\n00 2\n", "two 2\n"],
)
def test_bf_errors(text):
    with pytest.raises(DomainError):
        parse_bf(text)


def test_bf_error_has_line_number():
    with pytest.raises(DomainError, match=":3:"):
        parse_bf("2 2\n00 1\n01 7\n")


def test_bf_comments_and_partial():
    f = parse_bf("# partial\n2 2\n00 0  # zero\n11 1\n")
    assert not f.is_total and f.domain_size == 2


def test_restriction_count():
    codes = enumerate_restrictions(3, 0.5)
    assert len(codes) == 27


def test_restrict_inputs():
    f = maj3()
    g = restrict_inputs(f, "1*0")
    assert g.n == 1
    assert [lab for _, lab in g.items()] == [0, 1]


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << (1 << n)) - 1))))
def test_bf_format_round_trip(nb):
    n, bits = nb
    f = total(n, bits)
    assert parse_bf(format_bf(f)) == f


def test_domain_checks():
    with pytest.raises(DomainError):
        BooleanFunction.from_truth_table(2, [0, 1, 1])
    f = maj3()
    with pytest.raises((DomainError, KeyError)):
        f.index_of("0000")
