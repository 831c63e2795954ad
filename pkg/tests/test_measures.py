import pytest
from hypothesis import given, settings, strategies as st

from advtk import ambainis, block_sensitivity, certificate_complexity, collision, maj3, parity, sensitivity
from advtk.boolfn import or_

import oracles
from conftest import total


@pytest.mark.parametrize(
    "f, s0, s1, c0, c1",
    [
        (maj3(), 2, 2, 2, 2),
        (parity(3), 3, 3, 3, 3),
        (or_(4), 4, 1, 4, 1),
        (ambainis(), 2, 2, 3, 3),
    ],
)
def test_known_values(f, s0, s1, c0, c1):
    assert sensitivity(f, 0) == s0 and sensitivity(f, 1) == s1
    assert certificate_complexity(f, 0) == c0 and certificate_complexity(f, 1) == c1


def test_max_side():
    assert sensitivity(or_(4)) == 4


def test_collision_certificates():
    f = collision(4)
    # a colliding pair certifies a 0-input; n - 1 distinct values force the last one
    assert certificate_complexity(f, 0) == 2
    assert certificate_complexity(f, 1) == 3


def test_sweep_against_oracle(funcs3):
    for f in funcs3:
        t = oracles.table_of(f)
        assert sensitivity(f, 0) == oracles.sensitivity(t, 0)
        assert sensitivity(f, 1) == oracles.sensitivity(t, 1)
        assert certificate_complexity(f, 0) == oracles.certificate_complexity(t, 0)
        assert certificate_complexity(f, 1) == oracles.certificate_complexity(t, 1)
        assert block_sensitivity(f) == oracles.block_sensitivity(t)


def test_sandwich(funcs3):
    for f in funcs3:
        s, bs = sensitivity(f), block_sensitivity(f)
        c = max(certificate_complexity(f, 0), certificate_complexity(f, 1))
        assert s <= bs <= c


@settings(max_examples=40, deadline=None)
@given(st.integers(0, (1 << 16) - 1))
def test_random_four_bit(bits):
    f = total(4, bits)
    t = oracles.table_of(f)
    assert block_sensitivity(f) == oracles.block_sensitivity(t)
    for side in (0, 1):
        if side in t.values():
            assert certificate_complexity(f, side) == oracles.certificate_complexity(t, side)
