import math

import pytest

from advtk import OptimizerConfig
from advtk.table import reproduce_table

FAST = OptimizerConfig(iterations=120, restarts=2)


@pytest.fixture(scope="module")
def rows():
    return {r["function"]: r for r in reproduce_table(h_max=1, d_max=1, n_list=(4,), config=FAST)}


def test_row_names(rows):
    assert list(rows) == ["MAJ^1", "A^1", "Col(4)"]


def test_majority_row(rows):
    r = rows["MAJ^1"]
    assert r["match"] and r["s0s1"] == 4
    assert r["sumPI"]["lower"]["value"] == pytest.approx(2, abs=1e-6)
    assert r["formula_lower"] == pytest.approx(4, abs=1e-5)


def test_ambainis_row(rows):
    r = rows["A^1"]
    assert r["match"] and r["sumPI"]["upper"]["value"] == pytest.approx(2.5, abs=1e-12)
    assert r["maxPI"]["upper"]["value"] <= 3 + 1e-9


def test_collision_row(rows):
    r = rows["Col(4)"]
    assert r["match"] and r["s0s1"] is None
    assert math.sqrt(2) - 1e-6 <= r["maxPI"]["upper"]["value"] <= math.sqrt(8) + 1e-9


def test_checks_are_recorded(rows):
    names = {c["name"] for c in rows["A^1"]["checks"]}
    assert {"sumPI bracket consistent", "sumPI claim inside bracket", "s0s1"} <= names


def test_progress_callback():
    seen = []
    reproduce_table(h_max=1, d_max=0, n_list=(), config=FAST, progress=seen.append)
    assert seen == ["MAJ^1"]
