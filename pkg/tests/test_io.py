import json
import math

import numpy as np
import pytest

from advtk import DomainError, ambainis, collision, maj3
from advtk.adversary import (
    ProbabilityFamily,
    ambainis_witness,
    certificate_witness,
    eval_sumpi_witness,
    hamming_one_matrix,
    khrapchenko,
    khrapchenko_scheme,
    prob_scheme_value,
    spectral_value,
)
from advtk.io import load_witness, parse_number, save_witness, witness_from_dict, witness_to_dict


def test_parse_number():
    assert parse_number("2/5") == 0.4
    assert parse_number(" 0.25 ") == 0.25
    assert parse_number(3) == 3.0
    for bad in ("x", "1/0", True, None):
        with pytest.raises(DomainError):
            parse_number(bad)


def test_family_round_trip(tmp_path):
    f = ambainis()
    w = ambainis_witness(f)
    path = tmp_path / "a.json"
    save_witness(w, f, path)
    kind, back = load_witness(path, f)
    assert kind == "sumpi"
    assert np.array_equal(back.dist, w.dist)
    assert eval_sumpi_witness(f, back) == pytest.approx(2.5)


def test_rational_strings():
    f = maj3()
    doc = {"type": "maxpi", "n": 3, "data": {x: ["1/3", "1/3", "1/3"] for x in f.input_strings()}}
    kind, w = witness_from_dict(doc, f)
    assert kind == "maxpi" and np.allclose(w.dist, 1 / 3)


def test_spectral_entries_and_matrix():
    f = maj3()
    H = hamming_one_matrix(f)
    xs, ys = f.input_strings(0), f.input_strings(1)
    entries = [[xs[a], ys[b], 1] for a, b in zip(*np.nonzero(H))]
    _, M = witness_from_dict({"type": "spectral", "n": 3, "entries": entries}, f)
    assert np.array_equal(M, H)
    _, M2 = witness_from_dict(witness_to_dict(H, f), f)
    assert spectral_value(f, M2) == pytest.approx(2.0)


def test_probscheme_round_trip():
    f = maj3()
    W = khrapchenko_scheme(f)
    kind, back = witness_from_dict(json.loads(json.dumps(witness_to_dict(W, f))), f)
    assert kind == "probscheme"
    assert prob_scheme_value(f, back) == pytest.approx(math.sqrt(khrapchenko(f)))


def test_partial_function_witness():
    f = collision(4)
    doc = witness_to_dict(ProbabilityFamily.uniform(f), f, "sumpi")
    _, w = witness_from_dict(doc, f)
    assert eval_sumpi_witness(f, w) == pytest.approx(2.0)


@pytest.mark.parametrize(
    "doc, match",
    [
        ({"type": "nope", "n": 3}, "type"),
        ({"type": "sumpi", "n": 4, "data": {}}, "n=4"),
        ({"type": "sumpi", "n": 3, "data": {"000": [1, 0]}}, "3 numbers"),
        ({"type": "sumpi", "n": 3, "data": {"000": [1, 0, 0]}}, "cover"),
        ({"type": "spectral", "n": 3}, "matrix"),
        ({"type": "spectral", "n": 3, "entries": [["000", "001", 1]]}, "label"),
        ({"type": "probscheme", "n": 3, "q": []}, "missing"),
    ],
)
def test_bad_documents(doc, match):
    with pytest.raises(DomainError, match=match):
        witness_from_dict(doc, maj3())


def test_invalid_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(DomainError, match="invalid JSON"):
        load_witness(p, maj3())


def test_certificate_witness_kind_check():
    f = maj3()
    with pytest.raises(DomainError):
        witness_to_dict(certificate_witness(f), f, "spectral")
