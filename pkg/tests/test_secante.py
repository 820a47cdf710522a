import itertools
import json
import math

import pytest

from ctslab.cts import dense_family, is_cts_enumerated
from ctslab.errors import DegreeTooLarge, DimensionMismatch, FieldTooSmall
from ctslab.field import Rng
from ctslab.poly import Circuit, DegreeProfile, MultiPoly
from ctslab.secante import (
    INCONSISTENT_CONSTANT,
    REPEATED_EQUATION,
    SECANT_COORDINATE,
    ZERO_LIST,
    SecanteInput,
    decide_on_points,
    decide_secante,
    default_cases,
    error_bound,
    input_from_json,
    random_invertible,
    truth_harness,
    zero_test,
)

P = 10007


def X(p=P, n=3):
    return [MultiPoly.variable(p, n, i) for i in range(n)]


def test_zero_list_is_no():
    z = MultiPoly.zero(P, 3)
    for seed in range(5):
        tr = decide_secante(SecanteInput.dense([z, z], [1, 1]), Rng(seed))
        assert tr.verdict == "No"


def test_coordinate_list_is_yes():
    x1, x2, _ = X()
    tr = decide_secante(SecanteInput.dense([x1, x2], [1, 1]), Rng(3))
    assert tr.verdict == "Yes"
    assert (tr.params.L, tr.params.R) == (48, 144)
    assert len(tr.points) == 48 and all(1 <= c <= 144 for pt in tr.points for c in pt)


def test_repeated_equation_answers_yes():
    x1, _, _ = X()
    assert decide_secante(SecanteInput.dense([x1, x1], [1, 1]), Rng(0)).verdict == "Yes"


def test_field_too_small():
    x = MultiPoly.variable(101, 2, 0)
    with pytest.raises(FieldTooSmall):
        decide_secante(SecanteInput.dense([x], [1]), Rng(0))


def test_input_validation():
    x1, x2 = X(P, 2)
    with pytest.raises(DimensionMismatch):
        SecanteInput.dense([x1, x2, x1], [1, 1, 1])
    with pytest.raises(DegreeTooLarge):
        SecanteInput.dense([x1 * x2], [1])
    with pytest.raises(DimensionMismatch):
        SecanteInput((x1,), DegreeProfile(2, (1, 1)), 6, 1)


def test_error_bound_values():
    assert abs(error_bound(6, 1, 1) - (-36 / math.log(10))) <= 1e-9 * 15.64
    assert abs(error_bound(1, 1, 1) - math.log10(2.479e-3)) < 1e-3
    assert error_bound(2, 1, 1) < error_bound(1, 1, 1)


def test_transcript_determinism():
    x1, x2, _ = X()
    inp = SecanteInput.dense([x1 * x2 - 3, x2 + 1], [2, 1])
    a = json.dumps(decide_secante(inp, Rng(42)).to_json())
    b = json.dumps(decide_secante(inp, Rng(42)).to_json())
    assert a == b


def test_circuit_input_matches_poly_input():
    x1, x2, _ = X()
    polys = [x1 * x2 - 3, x2 + 1]
    a = decide_secante(SecanteInput.dense(polys, [2, 1]), Rng(7))
    c = SecanteInput(Circuit.from_polys(polys), DegreeProfile(3, (2, 1)), 14, 1)
    b = decide_secante(c, Rng(7))
    assert a.points == b.points and a.values == b.values and a.verdict == b.verdict


def test_zero_test_mode():
    x1, x2 = X(P, 2)
    assert zero_test(x1 * x2 - x2 * x1, 2, Rng(0)).verdict == "No"
    assert zero_test(x1 * x2 - 1, 2, Rng(0)).verdict == "Yes"


def test_no_answers_are_sound_when_q_is_cts():
    # n=2, m=1, d=1 over F_3: whenever the sampled Q is a CTS for P_1,
    # a No verdict only happens for f = 0.
    fam = dense_family(3, 2, [1])
    members = list(fam.members())
    pts = list(itertools.product(range(3), repeat=2))
    rng = Rng(8)
    checked = 0
    for _ in range(40):
        Q = [pts[rng.below(9)] for _ in range(6)]
        if not is_cts_enumerated(fam, None, Q).is_cts:
            continue
        for (f,) in members:
            verdict = decide_on_points(SecanteInput.dense([f], [1]), Q).verdict
            assert verdict == "Yes" or f.is_zero()
            checked += 1
    assert checked > 0


def test_random_invertible():
    a = random_invertible(7, 3, Rng(1))
    from ctslab.linalg import rank

    assert rank(a, 7) == 3


def test_harness_small():
    rep = truth_harness(default_cases(), 30, seed=1)
    cls = rep["classes"]
    assert cls[ZERO_LIST]["no_rate"] == 1.0
    assert cls[SECANT_COORDINATE]["yes_rate"] == 1.0
    assert cls[REPEATED_EQUATION]["divergence"]
    assert cls[INCONSISTENT_CONSTANT]["yes_rate"] == 1.0
    assert truth_harness(default_cases(), 30, seed=1, threads=3) == rep


def test_input_json():
    x1, x2, _ = X()
    obj = {"polys": [x1.to_json(), x2.to_json()], "degrees": [1, 1]}
    inp = input_from_json(obj)
    assert inp.dim_omega == 8 and inp.deg_omega == 1
    inp = input_from_json(obj, dim_omega=3, deg_omega=2)
    assert (inp.dim_omega, inp.deg_omega) == (3, 2)
    circ = {"circuit": Circuit.from_polys([x1]).to_json(), "degrees": [1]}
    assert input_from_json(circ).m == 1
