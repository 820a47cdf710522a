import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from ctslab.errors import DimensionMismatch, InvalidInput, ZeroPolynomial
from ctslab.field import Rng
from ctslab.poly import (
    Circuit,
    DegreeProfile,
    MultiPoly,
    coefficient,
    evaluate,
    evaluate_circuit,
    leading_homogeneous_component,
    monomial_at,
    monomials,
    random_poly,
)


def X(p, n):
    return [MultiPoly.variable(p, n, i) for i in range(n)]


def naive_eval(f, x):
    total = 0
    for mu, c in f.terms.items():
        term = c
        for xi, e in zip(x, mu):
            term *= xi**e
        total += term
    return total % f.p


def test_evaluate_examples():
    assert evaluate(MultiPoly.zero(7, 2), (3, 4)) == 0
    x1, x2 = X(7, 2)
    assert evaluate(x1 * x2, (2, 3)) == 6


@settings(max_examples=60)
@given(st.integers(0, 2**32), st.integers(1, 4), st.integers(0, 5))
def test_evaluate_matches_naive(seed, n, d):
    rng = Rng(seed)
    f = random_poly(101, n, d, rng, nterms=min(20, len(monomials(n, d))))
    x = tuple(rng.below(101) for _ in range(n))
    assert f.evaluate(x) == naive_eval(f, x)


def test_evaluate_columns_agrees():
    import numpy as np

    f = random_poly(10007, 3, 4, Rng(1))
    pts = [tuple(Rng(k).below(10007) for _ in range(3)) for k in range(30)]
    cols = [np.array([pt[i] for pt in pts], dtype=np.int64) for i in range(3)]
    assert list(f.evaluate_columns(cols)) == [f.evaluate(pt) for pt in pts]


def test_identity_circuit():
    c = Circuit(7, 1, (("in", 0),), (0,))
    assert evaluate_circuit(c, (5,)) == (5,)


def test_circuit_hand_example():
    c = Circuit(7, 2, (("in", 0), ("in", 1), ("mul", 0, 1), ("add", 0, 1)), (2, 3))
    assert c.evaluate((2, 3)) == (6, 5)
    assert c.op_count == 2
    assert c.m == 2


def test_circuit_rejects_forward_reference():
    with pytest.raises(InvalidInput):
        Circuit(7, 1, (("add", 0, 1), ("in", 0)), (0,))
    with pytest.raises(InvalidInput):
        Circuit(7, 1, (("in", 3),), (0,))
    with pytest.raises(InvalidInput):
        Circuit(7, 1, (("div", 0, 0),), (0,))


def test_compiled_circuits_agree():
    rng = Rng(77)
    for k in range(100):
        n = 1 + k % 3
        f = random_poly(101, n, 1 + k % 4, rng)
        c = Circuit.from_polys([f])
        for _ in range(50):
            x = tuple(rng.below(101) for _ in range(n))
            assert c.evaluate(x) == (f.evaluate(x),)


def test_circuit_json_roundtrip():
    x1, x2 = X(11, 2)
    c = Circuit.from_polys([x1**3 + 2 * x2, x1 * x2 - 1])
    assert Circuit.from_json(c.to_json()) == c


def test_leading_component_examples():
    x1, x2 = X(7, 2)
    assert leading_homogeneous_component(x1**2 + x2) == x1**2
    assert leading_homogeneous_component(x1 * x2 + x1**2 + 1) == x1 * x2 + x1**2
    with pytest.raises(ZeroPolynomial):
        leading_homogeneous_component(MultiPoly.zero(7, 2))


@settings(max_examples=50)
@given(st.integers(0, 2**32))
def test_leading_component_property(seed):
    f = random_poly(13, 3, 4, Rng(seed), nterms=6)
    if f.is_zero():
        return
    top = f.leading_homogeneous_component()
    assert top.is_homogeneous()
    assert top.degree == f.degree
    rest = f - top
    assert rest.is_zero() or rest.degree < f.degree


def test_coefficient_examples():
    x1, _ = X(7, 2)
    assert coefficient(3 * x1, (1, 0)) == 3
    assert coefficient(3 * x1, (0, 1)) == 0


def test_coefficient_roundtrip():
    data = {(2, 0): 5, (1, 1): 3, (0, 0): 6}
    f = MultiPoly(7, 2, data)
    assert all(f.coefficient(mu) == c for mu, c in data.items())


def test_zero_has_no_degree_and_canonical_form():
    f = random_poly(7, 2, 3, Rng(3))
    z = f + (-f)
    assert z.is_zero() and z.terms == {} and z.degree is None
    assert MultiPoly(7, 1, {(1,): 7}).is_zero()


@settings(max_examples=40)
@given(st.integers(0, 2**32))
def test_degree_of_product(seed):
    rng = Rng(seed)
    f = random_poly(101, 2, 3, rng, nterms=4)
    g = random_poly(101, 2, 3, rng, nterms=4)
    if f.is_zero() or g.is_zero():
        return
    assert (f * g).degree == f.degree + g.degree


def test_monomial_count():
    for n in range(1, 5):
        for d in range(7):
            mons = monomials(n, d)
            assert len(mons) == math.comb(d + n, n)
            assert len(set(mons)) == len(mons)


def test_deglex_order():
    assert monomials(2, 1) == ((0, 0), (1, 0), (0, 1))
    assert monomials(2, 2)[3:] == ((2, 0), (1, 1), (0, 2))


def test_degree_profile_dimension():
    prof = DegreeProfile(2, (2,))
    assert prof.dimension == 6 and prof.m == 1 and prof.d == 2
    assert DegreeProfile(3, (1, 1)).dimension == 8


def test_arithmetic_and_mismatch():
    x1, x2 = X(5, 2)
    assert (x1 + 1) * (x1 - 1) == x1**2 - 1
    assert 2 - x1 == -(x1 - 2)
    with pytest.raises(DimensionMismatch):
        x1 + MultiPoly.variable(5, 3, 0)


def test_json_roundtrip():
    f = random_poly(31, 3, 3, Rng(8))
    assert MultiPoly.from_json(f.to_json()) == f


def test_substitute_linear():
    x1, x2 = X(7, 2)
    f = x1 * x2 + x2
    g = f.substitute_linear([[1, 2], [3, 4]])
    for pt in itertools.product(range(7), repeat=2):
        image = ((pt[0] + 2 * pt[1]) % 7, (3 * pt[0] + 4 * pt[1]) % 7)
        assert g.evaluate(pt) == f.evaluate(image)


def test_coeff_vector_roundtrip():
    f = random_poly(11, 2, 3, Rng(2))
    assert MultiPoly.from_coeffs(11, 2, 3, f.coeff_vector(3)) == f


def test_monomial_at_matches_basis_order():
    for n in range(4):
        basis = monomials(n, 5)
        assert [monomial_at(n, k) for k in range(len(basis))] == list(basis)
