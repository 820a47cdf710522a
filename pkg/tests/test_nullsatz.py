import itertools

import pytest

from ctslab.cts import Enumerated, is_cts_enumerated
from ctslab.errors import DegreeMismatch, DuplicateNode, ResourceCapExceeded, ThetaOutOfBox
from ctslab.field import Rng
from ctslab.nullsatz import (
    alon_membership,
    algebra_from_json,
    build_grid_algebra,
    eval_univariate,
    extract_coefficient,
    find_witness,
    homothety_trace_check,
    interpolate,
    multiplication_matrix,
    normal_form,
    pairing,
    pairing_matrix,
    poly_from_roots,
)
from ctslab.poly import Circuit, MultiPoly, monomials, random_poly


def X(p, n):
    return [MultiPoly.variable(p, n, i) for i in range(n)]


def test_dual_basis_on_zero_one():
    A = build_grid_algebra([[0, 1]], 101)
    g0, g1 = A.duals[0]
    assert g0 == (1, 100)  # 1 - T
    assert g1 == (100, 2)  # 2T - 1
    assert eval_univariate(g1, 0, 101) == 100 and eval_univariate(g1, 1, 101) == 1
    assert A.h[0] == (0, 100, 1)


def test_singleton_grid():
    A = build_grid_algebra([[7]], 11)
    assert A.duals[0] == ((1,),)
    assert A.h[0] == (4, 1)  # T - 7


def test_duality_identity_random_grids():
    rng = Rng(31)
    p = 101
    for _ in range(15):
        d = 1 + rng.below(8)
        E = list(range(p))
        rng.shuffle(E)
        E = E[:d]
        A = build_grid_algebra([E], p)
        for k, g in enumerate(A.duals[0]):
            assert len(g) <= d
            for r in range(d):
                s = sum(eval_univariate(g, z, p) * pow(z, r, p) for z in E) % p
                assert s == (1 if k == r else 0)


def test_interpolation_roundtrip():
    coeffs = [3, 0, 5, 1]
    nodes = [2, 9, 11, 40]
    vals = [eval_univariate(coeffs, x, 101) for x in nodes]
    assert interpolate(nodes, vals, 101) == coeffs
    assert poly_from_roots([1, 2], 7) == [2, 4, 1]


def test_pairing_examples():
    A = build_grid_algebra([[0, 1], [0, 1]], 101)
    assert pairing(A, (1, 1), (1, 1)) == 1
    assert pairing(A, (1, 1), (2, 0)) == 0
    assert pairing(A, (0, 0), (0, 0)) == 1
    with pytest.raises(ThetaOutOfBox):
        pairing(A, (2, 0), (0, 0))


def test_pairing_matrix_identity():
    A = build_grid_algebra([[0, 2, 5], [1, 4]], 13)
    M = pairing_matrix(A)
    assert M == [[int(i == j) for j in range(6)] for i in range(6)]


def test_zero_pattern_exhaustive_small():
    rng = Rng(32)
    p = 101
    for degrees in itertools.product(range(1, 4), repeat=2):
        grids = []
        for d in degrees:
            vals = list(range(p))
            rng.shuffle(vals)
            grids.append(vals[:d])
        A = build_grid_algebra(grids, p)
        for theta in A.box():
            t = sum(theta)
            for mu in itertools.product(range(t + 1), repeat=2):
                if sum(mu) != t or mu == theta:
                    continue
                if any(m >= d for m, d in zip(mu, degrees)):
                    assert pairing(A, theta, mu) == 0


def test_extract_examples():
    A = build_grid_algebra([[0, 1], [0, 1]], 101)
    x1, x2 = X(101, 2)
    assert extract_coefficient(A, x1 * x2, (1, 1)) == 1
    assert extract_coefficient(A, x1 + x2, (1, 0)) == 1
    c = Circuit.from_polys([3 * x1 * x2 + x1])
    assert extract_coefficient(A, c, (1, 1), declared_degree=2) == 3
    with pytest.raises(DegreeMismatch):
        extract_coefficient(A, x1 * x2, (1, 0))
    with pytest.raises(DegreeMismatch):
        extract_coefficient(A, c, (1, 1))
    with pytest.raises(DegreeMismatch):
        extract_coefficient(A, x1 * x2, (1, 1), declared_degree=3)


def test_extract_random_dense():
    rng = Rng(33)
    p = 101
    A = build_grid_algebra([[0, 3, 9], [1, 2, 50, 77], [4, 8]], p)
    for _ in range(40):
        deg = 1 + rng.below(A.max_degree)
        f = random_poly(p, 3, deg, rng)
        if f.degree != deg:
            continue
        for theta in A.box():
            if sum(theta) == deg:
                assert extract_coefficient(A, f, theta) == f.coefficient(theta)


def test_find_witness_examples():
    A = build_grid_algebra([[0, 1], [0, 1]], 101)
    x1, x2 = X(101, 2)
    assert find_witness(A, x1 * x2) == (1, 1)
    assert find_witness(A, MultiPoly.zero(101, 2)) is None
    h1 = A.h_poly(0)
    assert find_witness(A, h1) is None
    assert not alon_membership(A, h1)
    assert alon_membership(A, x1 * x2 + x1)


def test_witness_for_alon_members():
    rng = Rng(34)
    p = 11
    A = build_grid_algebra([[1, 2, 3], [0, 5, 7]], p)
    found = 0
    for _ in range(300):
        f = random_poly(p, 2, A.max_degree, rng, nterms=3)
        if f.is_zero() or not alon_membership(A, f):
            continue
        z = find_witness(A, f)
        assert z is not None and f.evaluate(z) != 0
        found += 1
    assert found > 20


def test_cts_bridge_enumerated():
    # Omega_(d) for n=2, d=(2,2) over F_3: degree <= 2 polys meeting the box
    p = 3
    A = build_grid_algebra([[0, 1], [0, 2]], p)
    basis = monomials(2, A.max_degree)
    members = []
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        f = MultiPoly(p, 2, dict(zip(basis, coeffs)))
        if alon_membership(A, f):
            members.append((f,))
    fam = Enumerated(p, 2, tuple(members))
    assert is_cts_enumerated(fam, None, A.points()).is_cts


def test_normal_form_properties():
    rng = Rng(35)
    A = build_grid_algebra([[0, 1, 4], [2, 3]], 7)
    for _ in range(20):
        f = random_poly(7, 2, 6, rng, nterms=5)
        nf = normal_form(A, f)
        assert nf.is_zero() or (nf.degree_in(0) < 3 and nf.degree_in(1) < 2)
        assert normal_form(A, nf) == nf
        assert all(nf.evaluate(z) == f.evaluate(z) for z in A.points())
    assert normal_form(A, A.h_poly(0)).is_zero()


def test_trace_examples():
    A = build_grid_algebra([[0, 1], [0, 1]], 101)
    x1, _ = X(101, 2)
    assert homothety_trace_check(A, MultiPoly.constant(101, 2, 1))["trace"] == 4
    rep = homothety_trace_check(A, x1)
    assert rep["trace"] == 2 and rep["equal"]


def test_multiplication_matrix_columns():
    # column beta of M_h is the normal form of h * X^beta
    p = 7
    A = build_grid_algebra([[1, 2, 4], [0, 3]], p)
    h = random_poly(p, 2, 3, Rng(36))
    M = multiplication_matrix(A, h)
    box = A.box()
    for j, beta in enumerate(box):
        nf = normal_form(A, h * MultiPoly.monomial(p, 2, beta))
        assert [int(M[i, j]) for i in range(len(box))] == [nf.coefficient(mu) for mu in box]


def test_trace_random():
    rng = Rng(37)
    A = build_grid_algebra([[0, 1, 2], [5, 6, 7, 8]], 101)
    for _ in range(20):
        h = random_poly(101, 2, 2 * A.size, rng, nterms=5)
        assert homothety_trace_check(A, h)["equal"]


def test_errors_and_json():
    with pytest.raises(DuplicateNode):
        build_grid_algebra([[1, 1]], 5)
    with pytest.raises(DuplicateNode):
        build_grid_algebra([[1, 6]], 5)
    with pytest.raises(ResourceCapExceeded):
        build_grid_algebra([list(range(50))] * 4, 101, cap=10**5)
    big = build_grid_algebra([list(range(17))] * 2, 101)
    with pytest.raises(ResourceCapExceeded):
        multiplication_matrix(big, MultiPoly.constant(101, 2, 1))
    A = algebra_from_json({"p": 101, "grids": [[0, 1], [0, 1, 2]]})
    assert A.degrees == (2, 3) and A.size == 6 and A.max_degree == 3
