import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ctslab.bounds import (
    binom,
    compare_with_e_power,
    cts_params,
    density_bound,
    density_hypotheses,
    e_bounds,
    error_bound_log10,
    extrinsic_bound,
    grid_size_requirement,
    integer_root_floor,
    intersection_bounds,
    json_int,
    kakeya_hypothesis,
    min_delta_for_degree,
    sz_bound,
)
from ctslab.errors import InvalidInput, UnsortedDegrees


def test_binomial_symmetry_and_pascal():
    for a in range(61):
        for b in range(a + 1):
            assert binom(a, b) == binom(a, a - b)
            if 0 < b < a:
                assert binom(a, b) == binom(a - 1, b - 1) + binom(a - 1, b)
    assert binom(3, 5) == 0 and binom(3, -1) == 0


@given(st.integers(0, 10**40), st.integers(1, 9))
def test_integer_root(value, k):
    r = integer_root_floor(value, k)
    assert r**k <= value < (r + 1) ** k


def test_e_sandwich():
    lo, hi = e_bounds(12)
    assert lo < Fraction(math.e) < hi
    lo2, hi2 = e_bounds(30)
    assert lo < lo2 < hi2 < hi
    assert hi2 - lo2 < Fraction(1, 10**30)


def test_compare_with_e_power():
    assert compare_with_e_power(Fraction(739, 100), 2, 1) == 1  # e^2 = 7.389...
    assert compare_with_e_power(Fraction(7389, 1000), 2, 1) == -1
    assert compare_with_e_power(Fraction(5), 0, 5) == 0
    # needs refinement past the 10-digit sandwich
    assert compare_with_e_power(Fraction(2718281828459, 10**12), 1, 1) == -1
    assert compare_with_e_power(Fraction(2718281828460, 10**12), 1, 1) == 1


def test_cts_params_examples():
    assert cts_params(6, 1, 2).L == 36 and cts_params(6, 1, 2).R == 324
    p = cts_params(1, 1, 0)
    assert (p.L, p.R) == (6, 36)
    assert integer_root_floor(10**2, 2) == 10
    assert cts_params(2, 10**6, 0).R == 10**6
    assert cts_params(6, 1, 2).to_json() == {"L": 36, "R": 324}


def test_grid_size_requirement():
    assert grid_size_requirement(6, 1, 2) == 36
    assert grid_size_requirement(1, 100, 0) == 10**4


def test_intersection_bounds():
    b = intersection_bounds((3, 2, 2), 2)
    assert b.first == math.comb(4, 2) * 3 * 2**2 == 72
    assert b.second == 3 * (1 + 2 + 2) ** 2
    assert b.average == 3 * 3**2 * Fraction(7, 3) ** 2
    assert intersection_bounds((3, 2, 2), 2, sum_from=1).second == 3 * (1 + 7) ** 2
    assert intersection_bounds((5, 4), 0).first == 5
    for r in range(5):
        for d1, d2 in [(1, 1), (2, 3), (4, 2)]:
            assert intersection_bounds((d1, d2), r).first >= d1 * d2**r


def test_extrinsic_golden():
    b = extrinsic_bound((3, 2), n=5, m=2, dim_w=1, deg_v=6)
    assert (b.N, b.N_tilde, b.M, b.N_prime, b.bound) == (6, 84, 55, 6, 1296)


def test_extrinsic_single_linear_equation():
    b = extrinsic_bound((1,), n=3, m=1, dim_w=2, deg_v=5)
    assert b.N == 1 and b.N_prime == 1 and b.bound == 5 * 2**2


def test_extrinsic_many_equations_branch():
    # s > n - m: N = 2 d_s prod_{i < n-m} d_i - 1
    b = extrinsic_bound((3, 3, 2), n=3, m=1, dim_w=1, deg_v=1)
    assert b.N == 2 * 2 * 3 - 1


def test_extrinsic_monotone_and_errors():
    vals = [extrinsic_bound((3, 2), 5, 2, 1, v).bound for v in range(1, 6)]
    assert vals == sorted(vals)
    with pytest.raises(UnsortedDegrees):
        extrinsic_bound((2, 3), 5, 2, 1, 6)
    with pytest.raises(InvalidInput):
        extrinsic_bound((2,), 2, 2, 1, 1)


def test_density_hypotheses_zero_dim_regime():
    d = 1
    delta = min_delta_for_degree(d)
    assert delta == math.ceil(math.e**2 * 4)
    h = density_hypotheses(2, 2, d, 18, 3, 1, delta, delta, 2)
    assert h.items["delta_vs_degree"]
    assert not density_hypotheses(2, 2, d, 18, 3, 1, delta - 1, 1, 2).items["delta_vs_degree"]


def test_density_hypotheses_items():
    h = density_hypotheses(3, 1, 1, 18, 3, 1, 30, 30, 3)
    assert h.items["length"]
    assert not density_hypotheses(3, 1, 1, 17, 3, 1, 30, 30, 3).items["length"]
    # m = n: codim condition reads r >= m/2 + 1/2
    assert density_hypotheses(3, 3, 1, 18, 3, 1, 30, 30, 2).items["codimension"]
    assert not density_hypotheses(3, 3, 1, 18, 3, 1, 30, 30, 1).items["codimension"]
    assert not density_hypotheses(3, 1, 1, 18, 3, 1, 30, 100, 3).items["max_degree"]
    assert not density_hypotheses(3, 1, 1, 18, 1, 10**6, 30, 30, 3).items["delta_vs_family_degree"]


def test_sz_bound():
    b = sz_bound(2, 100, 1)
    assert b.exact_fail == Fraction(1, 50)
    assert b.value >= 0.98
    assert sz_bound(1, 5, 2).exact_fail == Fraction(1, 25)
    assert sz_bound(10, 10**9, 5).value <= 1.0


def test_probability_bounds():
    assert abs(density_bound(6, 1).log_fail + 6) < 1e-12
    assert abs(density_bound(6, 1).value - (1 - math.exp(-6))) < 1e-12
    assert density_bound(2, 1, m=2, L=3).log_fail == -5
    target = -36 / math.log(10)
    assert abs(error_bound_log10(6, 1, 1) - target) <= 1e-9 * abs(target)
    assert abs(error_bound_log10(1, 1, 1) - math.log10(math.exp(-6))) < 1e-12
    seq = [error_bound_log10(k, 1, 1) for k in range(1, 5)]
    assert seq == sorted(seq, reverse=True)
    assert error_bound_log10(2, 2, 1) < error_bound_log10(2, 1, 1)
    assert error_bound_log10(2, 1, 2) < error_bound_log10(2, 1, 1)


def test_kakeya_hypothesis_integers():
    assert kakeya_hypothesis(7, 1, 2)
    assert not kakeya_hypothesis(3, 1, 2)
    assert not kakeya_hypothesis(4, 1, 2)  # 4 < 4 fails: boundary excluded


def test_json_int():
    assert json_int(5) == 5
    assert json_int(2**60) == str(2**60)
