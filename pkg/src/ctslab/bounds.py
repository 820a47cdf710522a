"""Exact calculators for the closed-form degree and probability bounds.

Integer bounds are returned as Python ints.  Probability bounds come back
as :class:`LogProb`, which keeps the natural log of the failure term and,
when it is small enough to materialise, the exact rational value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Sequence

from .errors import InvalidInput, UnsortedDegrees


def binom(a: int, b: int) -> int:
    """C(a, b), zero outside ``0 <= b <= a``."""
    if b < 0 or a < 0 or b > a:
        return 0
    return math.comb(a, b)


def integer_root_floor(value: int, k: int) -> int:
    """Largest R >= 0 with R**k <= value (binary search, no floats)."""
    if k <= 0:
        raise InvalidInput("root index must be positive")
    if value < 0:
        raise InvalidInput("root of a negative number")
    lo, hi = 0, 1
    while hi**k <= value:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid**k <= value:
            lo = mid
        else:
            hi = mid
    return lo


JSON_SAFE = 1 << 53


def json_int(v: int):
    """Plain JSON number when it survives a double round trip, else a decimal string."""
    v = int(v)
    return v if -JSON_SAFE < v < JSON_SAFE else str(v)


# --------------------------------------------------------------------- e

def e_bounds(terms: int) -> tuple[Fraction, Fraction]:
    """Rational lo < e < hi from the first ``terms`` factorial terms.

    The Taylor tail after 1/(terms-1)! is below 2/terms!.
    """
    lo = Fraction(0)
    fact = 1
    for k in range(terms):
        if k:
            fact *= k
        lo += Fraction(1, fact)
    return lo, lo + Fraction(2, fact * terms)


# Published sandwich 2.718281828 < e < 2.718281829, used as the first try.
E_LO = Fraction(2718281828, 10**9)
E_HI = Fraction(2718281829, 10**9)


def compare_with_e_power(value: Fraction, k: int, scale: Fraction) -> int:
    """Sign of ``value - scale * e**k`` for rational value/scale, k >= 0.

    Starts from the 10-digit sandwich and tightens the bounds on e until the
    comparison is decided.  Equality cannot happen for k >= 1 (e is
    transcendental); for k = 0 the comparison is exact.
    """
    value = Fraction(value)
    scale = Fraction(scale)
    if k == 0:
        diff = value - scale
        return (diff > 0) - (diff < 0)
    lo, hi = E_LO, E_HI
    terms = 14
    while True:
        if value > scale * hi**k:
            return 1
        if value < scale * lo**k:
            return -1
        terms *= 2
        lo, hi = e_bounds(terms)


# ---------------------------------------------------------------- LogProb

@dataclass(frozen=True)
class LogProb:
    """Lower bound ``1 - F`` on a probability; ``log_fail = ln F``.

    ``exact_fail`` holds F as a Fraction when it is cheap to represent.
    """

    log_fail: float
    exact_fail: Optional[Fraction] = None

    @property
    def log10_fail(self) -> float:
        return self.log_fail / math.log(10)

    @property
    def value(self) -> float:
        if self.exact_fail is not None:
            return float(1 - self.exact_fail)
        return -math.expm1(self.log_fail) if self.log_fail < 0 else 1.0 - math.exp(self.log_fail)

    def to_json(self) -> dict:
        out = {
            "bound": self.value,
            "fail_ln": self.log_fail,
            "fail_log10": self.log10_fail,
        }
        if self.exact_fail is not None:
            out["fail_exact"] = f"{self.exact_fail.numerator}/{self.exact_fail.denominator}"
        return out


def sz_bound(deg_lci: int, card_q: int, codim: int) -> LogProb:
    """Probability that a random point of Q^n avoids C: >= 1 - deg / #Q^codim."""
    if card_q < 1 or codim < 1 or deg_lci < 0:
        raise InvalidInput("need card_Q >= 1, codim >= 1, deg >= 0")
    log_fail = (math.log(deg_lci) if deg_lci else -math.inf) - codim * math.log(card_q)
    exact = None
    if codim * math.log10(card_q) <= 18:
        exact = Fraction(deg_lci, card_q**codim)
    return LogProb(log_fail, exact)


def density_bound(dim_omega: int, deg_lci: int, m: int = 1, L: int = 0) -> LogProb:
    """1 - 1 / (deg_lci * e^(dim + (m-1) L)), the CTS density lower bound."""
    if dim_omega < 0 or deg_lci < 1 or m < 1 or L < 0:
        raise InvalidInput("need dim >= 0, deg >= 1, m >= 1, L >= 0")
    return LogProb(-(math.log(deg_lci) + dim_omega + (m - 1) * L))


def secante_error_bound(dim_omega: int, deg_lci: int, m: int) -> LogProb:
    """Error probability of the evaluation-only decision: 1/(deg e^(6 m dim))."""
    if dim_omega < 1 or deg_lci < 1 or m < 1:
        raise InvalidInput("all arguments must be >= 1")
    return LogProb(-(math.log(deg_lci) + 6 * m * dim_omega))


def error_bound_log10(dim_omega: int, deg_lci: int, m: int) -> float:
    return secante_error_bound(dim_omega, deg_lci, m).log10_fail


# ------------------------------------------------------------ parameters

@dataclass(frozen=True)
class CtsParameters:
    L: int
    R: int

    def __post_init__(self):
        if self.L < 1 or self.R < 1:
            raise InvalidInput("L and R must be >= 1")

    def to_json(self) -> dict:
        return {"L": json_int(self.L), "R": json_int(self.R)}


def cts_params(dim_omega: int, deg_lci: int, d: int) -> CtsParameters:
    """Sample length and grid radius of the evaluation-only decision procedure.

    L = 6 dim;  R = max(floor((6(d+1))^2), floor(deg^(2/dim))), the root
    taken exactly as the largest R with R^dim <= deg^2.
    """
    if dim_omega < 1 or deg_lci < 1 or d < 0:
        raise InvalidInput("need dim >= 1, deg >= 1, d >= 0")
    r_degree = (6 * (d + 1)) ** 2
    r_omega = integer_root_floor(deg_lci**2, dim_omega)
    return CtsParameters(L=6 * dim_omega, R=max(r_degree, r_omega))


def grid_size_requirement(dim_omega: int, deg_lci: int, d: int) -> int:
    """Smallest #Q meeting #Q >= max((2(d+1))^2, deg^(2/dim)), exactly."""
    need = (2 * (d + 1)) ** 2
    root = integer_root_floor(deg_lci**2, dim_omega)
    if root**dim_omega < deg_lci**2:
        root += 1
    return max(need, root)


# ---------------------------------------------------- intersection bounds

@dataclass(frozen=True)
class IntersectionBounds:
    first: int
    second: int
    average: int
    second_sum_from: int

    def to_json(self) -> dict:
        return {
            "first": json_int(self.first),
            "second": json_int(self.second),
            "average": json_int(self.average),
            "second_sum_from": self.second_sum_from,
        }


def intersection_bounds(degrees: Sequence[int], r: int, sum_from: int = 2) -> IntersectionBounds:
    """Three upper bounds on deg_lci of C_1 ∩ ... ∩ C_s, r = dim C_1.

    first:   C(s+r-1, r) deg_1 max_{j>=2}(deg_j)^r
    second:  deg_1 (1 + sum_{i>=sum_from} deg_i)^r; sum_from is 2 in the
             section statement and 1 in the introduction's version.
    average: deg_1 s^r avg^r, which is deg_1 (sum_i deg_i)^r exactly.
    """
    degs = [int(x) for x in degrees]
    s = len(degs)
    if s < 1 or r < 0 or any(x < 1 for x in degs):
        raise InvalidInput("need s >= 1, r >= 0, degrees >= 1")
    if sum_from not in (1, 2):
        raise InvalidInput("sum_from must be 1 or 2")
    d1 = degs[0]
    mx = max(degs[1:], default=1)
    first = binom(s + r - 1, r) * d1 * mx**r
    second = d1 * (1 + sum(degs[sum_from - 1:])) ** r
    average = d1 * sum(degs) ** r
    return IntersectionBounds(first, second, average, sum_from)


# ------------------------------------------------------- extrinsic bound

@dataclass(frozen=True)
class ExtrinsicBound:
    N: int
    N_tilde: int
    M: int
    N_prime: int
    bound: int

    def to_json(self) -> dict:
        return {k: json_int(v) for k, v in self.__dict__.items()}


def extrinsic_bound(degrees: Sequence[int], n: int, m: int, dim_w: int, deg_v: int) -> ExtrinsicBound:
    """Syntactic bound on deg_lci of the projection of V(g_1..g_s) to A^m."""
    d = [int(x) for x in degrees]
    s = len(d)
    if s < 1:
        raise InvalidInput("need at least one degree")
    if n <= m:
        raise InvalidInput("need n > m")
    if any(a < b for a, b in zip(d, d[1:])):
        raise UnsortedDegrees(f"degrees must be non-increasing, got {d}")
    if any(x < 1 for x in d) or dim_w < 0 or deg_v < 1:
        raise InvalidInput("degrees and deg_V must be >= 1, dim_W >= 0")
    c = n - m
    if s <= c:
        N = math.prod(d)
    else:
        N = 2 * d[-1] * math.prod(d[: c - 1]) - 1
    N_tilde = binom(N + c, c)
    M = sum(binom(N - di + c, c) for di in d)
    N_prime = min(N, M + 1)
    bound = deg_v * (2 * d[0]) ** dim_w * N_prime ** (dim_w + 1)
    return ExtrinsicBound(N, N_tilde, M, N_prime, bound)


# -------------------------------------------------- density hypotheses

@dataclass
class HypothesisChecklist:
    items: Dict[str, bool] = field(default_factory=dict)
    notes: Dict[str, str] = field(default_factory=dict)

    @property
    def all_hold(self) -> bool:
        return all(self.items.values())

    def to_json(self) -> dict:
        return {"items": dict(self.items), "all_hold": self.all_hold, "notes": dict(self.notes)}


def density_hypotheses(
    n: int,
    m: int,
    d: int,
    L: int,
    dim_omega: int,
    deg_lci: int,
    delta,
    d_max,
    r: int,
) -> HypothesisChecklist:
    """Evaluate the density theorem's hypotheses exactly.

    (i)   L >= 6 dim
    (ii)  ln delta >= 2(1 + ln(d+1))  <=>  delta >= e^2 (d+1)^2
          ln delta >= 2 ln(deg)/dim   <=>  delta^dim >= deg^2
    (iii) D_max <= (1 + 1/(n-m)) delta  (vacuous when m = n)
    codim r >= (n-m) + m/2 + 1/2     <=>  2r >= 2(n-m) + m + 1
    """
    if m < 1 or n < m:
        raise InvalidInput("need 1 <= m <= n")
    if dim_omega < 1 or deg_lci < 1:
        raise InvalidInput("need dim >= 1 and deg >= 1")
    delta = Fraction(delta)
    d_max = Fraction(d_max)
    out = HypothesisChecklist()
    out.items["length"] = L >= 6 * dim_omega
    out.items["delta_vs_degree"] = compare_with_e_power(delta, 2, Fraction((d + 1) ** 2)) >= 0
    out.items["delta_vs_family_degree"] = delta >= 1 and delta**dim_omega >= deg_lci**2
    if n == m:
        out.items["max_degree"] = True
        out.notes["max_degree"] = "m = n: 1/(n-m) is unbounded, condition vacuous"
    else:
        out.items["max_degree"] = d_max * (n - m) <= (n - m + 1) * delta
    out.items["codimension"] = 2 * r >= 2 * (n - m) + m + 1
    return out


def min_delta_for_degree(d: int) -> int:
    """Smallest integer delta with ln delta >= 2(1 + ln(d+1))."""
    lo = int(Fraction(E_LO) ** 2 * (d + 1) ** 2)
    while compare_with_e_power(Fraction(lo), 2, Fraction((d + 1) ** 2)) < 0:
        lo += 1
    return lo


def cts_not_kakeya_lambda(q: int, d: int, k: int) -> float:
    """lambda = (k-1) - k log_q(d+1)."""
    return (k - 1) - k * math.log(d + 1) / math.log(q)


def kakeya_hypothesis(q: int, d: int, k: int) -> bool:
    """d < q^(1-1/k) - 1  <=>  (d+1)^k < q^(k-1), decided on integers."""
    return k >= 1 and (d + 1) ** k < q ** (k - 1)

