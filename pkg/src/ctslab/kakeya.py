"""Finite-field Kakeya sets and their relation to correct test sequences.

A set E in F_q^n is Kakeya when it contains a full line in every direction.
Such a set is a CTS for polynomials of degree <= q-1, while a random point
list of the right length is usually a CTS and far too small to be Kakeya.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .bounds import binom, cts_not_kakeya_lambda, kakeya_hypothesis
from .cts import dense_family, is_cts_linear
from .errors import DegreeTooLarge, DimensionMismatch, HypothesisUnmet, InvalidInput
from .field import Point, PrimeField, Rng

Direction = Tuple[int, ...]


def normalize_direction(v: Sequence[int], q: int) -> Direction:
    """Scale so the first nonzero coordinate is 1."""
    v = [x % q for x in v]
    lead = next((x for x in v if x), None)
    if lead is None:
        raise InvalidInput("the zero vector is not a direction")
    inv = pow(lead, -1, q)
    return tuple(x * inv % q for x in v)


def projective_directions(q: int, n: int) -> List[Direction]:
    """Representatives of P_(n-1)(F_q); there are (q^n - 1)/(q - 1) of them."""
    PrimeField(q)
    out = []
    for lead in range(n):
        for tail in itertools.product(range(q), repeat=n - lead - 1):
            out.append((0,) * lead + (1,) + tail)
    return out


@dataclass(frozen=True)
class DirectionSet:
    q: int
    directions: Tuple[Direction, ...]

    @classmethod
    def of(cls, q: int, vectors: Iterable[Sequence[int]]) -> "DirectionSet":
        dirs = tuple(dict.fromkeys(normalize_direction(v, q) for v in vectors))
        return cls(q, dirs)

    @classmethod
    def full(cls, q: int, n: int) -> "DirectionSet":
        return cls(q, tuple(projective_directions(q, n)))


@dataclass(frozen=True)
class KakeyaCandidate:
    q: int
    n: int
    points: frozenset

    @classmethod
    def of(cls, q: int, n: int, points: Iterable[Sequence[int]]) -> "KakeyaCandidate":
        pts = frozenset(tuple(x % q for x in pt) for pt in points)
        if not pts:
            raise InvalidInput("a Kakeya candidate needs at least one point")
        if any(len(x) != n for x in pts):
            raise DimensionMismatch(f"points must lie in F_{q}^{n}")
        return cls(q, n, pts)

    def __len__(self) -> int:
        return len(self.points)

    def sorted_points(self) -> List[Point]:
        return sorted(self.points)

    def to_json(self) -> dict:
        return {"q": self.q, "n": self.n, "points": [list(x) for x in self.sorted_points()]}

    @classmethod
    def from_json(cls, obj: dict) -> "KakeyaCandidate":
        try:
            q = int(obj.get("q", obj.get("p")))
            return cls.of(q, int(obj["n"]), obj["points"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed point set JSON: {exc}") from exc


def line(x: Sequence[int], v: Sequence[int], q: int) -> List[Point]:
    return [tuple((a + t * b) % q for a, b in zip(x, v)) for t in range(q)]


def build_star(q: int, n: int, center: Optional[Sequence[int]] = None) -> KakeyaCandidate:
    """Union of the lines through ``center`` in every projective direction."""
    if n < 2:
        raise InvalidInput("need n >= 2")
    c = tuple(center) if center is not None else (0,) * n
    if len(c) != n:
        raise DimensionMismatch("center has the wrong length")
    dirs = projective_directions(q, n)
    E = KakeyaCandidate.of(q, n, (pt for v in dirs for pt in line(c, v, q)))
    assert len(E) <= (q - 1) * len(dirs) + 1
    return E


@dataclass
class KakeyaReport:
    is_kakeya: bool
    witnesses: Dict[Direction, Optional[Point]]

    @property
    def missing(self) -> List[Direction]:
        return [v for v, x in self.witnesses.items() if x is None]

    def to_json(self) -> dict:
        return {
            "is_kakeya": self.is_kakeya,
            "directions": len(self.witnesses),
            "missing": [list(v) for v in self.missing],
            "witnesses": [
                {"direction": list(v), "base": None if x is None else list(x)}
                for v, x in self.witnesses.items()
            ],
        }


def is_kakeya(E: KakeyaCandidate, directions: Optional[DirectionSet] = None) -> KakeyaReport:
    """Does E contain a full line in every direction (of ``directions``)?"""
    dirs = directions.directions if directions is not None else projective_directions(E.q, E.n)
    witnesses: Dict[Direction, Optional[Point]] = {}
    for v in dirs:
        witnesses[v] = next(
            (x for x in E.sorted_points() if all(pt in E.points for pt in line(x, v, E.q))),
            None,
        )
    return KakeyaReport(all(x is not None for x in witnesses.values()), witnesses)


def kakeya_cts_check(E: KakeyaCandidate, d: int) -> dict:
    """Rank CTS check of E for P_d plus the cardinality bound #E >= C(d+n, n)."""
    if d < 0:
        raise InvalidInput("degree must be >= 0")
    if d > E.q - 1:
        raise DegreeTooLarge(f"need d <= q-1 = {E.q - 1}, got {d}")
    verdict = is_cts_linear(dense_family(E.q, E.n, [d]), E.sorted_points())
    need = binom(d + E.n, E.n)
    return {
        "q": E.q,
        "n": E.n,
        "d": d,
        "size": len(E),
        "is_cts": verdict.is_cts,
        "rank": verdict.rank,
        "dim": verdict.dim,
        "size_lower_bound": need,
        "size_bound_holds": len(E) >= need,
    }


def cts_not_kakeya_experiment(q: int, n: int, d: int, k: int, trials: int, seed: int = 0) -> dict:
    """Sample lists of length s = k C(d+n, n) and test CTS and Kakeya-ness.

    The CTS bound is 1 - q^(-lambda dim) with lambda = (k-1) - k log_q(d+1);
    it needs (d+1)^k < q^(k-1).  Sets with s < q^n / 2^n cannot be Kakeya.
    """
    PrimeField(q)
    if not kakeya_hypothesis(q, d, k):
        raise HypothesisUnmet(f"need (d+1)^k < q^(k-1): ({d}+1)^{k} vs {q}^{k - 1}")
    dim = binom(d + n, n)
    s = k * dim
    lam = cts_not_kakeya_lambda(q, d, k)
    family = dense_family(q, n, [d])
    master = Rng(seed)
    cts_count = kakeya_count = cts_and_kakeya = 0
    for t in range(trials):
        rng = master.child(t)
        pts = [tuple(rng.below(q) for _ in range(n)) for _ in range(s)]
        E = KakeyaCandidate.of(q, n, pts)
        ok = is_cts_linear(family, E.sorted_points()).is_cts
        kak = is_kakeya(E).is_kakeya
        cts_count += ok
        kakeya_count += kak
        cts_and_kakeya += ok and kak
    too_small = s * 2**n < q**n
    return {
        "schema": "ctslab/kakeya-experiment/v1",
        "q": q,
        "n": n,
        "d": d,
        "k": k,
        "s": s,
        "trials": trials,
        "seed": seed,
        "cts_count": cts_count,
        "cts_rate": cts_count / trials if trials else 0.0,
        "lambda": lam,
        "bound": 1 - float(q) ** (-lam * dim),
        "kakeya_count": kakeya_count,
        "cts_and_kakeya": cts_and_kakeya,
        "dvir_lower_bound": str(Fraction(q**n, 2**n)),
        "below_dvir_bound": too_small,
        "all_cts_not_kakeya": cts_and_kakeya == 0,
    }
