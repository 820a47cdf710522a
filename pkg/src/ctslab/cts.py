"""Correct test sequences: verification, covering number and density runs.

A point list Q is a correct test sequence (CTS) for a family Omega with
discriminant Sigma when every member of Omega vanishing on all of Q lies in
Sigma.

For a linear family and Sigma = {0} the check is exact linear algebra: the
family's coordinate map composed with evaluation at Q is injective iff the
evaluation matrix has full column rank.  Rank does not change under field
extension, so an F_p computation settles the question over the algebraic
closure as well.  Everything else is decided by enumerating F_p-members.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .bounds import LogProb, density_bound
from .errors import (
    DimensionMismatch,
    InvalidInput,
    MissingDeclaration,
    NoCtsInPool,
    NotLinearFamily,
    ResourceCapExceeded,
)
from .field import Point, PrimeField, Rng, sample_from_values
from .linalg import kernel, rank
from .poly import DegreeProfile, MultiPoly, monomials

Member = Tuple[MultiPoly, ...]

DEFAULT_ENUM_CAP = 10**6
DEFAULT_SEARCH_CAP = 10**7


def _zero_member(p: int, n: int, m: int) -> Member:
    return tuple(MultiPoly.zero(p, n) for _ in range(m))


def _combine(p: int, basis: Sequence[Member], coeffs: Sequence[int]) -> Member:
    m = len(basis[0])
    out = []
    for i in range(m):
        terms: Dict[tuple, int] = {}
        for b, c in zip(basis, coeffs):
            if c:
                for mu, v in b[i].terms.items():
                    terms[mu] = terms.get(mu, 0) + c * v
        out.append(MultiPoly(p, basis[0][i].n, terms))
    return tuple(out)


def _vanishes(f: Member, Q: Sequence[Point]) -> bool:
    return all(g.evaluate(x) == 0 for x in Q for g in f)


# ----------------------------------------------------------------- families

@dataclass(frozen=True)
class DenseSpace:
    """All lists (f_1..f_m) with deg f_i <= d_i; dim = N_(d), deg_lci = 1."""

    p: int
    profile: DegreeProfile

    @property
    def n(self) -> int:
        return self.profile.n

    @property
    def m(self) -> int:
        return self.profile.m

    @property
    def declared_dim(self) -> int:
        return self.profile.dimension

    @property
    def declared_deg_lci(self) -> int:
        return 1

    @property
    def d(self) -> int:
        return self.profile.d

    linear = True

    def basis(self) -> List[Member]:
        out = []
        for i, di in enumerate(self.profile.degrees):
            for mu in monomials(self.n, di):
                member = list(_zero_member(self.p, self.n, self.m))
                member[i] = MultiPoly.monomial(self.p, self.n, mu)
                out.append(tuple(member))
        return out

    def independent_basis(self) -> List[Member]:
        return self.basis()

    def members(self, cap: int = DEFAULT_ENUM_CAP) -> Iterator[Member]:
        yield from _span_members(self.p, self.independent_basis(), cap)

    def to_json(self) -> dict:
        return {"kind": "dense", "p": self.p, "n": self.n, "degrees": list(self.profile.degrees)}


@dataclass(frozen=True)
class LinearSubspace:
    """F_p-span of explicit basis lists (taken over the closure for CTS purposes)."""

    p: int
    n: int
    basis_lists: Tuple[Member, ...]
    declared_deg_lci: int = 1

    def __post_init__(self):
        if not self.basis_lists:
            raise InvalidInput("a linear subspace needs at least one basis element")
        m = len(self.basis_lists[0])
        for b in self.basis_lists:
            if len(b) != m or any(g.p != self.p or g.n != self.n for g in b):
                raise DimensionMismatch("basis lists must share (n, p, m)")

    linear = True

    @property
    def m(self) -> int:
        return len(self.basis_lists[0])

    @property
    def d(self) -> int:
        return max((g.degree or 0) for b in self.basis_lists for g in b)

    def basis(self) -> List[Member]:
        return list(self.basis_lists)

    def _coefficient_rows(self) -> List[List[int]]:
        keys = sorted({(i, mu) for b in self.basis_lists for i, g in enumerate(b) for mu in g.terms})
        return [[b[i].terms.get(mu, 0) for i, mu in keys] for b in self.basis_lists]

    def independent_basis(self) -> List[Member]:
        """Maximal independent subset, chosen greedily in the given order."""
        rows = self._coefficient_rows()
        chosen: List[int] = []
        for k in range(len(rows)):
            if rank([rows[j] for j in chosen + [k]], self.p) == len(chosen) + 1:
                chosen.append(k)
        return [self.basis_lists[k] for k in chosen]

    @property
    def declared_dim(self) -> int:
        return rank(self._coefficient_rows(), self.p)

    def members(self, cap: int = DEFAULT_ENUM_CAP) -> Iterator[Member]:
        yield from _span_members(self.p, self.independent_basis(), cap)

    def to_json(self) -> dict:
        return {
            "kind": "linear",
            "p": self.p,
            "n": self.n,
            "basis": [[g.to_json() for g in b] for b in self.basis_lists],
        }


@dataclass(frozen=True)
class Parameterized:
    """Image of a parameter grid under coordinate polynomials phi_1..phi_N.

    phi_k(t) is the coefficient of the k-th basis element of the dense space
    for ``profile``, so N = N_(d).
    """

    p: int
    profile: DegreeProfile
    param_points: Tuple[Point, ...]
    coordinate_polys: Tuple[MultiPoly, ...]
    declared_dim: int
    declared_deg_lci: int
    declared_param_degree: Optional[int] = None

    def __post_init__(self):
        if len(self.coordinate_polys) != self.profile.dimension:
            raise DimensionMismatch(
                f"need N_(d) = {self.profile.dimension} coordinate polynomials, "
                f"got {len(self.coordinate_polys)}"
            )

    linear = False

    @property
    def n(self) -> int:
        return self.profile.n

    @property
    def m(self) -> int:
        return self.profile.m

    @property
    def d(self) -> int:
        return self.profile.d

    def members(self, cap: int = DEFAULT_ENUM_CAP) -> Iterator[Member]:
        if len(self.param_points) > cap:
            raise ResourceCapExceeded("family members", len(self.param_points), cap)
        basis = DenseSpace(self.p, self.profile).basis()
        for t in self.param_points:
            coeffs = [phi.evaluate(t) for phi in self.coordinate_polys]
            yield _combine(self.p, basis, coeffs)


@dataclass(frozen=True)
class Enumerated:
    p: int
    n: int
    member_list: Tuple[Member, ...]
    declared_dim: Optional[int] = None
    declared_deg_lci: Optional[int] = None

    def __post_init__(self):
        if not self.member_list:
            raise InvalidInput("an enumerated family needs at least one member")
        m = len(self.member_list[0])
        for f in self.member_list:
            if len(f) != m or any(g.p != self.p or g.n != self.n for g in f):
                raise DimensionMismatch("members must share (n, p, m)")

    linear = False

    @property
    def m(self) -> int:
        return len(self.member_list[0])

    @property
    def d(self) -> int:
        return max((g.degree or 0) for f in self.member_list for g in f)

    def members(self, cap: int = DEFAULT_ENUM_CAP) -> Iterator[Member]:
        if len(self.member_list) > cap:
            raise ResourceCapExceeded("family members", len(self.member_list), cap)
        yield from self.member_list


def _span_members(p: int, basis: Sequence[Member], cap: int) -> Iterator[Member]:
    count = p ** len(basis)
    if count > cap:
        raise ResourceCapExceeded("family members", count, cap)
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        yield _combine(p, basis, coeffs)


def dense_family(p: int, n: int, degrees: Sequence[int]) -> DenseSpace:
    return DenseSpace(p, DegreeProfile(n, tuple(degrees)))


# ------------------------------------------------------------ discriminants

@dataclass(frozen=True)
class ZeroOnly:
    declared_dim: int = 0

    def contains(self, f: Member) -> bool:
        return all(g.is_zero() for g in f)


@dataclass(frozen=True)
class Predicate:
    test: Callable[[Member], bool]
    declared_dim: Optional[int] = None

    def contains(self, f: Member) -> bool:
        return bool(self.test(f))


@dataclass(frozen=True)
class EnumeratedSigma:
    members: frozenset
    declared_dim: Optional[int] = None

    @classmethod
    def of(cls, members, declared_dim=None) -> "EnumeratedSigma":
        return cls(frozenset(tuple(f) for f in members), declared_dim)

    def contains(self, f: Member) -> bool:
        return tuple(f) in self.members


# ------------------------------------------------------------------ verdicts

@dataclass
class CtsVerdict:
    is_cts: bool
    method: str
    witness: Optional[Member] = None
    rank: Optional[int] = None
    dim: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "is_cts": self.is_cts,
            "method": self.method,
            "witness": None if self.witness is None else [g.to_json() for g in self.witness],
            "rank": self.rank,
            "dim": self.dim,
        }


def evaluation_matrix(Q: Sequence[Point], profile, p: int) -> List[List[int]]:
    """Rows = points, columns = monomials of degree <= d in degree-lex order.

    ``profile`` is a DegreeProfile with a single degree, or ``(n, d)``.
    """
    if isinstance(profile, DegreeProfile):
        if profile.m != 1:
            raise InvalidInput("evaluation_matrix takes a single-polynomial profile")
        n, d = profile.n, profile.d
    else:
        n, d = profile
    basis = monomials(n, d)
    rows = []
    for x in Q:
        if len(x) != n:
            raise DimensionMismatch(f"point {x} is not in F_p^{n}")
        powers = [[pow(xi, e, p) for e in range(d + 1)] for xi in x]
        row = []
        for mu in basis:
            v = 1
            for i, e in enumerate(mu):
                if e:
                    v = v * powers[i][e] % p
            row.append(v)
        rows.append(row)
    return rows


def _family_eval_rows(family, basis: Sequence[Member], Q: Sequence[Point]) -> List[List[int]]:
    p = family.p
    if isinstance(family, DenseSpace):
        # block structure: output i only sees the columns of its own degree
        cols_per = [len(monomials(family.n, di)) for di in family.profile.degrees]
        rows = []
        offset = 0
        for i, di in enumerate(family.profile.degrees):
            block = evaluation_matrix(Q, (family.n, di), p)
            for brow in block:
                rows.append([0] * offset + brow + [0] * (sum(cols_per) - offset - cols_per[i]))
            offset += cols_per[i]
        return rows
    rows = []
    for x in Q:
        vals = [[g.evaluate(x) for g in b] for b in basis]
        for i in range(family.m):
            rows.append([v[i] for v in vals])
    return rows


def is_cts_linear(family, Q: Sequence[Point], sigma=None) -> CtsVerdict:
    """Exact verdict for a linear family with Sigma = {0} via rank."""
    if not getattr(family, "linear", False):
        raise NotLinearFamily(f"{type(family).__name__} is not a linear family")
    if sigma is not None and not isinstance(sigma, ZeroOnly):
        raise NotLinearFamily("rank verification needs the zero discriminant")
    basis = family.independent_basis()
    dim = len(basis)
    if not Q:
        witness = basis[0] if basis else None
        return CtsVerdict(dim == 0, "rank", witness, 0, dim)
    rows = _family_eval_rows(family, basis, Q)
    rk = rank(rows, family.p)
    if rk == dim:
        return CtsVerdict(True, "rank", None, rk, dim)
    c = kernel(rows, family.p, dim)[0]
    return CtsVerdict(False, "rank", _combine(family.p, basis, c), rk, dim)


def is_cts_enumerated(family, sigma, Q: Sequence[Point], cap: int = DEFAULT_ENUM_CAP) -> CtsVerdict:
    """Scan every F_p-member of the family."""
    sigma = sigma or ZeroOnly()
    for f in family.members(cap):
        if _vanishes(f, Q) and not sigma.contains(f):
            return CtsVerdict(False, "enumeration", f)
    return CtsVerdict(True, "enumeration")


def is_cts(family, sigma, Q: Sequence[Point], cap: int = DEFAULT_ENUM_CAP) -> CtsVerdict:
    if getattr(family, "linear", False) and (sigma is None or isinstance(sigma, ZeroOnly)):
        return is_cts_linear(family, Q)
    return is_cts_enumerated(family, sigma, Q, cap)


# ------------------------------------------------------------ covering number

@dataclass
class CoveringResult:
    length: int
    points: Tuple[Point, ...]
    lower_bound: Optional[int]
    subsets_checked: int

    def to_json(self) -> dict:
        return {
            "covering_number": self.length,
            "points": [list(x) for x in self.points],
            "lower_bound": self.lower_bound,
            "subsets_checked": self.subsets_checked,
        }


def covering_number(
    family,
    sigma,
    pool: Sequence[Point],
    cap: int = DEFAULT_SEARCH_CAP,
    enum_cap: int = DEFAULT_ENUM_CAP,
) -> CoveringResult:
    """Smallest L such that some L-subset of ``pool`` is a CTS (exhaustive)."""
    sigma = sigma or ZeroOnly()
    pool = list(dict.fromkeys(tuple(x) for x in pool))
    dim_omega = getattr(family, "declared_dim", None)
    dim_sigma = getattr(sigma, "declared_dim", None)
    lower = None
    if dim_omega is not None and dim_sigma is not None:
        lower = max(0, dim_omega - dim_sigma)
    checked = 0
    for L in range(len(pool) + 1):
        block = math.comb(len(pool), L)
        if checked + block > cap:
            raise ResourceCapExceeded("subset enumerations", checked + block, cap)
        for Q in itertools.combinations(pool, L):
            checked += 1
            if is_cts(family, sigma, Q, enum_cap).is_cts:
                if lower is not None and L < lower:
                    raise AssertionError(f"found a CTS of length {L} below the bound {lower}")
                return CoveringResult(L, Q, lower, checked)
    raise NoCtsInPool(f"no subset of the {len(pool)}-point pool is a CTS")


# ----------------------------------------------------------- density runs

@dataclass
class DensityReport:
    trials: int
    cts_count: int
    seed: int
    L: int
    grid_size: int
    bound: LogProb
    hypotheses: Dict[str, bool]
    warnings: List[str] = field(default_factory=list)

    @property
    def rate(self) -> float:
        return self.cts_count / self.trials if self.trials else 0.0

    def to_json(self) -> dict:
        return {
            "schema": "ctslab/density/v1",
            "trials": self.trials,
            "cts_count": self.cts_count,
            "rate": self.rate,
            "bound": self.bound.value,
            "bound_log10": self.bound.log10_fail,
            "hypotheses": dict(self.hypotheses),
            "warnings": list(self.warnings),
            "L": self.L,
            "grid_size": self.grid_size,
            "seed": self.seed,
        }


def density_hypothesis_flags(L: int, dim: int, deg: int, d: int, grid_size: int) -> Dict[str, bool]:
    """L >= 6 dim and #Q0 >= max((2(d+1))^2, deg^(2/dim)), decided on integers."""
    return {
        "length": L >= 6 * dim,
        "grid_vs_degree": grid_size >= (2 * (d + 1)) ** 2,
        "grid_vs_family_degree": dim >= 1 and grid_size**dim >= deg**2,
    }


def density_experiment(
    family,
    sigma,
    values: Sequence[int],
    L: int,
    trials: int,
    seed: int = 0,
    threads: int = 1,
    cap: int = DEFAULT_ENUM_CAP,
) -> DensityReport:
    """Sample ``trials`` lists Q in (values^n)^L and count the CTS among them.

    Trial k draws from ``Rng(seed).child(k)``, so the report depends only on
    (seed, trials) whatever the thread count.
    """
    if L < 1 or trials < 0:
        raise InvalidInput("need L >= 1 and trials >= 0")
    values = [v % family.p for v in values]
    if len(set(values)) != len(values):
        raise InvalidInput("grid values must be distinct in F_p")
    dim = getattr(family, "declared_dim", None)
    deg = getattr(family, "declared_deg_lci", None)
    if dim is None or deg is None:
        raise MissingDeclaration("density runs need declared dim and deg_lci")
    master = Rng(seed)
    n = family.n

    def trial(k: int) -> bool:
        rng = master.child(k)
        Q = [sample_from_values(values, n, rng) for _ in range(L)]
        Q = list(dict.fromkeys(Q))
        return is_cts(family, sigma, Q, cap).is_cts

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(trial, range(trials)))
    else:
        results = [trial(k) for k in range(trials)]
    hyp = density_hypothesis_flags(L, dim, deg, family.d, len(values))
    warnings = [f"hypothesis {k} unmet" for k, ok in hyp.items() if not ok]
    return DensityReport(
        trials=trials,
        cts_count=sum(results),
        seed=seed,
        L=L,
        grid_size=len(values),
        bound=density_bound(dim, deg, family.m, L),
        hypotheses=hyp,
        warnings=warnings,
    )


def family_from_json(obj: dict):
    """Variant-tagged family JSON: dense | linear | enumerated."""
    try:
        kind = obj["kind"]
        p = int(obj["p"])
        PrimeField(p)
        n = int(obj["n"])
        if kind == "dense":
            return DenseSpace(p, DegreeProfile(n, tuple(obj["degrees"])))
        if kind == "linear":
            basis = tuple(tuple(MultiPoly.from_json(g, p, n) for g in b) for b in obj["basis"])
            return LinearSubspace(p, n, basis, int(obj.get("deg_lci", 1)))
        if kind == "enumerated":
            members = tuple(tuple(MultiPoly.from_json(g, p, n) for g in f) for f in obj["members"])
            return Enumerated(p, n, members, obj.get("dim"), obj.get("deg_lci"))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed family JSON: {exc}") from exc
    raise InvalidInput(f"unknown family kind {kind!r}")


__all__ = [
    "DenseSpace",
    "LinearSubspace",
    "Parameterized",
    "Enumerated",
    "ZeroOnly",
    "Predicate",
    "EnumeratedSigma",
    "CtsVerdict",
    "evaluation_matrix",
    "is_cts_linear",
    "is_cts_enumerated",
    "is_cts",
    "covering_number",
    "density_experiment",
    "dense_family",
    "CoveringResult",
    "DensityReport",
    "family_from_json",
]
