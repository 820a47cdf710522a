"""Brute-force geometry over F_p^n.

Degrees and dimensions of constructible sets are declared metadata: there is
no algorithm here for deg_lci or deg_pi.  Everything else (membership,
enumeration, projection, counting) is exact enumeration of F_p^n, done in
lexicographic blocks with vectorized polynomial evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .bounds import intersection_bounds, json_int
from .errors import (
    BadCharacteristic,
    DegreeTooLarge,
    DimensionMismatch,
    InvalidInput,
    MissingDeclaration,
    ResourceCapExceeded,
    ZeroPolynomial,
)
from .field import Point, PrimeField
from .poly import MultiPoly

DEFAULT_CAP = 10**8
BLOCK = 1 << 18


@dataclass(frozen=True)
class Piece:
    """Locally closed piece V(g_1..g_s) minus V(h)."""

    equations: Tuple[MultiPoly, ...] = ()
    avoid: Optional[MultiPoly] = None

    def polys(self) -> List[MultiPoly]:
        return list(self.equations) + ([self.avoid] if self.avoid is not None else [])

    def contains(self, x: Sequence[int]) -> bool:
        if any(g.evaluate(x) for g in self.equations):
            return False
        return self.avoid is None or self.avoid.evaluate(x) != 0

    def mask(self, cols: Sequence[np.ndarray], size: int) -> np.ndarray:
        keep = np.ones(size, dtype=bool)
        for g in self.equations:
            keep &= g.evaluate_columns(cols) == 0
        if self.avoid is not None:
            keep &= self.avoid.evaluate_columns(cols) != 0
        return keep


@dataclass(frozen=True)
class ConstructibleSet:
    p: int
    n: int
    pieces: Tuple[Piece, ...]
    declared_dim: Optional[int] = None
    declared_deg_lci: Optional[int] = None

    def __post_init__(self):
        PrimeField(self.p)
        if not self.pieces:
            raise InvalidInput("a constructible set needs at least one piece")
        for piece in self.pieces:
            for g in piece.polys():
                if g.p != self.p or g.n != self.n:
                    raise DimensionMismatch("piece polynomial lives in a different ring")

    @classmethod
    def variety(cls, equations: Sequence[MultiPoly], **kw) -> "ConstructibleSet":
        f = equations[0]
        return cls(f.p, f.n, (Piece(tuple(equations)),), **kw)

    @classmethod
    def open_set(cls, h: MultiPoly, **kw) -> "ConstructibleSet":
        return cls(h.p, h.n, (Piece((), h),), **kw)

    def contains(self, x: Sequence[int]) -> bool:
        if len(x) != self.n:
            raise DimensionMismatch(f"point has {len(x)} coordinates, expected {self.n}")
        return any(piece.contains(x) for piece in self.pieces)

    def union(self, other: "ConstructibleSet") -> "ConstructibleSet":
        if (self.p, self.n) != (other.p, other.n):
            raise DimensionMismatch("sets live in different ambient spaces")
        return ConstructibleSet(self.p, self.n, self.pieces + other.pieces)

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "p": self.p,
            "pieces": [
                {
                    "eqs": [g.to_json() for g in piece.equations],
                    "avoid": piece.avoid.to_json() if piece.avoid is not None else None,
                }
                for piece in self.pieces
            ],
        }
        if self.declared_dim is not None:
            out["dim"] = self.declared_dim
        if self.declared_deg_lci is not None:
            out["deg_lci"] = self.declared_deg_lci
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "ConstructibleSet":
        try:
            p, n = int(obj["p"]), int(obj["n"])
            pieces = []
            for pc in obj["pieces"]:
                eqs = tuple(MultiPoly.from_json(g, p, n) for g in pc.get("eqs", []))
                avoid = pc.get("avoid")
                pieces.append(Piece(eqs, MultiPoly.from_json(avoid, p, n) if avoid else None))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed constructible set JSON: {exc}") from exc
        return cls(p, n, tuple(pieces), obj.get("dim"), obj.get("deg_lci"))


# ------------------------------------------------------------ enumeration

def _check_cap(p: int, n: int, cap: int) -> int:
    total = p**n
    if total > cap:
        raise ResourceCapExceeded("membership tests", total, cap)
    return total


def _blocks(p: int, n: int, total: int) -> Iterator[Tuple[List[np.ndarray], int]]:
    """Coordinate columns of F_p^n in lexicographic order (X1 most significant)."""
    for start in range(0, total, BLOCK):
        stop = min(start + BLOCK, total)
        idx = np.arange(start, stop, dtype=np.int64)
        cols = []
        for i in range(n):
            weight = p ** (n - 1 - i)
            cols.append((idx // weight) % p)
        yield cols, stop - start


def _points_of(cols: List[np.ndarray], keep: np.ndarray) -> List[Point]:
    if not keep.any():
        return []
    sel = np.stack([c[keep] for c in cols], axis=1) if cols else np.zeros((int(keep.sum()), 0))
    return [tuple(int(v) for v in row) for row in sel]


def piece_masks(C: ConstructibleSet, cap: int = DEFAULT_CAP) -> Iterator[Tuple[List[np.ndarray], List[np.ndarray]]]:
    total = _check_cap(C.p, C.n, cap)
    for cols, size in _blocks(C.p, C.n, total):
        yield cols, [piece.mask(cols, size) for piece in C.pieces]


def enumerate_points(C: ConstructibleSet, q: Optional[int] = None, cap: int = DEFAULT_CAP) -> List[Point]:
    """All F_q-points of C in lexicographic order (q must equal p)."""
    if q is not None and q != C.p:
        raise InvalidInput("only prime fields: q must equal p")
    out: List[Point] = []
    for cols, masks in piece_masks(C, cap):
        keep = np.zeros_like(masks[0])
        for m in masks:
            keep |= m
        out.extend(_points_of(cols, keep))
    return out


def count_points(C: ConstructibleSet, cap: int = DEFAULT_CAP) -> Tuple[int, List[int]]:
    """Total count and per-piece counts."""
    total = 0
    per_piece = [0] * len(C.pieces)
    for _, masks in piece_masks(C, cap):
        keep = np.zeros_like(masks[0])
        for k, m in enumerate(masks):
            per_piece[k] += int(m.sum())
            keep |= m
        total += int(keep.sum())
    return total, per_piece


def project(points: Iterable[Sequence[int]], keep: Sequence[int]) -> List[Point]:
    """Image of a finite point set under a coordinate projection, sorted."""
    return sorted({tuple(x[i] for i in keep) for x in points})


def intersect_points(points: Iterable[Point], S: ConstructibleSet) -> List[Point]:
    return [x for x in points if S.contains(x)]


def cartesian_product(A: Sequence[Point], B: Sequence[Point]) -> List[Point]:
    return [a + b for a in A for b in B]


# ------------------------------------------------------------ reports

@dataclass
class CountReport:
    total: int
    per_piece: List[int]
    bounds: Dict[str, int] = field(default_factory=dict)
    verdicts: Dict[str, bool] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "total": json_int(self.total),
            "per_piece": [json_int(c) for c in self.per_piece],
            "bounds": {k: json_int(v) for k, v in self.bounds.items()},
            "verdicts": dict(self.verdicts),
        }


def count_report(C: ConstructibleSet, cap: int = DEFAULT_CAP) -> CountReport:
    """Point count, compared with deg_lci(C) q^dim(C) when both are declared."""
    total, per_piece = count_points(C, cap)
    rep = CountReport(total, per_piece)
    if C.declared_deg_lci is not None and C.declared_dim is not None:
        rep.bounds["deg_times_q_dim"] = C.declared_deg_lci * C.p**C.declared_dim
        rep.verdicts["count_within_bound"] = total <= rep.bounds["deg_times_q_dim"]
    return rep


def ore_check(f: MultiPoly, q: Optional[int] = None, cap: int = DEFAULT_CAP) -> CountReport:
    """Non-zeros of f on F_q^n versus (q - deg f) q^(n-1)."""
    if q is not None and q != f.p:
        raise InvalidInput("only prime fields: q must equal p")
    q = f.p
    if f.is_zero():
        raise ZeroPolynomial("ore_check needs a nonzero polynomial")
    deg = f.degree
    if deg > q - 1:
        raise DegreeTooLarge(f"deg f = {deg} exceeds q - 1 = {q - 1}")
    total = _check_cap(q, f.n, cap)
    nonzeros = 0
    for cols, size in _blocks(q, f.n, total):
        nonzeros += int((f.evaluate_columns(cols) != 0).sum())
    zeros = q**f.n - nonzeros
    rep = CountReport(nonzeros, [zeros])
    rep.bounds["nonzero_lower"] = (q - deg) * q ** (f.n - 1)
    rep.bounds["zero_upper"] = deg * q ** (f.n - 1)
    rep.bounds["degree"] = deg
    rep.verdicts["nonzeros_bound_holds"] = nonzeros >= rep.bounds["nonzero_lower"]
    rep.verdicts["zeros_bound_holds"] = zeros <= rep.bounds["zero_upper"]
    rep.verdicts["has_nonzero"] = nonzeros > 0
    return rep


def intersect_count(
    sets: Sequence[ConstructibleSet],
    q: Optional[int] = None,
    degrees: Optional[Sequence[int]] = None,
    dims: Optional[Sequence[int]] = None,
    intersection_dim: int = 0,
    compare: bool = True,
    cap: int = DEFAULT_CAP,
) -> CountReport:
    """Brute-force count of an intersection, checked against declared data.

    ``product`` bound: prod(deg_i) q^dim(intersection).
    ``first_bound``: C(s+r-1, r) deg_1 max(deg_j)^r q^dim(intersection), with
    r = dim C_1.  Degrees default to each set's declared_deg_lci.
    """
    if not sets:
        raise InvalidInput("need at least one set")
    p, n = sets[0].p, sets[0].n
    if q is not None and q != p:
        raise InvalidInput("only prime fields: q must equal p")
    for S in sets:
        if (S.p, S.n) != (p, n):
            raise DimensionMismatch("sets live in different ambient spaces")
    total = _check_cap(p, n, cap)
    count = 0
    per_set = [0] * len(sets)
    for cols, size in _blocks(p, n, total):
        keep = np.ones(size, dtype=bool)
        for k, S in enumerate(sets):
            m = np.zeros(size, dtype=bool)
            for piece in S.pieces:
                m |= piece.mask(cols, size)
            per_set[k] += int(m.sum())
            keep &= m
        count += int(keep.sum())
    rep = CountReport(count, per_set)
    if not compare:
        return rep
    if degrees is None:
        degrees = [S.declared_deg_lci for S in sets]
    if dims is None:
        dims = [S.declared_dim for S in sets]
    if any(d is None for d in degrees):
        raise MissingDeclaration("bound comparison needs a declared degree for every set")
    scale = p**intersection_dim
    rep.bounds["product"] = math.prod(degrees) * scale
    rep.verdicts["product_bound_holds"] = count <= rep.bounds["product"]
    if dims[0] is not None:
        first = intersection_bounds(degrees, dims[0]).first
        rep.bounds["first_bound"] = first * scale
        rep.verdicts["first_bound_holds"] = count <= rep.bounds["first_bound"]
    return rep


# ----------------------------------------------------- named examples

def _xyz(p: int):
    X, Y, Z = (MultiPoly.variable(p, 3, i) for i in range(3))
    return X, Y, Z


def croix_de_berny(p: int, cap: int = DEFAULT_CAP) -> dict:
    """The cubic W = V(ZXY + X^2 + Y^2 - 1) and its quadric variant, counted over F_p.

    C = pi(W) (forget Z) meets the two lines V(XY) in four points although
    deg_z(C) deg(V(XY)) = 1 * 2.  For W' = V(XZ + Y^2 - 1), pi(W') meets
    V(X) in the two points (0, +-1), the obstruction to deg_lci(pi(W')) = 2;
    and pi(W' ∩ V(Z)) is the pair of lines y = +-1 with 2p points.
    """
    if p == 2:
        raise BadCharacteristic("the example needs odd characteristic (1 != -1)")
    PrimeField(p)
    X, Y, Z = _xyz(p)
    one = MultiPoly.constant(p, 3, 1)

    W = ConstructibleSet.variety([Z * X * Y + X * X + Y * Y - one])
    C = project(enumerate_points(W, cap=cap), (0, 1))
    boundary = [pt for pt in C if pt[0] * pt[1] % p == 0]
    expected = sorted({(0, 1), (0, p - 1), (1, 0), (p - 1, 0)})
    deg_z_c, deg_lines = 1, 2
    bezout_rhs = deg_z_c * deg_lines

    Wq = ConstructibleSet.variety([X * Z + Y * Y - one])
    Cq = project(enumerate_points(Wq, cap=cap), (0, 1))
    quad_boundary = [pt for pt in Cq if pt[0] == 0]
    defect = ConstructibleSet.variety([X * Z + Y * Y - one, Z])
    defect_image = project(enumerate_points(defect, cap=cap), (0, 1))

    return {
        "p": p,
        "boundary_points": len(boundary),
        "boundary": [list(pt) for pt in boundary],
        "boundary_matches_expected": boundary == expected,
        "bezout_rhs": bezout_rhs,
        "deg_z_C": deg_z_c,
        "deg_V_xy": deg_lines,
        "violation": len(boundary) > bezout_rhs,
        "projection_size": len(C),
        "quadric": {
            "boundary_points": len(quad_boundary),
            "boundary": [list(pt) for pt in quad_boundary],
            "projection_size": len(Cq),
            "complement_of_projection": p * p - len(Cq),
            "deg_lci_lower_witness": len(quad_boundary) > 1,
        },
        "defect": {
            "image_points": len(defect_image),
            "expected": 2 * p,
            "matches": len(defect_image) == 2 * p
            and all(pt[1] in (1, p - 1) for pt in defect_image),
        },
    }
