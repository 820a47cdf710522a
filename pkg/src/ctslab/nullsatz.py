"""Product grids E = E_1 x ... x E_n and coefficient recovery from values.

K[E] is the polynomial ring modulo h_i(X_i) = prod_{zeta in E_i}(X_i - zeta).
For each coordinate the dual basis g_0..g_{d_i - 1} satisfies

    sum_{zeta in E_i} g_k(zeta) zeta^r = delta_{k,r}    (0 <= k, r < d_i)

and is found by solving one Vandermonde system per k and interpolating the
solution.  With G_theta(z) = prod_i g_{theta_i}(z_i), the grid sum
sum_z G_theta(z) f(z) equals the coefficient of X^theta in f whenever
|theta| = deg f.  That is the whole trick behind the nonvanishing witness.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import (
    DegreeMismatch,
    DimensionMismatch,
    DuplicateNode,
    InvalidInput,
    ResourceCapExceeded,
    ThetaOutOfBox,
)
from .field import Point, PrimeField
from .linalg import matmul_mod, row_reduce
from .poly import Circuit, MultiPoly

Evaluable = Union[MultiPoly, Circuit]

DEFAULT_GRID_CAP = 10**6
DEFAULT_MATRIX_CAP = 256


# -------------------------------------------------------- univariate helpers

def poly_from_roots(roots: Sequence[int], p: int) -> List[int]:
    """Coefficients (low degree first) of prod (T - r); monic."""
    out = [1]
    for r in roots:
        nxt = [0] * (len(out) + 1)
        for k, c in enumerate(out):
            nxt[k + 1] = (nxt[k + 1] + c) % p
            nxt[k] = (nxt[k] - r * c) % p
        out = nxt
    return out


def lagrange_basis(nodes: Sequence[int], p: int) -> List[List[int]]:
    """Coefficients of l_j with l_j(nodes[i]) = delta_{ij}."""
    h = poly_from_roots(nodes, p)
    k = len(nodes)
    out = []
    for xj in nodes:
        # h / (T - xj) by synthetic division, then scale by 1 / prod_{i != j}(xj - xi)
        q = [0] * k
        carry = 0
        for i in range(k, 0, -1):
            carry = (h[i] + carry * xj) % p
            q[i - 1] = carry
        scale = pow(eval_univariate(q, xj, p), -1, p)
        out.append([c * scale % p for c in q])
    return out


def interpolate(nodes: Sequence[int], values: Sequence[int], p: int, basis=None) -> List[int]:
    """Lagrange interpolation: the polynomial of degree < len(nodes) through the data."""
    if basis is None:
        basis = lagrange_basis(nodes, p)
    out = [0] * len(nodes)
    for yj, lj in zip(values, basis):
        if yj:
            for i, c in enumerate(lj):
                out[i] = (out[i] + yj * c) % p
    return out


def eval_univariate(coeffs: Sequence[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def _power_reduction(h: Sequence[int], e: int, p: int) -> List[int]:
    """Coefficients of T^e mod h (h monic), length deg h."""
    d = len(h) - 1
    vec = [0] * d
    if e < d:
        vec[e] = 1
        return vec
    vec[d - 1] = 1  # T^(d-1)
    for _ in range(e - d + 1):
        top = vec[-1]
        vec = [0] + vec[:-1]
        if top:
            vec = [(v - top * hc) % p for v, hc in zip(vec, h[:d])]
    return vec


# ------------------------------------------------------------------ algebra

@dataclass(frozen=True)
class GridAlgebra:
    p: int
    grids: Tuple[Tuple[int, ...], ...]
    h: Tuple[Tuple[int, ...], ...]
    duals: Tuple[Tuple[Tuple[int, ...], ...], ...]
    dual_values: Tuple[Tuple[Tuple[int, ...], ...], ...]

    @property
    def n(self) -> int:
        return len(self.grids)

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(len(E) for E in self.grids)

    @property
    def size(self) -> int:
        """D = prod d_i, the number of grid points and dim K[E]."""
        return math.prod(self.degrees)

    @property
    def max_degree(self) -> int:
        """sum d_i - n, the top degree of the Alon family."""
        return sum(self.degrees) - self.n

    def box(self) -> List[Tuple[int, ...]]:
        """Exponent box {mu : mu_i <= d_i - 1}, lexicographic."""
        return list(itertools.product(*(range(d) for d in self.degrees)))

    def in_box(self, mu: Sequence[int]) -> bool:
        return len(mu) == self.n and all(0 <= m < d for m, d in zip(mu, self.degrees))

    def points(self) -> List[Point]:
        return list(itertools.product(*self.grids))

    def h_poly(self, i: int) -> MultiPoly:
        return MultiPoly(
            self.p,
            self.n,
            {tuple(e if j == i else 0 for j in range(self.n)): c for e, c in enumerate(self.h[i])},
        )

    def _columns(self) -> List[np.ndarray]:
        """Grid coordinates as columns, lexicographic (last coordinate fastest)."""
        mesh = np.meshgrid(*[np.array(E, dtype=np.int64) for E in self.grids], indexing="ij")
        return [m.reshape(-1) for m in mesh]

    def dual_grid_values(self, theta: Sequence[int]) -> np.ndarray:
        """G_theta on every grid point (lexicographic order)."""
        self._check_theta(theta)
        vec = np.ones(1, dtype=object)
        for i, t in enumerate(theta):
            vec = np.outer(vec, np.array(self.dual_values[i][t], dtype=object)).reshape(-1) % self.p
        return vec

    def _check_theta(self, theta: Sequence[int]):
        if not self.in_box(theta):
            raise ThetaOutOfBox(f"theta={tuple(theta)} is outside the box {self.degrees}")

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "grids": [list(E) for E in self.grids],
            "h": [list(c) for c in self.h],
            "duals": [[list(g) for g in gs] for gs in self.duals],
        }


def build_grid_algebra(grids: Sequence[Sequence[int]], p: int, cap: int = DEFAULT_GRID_CAP) -> GridAlgebra:
    PrimeField(p)
    if not grids:
        raise InvalidInput("need at least one coordinate grid")
    clean = []
    for i, E in enumerate(grids):
        vals = [int(v) % p for v in E]
        if not vals:
            raise InvalidInput(f"grid {i} is empty")
        if len(set(vals)) != len(vals):
            raise DuplicateNode(f"grid {i} has repeated elements {list(E)}")
        clean.append(tuple(vals))
    D = math.prod(len(E) for E in clean)
    if D > cap:
        raise ResourceCapExceeded("grid points", D, cap)
    hs, duals, values = [], [], []
    for E in clean:
        d = len(E)
        hs.append(tuple(poly_from_roots(E, p)))
        # w_k solves V w = e_k, so the w_k are the columns of V^-1
        V = [[pow(z, r, p) for z in E] + [int(r == c) for c in range(d)] for r in range(d)]
        inv = [row[d:] for row in row_reduce(V, p)[0]]
        basis = lagrange_basis(E, p)
        gs, ws = [], []
        for k in range(d):
            w = [inv[j][k] for j in range(d)]
            ws.append(tuple(w))
            gs.append(tuple(interpolate(E, w, p, basis)))
        duals.append(tuple(gs))
        values.append(tuple(ws))
    return GridAlgebra(p, tuple(clean), tuple(hs), tuple(duals), tuple(values))


def algebra_from_json(obj: dict, cap: int = DEFAULT_GRID_CAP) -> GridAlgebra:
    try:
        return build_grid_algebra(obj["grids"], int(obj["p"]), cap)
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed grid JSON: {exc}") from exc


# ---------------------------------------------------------------- pairings

def _evaluate_on_grid(alg: GridAlgebra, f: Evaluable) -> np.ndarray:
    if isinstance(f, MultiPoly):
        if f.n != alg.n or f.p != alg.p:
            raise DimensionMismatch("polynomial and grid live in different spaces")
        return np.asarray(f.evaluate_columns(alg._columns()), dtype=object)
    if isinstance(f, Circuit):
        if f.n != alg.n or f.p != alg.p:
            raise DimensionMismatch("circuit and grid live in different spaces")
        if f.m != 1:
            raise DimensionMismatch("coefficient extraction needs a single-output circuit")
        return np.array([f.evaluate(z)[0] for z in alg.points()], dtype=object)
    raise InvalidInput(f"cannot evaluate {type(f).__name__}")


def pairing(alg: GridAlgebra, theta: Sequence[int], mu: Sequence[int]) -> int:
    """sum_{z in E} G_theta(z) z^mu, summed over all D grid points."""
    if len(mu) != alg.n or any(m < 0 for m in mu):
        raise DimensionMismatch(f"mu={tuple(mu)} is not an exponent vector of length {alg.n}")
    G = alg.dual_grid_values(theta)
    mono = np.ones(1, dtype=object)
    for E, m in zip(alg.grids, mu):
        mono = np.outer(mono, np.array([pow(z, m, alg.p) for z in E], dtype=object)).reshape(-1)
    return int((G * mono).sum() % alg.p)


def pairing_matrix(alg: GridAlgebra) -> List[List[int]]:
    """(pairing(theta, mu))_{theta, mu in box}; the identity by duality."""
    box = alg.box()
    return [[pairing(alg, t, m) for m in box] for t in box]


def extract_coefficient(
    alg: GridAlgebra,
    f: Evaluable,
    theta: Sequence[int],
    declared_degree: Optional[int] = None,
) -> int:
    """Coefficient of X^theta in f from grid values alone; needs |theta| = deg f."""
    alg._check_theta(theta)
    if declared_degree is None:
        if isinstance(f, Circuit):
            raise DegreeMismatch("circuits need a declared degree")
        declared_degree = f.degree
    elif isinstance(f, MultiPoly) and f.degree is not None and f.degree != declared_degree:
        raise DegreeMismatch(f"declared degree {declared_degree} but deg f = {f.degree}")
    if declared_degree is None or sum(theta) != declared_degree:
        raise DegreeMismatch(f"|theta| = {sum(theta)} but deg f = {declared_degree}")
    vals = _evaluate_on_grid(alg, f)
    return int((alg.dual_grid_values(theta) * vals).sum() % alg.p)


def find_witness(alg: GridAlgebra, f: Evaluable) -> Optional[Point]:
    """First grid point (lexicographic) where f does not vanish."""
    if isinstance(f, Circuit) and f.m != 1:
        raise DimensionMismatch("find_witness needs a single-output circuit")
    vals = _evaluate_on_grid(alg, f)
    nz = np.flatnonzero(vals != 0)
    if nz.size == 0:
        if isinstance(f, MultiPoly):
            assert not alon_membership(alg, f) or f.is_zero(), "nonzero Alon polynomial vanished on E"
        return None
    return alg.points()[int(nz[0])]


def alon_membership(alg: GridAlgebra, f: MultiPoly) -> bool:
    """f = 0, or some X^mu with mu in the box and |mu| = deg f has a nonzero coefficient."""
    if f.is_zero():
        return True
    deg = f.degree
    return any(sum(mu) == deg and alg.in_box(mu) for mu in f.terms)


def normal_form(alg: GridAlgebra, f: MultiPoly) -> MultiPoly:
    """Remainder of f modulo h_1(X_1), ..., h_n(X_n); degree < d_i in X_i."""
    p = alg.p
    cache: Dict[Tuple[int, int], List[int]] = {}

    def red(i: int, e: int) -> List[int]:
        if (i, e) not in cache:
            cache[(i, e)] = _power_reduction(alg.h[i], e, p)
        return cache[(i, e)]

    out: Dict[Tuple[int, ...], int] = {}
    for mu, c in f.terms.items():
        parts = [[(k, v) for k, v in enumerate(red(i, e)) if v] for i, e in enumerate(mu)]
        for combo in itertools.product(*parts):
            coef = c
            for _, v in combo:
                coef = coef * v % p
            key = tuple(k for k, _ in combo)
            out[key] = (out.get(key, 0) + coef) % p
    return MultiPoly(p, alg.n, out)


# ------------------------------------------------------------------ traces

def companion(h: Sequence[int], p: int, dtype=object) -> np.ndarray:
    """Matrix of multiplication by T on K[T]/(h), basis 1, T, ..., T^(d-1)."""
    d = len(h) - 1
    C = np.zeros((d, d), dtype=dtype)
    for j in range(d - 1):
        C[j + 1, j] = 1
    for i in range(d):
        C[i, d - 1] = (-h[i]) % p
    return C


def _matpow(M: np.ndarray, e: int, p: int) -> np.ndarray:
    out = np.eye(M.shape[0], dtype=M.dtype)
    base = M
    while e:
        if e & 1:
            out = matmul_mod(out, base, p).astype(M.dtype)
        base = matmul_mod(base, base, p).astype(M.dtype)
        e >>= 1
    return out


def multiplication_matrix(alg: GridAlgebra, h: MultiPoly, cap: int = DEFAULT_MATRIX_CAP) -> np.ndarray:
    """D x D matrix of u -> h u on K[E] in the lexicographic monomial basis.

    Multiplication by X_i acts as the companion matrix of h_i on the i-th
    tensor factor, so h acts as sum_mu h_mu (C_1^mu_1 kron ... kron C_n^mu_n).
    """
    D = alg.size
    if D > cap:
        raise ResourceCapExceeded("multiplication matrix size", D, cap)
    p = alg.p
    # int64 is exact while a single product of residues cannot overflow
    dtype = np.int64 if (p - 1) ** 2 * max(alg.degrees) < (1 << 63) else object
    comps = [companion(hi, p, dtype) for hi in alg.h]
    powers: Dict[Tuple[int, int], np.ndarray] = {}
    M = np.zeros((D, D), dtype=dtype)
    for mu, c in h.terms.items():
        term = np.ones((1, 1), dtype=dtype)
        for i, e in enumerate(mu):
            if (i, e) not in powers:
                powers[(i, e)] = _matpow(comps[i], e, p)
            term = np.kron(term, powers[(i, e)]) % p
        M = (M + c * term) % p
    return M


def homothety_trace_check(alg: GridAlgebra, h: MultiPoly, cap: int = DEFAULT_MATRIX_CAP) -> dict:
    """Trace of multiplication by h versus sum_{z in E} h(z)."""
    M = multiplication_matrix(alg, h, cap)
    trace = int(np.trace(M) % alg.p)
    total = int(_evaluate_on_grid(alg, h).sum() % alg.p)
    return {"D": alg.size, "trace": trace, "evaluation_sum": total, "equal": trace == total}
