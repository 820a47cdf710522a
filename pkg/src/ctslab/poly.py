"""Sparse multivariate polynomials and straight-line programs over F_p."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import DimensionMismatch, InvalidInput, ZeroPolynomial
from .field import PrimeField

Exponent = Tuple[int, ...]


def exponents_of_degree(n: int, t: int) -> Iterator[Exponent]:
    """Exponents with ``|mu| = t``, X1-heaviest first (lex descending)."""
    if n == 0:
        if t == 0:
            yield ()
        return
    if n == 1:
        yield (t,)
        return
    for first in range(t, -1, -1):
        for rest in exponents_of_degree(n - 1, t - first):
            yield (first,) + rest


@lru_cache(maxsize=256)
def monomials(n: int, d: int) -> Tuple[Exponent, ...]:
    """Basis exponents of P_d in n variables, in degree-lex order.

    Lower total degree comes first; within a degree, lex descending with
    X1 as the heaviest variable.  ``len(monomials(n, d)) == C(d + n, n)``.
    """
    if d < 0:
        return ()
    return tuple(mu for t in range(d + 1) for mu in exponents_of_degree(n, t))


def deglex_key(mu: Exponent):
    return (sum(mu), tuple(-e for e in mu))


class MultiPoly:
    """Polynomial in ``n`` variables over F_p with a canonical sparse term map.

    ``terms`` maps exponent tuples to nonzero coefficients in ``[0, p)``.
    The zero polynomial has an empty map and ``degree`` is ``None``.
    """

    __slots__ = ("p", "n", "terms", "_hash")

    def __init__(self, p: int, n: int, terms: Optional[Mapping[Exponent, int]] = None):
        self.p = p
        self.n = n
        clean: Dict[Exponent, int] = {}
        if terms:
            for mu, c in terms.items():
                mu = tuple(int(e) for e in mu)
                if len(mu) != n:
                    raise DimensionMismatch(f"exponent {mu} has length != {n}")
                if any(e < 0 for e in mu):
                    raise InvalidInput(f"negative exponent in {mu}")
                c = (clean.get(mu, 0) + c) % p
                if c:
                    clean[mu] = c
                else:
                    clean.pop(mu, None)
        self.terms = dict(sorted(clean.items(), key=lambda kv: deglex_key(kv[0])))
        self._hash = None

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, p: int, n: int) -> "MultiPoly":
        return cls(p, n)

    @classmethod
    def constant(cls, p: int, n: int, c: int) -> "MultiPoly":
        return cls(p, n, {(0,) * n: c})

    @classmethod
    def variable(cls, p: int, n: int, i: int) -> "MultiPoly":
        mu = [0] * n
        mu[i] = 1
        return cls(p, n, {tuple(mu): 1})

    @classmethod
    def monomial(cls, p: int, n: int, mu: Exponent, c: int = 1) -> "MultiPoly":
        return cls(p, n, {tuple(mu): c})

    @classmethod
    def from_coeffs(cls, p: int, n: int, d: int, coeffs: Sequence[int]) -> "MultiPoly":
        """Polynomial whose coefficient vector in ``monomials(n, d)`` is ``coeffs``."""
        basis = monomials(n, d)
        if len(coeffs) != len(basis):
            raise DimensionMismatch(f"need {len(basis)} coefficients, got {len(coeffs)}")
        return cls(p, n, dict(zip(basis, coeffs)))

    def coeff_vector(self, d: int) -> List[int]:
        return [self.terms.get(mu, 0) for mu in monomials(self.n, d)]

    # basic queries -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> Optional[int]:
        if not self.terms:
            return None
        return max(sum(mu) for mu in self.terms)

    def coefficient(self, mu: Sequence[int]) -> int:
        if len(mu) != self.n:
            raise DimensionMismatch(f"exponent {tuple(mu)} has length != {self.n}")
        return self.terms.get(tuple(mu), 0)

    def degree_in(self, i: int) -> int:
        return max((mu[i] for mu in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        return len({sum(mu) for mu in self.terms}) <= 1

    def homogeneous_component(self, t: int) -> "MultiPoly":
        return MultiPoly(self.p, self.n, {mu: c for mu, c in self.terms.items() if sum(mu) == t})

    def leading_homogeneous_component(self) -> "MultiPoly":
        if not self.terms:
            raise ZeroPolynomial("the zero polynomial has no leading component")
        return self.homogeneous_component(self.degree)

    # arithmetic ----------------------------------------------------------
    def _check(self, other: "MultiPoly"):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        if other.p != self.p or other.n != self.n:
            raise DimensionMismatch("polynomials live in different rings")
        return None

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, int):
            return MultiPoly.constant(self.p, self.n, other)
        self._check(other)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for mu, c in other.terms.items():
            out[mu] = out.get(mu, 0) + c
        return MultiPoly(self.p, self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.p, self.n, {mu: -c for mu, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return MultiPoly(self.p, self.n, {mu: c * other for mu, c in self.terms.items()})
        self._check(other)
        p = self.p
        out: Dict[Exponent, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mu = tuple(a + b for a, b in zip(m1, m2))
                out[mu] = (out.get(mu, 0) + c1 * c2) % p
        return MultiPoly(p, self.n, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise InvalidInput("negative power")
        acc = MultiPoly.constant(self.p, self.n, 1)
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.p == other.p and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self.n, tuple(self.terms.items())))
        return self._hash

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for mu, c in self.terms.items():
            mono = "*".join(
                f"X{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(mu) if e
            )
            parts.append(f"{c}*{mono}" if mono and c != 1 else (mono or str(c)))
        return " + ".join(parts)

    # evaluation ------------------------------------------------------------
    def evaluate(self, x: Sequence[int]) -> int:
        if len(x) != self.n:
            raise DimensionMismatch(f"point has {len(x)} coordinates, expected {self.n}")
        p = self.p
        total = 0
        for mu, c in self.terms.items():
            term = c
            for xi, e in zip(x, mu):
                if e:
                    term = term * pow(xi, e, p) % p
            total += term
        return total % p

    __call__ = evaluate

    def evaluate_columns(self, cols: Sequence[np.ndarray]) -> np.ndarray:
        """Vectorized evaluation at many points; ``cols[i]`` holds coordinate i."""
        if len(cols) != self.n:
            raise DimensionMismatch(f"got {len(cols)} coordinate columns, expected {self.n}")
        size = len(cols[0]) if cols else 1
        dtype = np.int64 if self.p < (1 << 31) else object
        p = self.p
        total = np.zeros(size, dtype=dtype)
        powers: Dict[Tuple[int, int], np.ndarray] = {}

        def power(i: int, e: int) -> np.ndarray:
            key = (i, e)
            if key not in powers:
                if e == 1:
                    powers[key] = np.asarray(cols[i], dtype=dtype) % p
                else:
                    half = power(i, e // 2)
                    sq = half * half % p
                    powers[key] = sq * power(i, 1) % p if e % 2 else sq
            return powers[key]

        for mu, c in self.terms.items():
            term = np.full(size, c, dtype=dtype)
            for i, e in enumerate(mu):
                if e:
                    term = term * power(i, e) % p
            total = (total + term) % p
        return total

    def substitute_linear(self, rows: Sequence[Sequence[int]]) -> "MultiPoly":
        """Compose with the linear map X -> A X (``rows`` is A, n x n)."""
        p, n = self.p, self.n
        images = [
            MultiPoly(p, n, {tuple(int(i == j) for i in range(n)): a for j, a in enumerate(row)})
            for row in rows
        ]
        out = MultiPoly.zero(p, n)
        for mu, c in self.terms.items():
            term = MultiPoly.constant(p, n, c)
            for img, e in zip(images, mu):
                if e:
                    term = term * img**e
            out = out + term
        return out

    # serialization -----------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "terms": [{"c": c, "e": list(mu)} for mu, c in self.terms.items()],
        }

    @classmethod
    def from_json(cls, obj: dict, p: Optional[int] = None, n: Optional[int] = None) -> "MultiPoly":
        try:
            p = int(obj.get("p", p))
            n = int(obj.get("n", n))
            terms: Dict[Exponent, int] = {}
            for t in obj["terms"]:
                mu = tuple(int(e) for e in t["e"])
                terms[mu] = terms.get(mu, 0) + int(t["c"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed polynomial JSON: {exc}") from exc
        PrimeField(p)
        return cls(p, n, terms)


def monomial_at(n: int, k: int) -> Exponent:
    """``monomials(n, d)[k]`` for any d large enough, without building the list."""
    if n == 0:
        return ()
    t = 0
    while k >= math.comb(t + n - 1, n - 1):
        k -= math.comb(t + n - 1, n - 1)
        t += 1
    out = []
    for m in range(n, 1, -1):
        # exponents of degree t in m variables, first entry running t, t-1, ..., 0
        first = t
        while k >= math.comb(t - first + m - 2, m - 2):
            k -= math.comb(t - first + m - 2, m - 2)
            first -= 1
        out.append(first)
        t -= first
    out.append(t)
    return tuple(out)


def random_poly(p: int, n: int, d: int, rng, nterms: Optional[int] = None) -> MultiPoly:
    """Random polynomial of degree <= d.  ``nterms=None`` means dense."""
    size = math.comb(d + n, n) if d >= 0 else 0
    if nterms is None or nterms >= size:
        return MultiPoly(p, n, {mu: rng.below(p) for mu in monomials(n, d)})
    chosen = [monomial_at(n, rng.below(size)) for _ in range(nterms)]
    return MultiPoly(p, n, {mu: rng.below(p) for mu in chosen})


@dataclass(frozen=True)
class DegreeProfile:
    """Degree list (d_1..d_m) of a polynomial list in ``n`` variables."""

    n: int
    degrees: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        if self.n < 0 or not self.degrees or any(d < 0 for d in self.degrees):
            raise InvalidInput("degree profile needs n >= 0 and a nonempty list of degrees >= 0")

    @property
    def m(self) -> int:
        return len(self.degrees)

    @property
    def d(self) -> int:
        return max(self.degrees)

    @property
    def dimension(self) -> int:
        """N_(d) = sum_i C(d_i + n, n), exact."""
        return sum(math.comb(di + self.n, self.n) for di in self.degrees)


# ---------------------------------------------------------------------------
# straight-line programs

_BINARY = ("add", "sub", "mul")


@dataclass(frozen=True)
class Circuit:
    """Straight-line program with nodes ``('in', i)``, ``('const', v)`` and
    ``(op, a, b)`` for op in add/sub/mul, each referencing earlier nodes."""

    p: int
    n: int
    nodes: Tuple[tuple, ...]
    outputs: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(tuple(nd) for nd in self.nodes))
        object.__setattr__(self, "outputs", tuple(int(o) for o in self.outputs))
        for k, node in enumerate(self.nodes):
            op = node[0]
            if op == "in":
                if not 0 <= node[1] < self.n:
                    raise InvalidInput(f"node {k}: input index {node[1]} out of range")
            elif op == "const":
                pass
            elif op in _BINARY:
                if not (0 <= node[1] < k and 0 <= node[2] < k):
                    raise InvalidInput(f"node {k}: operands must reference earlier nodes")
            else:
                raise InvalidInput(f"node {k}: unknown op {op!r}")
        for o in self.outputs:
            if not 0 <= o < len(self.nodes):
                raise InvalidInput(f"output index {o} out of range")

    @property
    def m(self) -> int:
        return len(self.outputs)

    @property
    def op_count(self) -> int:
        return sum(1 for node in self.nodes if node[0] in _BINARY)

    def evaluate(self, x: Sequence[int]) -> Tuple[int, ...]:
        if len(x) != self.n:
            raise DimensionMismatch(f"point has {len(x)} coordinates, expected {self.n}")
        p = self.p
        vals: List[int] = []
        for node in self.nodes:
            op = node[0]
            if op == "in":
                vals.append(x[node[1]] % p)
            elif op == "const":
                vals.append(node[1] % p)
            elif op == "add":
                vals.append((vals[node[1]] + vals[node[2]]) % p)
            elif op == "sub":
                vals.append((vals[node[1]] - vals[node[2]]) % p)
            else:
                vals.append(vals[node[1]] * vals[node[2]] % p)
        return tuple(vals[o] for o in self.outputs)

    @classmethod
    def from_polys(cls, polys: Sequence[MultiPoly]) -> "Circuit":
        """Compile a polynomial list term by term, sharing variable powers."""
        if not polys:
            raise InvalidInput("need at least one polynomial")
        p, n = polys[0].p, polys[0].n
        nodes: List[tuple] = []
        cache: Dict[tuple, int] = {}

        def emit(node: tuple) -> int:
            if node not in cache:
                nodes.append(node)
                cache[node] = len(nodes) - 1
            return cache[node]

        def power(i: int, e: int) -> int:
            if e == 1:
                return emit(("in", i))
            half = power(i, e // 2)
            sq = emit(("mul", half, half))
            return emit(("mul", sq, emit(("in", i)))) if e % 2 else sq

        outputs = []
        for f in polys:
            if f.p != p or f.n != n:
                raise DimensionMismatch("polynomials live in different rings")
            acc = None
            for mu, c in f.terms.items():
                term = None
                for i, e in enumerate(mu):
                    if e:
                        node = power(i, e)
                        term = node if term is None else emit(("mul", term, node))
                if term is None:
                    term = emit(("const", c))
                elif c != 1:
                    term = emit(("mul", emit(("const", c)), term))
                acc = term if acc is None else emit(("add", acc, term))
            outputs.append(emit(("const", 0)) if acc is None else acc)
        return cls(p, n, tuple(nodes), tuple(outputs))

    def to_json(self) -> dict:
        nodes = []
        for node in self.nodes:
            if node[0] == "in":
                nodes.append({"op": "in", "i": node[1]})
            elif node[0] == "const":
                nodes.append({"op": "const", "v": node[1]})
            else:
                nodes.append({"op": node[0], "a": node[1], "b": node[2]})
        return {"p": self.p, "n": self.n, "nodes": nodes, "outputs": list(self.outputs)}

    @classmethod
    def from_json(cls, obj: dict) -> "Circuit":
        try:
            p, n = int(obj["p"]), int(obj["n"])
            nodes = []
            for nd in obj["nodes"]:
                op = nd["op"]
                if op == "in":
                    nodes.append(("in", int(nd["i"])))
                elif op == "const":
                    nodes.append(("const", int(nd["v"]) % p))
                else:
                    nodes.append((op, int(nd["a"]), int(nd["b"])))
            outputs = [int(o) for o in obj["outputs"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed circuit JSON: {exc}") from exc
        PrimeField(p)
        return cls(p, n, tuple(nodes), tuple(outputs))


def evaluate_circuit(c: Circuit, x: Sequence[int]) -> Tuple[int, ...]:
    return c.evaluate(x)


def evaluate(f: MultiPoly, x: Sequence[int]) -> int:
    return f.evaluate(x)


def evaluate_list(f, x: Sequence[int]) -> Tuple[int, ...]:
    """Evaluate a Circuit, a MultiPoly, or a sequence of MultiPoly at ``x``."""
    if isinstance(f, Circuit):
        return f.evaluate(x)
    if isinstance(f, MultiPoly):
        return (f.evaluate(x),)
    return tuple(g.evaluate(x) for g in f)


def leading_homogeneous_component(f: MultiPoly) -> MultiPoly:
    return f.leading_homogeneous_component()


def coefficient(f: MultiPoly, mu: Sequence[int]) -> int:
    return f.coefficient(mu)


def polys_from_json(obj, p: Optional[int] = None, n: Optional[int] = None) -> List[MultiPoly]:
    """Accept a single polynomial object or a list of them."""
    items: Iterable = obj if isinstance(obj, list) else [obj]
    return [MultiPoly.from_json(o, p, n) for o in items]
