"""Deciding "Suite Sécante" by evaluating the input at random grid points.

The procedure is kept exactly as stated: with L = 6 dim(Omega) and
R = max(floor((6(d+1))^2), floor(deg^(2/dim))), draw L points of
{1..R}^n and answer No iff f vanishes at every one of them.  The harness
measures what that rule does on inputs whose true status is known by
construction, including the classes where it disagrees with the truth.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .bounds import CtsParameters, LogProb, cts_params, secante_error_bound
from .errors import DegreeTooLarge, DimensionMismatch, FieldTooSmall, InvalidInput
from .field import Point, Rng, sample_grid_point
from .linalg import rank
from .poly import Circuit, DegreeProfile, MultiPoly

SECANT_COORDINATE = "SECANT_COORDINATE"
ZERO_LIST = "ZERO_LIST"
REPEATED_EQUATION = "REPEATED_EQUATION"
INCONSISTENT_CONSTANT = "INCONSISTENT_CONSTANT"
CLASSES = (SECANT_COORDINATE, ZERO_LIST, REPEATED_EQUATION, INCONSISTENT_CONSTANT)


@dataclass(frozen=True)
class SecanteInput:
    f: Union[Circuit, Tuple[MultiPoly, ...]]
    profile: DegreeProfile
    dim_omega: int
    deg_omega: int

    def __post_init__(self):
        if not isinstance(self.f, Circuit):
            object.__setattr__(self, "f", tuple(self.f))
        if self.m != self.profile.m:
            raise DimensionMismatch(f"{self.m} polynomials but a profile of length {self.profile.m}")
        if self.n != self.profile.n:
            raise DimensionMismatch(f"input has n={self.n}, profile has n={self.profile.n}")
        if self.m > self.n:
            raise DimensionMismatch(f"need m <= n, got m={self.m}, n={self.n}")
        if self.dim_omega < 1 or self.deg_omega < 1:
            raise InvalidInput("declared dim and deg_lci must be >= 1")
        if not isinstance(self.f, Circuit):
            for g, di in zip(self.f, self.profile.degrees):
                if g.degree is not None and g.degree > di:
                    raise DegreeTooLarge(f"degree {g.degree} exceeds the declared {di}")

    @property
    def p(self) -> int:
        return self.f.p if isinstance(self.f, Circuit) else self.f[0].p

    @property
    def n(self) -> int:
        return self.f.n if isinstance(self.f, Circuit) else self.f[0].n

    @property
    def m(self) -> int:
        return self.f.m if isinstance(self.f, Circuit) else len(self.f)

    @property
    def circuit(self) -> Circuit:
        return self.f if isinstance(self.f, Circuit) else Circuit.from_polys(self.f)

    def evaluate(self, x: Point) -> Tuple[int, ...]:
        if isinstance(self.f, Circuit):
            return self.f.evaluate(x)
        return tuple(g.evaluate(x) for g in self.f)

    @classmethod
    def dense(cls, polys: Sequence[MultiPoly], degrees: Sequence[int]) -> "SecanteInput":
        """Omega = the whole space P_(d): dim = N_(d), deg_lci = 1."""
        profile = DegreeProfile(polys[0].n, tuple(degrees))
        return cls(tuple(polys), profile, profile.dimension, 1)


@dataclass
class SecanteTranscript:
    params: CtsParameters
    points: List[Point]
    values: List[Tuple[int, ...]]
    verdict: str
    bound: LogProb
    operations: int

    @property
    def error_bound_log10(self) -> float:
        return self.bound.log10_fail

    def to_json(self) -> dict:
        return {
            "schema": "ctslab/secante/v1",
            "L": self.params.L,
            "R": self.params.R,
            "points": [list(x) for x in self.points],
            "values": [list(v) for v in self.values],
            "verdict": self.verdict,
            "error_bound_log10": self.error_bound_log10,
            "error_bound_ln": self.bound.log_fail,
            "operations": self.operations,
        }


def error_bound(dim_omega: int, deg_omega: int, m: int) -> float:
    """log10 of 1/(deg e^(6 m dim))."""
    return secante_error_bound(dim_omega, deg_omega, m).log10_fail


def decide_secante(inp: SecanteInput, rng: Rng) -> SecanteTranscript:
    params = cts_params(inp.dim_omega, inp.deg_omega, inp.profile.d)
    if inp.p <= params.R:
        raise FieldTooSmall(f"p = {inp.p} must exceed R = {params.R}")
    points = [sample_grid_point(params.R, inp.n, rng, inp.p) for _ in range(params.L)]
    return decide_on_points(inp, points, params)


def decide_on_points(inp: SecanteInput, points: Sequence[Point], params: Optional[CtsParameters] = None) -> SecanteTranscript:
    """The decision step alone: No iff f vanishes at every given point."""
    if params is None:
        params = CtsParameters(max(len(points), 1), 1)
    values = [inp.evaluate(x) for x in points]
    all_zero = all(not any(v) for v in values)
    T = inp.f.op_count if isinstance(inp.f, Circuit) else sum(len(g.terms) for g in inp.f)
    return SecanteTranscript(
        params=params,
        points=list(points),
        values=values,
        verdict="No" if all_zero else "Yes",
        bound=secante_error_bound(inp.dim_omega, inp.deg_omega, inp.m),
        operations=len(points) * (T + inp.n),
    )


def zero_test(f: MultiPoly, d: int, rng: Rng) -> SecanteTranscript:
    """m = 1: the same procedure is a probabilistic zero test on P_d.

    Verdict "No" means f was judged identically zero.
    """
    return decide_secante(SecanteInput.dense([f], [d]), rng)


# ------------------------------------------------------------------ harness

@dataclass(frozen=True)
class HarnessCase:
    """``make`` builds the input for one trial from that trial's rng."""

    tag: str
    secant: bool
    make: Callable[[Rng], SecanteInput]


def random_invertible(p: int, n: int, rng: Rng) -> List[List[int]]:
    while True:
        a = [[rng.below(p) for _ in range(n)] for _ in range(n)]
        if rank(a, p) == n:
            return a


def default_cases(p: int = 10007, n: int = 3) -> List[HarnessCase]:
    """One engineered case per class (two for INCONSISTENT_CONSTANT)."""
    X = [MultiPoly.variable(p, n, i) for i in range(n)]
    zero = MultiPoly.zero(p, n)
    one = MultiPoly.constant(p, n, 1)

    def secant(rng: Rng) -> SecanteInput:
        a = random_invertible(p, n, rng)
        return SecanteInput.dense([X[0].substitute_linear(a), X[1].substitute_linear(a)], [1, 1])

    def fixed(polys, degrees):
        inp = SecanteInput.dense(polys, degrees)
        return lambda rng: inp

    return [
        HarnessCase(SECANT_COORDINATE, True, secant),
        HarnessCase(ZERO_LIST, False, fixed([zero, zero], [1, 1])),
        HarnessCase(REPEATED_EQUATION, False, fixed([X[0], X[0]], [1, 1])),
        HarnessCase(INCONSISTENT_CONSTANT, False, fixed([X[0], X[0] + 1], [1, 1])),
        HarnessCase(INCONSISTENT_CONSTANT, False, fixed([one], [1])),
    ]


def truth_harness(
    cases: Sequence[HarnessCase],
    trials: int,
    seed: int = 0,
    threads: int = 1,
) -> dict:
    """Per-class Yes/No counts against the constructed ground truth.

    Trial t of case c uses ``Rng(seed).child(c).child(t)``; results do not
    depend on ``threads``.
    """
    master = Rng(seed)

    def run(c: int) -> List[str]:
        case = cases[c]
        base = master.child(c)
        out = []
        for t in range(trials):
            rng = base.child(t)
            out.append(decide_secante(case.make(rng), rng).verdict)
        return out

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            verdicts = list(pool.map(run, range(len(cases))))
    else:
        verdicts = [run(c) for c in range(len(cases))]

    classes: Dict[str, dict] = {}
    for case, vs in zip(cases, verdicts):
        entry = classes.setdefault(
            case.tag, {"cases": 0, "trials": 0, "yes": 0, "no": 0, "agree": 0, "truth": None}
        )
        truth = "Yes" if case.secant else "No"
        if entry["truth"] not in (None, truth):
            raise InvalidInput(f"class {case.tag} mixes secant and non-secant cases")
        entry["truth"] = truth
        entry["cases"] += 1
        entry["trials"] += len(vs)
        entry["yes"] += vs.count("Yes")
        entry["no"] += vs.count("No")
        entry["agree"] += vs.count(truth)
    for entry in classes.values():
        total = entry["trials"] or 1
        entry["yes_rate"] = entry["yes"] / total
        entry["no_rate"] = entry["no"] / total
        entry["agreement_rate"] = entry.pop("agree") / total
        entry["divergence"] = entry["agreement_rate"] < 1.0
    return {"schema": "ctslab/secante-harness/v1", "seed": seed, "trials": trials, "classes": classes}


def input_from_json(obj: dict, dim_omega: Optional[int] = None, deg_omega: Optional[int] = None) -> SecanteInput:
    """{"polys": [...]} or {"circuit": {...}}, plus "degrees" and optional dim/deg."""
    try:
        degrees = tuple(int(x) for x in obj["degrees"])
        if "circuit" in obj:
            f = Circuit.from_json(obj["circuit"])
        else:
            f = tuple(MultiPoly.from_json(g, obj.get("p"), obj.get("n")) for g in obj["polys"])
        n = f.n if isinstance(f, Circuit) else f[0].n
        profile = DegreeProfile(n, degrees)
        dim = dim_omega if dim_omega is not None else int(obj.get("dim", profile.dimension))
        deg = deg_omega if deg_omega is not None else int(obj.get("deg_lci", 1))
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InvalidInput(f"malformed secante input: {exc}") from exc
    return SecanteInput(f, profile, dim, deg)
