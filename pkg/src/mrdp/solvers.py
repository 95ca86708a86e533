"""Closed-form maximizers of relative divergence.

Every solver returns the maximizing object together with the divergence
it attains, evaluated directly from increments rather than from a
printed closed form, so the two can be compared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .divergence import rd_chain
from .errors import ConstraintError, InputError, RootBracketError
from .grading import TOL, GradingFunction, IncrementSequence
from .poset import ChainBundle, Poset, subset_id

DEFAULT_LAMBDA_TOL = 1e-12
DEFAULT_MAX_EXPANSIONS = 200


@dataclass(frozen=True)
class KnotConstraints:
    """Fixed values F(n_k) = m_k on the chain 0..n, first knot at 0, last at n."""

    knots: tuple[tuple[int, float], ...]

    def __post_init__(self) -> None:
        knots = []
        for pos, val in self.knots:
            if isinstance(pos, float) and pos.is_integer():
                pos = int(pos)
            if isinstance(pos, bool) or not isinstance(pos, int):
                raise ConstraintError(f"knot positions must be integers, got {pos!r}")
            val = float(val)
            if not math.isfinite(val):
                raise ConstraintError(f"knot value at {pos} is not finite")
            knots.append((pos, val))
        if len(knots) < 2:
            raise ConstraintError("need at least the two endpoint knots")
        if knots[0][0] != 0:
            raise ConstraintError(f"first knot must sit at position 0, got {knots[0][0]}")
        for (p0, v0), (p1, v1) in zip(knots, knots[1:]):
            if p1 <= p0:
                raise ConstraintError(f"knot positions must strictly increase ({p0} then {p1})")
            if v0 - v1 > TOL:
                raise ConstraintError(
                    f"knot values must be non-decreasing: F({p0})={v0} > F({p1})={v1}"
                )
        object.__setattr__(self, "knots", tuple(knots))

    @classmethod
    def endpoints(cls, n: int, m: float, M: float) -> KnotConstraints:
        return cls(((0, m), (n, M)))

    @property
    def n(self) -> int:
        return self.knots[-1][0]

    @property
    def is_strict(self) -> bool:
        return all(v1 > v0 for (_, v0), (_, v1) in zip(self.knots, self.knots[1:]))


@dataclass(frozen=True)
class Segment:
    lo: int  # exclusive
    hi: int  # inclusive
    slope: float
    intercept: float


@dataclass(frozen=True)
class PiecewiseLinearGF:
    segments: tuple[Segment, ...]
    knots: KnotConstraints
    attained_rd: float
    reference_rd: float

    @property
    def n(self) -> int:
        return self.knots.n

    def __call__(self, i: int) -> float:
        if not 0 <= i <= self.n:
            raise InputError(f"position {i} outside chain 0..{self.n}")
        for pos, val in self.knots.knots:
            if pos == i:
                return val
        for k, seg in enumerate(self.segments):
            if seg.lo < i <= seg.hi:
                start = self.knots.knots[k][1]
                return start + seg.slope * (i - seg.lo)
        raise AssertionError("segments do not cover the chain")

    def values(self) -> list[float]:
        return [self(i) for i in range(self.n + 1)]

    @property
    def slopes(self) -> tuple[float, ...]:
        return tuple(s.slope for s in self.segments)

    def increments(self) -> list[float]:
        v = self.values()
        return [b - a for a, b in zip(v, v[1:])]

    def as_chain_gf(self) -> GradingFunction:
        return GradingFunction.from_values({str(i): v for i, v in enumerate(self.values())})


def solve_uniform(n: int) -> tuple[tuple[float, ...], float]:
    """Maximum-entropy distribution on n outcomes and its entropy ln n."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InputError(f"n must be a positive integer, got {n!r}")
    return tuple([1.0 / n] * n), math.log(n)


def solve_interpolation(n: int, constraints: KnotConstraints) -> PiecewiseLinearGF:
    """Divergence-maximizing grading function on 0..n through the given knots.

    Between consecutive knots the rise is spread evenly over the edges,
    which maximizes -sum f ln f for a fixed sum; the null is the natural
    (unit-increment) function.
    """
    if constraints.n != n:
        raise ConstraintError(f"last knot is at {constraints.n}, chain length is {n}")
    segments = []
    reference = []
    for (p0, v0), (p1, v1) in zip(constraints.knots, constraints.knots[1:]):
        dm, dn = max(v1 - v0, 0.0), p1 - p0
        slope = dm / dn
        segments.append(Segment(p0, p1, slope, v0 - slope * p0))
        if dm > 0:
            reference.append(dm * math.log(dn) - dm * math.log(dm))
    pl = PiecewiseLinearGF(tuple(segments), constraints, 0.0, math.fsum(reference))
    inc = pl.increments()
    attained = rd_chain(IncrementSequence(tuple(inc), tuple([1.0] * len(inc))))
    return PiecewiseLinearGF(pl.segments, constraints, attained, pl.reference_rd)


@dataclass(frozen=True)
class ScalarSolution:
    x: float
    value: float
    derivative: float | None
    curvature: float | None
    interval: tuple[float, float]


def conditional_increments(x: float, p1: float, p2: float) -> IncrementSequence:
    """Chain {empty, A&B, A}: F = (0, x, 1), G = (0, p1, p2)."""
    return IncrementSequence((x, 1.0 - x), (p1, p2 - p1))


def solve_conditional(p1: float, p2: float) -> ScalarSolution:
    """Maximize q(x) = -x ln(x/p1) - (1-x) ln((1-x)/(p2-p1)); the answer is p1/p2."""
    if not (0 < p1 <= p2 <= 1):
        raise InputError(f"need 0 < p1 <= p2 <= 1, got p1={p1}, p2={p2}")
    if p1 == p2:
        x = 1.0
        return ScalarSolution(x, rd_chain(conditional_increments(x, p1, p2)), None, None, (0.0, 1.0))
    x = p1 / p2
    q = rd_chain(conditional_increments(x, p1, p2))
    dq = math.log1p(-x) - math.log(x) + math.log(p1) - math.log(p2 - p1)
    d2q = -1.0 / ((1.0 - x) * x)
    return ScalarSolution(x, q, dq, d2q, (0.0, 1.0))


def independence_increments(x: float, p1: float, p2: float) -> IncrementSequence:
    """Chain {empty, A&B, A, A|B, U} against the index function."""
    return IncrementSequence((x, p1 - x, p2 - x, 1.0 - p1 - p2 + x), (1.0, 1.0, 1.0, 1.0))


def independence_poset(
    p1: float, p2: float, x: float
) -> tuple[Poset, GradingFunction, GradingFunction]:
    """Event poset {empty, A&B, A, B, A|B, U} with probability F and index G."""
    elements = ("0", "AB", "A", "B", "AuB", "U")
    covers = frozenset(
        [("0", "AB"), ("AB", "A"), ("AB", "B"), ("A", "AuB"), ("B", "AuB"), ("AuB", "U")]
    )
    F = GradingFunction.from_values(
        {"0": 0.0, "AB": x, "A": p1, "B": p2, "AuB": p1 + p2 - x, "U": 1.0}
    )
    G = GradingFunction.from_values({"0": 0, "AB": 1, "A": 2, "B": 2, "AuB": 3, "U": 4})
    return Poset(elements, covers), F, G


def solve_independence(p1: float, p2: float) -> ScalarSolution:
    """Maximize d(x), the divergence on either maximal event chain; the answer is p1*p2."""
    if not (0 < p1 < 1 and 0 < p2 < 1):
        raise InputError(f"need p1, p2 in (0, 1), got p1={p1}, p2={p2}")
    lo, hi = max(0.0, p1 + p2 - 1.0), min(p1, p2)
    x = p1 * p2
    if not lo < x < hi:
        raise ConstraintError(f"p1*p2={x} fell outside the feasible interval ({lo}, {hi})")
    d = rd_chain(independence_increments(x, p1, p2))
    rest = 1.0 - p1 - p2 + x
    dd = -math.log(x) + math.log(p1 - x) + math.log(p2 - x) - math.log(rest)
    d2 = -1.0 / x - 1.0 / (p1 - x) - 1.0 / (p2 - x) - 1.0 / rest
    if not d2 < 0:
        raise ConstraintError(f"second derivative {d2} is not negative at x={x}")
    return ScalarSolution(x, d, dd, d2, (lo, hi))


def solve_cardinality_dependent(
    n: int, M: float, knots: KnotConstraints | None = None
) -> PiecewiseLinearGF:
    """Least-presuming F(|w|) on the power set of an n-set with F(empty)=0, F(X)=M."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InputError(f"ground size must be a positive integer, got {n!r}")
    if knots is None:
        knots = KnotConstraints.endpoints(n, 0.0, M)
    (p0, v0), (pn, vn) = knots.knots[0], knots.knots[-1]
    if p0 != 0 or v0 != 0.0 or pn != n or vn != float(M):
        raise ConstraintError(f"knots must start at (0, 0) and end at ({n}, {M})")
    return solve_interpolation(n, knots)


def lift_to_power_set(pl: PiecewiseLinearGF, ground: Sequence[str]) -> GradingFunction:
    """Evaluate a cardinality-dependent solution on every subset of ``ground``."""
    names = sorted(str(x) for x in ground)
    if len(names) != pl.n:
        raise InputError(f"ground has {len(names)} elements, solution is for {pl.n}")
    table = pl.values()
    values = {}
    for mask in range(1 << len(names)):
        members = [names[i] for i in range(len(names)) if mask >> i & 1]
        values[subset_id(members)] = table[len(members)]
    return GradingFunction.from_values(values)


@dataclass(frozen=True)
class HeightDependentSolution:
    grading: GradingFunction
    max_rd: float
    Q: int


def solve_height_dependent(bundle: ChainBundle, m: float, M: float) -> HeightDependentSolution:
    """F(i) = m + N(i)(M-m)/Q on the bundle, with divergence (M-m) ln Q - (M-m) ln(M-m)."""
    if not M > m:
        raise InputError(f"need M > m, got m={m}, M={M}")
    Q = bundle.Q
    span = M - m
    values = {idx.id: m + idx.height * span / Q for idx in bundle.indices()}
    max_rd = span * math.log(Q) - span * math.log(span)
    return HeightDependentSolution(GradingFunction.from_values(values), max_rd, Q)


@dataclass(frozen=True)
class QueueTypeParams:
    D: tuple[float, ...]
    spans: tuple[float, ...]

    def __post_init__(self) -> None:
        D = tuple(float(x) for x in self.D)
        spans = tuple(float(x) for x in self.spans)
        if not D:
            raise InputError("need at least one type")
        if len(D) != len(spans):
            raise InputError("D and spans must have equal length")
        if not all(math.isfinite(x) for x in D + spans):
            raise InputError("D and spans must be finite")
        if any(not s > 0 for s in spans):
            raise InputError(f"all spans M_k - m_k must be positive, got {spans}")
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "spans", spans)


@dataclass(frozen=True)
class TypeDistribution:
    p: tuple[float, ...]
    lam: float
    objective: float
    residual: float


def type_objective(p: Sequence[float], D: Sequence[float], spans: Sequence[float]) -> float:
    """sum_k p_k [D_k - span_k ln p_k], with 0 ln 0 = 0."""
    return math.fsum(
        pk * Dk - (sk * pk * math.log(pk) if pk > 0 else 0.0) for pk, Dk, sk in zip(p, D, spans)
    )


def _type_probs(lam: float, params: QueueTypeParams) -> list[float]:
    # exponent is capped only to keep exp finite while bracketing
    return [
        math.exp(min(-1.0 + (Dk - lam) / sk, 700.0)) for Dk, sk in zip(params.D, params.spans)
    ]


def _normalization_residual(lam: float, params: QueueTypeParams) -> float:
    return math.fsum(_type_probs(lam, params)) - 1.0


def solve_type_distribution(
    params: QueueTypeParams,
    tol: float = DEFAULT_LAMBDA_TOL,
    max_expansions: int = DEFAULT_MAX_EXPANSIONS,
) -> TypeDistribution:
    """Maximize sum p_k [D_k - span_k ln p_k] over the probability simplex.

    Stationarity gives p_k = exp(-1 + (D_k - lam)/span_k); lam is the root of
    the normalization residual R(lam) = sum p_k - 1, which is strictly
    decreasing, found by bracketing then bisection.
    """
    D, spans = params.D, params.spans
    if len(D) == 1:
        return TypeDistribution((1.0,), D[0] - spans[0], D[0], 0.0)

    def R(lam: float) -> float:
        return _normalization_residual(lam, params)

    lo, hi = min(D) - max(spans) * 10.0, max(D)
    width = max(hi - lo, 1.0)
    for _ in range(max_expansions):
        if R(lo) > 0:
            break
        lo -= width
        width *= 2
    else:
        raise RootBracketError(f"could not bracket lambda from below within {max_expansions} doublings")
    width = max(hi - lo, 1.0)
    for _ in range(max_expansions):
        if R(hi) < 0:
            break
        hi += width
        width *= 2
    else:
        raise RootBracketError(f"could not bracket lambda from above within {max_expansions} doublings")

    lam = 0.5 * (lo + hi)
    r = R(lam)
    while abs(r) >= tol:
        if r > 0:
            lo = lam
        else:
            hi = lam
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            # floating-point interval exhausted; keep the better endpoint
            lam = min((lo, hi), key=lambda v: abs(R(v)))
            r = R(lam)
            break
        lam = mid
        r = R(lam)
    if abs(r) > 1e-10:
        raise RootBracketError(f"normalization residual {r} could not be reduced below 1e-10")
    p = tuple(_type_probs(lam, params))
    return TypeDistribution(p, lam, type_objective(p, D, spans), r)


def align_components(
    solutions: Sequence[GradingFunction], junctions: Sequence[str]
) -> list[GradingFunction]:
    """Shift components so consecutive ones agree at their shared element.

    Component i+1 shares ``junctions[i]`` with component i; the first
    component is left as is and shifts accumulate down the sequence.
    """
    if len(junctions) != max(len(solutions) - 1, 0):
        raise InputError(f"{len(solutions)} components need {len(solutions) - 1} junctions")
    out: list[GradingFunction] = list(solutions[:1])
    for i, (nxt, j) in enumerate(zip(solutions[1:], junctions)):
        prev = out[-1]
        for name, gf in (("component %d" % i, prev), ("component %d" % (i + 1), nxt)):
            if j not in gf:
                raise InputError(f"junction {j!r} missing from {name}")
        out.append(nxt.shifted(prev[j] - nxt[j]))
    return out
