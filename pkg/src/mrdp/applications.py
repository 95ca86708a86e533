"""End-to-end drivers: group-testing cost models and multi-queue batch costing."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .divergence import PartitionModel, rd_chain, rd_partition
from .errors import ConstraintError, InputError
from .grading import TOL, IncrementSequence
from .poset import VectorIndex
from .solvers import (
    KnotConstraints,
    PiecewiseLinearGF,
    TypeDistribution,
    QueueTypeParams,
    solve_cardinality_dependent,
    solve_interpolation,
    solve_type_distribution,
)


@dataclass(frozen=True)
class UpdateStep:
    knots: KnotConstraints
    model: PiecewiseLinearGF


@dataclass(frozen=True)
class GroupTestPlan:
    N: int
    M: float
    cost_fn: PiecewiseLinearGF
    partition: tuple[int, ...] | None = None
    history: tuple[UpdateStep, ...] = field(default=(), repr=False)

    def __post_init__(self) -> None:
        if self.cost_fn.n != self.N:
            raise ConstraintError(f"cost model covers sizes 0..{self.cost_fn.n}, population is {self.N}")
        if self.cost_fn(0) != 0.0 or abs(self.cost_fn(self.N) - self.M) > TOL:
            raise ConstraintError("cost model must satisfy cost(0) = 0 and cost(N) = M")
        if self.partition is not None and sum(self.partition) != self.N:
            raise ConstraintError(f"partition sizes sum to {sum(self.partition)}, not N={self.N}")

    def cost(self, size: int) -> float:
        return self.cost_fn(size)


def group_test_null(N: int, M: float) -> GroupTestPlan:
    """Linear cost |w| M / N, the least-presuming model given only N and the budget."""
    if isinstance(N, bool) or not isinstance(N, int) or N < 1:
        raise InputError(f"population size must be a positive integer, got {N!r}")
    if not M > 0:
        raise InputError(f"budget must be positive, got {M}")
    model = solve_cardinality_dependent(N, float(M))
    return GroupTestPlan(N, float(M), model, None, (UpdateStep(model.knots, model),))


def knots_from_observations(
    N: int, M: float, observations: Sequence[tuple[int, float]]
) -> KnotConstraints:
    """Merge observed (group size, cost) pairs with the endpoints (0, 0), (N, M).

    Repeated sizes must agree; conflicting costs for one size are rejected
    because the cardinality model assigns a single cost per size.
    """
    fixed: dict[int, float] = {0: 0.0, N: float(M)}
    for size, cost in observations:
        if isinstance(size, bool) or not isinstance(size, int) or not 0 <= size <= N:
            raise ConstraintError(f"group size {size!r} outside 0..{N}")
        cost = float(cost)
        if size in fixed and abs(fixed[size] - cost) > TOL:
            raise ConstraintError(
                f"conflicting costs for group size {size}: {fixed[size]} vs {cost}; "
                "a size-dependent cost model cannot hold both"
            )
        fixed[size] = cost
    return KnotConstraints(tuple(sorted(fixed.items())))


def group_test_update(plan: GroupTestPlan, fixed_costs: KnotConstraints) -> GroupTestPlan:
    (p0, v0), (pn, vn) = fixed_costs.knots[0], fixed_costs.knots[-1]
    if p0 != 0 or v0 != 0.0 or pn != plan.N or abs(vn - plan.M) > TOL:
        raise ConstraintError(f"fixed costs must include (0, 0) and ({plan.N}, {plan.M})")
    model = solve_interpolation(plan.N, fixed_costs)
    return GroupTestPlan(
        plan.N, plan.M, model, plan.partition, plan.history + (UpdateStep(fixed_costs, model),)
    )


@dataclass(frozen=True)
class PartitionCostReport:
    groups: tuple[tuple[int, float], ...]
    weights: tuple[float, ...]
    rd: float
    note: str = "weights are group costs divided by the total budget M; null weights are 1"


def group_test_partition_costs(plan: GroupTestPlan, partition: Sequence[int]) -> PartitionCostReport:
    sizes = tuple(partition)
    if not sizes or any(isinstance(s, bool) or not isinstance(s, int) or s < 1 for s in sizes):
        raise InputError(f"group sizes must be positive integers, got {list(sizes)}")
    if sum(sizes) != plan.N:
        raise ConstraintError(f"group sizes sum to {sum(sizes)}, population is {plan.N}")
    groups = tuple((s, plan.cost(s)) for s in sizes)
    weights = tuple(c / plan.M for _, c in groups)
    model = PartitionModel.singletons(weights)
    return PartitionCostReport(groups, weights, rd_partition(model))


@dataclass(frozen=True)
class QueueChain:
    costs: tuple[float, ...]

    def __post_init__(self) -> None:
        costs = tuple(float(c) for c in self.costs)
        if len(costs) < 2:
            raise InputError("a queue needs capacity >= 1 (at least two cost values)")
        for i, (a, b) in enumerate(zip(costs, costs[1:])):
            if a - b > TOL:
                raise InputError(f"queue cost must not decrease: F({i})={a} > F({i + 1})={b}")
        object.__setattr__(self, "costs", costs)

    @property
    def capacity(self) -> int:
        return len(self.costs) - 1

    @property
    def m(self) -> float:
        return self.costs[0]

    @property
    def M(self) -> float:
        return self.costs[-1]

    def divergence_from_natural(self) -> float:
        f = tuple(b - a for a, b in zip(self.costs, self.costs[1:]))
        return rd_chain(IncrementSequence(f, tuple([1.0] * len(f))))


@dataclass(frozen=True)
class QueueBundleModel:
    queues: tuple[QueueChain, ...]

    def __post_init__(self) -> None:
        queues = tuple(q if isinstance(q, QueueChain) else QueueChain(tuple(q)) for q in self.queues)
        if not queues:
            raise InputError("need at least one queue")
        object.__setattr__(self, "queues", queues)

    @property
    def capacities(self) -> tuple[int, ...]:
        return tuple(q.capacity for q in self.queues)


def batch_cost(
    model: QueueBundleModel,
    batch: VectorIndex | Sequence[int],
    type_probs: TypeDistribution | Sequence[float] | None = None,
) -> float:
    coords = batch.coords if isinstance(batch, VectorIndex) else tuple(batch)
    if len(coords) != len(model.queues):
        raise InputError(f"batch has {len(coords)} coordinates, model has {len(model.queues)} queues")
    for k, (i, q) in enumerate(zip(coords, model.queues)):
        if not 0 <= i <= q.capacity:
            raise ConstraintError(f"batch takes {i} from queue {k}, capacity is {q.capacity}")
    parts = [q.costs[i] for i, q in zip(coords, model.queues)]
    if type_probs is None:
        return math.fsum(parts)
    p = type_probs.p if isinstance(type_probs, TypeDistribution) else tuple(type_probs)
    if len(p) != len(parts):
        raise InputError("need one type probability per queue")
    return math.fsum(pk * c for pk, c in zip(p, parts))


def infer_type_distribution(model: QueueBundleModel) -> TypeDistribution:
    D = tuple(q.divergence_from_natural() for q in model.queues)
    spans = tuple(q.M - q.m for q in model.queues)
    for k, s in enumerate(spans):
        if not s > 0:
            raise InputError(f"queue {k} has a degenerate cost span (M_k = m_k)")
    return solve_type_distribution(QueueTypeParams(D, spans))
