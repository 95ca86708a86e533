"""Grading functions: order-comonotonic real assignments on a poset."""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, Sequence

from .errors import (
    ComonotonicityError,
    DegenerateRangeError,
    InputError,
    MissingValueError,
    NotEvenSidedError,
    PosetError,
)
from .poset import Chain, ChainBundle, Poset, classify, lowest, subset_id

TOL = 1e-12


@dataclass(frozen=True)
class GradingFunction:
    values: Mapping[str, float]
    m: float
    M: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", MappingProxyType(dict(self.values)))

    @classmethod
    def from_values(cls, values: Mapping[str, float]) -> GradingFunction:
        vals = {k: float(v) for k, v in values.items()}
        if not vals:
            raise InputError("grading function needs at least one value")
        return cls(vals, min(vals.values()), max(vals.values()))

    def __getitem__(self, element: str) -> float:
        return self.values[element]

    def __contains__(self, element: object) -> bool:
        return element in self.values

    @property
    def span(self) -> float:
        return self.M - self.m

    def shifted(self, c: float) -> GradingFunction:
        return GradingFunction({k: v + c for k, v in self.values.items()}, self.m + c, self.M + c)

    def scaled(self, c: float) -> GradingFunction:
        if c <= 0:
            raise InputError(f"scale factor must be positive, got {c}")
        return GradingFunction({k: v * c for k, v in self.values.items()}, self.m * c, self.M * c)


@dataclass(frozen=True)
class IncrementSequence:
    """Per-edge increments of two grading functions along one chain.

    ``undefined`` marks the inadmissible case f_k > 0 with g_k = 0; the
    sequence is still built so callers can report which chain failed.
    """

    f: tuple[float, ...]
    g: tuple[float, ...]

    def __post_init__(self) -> None:
        f = tuple(_clamp_increment(x) for x in self.f)
        g = tuple(_clamp_increment(x) for x in self.g)
        if len(f) != len(g):
            raise InputError(f"increment sequences differ in length ({len(f)} vs {len(g)})")
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "g", g)

    @property
    def undefined(self) -> bool:
        return any(fk > 0 and gk == 0 for fk, gk in zip(self.f, self.g))

    def __len__(self) -> int:
        return len(self.f)


def _clamp_increment(x: float) -> float:
    x = float(x)
    if x != x:
        raise InputError("increment is NaN")
    if x < 0:
        if x < -TOL:
            raise InputError(f"increments must be non-negative, got {x}")
        return 0.0
    return x


def validate_grading(
    poset: Poset, values: Mapping[str, float], strict: bool = False, tol: float = TOL
) -> GradingFunction:
    for e in poset.elements:
        if e not in values:
            raise MissingValueError(f"no value given for element {e!r}")
    extra = sorted(set(values) - set(poset.elements))
    if extra:
        raise MissingValueError(f"values given for unknown element(s) {extra[:5]}")
    vals = {e: float(values[e]) for e in poset.elements}
    for lo, hi in sorted(poset.covers):
        a, b = vals[lo], vals[hi]
        if strict:
            if not b - a > tol:
                raise ComonotonicityError((lo, hi), a, b, strict=True)
        elif a - b > tol:
            raise ComonotonicityError((lo, hi), a, b)
    return GradingFunction.from_values(vals)


def natural_gf(poset: Poset) -> GradingFunction:
    """Unit increment on every cover edge, zero at the lowest element."""
    cls = classify(poset)
    if not cls.is_even_sided:
        raise NotEvenSidedError(
            "a natural grading function needs an even-sided [l-g] poset "
            f"(has_lowest={cls.has_lowest}, has_greatest={cls.has_greatest})"
        )
    grade = {lowest(poset): 0}
    for e in poset.topological_order():
        for c in poset.successors[e]:
            grade[c] = grade[e] + 1
    return GradingFunction.from_values(grade)


def increments_along(chain: Chain, F: GradingFunction, G: GradingFunction) -> IncrementSequence:
    for e in chain.path:
        if e not in F or e not in G:
            raise MissingValueError(f"chain element {e!r} missing from a grading function")
    f = [F[b] - F[a] for a, b in chain.edges]
    g = [G[b] - G[a] for a, b in chain.edges]
    return IncrementSequence(tuple(f), tuple(g))


def normalize(F: GradingFunction) -> GradingFunction:
    span = F.M - F.m
    if not span > 0:
        raise DegenerateRangeError("cannot normalize a constant grading function (M == m)")
    return GradingFunction({k: (v - F.m) / span for k, v in F.values.items()}, 0.0, 1.0)


def additive_gf(weights: Mapping[str, float], poset: Poset | None = None) -> GradingFunction:
    """Set function F(w) = sum of atom weights over w, on the power set of the atoms.

    Identifiers follow the power-set convention (sorted, comma-joined).
    """
    atoms = sorted(weights)
    for a in atoms:
        if float(weights[a]) < 0:
            raise InputError(f"atom weight for {a!r} is negative")
    values = {}
    for mask in range(1 << len(atoms)):
        members = [atoms[i] for i in range(len(atoms)) if mask >> i & 1]
        values[subset_id(members)] = sum(float(weights[a]) for a in members)
    if poset is not None:
        return validate_grading(poset, values)
    return GradingFunction.from_values(values)


def separable_gf(bundle: ChainBundle, components: Sequence[Sequence[float]]) -> GradingFunction:
    """F(i) = sum_k F_k(i_k) on the bundle, from per-chain value tables."""
    if len(components) != bundle.K:
        raise InputError(f"need {bundle.K} component tables, got {len(components)}")
    for k, (n, comp) in enumerate(zip(bundle.dims, components)):
        if len(comp) != n + 1:
            raise InputError(f"component {k} needs {n + 1} values, got {len(comp)}")
        for i, (a, b) in enumerate(zip(comp, comp[1:])):
            if a - b > TOL:
                raise ComonotonicityError((f"{k}:{i}", f"{k}:{i + 1}"), a, b)
    values = {
        idx.id: sum(float(components[k][i]) for k, i in enumerate(idx.coords))
        for idx in bundle.indices()
    }
    return GradingFunction.from_values(values)


def chain_gf(values: Sequence[float], ids: Sequence[str] | None = None) -> GradingFunction:
    """Grading function on a chain given as a value list (identifiers default to "0".."n")."""
    if ids is None:
        ids = [str(i) for i in range(len(values))]
    if len(ids) != len(values):
        raise PosetError("identifier and value lists differ in length")
    for i, (a, b) in enumerate(zip(values, values[1:])):
        if a - b > TOL:
            raise ComonotonicityError((ids[i], ids[i + 1]), a, b)
    return GradingFunction.from_values(dict(zip(ids, values)))
