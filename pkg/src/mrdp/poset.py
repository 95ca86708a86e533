"""Finite posets stored as Hasse diagrams.

A poset is a tuple of opaque string identifiers plus its cover edges
``(lower, upper)``.  The order relation itself is never stored; it is the
reachability relation of the cover graph.  Everything that needs a
deterministic order sorts identifiers as plain strings.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import InitVar, dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import EnumerationLimitError, PosetError

DEFAULT_MAX_CHAINS = 10**6
DEFAULT_MAX_GROUND = 16
DEFAULT_MAX_BUNDLE_ELEMENTS = 10**6
MAX_CHAINS_ENV = "MRDP_MAX_CHAINS"


def default_max_chains() -> int:
    raw = os.environ.get(MAX_CHAINS_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_CHAINS
    try:
        value = int(raw)
    except ValueError:
        raise PosetError(f"{MAX_CHAINS_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise PosetError(f"{MAX_CHAINS_ENV} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class Poset:
    elements: tuple[str, ...]
    covers: frozenset[tuple[str, str]]
    validate: InitVar[bool] = True

    def __post_init__(self, validate: bool) -> None:
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(
            self, "covers", frozenset((lo, hi) for lo, hi in self.covers)
        )
        if validate:
            self._check()

    def _check(self) -> None:
        if not self.elements:
            raise PosetError("poset must have at least one element")
        for e in self.elements:
            if not isinstance(e, str):
                raise PosetError(f"element identifiers must be strings, got {e!r}")
        if len(set(self.elements)) != len(self.elements):
            seen, dups = set(), set()
            for e in self.elements:
                (dups if e in seen else seen).add(e)
            raise PosetError(f"duplicate element identifiers: {sorted(dups)}")
        known = set(self.elements)
        for lo, hi in sorted(self.covers):
            if lo not in known or hi not in known:
                missing = [x for x in (lo, hi) if x not in known]
                raise PosetError(f"cover edge ({lo!r}, {hi!r}) uses unknown element(s) {missing}")
            if lo == hi:
                raise PosetError(f"cover edge ({lo!r}, {hi!r}) is a self-loop")
        order = self._topological_order  # raises on cycles
        # bitset of strict descendants per element, filled bottom-up
        bit = {e: 1 << i for i, e in enumerate(order)}
        below: dict[str, int] = {}
        for e in reversed(order):
            acc = 0
            for c in self.successors[e]:
                acc |= bit[c] | below[c]
            below[e] = acc
        for lo, hi in sorted(self.covers):
            for c in self.successors[lo]:
                if c != hi and below[c] & bit[hi]:
                    raise PosetError(
                        f"cover edge ({lo!r}, {hi!r}) is implied by transitivity "
                        f"(via {c!r}); supply a true Hasse diagram"
                    )

    @cached_property
    def successors(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {e: [] for e in self.elements}
        for lo, hi in self.covers:
            out[lo].append(hi)
        return {e: tuple(sorted(v)) for e, v in out.items()}

    @cached_property
    def predecessors(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {e: [] for e in self.elements}
        for lo, hi in self.covers:
            out[hi].append(lo)
        return {e: tuple(sorted(v)) for e, v in out.items()}

    @cached_property
    def _topological_order(self) -> tuple[str, ...]:
        indeg = {e: len(self.predecessors[e]) for e in self.elements}
        ready = sorted(e for e, d in indeg.items() if d == 0)
        order: list[str] = []
        while ready:
            e = ready.pop()
            order.append(e)
            for c in self.successors[e]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    ready.append(c)
        if len(order) != len(self.elements):
            stuck = sorted(e for e, d in indeg.items() if d > 0)
            raise PosetError(f"cover relation has a cycle through {stuck[:5]}")
        return tuple(order)

    def topological_order(self) -> tuple[str, ...]:
        return self._topological_order

    @cached_property
    def minimal_elements(self) -> tuple[str, ...]:
        return tuple(sorted(e for e in self.elements if not self.predecessors[e]))

    @cached_property
    def maximal_elements(self) -> tuple[str, ...]:
        return tuple(sorted(e for e in self.elements if not self.successors[e]))

    def __contains__(self, element: object) -> bool:
        return element in self.successors

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class Chain:
    path: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "path", tuple(self.path))
        if not self.path:
            raise PosetError("a chain needs at least one element")

    @property
    def edges(self) -> list[tuple[str, str]]:
        return list(zip(self.path, self.path[1:]))

    @property
    def n_edges(self) -> int:
        return len(self.path) - 1

    def check_in(self, poset: Poset) -> None:
        for e in self.path:
            if e not in poset:
                raise PosetError(f"chain element {e!r} is not in the poset")
        for edge in self.edges:
            if edge not in poset.covers:
                raise PosetError(f"chain step {edge[0]!r} -> {edge[1]!r} is not a cover edge")


@dataclass(frozen=True)
class PosetClassification:
    has_lowest: bool
    has_greatest: bool
    is_even_sided: bool
    common_chain_length: int | None = None

    @property
    def is_lg(self) -> bool:
        return self.has_lowest and self.has_greatest


@dataclass(frozen=True)
class ChainBundle:
    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "dims", tuple(self.dims))
        if not self.dims:
            raise PosetError("a chain bundle needs at least one component chain")
        for n in self.dims:
            if isinstance(n, bool) or not isinstance(n, int) or n < 1:
                raise PosetError(f"bundle dimensions must be positive integers, got {self.dims}")

    @property
    def K(self) -> int:
        return len(self.dims)

    @property
    def Q(self) -> int:
        return sum(self.dims)

    @property
    def n_elements(self) -> int:
        return math.prod(n + 1 for n in self.dims)

    @property
    def n_maximal_chains(self) -> int:
        count = math.factorial(self.Q)
        for n in self.dims:
            count //= math.factorial(n)
        return count

    def indices(self) -> Iterator[VectorIndex]:
        for coords in itertools.product(*(range(n + 1) for n in self.dims)):
            yield VectorIndex(coords)

    def check_index(self, index: VectorIndex) -> None:
        if len(index.coords) != self.K:
            raise PosetError(f"index {index.coords} has {len(index.coords)} coordinates, bundle has {self.K}")
        for i, n in zip(index.coords, self.dims):
            if not 0 <= i <= n:
                raise PosetError(f"index {index.coords} is outside bundle dims {self.dims}")


@dataclass(frozen=True)
class VectorIndex:
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))
        if any(c < 0 for c in self.coords):
            raise PosetError(f"vector index coordinates must be non-negative, got {self.coords}")

    @property
    def height(self) -> int:
        return sum(self.coords)

    @property
    def id(self) -> str:
        return index_id(self.coords)

    @classmethod
    def parse(cls, ident: str) -> VectorIndex:
        try:
            return cls(tuple(int(x) for x in ident.split(",")))
        except ValueError:
            raise PosetError(f"not a bundle element identifier: {ident!r}") from None


def index_id(coords: Iterable[int]) -> str:
    return ",".join(str(int(c)) for c in coords)


def subset_id(members: Iterable[str]) -> str:
    return ",".join(sorted(members))


def chain_poset(ids: Sequence[str]) -> Poset:
    """Totally ordered poset ids[0] < ids[1] < ..."""
    return Poset(tuple(ids), frozenset(zip(ids, ids[1:])))


def iter_maximal_chains(poset: Poset, max_chains: int | None = None) -> Iterator[Chain]:
    """Yield maximal chains in lexicographic order of their identifier sequences.

    A maximal chain of a finite poset is a cover path from a minimal to a
    maximal element; walking sorted successors from sorted minimal
    elements therefore produces the lexicographic order directly.
    """
    cap = default_max_chains() if max_chains is None else max_chains
    succ = poset.successors
    count = 0
    for start in poset.minimal_elements:
        path = [start]
        stack = [iter(succ[start])]
        while stack:
            if not succ[path[-1]]:
                count += 1
                if count > cap:
                    raise EnumerationLimitError(
                        f"more than {cap} maximal chains; raise the cap "
                        f"(max_chains / {MAX_CHAINS_ENV}) to enumerate"
                    )
                yield Chain(tuple(path))
            nxt = next(stack[-1], None)
            if nxt is None:
                stack.pop()
                path.pop()
            else:
                path.append(nxt)
                stack.append(iter(succ[nxt]))


def enumerate_maximal_chains(poset: Poset, max_chains: int | None = None) -> list[Chain]:
    return list(iter_maximal_chains(poset, max_chains))


def _path_length_range(poset: Poset, source: str) -> dict[str, tuple[int, int]]:
    # (shortest, longest) cover-path length from source, for reachable elements
    span: dict[str, tuple[int, int]] = {source: (0, 0)}
    for e in poset.topological_order():
        if e not in span:
            continue
        lo, hi = span[e]
        for c in poset.successors[e]:
            if c in span:
                clo, chi = span[c]
                span[c] = (min(clo, lo + 1), max(chi, hi + 1))
            else:
                span[c] = (lo + 1, hi + 1)
    return span


def classify(poset: Poset) -> PosetClassification:
    has_lowest = len(poset.minimal_elements) == 1
    has_greatest = len(poset.maximal_elements) == 1
    if not (has_lowest and has_greatest):
        return PosetClassification(has_lowest, has_greatest, False, None)
    # In an [l-g] poset every maximal chain runs lowest -> greatest, so the
    # chains are exactly the cover paths between them.
    shortest, longest = _path_length_range(poset, poset.minimal_elements[0])[
        poset.maximal_elements[0]
    ]
    if shortest == longest:
        return PosetClassification(True, True, True, shortest)
    return PosetClassification(True, True, False, None)


def lowest(poset: Poset) -> str:
    if len(poset.minimal_elements) != 1:
        raise PosetError("poset has no lowest element")
    return poset.minimal_elements[0]


def greatest(poset: Poset) -> str:
    if len(poset.maximal_elements) != 1:
        raise PosetError("poset has no greatest element")
    return poset.maximal_elements[0]


def _fresh_id(base: str, taken: set[str]) -> str:
    ident = base
    while ident in taken:
        ident = "_" + ident
    return ident


def lg_enclosure(poset: Poset) -> Poset:
    """Smallest [l-g] poset containing ``poset``.

    Adds a fresh bottom under every minimal element and/or a fresh top
    over every maximal element, only where one is missing.
    """
    add_bottom = len(poset.minimal_elements) != 1
    add_top = len(poset.maximal_elements) != 1
    if not (add_bottom or add_top):
        return poset
    elements = list(poset.elements)
    covers = set(poset.covers)
    taken = set(elements)
    if add_bottom:
        bottom = _fresh_id("_lowest", taken)
        taken.add(bottom)
        covers.update((bottom, e) for e in poset.minimal_elements)
        elements.insert(0, bottom)
    if add_top:
        top = _fresh_id("_greatest", taken)
        covers.update((e, top) for e in poset.maximal_elements)
        elements.append(top)
    return Poset(tuple(elements), frozenset(covers), validate=False)


def power_set_poset(ground: Sequence[str], max_ground: int = DEFAULT_MAX_GROUND) -> Poset:
    """Subsets of ``ground`` ordered by inclusion.

    Subset identifiers are the sorted member names joined by commas; the
    empty set is ``""``.
    """
    names = [str(x) for x in ground]
    if len(set(names)) != len(names):
        raise PosetError(f"duplicate identifiers in ground set {names}")
    if any("," in x for x in names):
        raise PosetError("ground identifiers may not contain ','")
    if len(names) > max_ground:
        raise EnumerationLimitError(
            f"ground set of {len(names)} exceeds the cap of {max_ground} "
            f"(2^{max_ground} subsets)"
        )
    names.sort()
    n = len(names)
    ids = [subset_id(names[i] for i in range(n) if mask >> i & 1) for mask in range(1 << n)]
    covers = frozenset(
        (ids[mask], ids[mask | 1 << i])
        for mask in range(1 << n)
        for i in range(n)
        if not mask >> i & 1
    )
    return Poset(tuple(ids), covers, validate=False)


def bundle_poset(bundle: ChainBundle, max_elements: int = DEFAULT_MAX_BUNDLE_ELEMENTS) -> Poset:
    """Direct product of chains 0..n_k under the coordinatewise order."""
    if bundle.n_elements > max_elements:
        raise EnumerationLimitError(
            f"bundle {bundle.dims} has {bundle.n_elements} elements, cap is {max_elements}"
        )
    elements = []
    covers = set()
    for idx in bundle.indices():
        c = idx.coords
        elements.append(index_id(c))
        for k, n in enumerate(bundle.dims):
            if c[k] < n:
                covers.add((index_id(c), index_id(c[:k] + (c[k] + 1,) + c[k + 1 :])))
    return Poset(tuple(elements), frozenset(covers), validate=False)
