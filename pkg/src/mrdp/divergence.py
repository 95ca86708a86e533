"""Relative divergence of grading functions.

On a chain, the divergence of F from G is ``-sum_k f_k ln(f_k / g_k)``
over the per-edge increments.  Serial blocks add up; parallel maximal
chains of an even-sided [l-g] poset combine by taking the minimum.

Conventions: natural logarithm (nats); terms with f_k = 0 contribute
exactly 0; a term with f_k > 0 and g_k = 0 makes the divergence
undefined (reported as -inf in an :class:`RDResult`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import DivergenceUndefinedError, InputError, NotEvenSidedError
from .grading import GradingFunction, IncrementSequence, increments_along
from .poset import Chain, Poset, classify, iter_maximal_chains, subset_id

# relative slack within which a later chain does not displace the current witness
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class RDResult:
    value: float
    witness_chain: Chain | None = None
    undefined: bool = False
    n_chains: int = 1


@dataclass(frozen=True)
class PartitionModel:
    blocks: tuple[frozenset[str], ...]
    f_weights: tuple[float, ...]
    g_weights: tuple[float, ...]

    def __post_init__(self) -> None:
        blocks = tuple(frozenset(str(x) for x in b) for b in self.blocks)
        f = tuple(float(x) for x in self.f_weights)
        g = tuple(float(x) for x in self.g_weights)
        if not blocks:
            raise InputError("partition needs at least one block")
        if not (len(blocks) == len(f) == len(g)):
            raise InputError("blocks, f_weights and g_weights must have equal length")
        seen: set[str] = set()
        for b in blocks:
            if not b:
                raise InputError("partition blocks must be non-empty")
            if seen & b:
                raise InputError(f"partition blocks overlap on {sorted(seen & b)}")
            seen |= b
        # f may vanish on a block (0 ln 0 = 0); g must not
        if any(x < 0 for x in f) or any(not x > 0 for x in g):
            raise InputError("f weights must be >= 0 and g weights > 0")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "f_weights", f)
        object.__setattr__(self, "g_weights", g)

    @classmethod
    def singletons(cls, f: Sequence[float], g: Sequence[float] | None = None) -> PartitionModel:
        """One block per weight, named "s1", "s2", ..."""
        if g is None:
            g = [1.0] * len(f)
        return cls(tuple(frozenset([f"s{k + 1}"]) for k in range(len(f))), tuple(f), tuple(g))

    @property
    def ground(self) -> frozenset[str]:
        return frozenset().union(*self.blocks)

    def block_names(self) -> list[str]:
        return [subset_id(b) if len(b) == 1 else "{" + subset_id(b) + "}" for b in self.blocks]

    def induced_weights(self) -> tuple[Mapping[str, float], Mapping[str, float]]:
        """Atom weights for the induced set functions on the power set of blocks."""
        names = self.block_names()
        return dict(zip(names, self.f_weights)), dict(zip(names, self.g_weights))


def _term(fk: float, gk: float) -> float:
    if fk == 0.0:
        return 0.0
    ratio = fk / gk
    if ratio == 0.0 or math.isinf(ratio):  # under/overflow of the quotient
        return -fk * (math.log(fk) - math.log(gk))
    return -fk * math.log(ratio)


def rd_chain(inc: IncrementSequence) -> float:
    if inc.undefined:
        k = next(i for i, (fk, gk) in enumerate(zip(inc.f, inc.g)) if fk > 0 and gk == 0)
        raise DivergenceUndefinedError(
            f"increment {k} has f={inc.f[k]!r} > 0 but null increment g=0"
        )
    return math.fsum(_term(fk, gk) for fk, gk in zip(inc.f, inc.g))


def rd_on_chain(chain: Chain, F: GradingFunction, G: GradingFunction) -> RDResult:
    inc = increments_along(chain, F, G)
    if inc.undefined:
        return RDResult(-math.inf, None, True)
    return RDResult(rd_chain(inc))


def _sum_parts(parts: Iterable[RDResult]) -> float:
    parts = list(parts)
    if not parts:
        raise InputError("need at least one part")
    for i, p in enumerate(parts):
        if p.undefined:
            raise DivergenceUndefinedError(f"part {i} has an undefined divergence")
    return math.fsum(p.value for p in parts)


def rd_blocks_serial(parts: Sequence[RDResult]) -> float:
    """Divergence over concatenated blocks (each block's greatest is the next one's lowest)."""
    return _sum_parts(parts)


def rd_bundle_separable(F_parts: Sequence[RDResult]) -> float:
    """Bundle divergence for additively separable F and G: sum of per-chain divergences."""
    return _sum_parts(F_parts)


def rd_even_sided(
    poset: Poset, F: GradingFunction, G: GradingFunction, max_chains: int | None = None
) -> RDResult:
    """Minimum chain divergence over all maximal chains, by exhaustive enumeration.

    The witness is the first minimizing chain in enumeration order.  Any
    chain with an undefined divergence makes the whole result undefined,
    with that chain as witness.
    """
    cls = classify(poset)
    if not cls.is_even_sided:
        raise NotEvenSidedError(
            "divergence by chain infimum needs an even-sided [l-g] poset; "
            "maximal chains here have unequal lengths or no common endpoints"
        )
    best: float | None = None
    witness: Chain | None = None
    count = 0
    undefined_chain: Chain | None = None
    for chain in iter_maximal_chains(poset, max_chains):
        count += 1
        if undefined_chain is not None:
            continue  # keep counting so the cap still applies
        inc = increments_along(chain, F, G)
        if inc.undefined:
            undefined_chain = chain
            continue
        value = rd_chain(inc)
        if best is None or value < best - TIE_RTOL * max(1.0, abs(best)):
            best, witness = value, chain
    if undefined_chain is not None:
        return RDResult(-math.inf, undefined_chain if count > 1 else None, True, count)
    assert best is not None
    return RDResult(best, witness if count > 1 else None, False, count)


def rd_partition(model: PartitionModel) -> float:
    return math.fsum(_term(f, g) for f, g in zip(model.f_weights, model.g_weights))


def chain_divergence_values(
    poset: Poset, F: GradingFunction, G: GradingFunction, max_chains: int | None = None
) -> list[tuple[Chain, float]]:
    """Divergence on every maximal chain, in enumeration order (undefined -> -inf)."""
    out = []
    for chain in iter_maximal_chains(poset, max_chains):
        out.append((chain, rd_on_chain(chain, F, G).value))
    return out
