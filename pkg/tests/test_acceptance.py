"""Acceptance gate.  Each test carries a ``criterion`` marker; the terminal
summary prints one PASS/FAIL line per criterion.

Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import json
import math
import random
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mrdp.cli import run
from mrdp.divergence import (
    PartitionModel,
    chain_divergence_values,
    rd_bundle_separable,
    rd_chain,
    rd_even_sided,
    rd_on_chain,
    rd_partition,
)
from mrdp.grading import IncrementSequence, additive_gf, chain_gf, natural_gf, separable_gf
from mrdp.oracles import GridSpec, maximize_1d, maximize_increment_grid, maximize_simplex_grid
from mrdp.poset import Chain, ChainBundle, bundle_poset, power_set_poset
from mrdp.solvers import (
    KnotConstraints,
    QueueTypeParams,
    conditional_increments,
    independence_increments,
    solve_conditional,
    solve_height_dependent,
    solve_independence,
    solve_interpolation,
    solve_type_distribution,
)

DATA = Path(__file__).parent / "data"


def criterion(num, title):
    return pytest.mark.criterion(num, title)


def _entropy_rows(P):
    out = np.zeros_like(P)
    pos = P > 0
    out[pos] = -P[pos] * np.log(P[pos])
    return out.sum(axis=1)


def _unit(f):
    return rd_chain(IncrementSequence(tuple(f), (1.0,) * len(f)))


# 1 -------------------------------------------------------------------------


@criterion(1, "uniform maximizer: entropy ln 5 to 1e-12, simplex grid agrees for K=3")
def test_uniform_entropy():
    code, report = run(["mrdp", "uniform", "--n", "5"])
    assert code == 0
    assert abs(report["result"]["entropy"] - 1.6094379124341003) <= 1e-12
    assert abs(report["result"]["entropy"] - math.log(5)) <= 1e-12
    assert report["result"]["p"] == [0.2] * 5

    grid = GridSpec(1e-2)
    p_star, best = maximize_simplex_grid(_entropy_rows, 3, grid)
    assert np.max(np.abs(p_star - 1 / 3)) <= grid.resolution
    assert best <= math.log(3)


# 2 -------------------------------------------------------------------------


@criterion(2, "conditional: x* = p1/p2, golden-section within 1e-7, |q'(x*)| <= 1e-9 (50 pairs)")
def test_conditional_pairs():
    rng = random.Random(2)
    for _ in range(50):
        p1, p2 = sorted(rng.uniform(1e-3, 1 - 1e-3) for _ in range(2))
        if p2 - p1 < 1e-6:
            p2 = min(p1 + 1e-3, 1 - 1e-4)
        sol = solve_conditional(p1, p2)
        assert sol.x == pytest.approx(p1 / p2, rel=1e-15)
        x_star, _ = maximize_1d(lambda x: rd_chain(conditional_increments(x, p1, p2)), (0.0, 1.0))
        assert abs(x_star - sol.x) <= 1e-7, (p1, p2, x_star, sol.x)
        x = sol.x
        dq = -math.log(x / p1) + math.log((1 - x) / (p2 - p1))
        assert abs(dq) <= 1e-9, (p1, p2, dq)


# 3 -------------------------------------------------------------------------


@criterion(3, "independence: x* = p1*p2 inside feasible interval, oracle within 1e-7, d'' < 0 (50 pairs)")
def test_independence_pairs():
    rng = random.Random(3)
    for _ in range(50):
        p1, p2 = rng.uniform(1e-3, 1 - 1e-3), rng.uniform(1e-3, 1 - 1e-3)
        sol = solve_independence(p1, p2)
        lo, hi = max(0.0, p1 + p2 - 1), min(p1, p2)
        assert sol.x == p1 * p2
        assert lo < sol.x < hi
        x_star, _ = maximize_1d(lambda x: rd_chain(independence_increments(x, p1, p2)), (lo, hi))
        assert abs(x_star - sol.x) <= 1e-7, (p1, p2, x_star, sol.x)
        x = sol.x
        d2 = -1 / x - 1 / (p1 - x) - 1 / (p2 - x) - 1 / (1 - p1 - p2 + x)
        assert d2 < 0 and sol.curvature < 0


# 4 -------------------------------------------------------------------------


def _random_knots(rng, n):
    inner = sorted(rng.sample(range(1, n), rng.randint(0, n - 1))) if n > 1 else []
    positions = [0, *inner, n]
    values = sorted(rng.uniform(0, 2) for _ in positions)
    if rng.random() < 0.25 and len(values) > 2:
        values[1] = values[0]  # include a flat segment now and then
    return KnotConstraints(tuple(zip(positions, values)))


@criterion(4, "interpolation: attained RD >= grid oracle - 1e-9 and within 1e-3, knots kept to 1e-12 (n <= 6)")
def test_interpolation_against_grid():
    rng = random.Random(4)
    for _ in range(40):
        n = rng.randint(1, 6)
        knots = _random_knots(rng, n)
        sol = solve_interpolation(n, knots)
        _, best = maximize_increment_grid(n, knots)
        assert sol.attained_rd >= best - 1e-9, (knots, sol.attained_rd, best)
        assert abs(sol.attained_rd - best) <= 1e-3, (knots, sol.attained_rd, best)
        values = sol.values()
        for pos, val in knots.knots:
            assert abs(values[pos] - val) <= 1e-12


# 5 -------------------------------------------------------------------------


@criterion(5, "power set: chain minimum equals partition entropy to 1e-10, constant over all |X|! chains")
def test_power_set_partition():
    rng = random.Random(5)
    for size in range(1, 7):
        for _ in range(2):
            ground = [chr(97 + i) for i in range(size)]
            atoms = {a: rng.choice([0.0, rng.uniform(0.01, 2.0)]) if size > 1 else rng.uniform(0.01, 2.0)
                     for a in ground}
            poset = power_set_poset(ground)
            F, G = additive_gf(atoms, poset), natural_gf(poset)
            res = rd_even_sided(poset, F, G)
            expected = rd_partition(PartitionModel.singletons([atoms[a] for a in ground]))
            assert res.n_chains == math.factorial(size)
            assert abs(res.value - expected) <= 1e-10
            per_chain = [v for _, v in chain_divergence_values(poset, F, G)]
            assert max(per_chain) - min(per_chain) <= 1e-10


# 6 -------------------------------------------------------------------------


def _dims_up_to(q_max):
    out = []

    def rec(prefix, left):
        if prefix:
            out.append(tuple(prefix))
        for d in range(1, left + 1):
            rec(prefix + [d], left - d)

    rec([], q_max)
    return out


@criterion(6, "bundle height-dependent: chain minimum equals (M-m)ln Q - (M-m)ln(M-m) within 1e-10 (Q <= 8)")
def test_bundle_height_dependent():
    rng = random.Random(6)
    all_dims = _dims_up_to(8)
    for dims in rng.sample(all_dims, 30) + [(1,) * 8, (2, 2, 2, 2), (8,)]:
        bundle = ChainBundle(dims)
        m = rng.uniform(-5, 5)
        M = m + rng.uniform(0.1, 10)
        sol = solve_height_dependent(bundle, m, M)
        poset = bundle_poset(bundle)
        res = rd_even_sided(poset, sol.grading, natural_gf(poset))
        closed = (M - m) * math.log(bundle.Q) - (M - m) * math.log(M - m)
        assert abs(res.value - closed) <= 1e-10, (dims, m, M, res.value, closed)


# 7 -------------------------------------------------------------------------


def _table(rng, n, allow_flat):
    inc = [rng.choice([0.0, rng.uniform(0.05, 2)]) if allow_flat else rng.uniform(0.05, 2) for _ in range(n)]
    return [0.0, *np.cumsum(inc).tolist()]


@criterion(7, "additive separability: sum of per-chain RDs equals bundle chain minimum within 1e-10")
def test_separability():
    rng = random.Random(7)
    for _ in range(40):
        K = rng.choice([2, 3])
        while True:
            dims = tuple(rng.randint(1, 4) for _ in range(K))
            if sum(dims) <= 8:
                break
        bundle = ChainBundle(dims)
        F_tabs = [_table(rng, n, True) for n in dims]
        G_tabs = [_table(rng, n, False) for n in dims]
        parts = []
        for ft, gt in zip(F_tabs, G_tabs):
            ids = [str(i) for i in range(len(ft))]
            parts.append(rd_on_chain(Chain(tuple(ids)), chain_gf(ft), chain_gf(gt)))
        poset = bundle_poset(bundle)
        res = rd_even_sided(poset, separable_gf(bundle, F_tabs), separable_gf(bundle, G_tabs))
        assert abs(rd_bundle_separable(parts) - res.value) <= 1e-10


# 8 -------------------------------------------------------------------------


@criterion(8, "type distribution: sum p = 1 to 1e-10, |R| < 1e-12, objective >= grid best, symmetric -> uniform")
def test_type_distribution():
    rng = random.Random(8)
    grid = GridSpec(1e-2)
    for _ in range(30):
        K = rng.randint(1, 3)
        D = [rng.uniform(-2, 2) for _ in range(K)]
        spans = [rng.uniform(0.1, 5) for _ in range(K)]
        sol = solve_type_distribution(QueueTypeParams(D, spans))
        assert abs(math.fsum(sol.p) - 1) <= 1e-10
        assert abs(sol.residual) < 1e-12
        Da, Sa = np.array(D), np.array(spans)

        def obj(P):
            plogp = np.where(P > 0, P * np.log(np.where(P > 0, P, 1.0)), 0.0)
            return P @ Da - plogp @ Sa

        _, best = maximize_simplex_grid(obj, K, grid)
        assert sol.objective >= best - 1e-12, (D, spans, sol.objective, best)

    for K in range(1, 7):
        Dk, sk = rng.uniform(-2, 2), rng.uniform(0.1, 5)
        sol = solve_type_distribution(QueueTypeParams([Dk] * K, [sk] * K))
        assert max(abs(p - 1 / K) for p in sol.p) <= 1e-12


# 9 -------------------------------------------------------------------------

_dyadic = st.lists(st.integers(0, 1 << 10), min_size=1, max_size=20)


@criterion(9, "linearity: exact shift invariance, joint scaling and natural-null scaling within 1e-10")
@settings(max_examples=200, deadline=None)
@given(
    _dyadic,
    st.lists(st.integers(1, 1 << 10), min_size=20, max_size=20),
    st.integers(-(1 << 12), 1 << 12),
    st.floats(0.1, 10.0),
)
def test_linearity(f_units, g_units, shift_units, c):
    n = len(f_units)
    f = [u / 1024 for u in f_units]
    g = [u / 1024 for u in g_units[:n]]
    F = np.concatenate([[0.0], np.cumsum(f)]).tolist()
    G = np.concatenate([[0.0], np.cumsum(g)]).tolist()
    chain = Chain(tuple(str(i) for i in range(n + 1)))
    base = rd_on_chain(chain, chain_gf(F), chain_gf(G)).value

    shift = shift_units / 1024
    assert rd_on_chain(chain, chain_gf(F).shifted(shift), chain_gf(G).shifted(-shift)).value == base

    scaled = rd_chain(IncrementSequence(tuple(c * x for x in f), tuple(c * y for y in g)))
    assert abs(scaled - c * rd_chain(IncrementSequence(tuple(f), tuple(g)))) <= 1e-10

    span = math.fsum(f)
    lhs = _unit([c * x for x in f])
    assert abs(lhs - (c * _unit(f) - c * math.log(c) * span)) <= 1e-10


# 10 ------------------------------------------------------------------------


def _cli(argv):
    proc = subprocess.run([sys.executable, "-m", "mrdp", *argv], capture_output=True, check=False)
    return proc.returncode, proc.stdout


@criterion(10, "determinism: repeated CLI runs give byte-identical reports, including the tie-broken witness")
def test_cli_determinism():
    d = str(DATA)
    commands = [
        ["rd", "poset", "--poset", f"{d}/powerset_ab.json", "--F", f"{d}/additive_ab_half.json"],
        ["rd", "poset", "--poset", f"{d}/powerset_abc.json", "--F", f"{d}/additive_abc.json"],
        ["apps", "group-test", "--plan", f"{d}/plan.json"],
        ["apps", "queue-types", "--model", f"{d}/queues_identical.json", "--batch", "2,1"],
        ["mrdp", "type-distribution", "--D", "0.2,0.5,0.9", "--spans", "1,2,1", "--verify"],
    ]
    for argv in commands:
        first = _cli(argv)
        assert first[0] == 0, first
        assert _cli(argv) == first

    # both maximal chains of the two-element power set attain the minimum
    report = json.loads(_cli(commands[0])[1])
    assert report["result"]["n_chains"] == 2
    assert report["result"]["witness_chain"] == ["", "a", "a,b"]
