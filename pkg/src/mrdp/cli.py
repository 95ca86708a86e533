"""Command-line interface.

    mrdp rd {chain,poset,partition,bundle} ...
    mrdp mrdp {uniform,interpolate,conditional,independence,cardinality,
               bundle-height,type-distribution} ... [--verify]
    mrdp apps {group-test,queue-types} ...

Reports are JSON on stdout (``--human`` for a plain listing).  Exit
codes: 0 ok, 2 bad input, 3 undefined divergence, 4 enumeration cap,
5 verification failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import random
import sys
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import applications as apps
from . import oracles, solvers
from .divergence import (
    PartitionModel,
    RDResult,
    rd_bundle_separable,
    rd_chain,
    rd_even_sided,
    rd_on_chain,
    rd_partition,
)
from .errors import DivergenceUndefinedError, InputError, MRDPError, VerificationError
from .grading import (
    GradingFunction,
    IncrementSequence,
    natural_gf,
    separable_gf,
    validate_grading,
)
from .poset import (
    Chain,
    ChainBundle,
    Poset,
    bundle_poset,
    classify,
    lowest,
    power_set_poset,
)

CONVENTIONS = {
    "logarithm": "natural (nats)",
    "zero_increment": "terms with f_k = 0 contribute 0 (0 ln 0 = 0)",
    "undefined": "f_k > 0 with g_k = 0 makes the divergence undefined (exit 3)",
    "tie_break": "witness is the first minimizing maximal chain in lexicographic order of element identifiers",
}

VERIFY_SLACK = 1e-9


class _Context:
    """Collects the inputs that feed the digest, and any warnings."""

    def __init__(self, command: str):
        self.command = command
        self.params: dict[str, Any] = {}
        self.files: dict[str, str] = {}
        self.warnings: list[str] = []

    def read(self, label: str, path: str) -> Any:
        try:
            raw = Path(path).read_bytes()
        except OSError as exc:
            raise InputError(f"cannot read {label} file {path!r}: {exc.strerror}") from None
        self.files[label] = hashlib.sha256(raw).hexdigest()
        try:
            return json.loads(raw)
        except json.JSONDecodeError as exc:
            raise InputError(f"{label} file {path!r} is not valid JSON: {exc}") from None

    def digest(self) -> str:
        blob = json.dumps({"command": self.command, "params": self.params, "files": self.files}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()


# ---------------------------------------------------------------- parsing


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise InputError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None


def _pairs(text: str) -> list[tuple[int, float]]:
    """"0:0,2:0.6,5:1" or "5=4" style position/value pairs."""
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        sep = "=" if "=" in item else ":"
        try:
            pos, val = item.split(sep)
            out.append((int(pos), float(val)))
        except ValueError:
            raise InputError(f"expected position{sep}value, got {item!r}") from None
    return out


def _tables(text: str) -> list[list[float]]:
    return [_floats(part) for part in text.split(";") if part.strip()]


def load_poset(doc: Any) -> Poset:
    if not isinstance(doc, dict):
        raise InputError("poset document must be a JSON object")
    if "powerset" in doc:
        return power_set_poset([str(x) for x in doc["powerset"]])
    if "bundle" in doc:
        return bundle_poset(ChainBundle(tuple(int(x) for x in doc["bundle"])))
    try:
        elements = tuple(doc["elements"])
        covers = frozenset((lo, hi) for lo, hi in doc["covers"])
    except (KeyError, TypeError, ValueError):
        raise InputError("poset document needs 'elements' and 'covers' ([lower, upper] pairs)") from None
    return Poset(elements, covers)


def load_grading(doc: Any, poset: Poset) -> GradingFunction:
    if not isinstance(doc, dict) or not isinstance(doc.get("values"), dict):
        raise InputError("grading document must be an object with a 'values' mapping")
    try:
        values = {str(k): float(v) for k, v in doc["values"].items()}
    except (TypeError, ValueError):
        raise InputError("grading values must be numbers") from None
    return validate_grading(poset, values)


def _chain_json(chain: Chain | None) -> list[str] | None:
    return None if chain is None else list(chain.path)


def _rd_json(res: RDResult) -> dict[str, Any]:
    return {"value": res.value, "witness_chain": _chain_json(res.witness_chain), "n_chains": res.n_chains}


def _require_defined(res: RDResult) -> RDResult:
    if res.undefined:
        where = "" if res.witness_chain is None else f" on chain {list(res.witness_chain.path)}"
        raise DivergenceUndefinedError(f"divergence undefined{where}: some f_k > 0 has g_k = 0")
    return res


# ---------------------------------------------------------------- rd


def cmd_rd(args: argparse.Namespace, ctx: _Context) -> dict[str, Any]:
    target = args.target
    if target == "chain":
        f, g = _floats(args.f), _floats(args.g)
        ctx.params.update(f=f, g=g)
        return {"value": rd_chain(IncrementSequence(tuple(f), tuple(g)))}

    if target == "partition":
        f = _floats(args.f)
        g = _floats(args.g) if args.g else [1.0] * len(f)
        ctx.params.update(f=f, g=g)
        return {"value": rd_partition(PartitionModel.singletons(f, g))}

    if target == "poset":
        poset = load_poset(ctx.read("poset", args.poset))
        F = load_grading(ctx.read("F", args.F), poset)
        G = load_grading(ctx.read("G", args.G), poset) if args.G else natural_gf(poset)
        if args.sample:
            ctx.params.update(sample=args.sample, seed=args.seed)
            return _sampled_rd(poset, F, G, args.sample, args.seed, ctx)
        return _rd_json(_require_defined(rd_even_sided(poset, F, G)))

    if target == "bundle":
        bundle = ChainBundle(tuple(_ints(args.dims)))
        ctx.params.update(dims=list(bundle.dims))
        poset = bundle_poset(bundle)
        out: dict[str, Any] = {}
        if args.parts:
            parts = _tables(args.parts)
            ctx.params.update(parts=parts)
            F = separable_gf(bundle, parts)
            per_chain = []
            for comp in parts:
                f = tuple(b - a for a, b in zip(comp, comp[1:]))
                per_chain.append(RDResult(rd_chain(IncrementSequence(f, (1.0,) * len(f)))))
            out["per_chain"] = [r.value for r in per_chain]
            out["separable_sum"] = rd_bundle_separable(per_chain)
        elif args.F:
            F = load_grading(ctx.read("F", args.F), poset)
        else:
            raise InputError("rd bundle needs --F or --parts")
        G = load_grading(ctx.read("G", args.G), poset) if args.G else natural_gf(poset)
        out.update(_rd_json(_require_defined(rd_even_sided(poset, F, G))))
        return out

    raise InputError(f"unknown rd target {target!r}")


def _sampled_rd(poset: Poset, F, G, samples: int, seed: int, ctx: _Context) -> dict[str, Any]:
    if not classify(poset).is_even_sided:
        raise InputError("sampling needs an even-sided [l-g] poset")
    rng = random.Random(seed)
    best: tuple[float, Chain] | None = None
    for _ in range(samples):
        path = [lowest(poset)]
        while poset.successors[path[-1]]:
            path.append(rng.choice(poset.successors[path[-1]]))
        chain = Chain(tuple(path))
        res = _require_defined(rd_on_chain(chain, F, G))
        if best is None or res.value < best[0]:
            best = (res.value, chain)
    assert best is not None
    ctx.warnings.append(f"approximate: minimum over {samples} randomly sampled maximal chains, not all chains")
    return {"value": best[0], "witness_chain": list(best[1].path), "approximate": True, "samples": samples}


# ---------------------------------------------------------------- mrdp


def _check(record: dict[str, Any]) -> dict[str, Any]:
    if not record["passed"]:
        raise VerificationError(f"solver and oracle disagree: {json.dumps(record, sort_keys=True)}")
    return record


def _entropy_rows(P: np.ndarray) -> np.ndarray:
    out = np.zeros_like(P)
    pos = P > 0
    out[pos] = -P[pos] * np.log(P[pos])
    return out.sum(axis=1)


def _pl_json(pl: solvers.PiecewiseLinearGF) -> dict[str, Any]:
    return {
        "knots": [list(k) for k in pl.knots.knots],
        "segments": [
            {"interval": [s.lo, s.hi], "slope": s.slope, "intercept": s.intercept} for s in pl.segments
        ],
        "values": pl.values(),
        "attained_rd": pl.attained_rd,
        "closed_form_rd": pl.reference_rd,
    }


def _verify_pl(pl: solvers.PiecewiseLinearGF, ctx: _Context) -> dict[str, Any] | None:
    if pl.n > oracles.DEFAULT_MAX_CHAIN_LENGTH:
        ctx.warnings.append(f"verification skipped: chain length {pl.n} exceeds the oracle cap")
        return None
    _, best = oracles.maximize_increment_grid(pl.n, pl.knots)
    gap = pl.attained_rd - best
    return _check({
        "oracle": "increment grid",
        "oracle_rd": best,
        "solver_rd": pl.attained_rd,
        "tolerance": 1e-3,
        "passed": gap >= -VERIFY_SLACK and gap <= 1e-3,
    })


def cmd_mrdp(args: argparse.Namespace, ctx: _Context) -> tuple[dict[str, Any], dict[str, Any] | None]:
    target = args.target
    verify = getattr(args, "verify", False)

    if target == "uniform":
        ctx.params.update(n=args.n)
        p, entropy = solvers.solve_uniform(args.n)
        result = {"p": list(p), "entropy": entropy}
        record = None
        if verify:
            grid = oracles.GridSpec(oracles.DEFAULT_SIMPLEX_RESOLUTION)
            if oracles.simplex_grid_size(args.n, grid.units) > oracles.DEFAULT_MAX_SIMPLEX_POINTS:
                ctx.warnings.append(f"verification skipped: simplex grid for n={args.n} exceeds the cap")
            else:
                p_star, best = oracles.maximize_simplex_grid(_entropy_rows, args.n, grid)
                dev = float(np.max(np.abs(p_star - np.asarray(p))))
                record = _check({
                    "oracle": "simplex grid",
                    "oracle_p": p_star.tolist(),
                    "oracle_value": best,
                    "max_coordinate_gap": dev,
                    "tolerance": grid.resolution,
                    "passed": entropy >= best - VERIFY_SLACK and dev <= grid.resolution,
                })
        return result, record

    if target in ("interpolate", "cardinality"):
        if target == "interpolate":
            knots = solvers.KnotConstraints(tuple(_pairs(args.knots)))
            ctx.params.update(n=args.n, knots=[list(k) for k in knots.knots])
            pl = solvers.solve_interpolation(args.n, knots)
        else:
            knots = solvers.KnotConstraints(tuple(_pairs(args.knots))) if args.knots else None
            ctx.params.update(n=args.n, M=args.M, knots=None if knots is None else [list(k) for k in knots.knots])
            pl = solvers.solve_cardinality_dependent(args.n, args.M, knots)
        return _pl_json(pl), (_verify_pl(pl, ctx) if verify else None)

    if target in ("conditional", "independence"):
        p1, p2 = args.p1, args.p2
        ctx.params.update(p1=p1, p2=p2)
        if target == "conditional":
            sol = solvers.solve_conditional(p1, p2)

            def objective(x: float) -> float:
                return -x * math.log(x / p1) - (1 - x) * math.log((1 - x) / (p2 - p1))
        else:
            sol = solvers.solve_independence(p1, p2)

            def objective(x: float) -> float:
                terms = (x, p1 - x, p2 - x, 1 - p1 - p2 + x)
                return -sum(t * math.log(t) for t in terms)

        result = {
            "x": sol.x,
            "value": sol.value,
            "derivative": sol.derivative,
            "second_derivative": sol.curvature,
            "feasible_interval": list(sol.interval),
        }
        record = None
        if verify:
            if sol.derivative is None:
                ctx.warnings.append("verification skipped: maximizer sits on the boundary (p1 = p2)")
            else:
                x_star, _ = oracles.maximize_1d(objective, sol.interval)
                record = _check({
                    "oracle": "golden-section search",
                    "oracle_x": x_star,
                    "solver_x": sol.x,
                    "tolerance": 1e-7,
                    "passed": abs(x_star - sol.x) <= 1e-7,
                })
        return result, record

    if target == "bundle-height":
        bundle = ChainBundle(tuple(_ints(args.dims)))
        ctx.params.update(dims=list(bundle.dims), m=args.m, M=args.M)
        sol = solvers.solve_height_dependent(bundle, args.m, args.M)
        result = {"Q": sol.Q, "max_rd": sol.max_rd, "slope": (args.M - args.m) / sol.Q, "intercept": args.m}
        record = None
        if verify:
            poset = bundle_poset(bundle)
            res = _require_defined(rd_even_sided(poset, sol.grading, natural_gf(poset)))
            tol = 1e-10 * max(1.0, abs(sol.max_rd))
            record = _check({
                "oracle": "exhaustive maximal-chain enumeration",
                "oracle_rd": res.value,
                "solver_rd": sol.max_rd,
                "tolerance": tol,
                "passed": abs(res.value - sol.max_rd) <= tol,
            })
        return result, record

    if target == "type-distribution":
        D, spans = _floats(args.D), _floats(args.spans)
        ctx.params.update(D=D, spans=spans)
        params = solvers.QueueTypeParams(tuple(D), tuple(spans))
        td = solvers.solve_type_distribution(params)
        result = {"p": list(td.p), "lambda": td.lam, "objective": td.objective, "residual": td.residual}
        return result, (_verify_types(td, params, ctx) if verify else None)

    raise InputError(f"unknown mrdp target {target!r}")


def _verify_types(td: solvers.TypeDistribution, params: solvers.QueueTypeParams, ctx: _Context) -> dict[str, Any] | None:
    K = len(params.D)
    grid = oracles.GridSpec(oracles.DEFAULT_SIMPLEX_RESOLUTION)
    if oracles.simplex_grid_size(K, grid.units) > oracles.DEFAULT_MAX_SIMPLEX_POINTS:
        ctx.warnings.append(f"verification skipped: simplex grid for K={K} exceeds the cap")
        return None
    D = np.asarray(params.D)
    S = np.asarray(params.spans)

    def objective(P: np.ndarray) -> np.ndarray:
        plogp = np.zeros_like(P)
        pos = P > 0
        plogp[pos] = P[pos] * np.log(P[pos])
        return (P * D - S * plogp).sum(axis=1)

    p_star, best = oracles.maximize_simplex_grid(objective, K, grid)
    dev = float(np.max(np.abs(p_star - np.asarray(td.p))))
    return _check({
        "oracle": "simplex grid",
        "oracle_p": p_star.tolist(),
        "oracle_objective": best,
        "solver_objective": td.objective,
        "max_coordinate_gap": dev,
        "tolerance": grid.resolution,
        "passed": td.objective >= best - VERIFY_SLACK and dev <= grid.resolution,
    })


# ---------------------------------------------------------------- apps


def cmd_apps(args: argparse.Namespace, ctx: _Context) -> dict[str, Any]:
    if args.target == "group-test":
        return _group_test(args, ctx)
    if args.target == "queue-types":
        return _queue_types(args, ctx)
    raise InputError(f"unknown apps target {args.target!r}")


def _group_test(args: argparse.Namespace, ctx: _Context) -> dict[str, Any]:
    observations: list[tuple[int, float]] = []
    partition = None
    if args.plan:
        doc = ctx.read("plan", args.plan)
        try:
            N, M = int(doc["N"]), float(doc["M"])
            observations = [(int(p), float(c)) for p, c in doc.get("knots", [])]
            partition = [int(s) for s in doc["partition"]] if doc.get("partition") else None
        except (KeyError, TypeError, ValueError):
            raise InputError("plan file needs N, M and optional knots / partition arrays") from None
    else:
        if args.N is None or args.M is None:
            raise InputError("group-test needs --plan or both --N and --M")
        N, M = args.N, args.M
    for fix in args.fix or []:
        observations.extend(_pairs(fix))
    if args.partition:
        partition = _ints(args.partition)
    ctx.params.update(N=N, M=M, observations=[list(o) for o in observations], partition=partition)

    plan = apps.group_test_null(N, M)
    knots = apps.knots_from_observations(N, M, observations)
    if knots != plan.cost_fn.knots:
        plan = apps.group_test_update(plan, knots)
    result: dict[str, Any] = {"N": plan.N, "M": plan.M, "cost_model": _pl_json(plan.cost_fn)}
    result["cost_model"]["slopes"] = list(plan.cost_fn.slopes)
    result["history"] = [
        {"knots": [list(k) for k in step.knots.knots], "slopes": list(step.model.slopes)} for step in plan.history
    ]
    if partition is not None:
        report = apps.group_test_partition_costs(plan, partition)
        result["partition"] = {
            "groups": [{"size": s, "cost": c} for s, c in report.groups],
            "weights": list(report.weights),
            "rd": report.rd,
            "note": report.note,
        }
    return result


def _queue_types(args: argparse.Namespace, ctx: _Context) -> dict[str, Any]:
    if args.model:
        doc = ctx.read("model", args.model)
        queues_doc = doc.get("queues", doc) if isinstance(doc, dict) else doc
        queues = []
        try:
            for k, q in enumerate(queues_doc):
                costs = [float(c) for c in q["costs"]]
                if "capacity" in q and int(q["capacity"]) != len(costs) - 1:
                    raise InputError(f"queue {k}: capacity {q['capacity']} needs {int(q['capacity']) + 1} costs")
                queues.append(apps.QueueChain(tuple(costs)))
        except (KeyError, TypeError, ValueError):
            raise InputError("queue model needs a list of {capacity, costs} objects") from None
    elif args.costs:
        tables = _tables(args.costs)
        ctx.params.update(costs=tables)
        queues = [apps.QueueChain(tuple(t)) for t in tables]
    else:
        raise InputError("queue-types needs --model or --costs")
    model = apps.QueueBundleModel(tuple(queues))
    td = apps.infer_type_distribution(model)
    result: dict[str, Any] = {
        "D": [q.divergence_from_natural() for q in model.queues],
        "spans": [q.M - q.m for q in model.queues],
        "p": list(td.p),
        "lambda": td.lam,
        "objective": td.objective,
        "residual": td.residual,
    }
    if args.batch:
        batch = _ints(args.batch)
        ctx.params.update(batch=batch)
        result["batch"] = {
            "index": batch,
            "cost_unweighted": apps.batch_cost(model, batch),
            "cost_expected": apps.batch_cost(model, batch, td),
        }
    return result


# ---------------------------------------------------------------- plumbing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--human", action="store_true", help="print a plain listing instead of JSON")

    parser = argparse.ArgumentParser(prog="mrdp", description="Relative divergence of grading functions on posets.")
    groups = parser.add_subparsers(dest="group", required=True)

    rd = groups.add_parser("rd", help="evaluate relative divergence")
    rd_t = rd.add_subparsers(dest="target", required=True)
    p = rd_t.add_parser("chain", parents=[common], help="increments along one chain")
    p.add_argument("--f", required=True, help="increments of F, comma-separated")
    p.add_argument("--g", required=True, help="increments of G, comma-separated")
    p = rd_t.add_parser("partition", parents=[common], help="partition-induced divergence")
    p.add_argument("--f", required=True, help="block weights of F")
    p.add_argument("--g", help="block weights of G (default all 1)")
    p = rd_t.add_parser("poset", parents=[common], help="minimum over maximal chains of an even-sided poset")
    p.add_argument("--poset", required=True, help="poset JSON file")
    p.add_argument("--F", required=True, help="grading function JSON file")
    p.add_argument("--G", help="null grading function JSON file (default natural)")
    p.add_argument("--sample", type=int, help="approximate: sample this many random maximal chains")
    p.add_argument("--seed", type=int, default=0)
    p = rd_t.add_parser("bundle", parents=[common], help="divergence on a chain bundle")
    p.add_argument("--dims", required=True, help="chain lengths, e.g. 2,3")
    p.add_argument("--F", help="grading function JSON file on the bundle")
    p.add_argument("--parts", help="separable F as per-chain value tables, e.g. '0,1,3;0,2'")
    p.add_argument("--G", help="null grading function JSON file (default natural)")

    mr = groups.add_parser("mrdp", help="solve maximum relative divergence problems")
    mr_t = mr.add_subparsers(dest="target", required=True)
    solve = argparse.ArgumentParser(add_help=False, parents=[common])
    solve.add_argument("--verify", action="store_true", help="compare against a brute-force oracle")
    p = mr_t.add_parser("uniform", parents=[solve])
    p.add_argument("--n", type=int, required=True)
    p = mr_t.add_parser("interpolate", parents=[solve])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--knots", required=True, help="position:value pairs, e.g. 0:0,2:0.6,5:1")
    for name in ("conditional", "independence"):
        p = mr_t.add_parser(name, parents=[solve])
        p.add_argument("--p1", type=float, required=True)
        p.add_argument("--p2", type=float, required=True)
    p = mr_t.add_parser("cardinality", parents=[solve])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--M", type=float, required=True)
    p.add_argument("--knots", help="size:value pairs including 0:0 and n:M")
    p = mr_t.add_parser("bundle-height", parents=[solve])
    p.add_argument("--dims", required=True)
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--M", type=float, required=True)
    p = mr_t.add_parser("type-distribution", parents=[solve])
    p.add_argument("--D", required=True, help="per-type divergences, comma-separated")
    p.add_argument("--spans", required=True, help="per-type cost spans M_k - m_k")

    ap = groups.add_parser("apps", help="application drivers")
    ap_t = ap.add_subparsers(dest="target", required=True)
    p = ap_t.add_parser("group-test", parents=[common])
    p.add_argument("--plan", help="plan JSON file with N, M, knots, partition")
    p.add_argument("--N", type=int)
    p.add_argument("--M", type=float)
    p.add_argument("--fix", action="append", help="observed group cost, size=cost (repeatable)")
    p.add_argument("--partition", help="group sizes, comma-separated")
    p = ap_t.add_parser("queue-types", parents=[common])
    p.add_argument("--model", help="queue model JSON file")
    p.add_argument("--costs", help="per-queue cost tables, e.g. '0,1,2;0,1,2'")
    p.add_argument("--batch", help="batch composition to cost, e.g. 2,1")
    return parser


def _human(obj: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and any(isinstance(x, (dict, list)) for x in (v.values() if isinstance(v, dict) else v)):
                lines.append(f"{pad}{k}:")
                lines.extend(_human(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_human(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(obj)}")
    return lines


def _scalar(v: Any) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, dict):
        return ", ".join(f"{k}={_scalar(x)}" for k, x in v.items())
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    return str(v)


def run(argv: list[str] | None = None) -> tuple[int, dict[str, Any]]:
    parser = build_parser()
    args = parser.parse_args(argv)
    ctx = _Context(f"{args.group} {args.target}")
    report: dict[str, Any] = {"command": ctx.command, "conventions": CONVENTIONS}
    handlers: dict[str, Callable] = {"rd": cmd_rd, "apps": cmd_apps}
    try:
        if args.group == "mrdp":
            result, record = cmd_mrdp(args, ctx)
            if record is not None:
                report["verify"] = record
        else:
            result = handlers[args.group](args, ctx)
        report["inputs_digest"] = ctx.digest()
        report["result"] = result
        code = 0
    except MRDPError as exc:
        report["inputs_digest"] = ctx.digest()
        report["error"] = {"type": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code}
        code = exc.exit_code
    report["warnings"] = ctx.warnings
    report["_human"] = getattr(args, "human", False)
    return code, report


def main(argv: list[str] | None = None) -> int:
    code, report = run(argv)
    human = report.pop("_human")
    if human:
        print("\n".join(_human(report)))
    else:
        print(json.dumps(report, sort_keys=True, indent=2, allow_nan=False))
    return code


if __name__ == "__main__":
    sys.exit(main())
