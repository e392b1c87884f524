"""Command-line interface.

Exit status: 0 on success, 2 for usage or validation errors, 3 when an
instance is too large for the exhaustive oracle.  Errors are reported on
stderr as a one-line JSON object.  Randomised commands require ``--seed``.
Relative ``--out`` paths are resolved against ``$ISINGSTAB_OUTPUT_DIR`` when
it is set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import bounds as bnd
from . import compression as cmp
from . import montecarlo as mc
from .formats import dumps, load_config, load_instance, to_csv
from .graphs import Graph, build_complete, build_kings, build_star, build_torus
from .hamiltonian import OracleSizeError, energy, v_h
from .perturbation import PerturbationSpec, perturb_uniform, round_off
from .solvers import AnnealerParams, anneal_extremes, ground_state_exact

FAMILIES = ("complete", "kings", "star", "torus")
OUTPUT_DIR_ENV = "ISINGSTAB_OUTPUT_DIR"

BOUNDS_COLUMNS = ["method", "delta", "epsilon", "k_g", "max_degree", "chi_square_argument", "probability_lower_bound"]
TABLE1_COLUMNS = [
    "n", "epsilon", "delta", "alpha", "min_removed_size", "theta", "bound_general", "bound", "hypothesis_holds"
]
RH_COLUMNS = ["dims", "side", "n", "trial", "r_h", "r_h_over_n", "lower_anchor", "upper_anchor"]


class UsageError(ValueError):
    pass


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def family_graph(family: str, size: int | None = None, n=None, m=None, k=None, dims=None) -> Graph:
    """Build a family member; ``size`` overrides the family's main size parameter."""
    if family == "complete":
        n = size if size is not None else n
        if n is None:
            raise UsageError("complete graph needs --n")
        return build_complete(n)
    if family == "kings":
        if size is not None:
            n = m = size
        if n is None:
            raise UsageError("King's graph needs --n (and optionally --m)")
        return build_kings(n, m if m is not None else n)
    if family == "star":
        k = size if size is not None else (k if k is not None else n)
        if k is None:
            raise UsageError("star graph needs --k")
        return build_star(k)
    if family == "torus":
        if size is not None:
            sides = [size] * (len(dims) if dims else 1)
        else:
            sides = dims if dims else ([n] if n is not None else None)
        if not sides:
            raise UsageError("torus needs --dims or --n")
        return build_torus(sides)
    raise UsageError(f"unknown graph family {family!r}")


def _graph_from_args(args) -> Graph:
    if getattr(args, "graph_file", None):
        from .formats import load_graph

        return load_graph(args.graph_file)
    if not args.graph:
        raise UsageError("need --graph FAMILY or --graph-file")
    return family_graph(args.graph, n=args.n, m=args.m, k=args.k, dims=args.dims)


def _add_graph_flags(p, required=False):
    p.add_argument("--graph", choices=FAMILIES, required=required, help="graph family")
    p.add_argument("--graph-file", help="graph or instance JSON to take the graph from")
    p.add_argument("--n", type=int, help="vertices (complete), rows (kings) or length (1-D torus)")
    p.add_argument("--m", type=int, help="columns of a King's graph (default: --n)")
    p.add_argument("--k", type=int, help="leaves of a star")
    p.add_argument("--dims", type=_ints, help="torus side lengths, comma separated")


def _add_annealer_flags(p):
    d = AnnealerParams()
    p.add_argument("--sweeps", type=int, default=d.sweeps)
    p.add_argument("--t-initial", type=float, default=d.t_initial)
    p.add_argument("--t-final", type=float, default=d.t_final)
    p.add_argument("--pin-initial", type=float, default=d.pin_initial)
    p.add_argument("--pin-final", type=float, default=d.pin_final)
    p.add_argument("--restarts", type=int, default=d.restarts)


def _annealer_from_args(args) -> AnnealerParams:
    return AnnealerParams(
        sweeps=args.sweeps,
        t_initial=args.t_initial,
        t_final=args.t_final,
        pin_initial=args.pin_initial,
        pin_final=args.pin_final,
        restarts=args.restarts,
        seed=args.seed,
    )


def _require_seed(args):
    if args.seed is None:
        raise UsageError("this command is randomised and needs an explicit --seed")


# --- commands -------------------------------------------------------------


def cmd_gen(args) -> str:
    g = _graph_from_args(args)
    if args.graph_only:
        return dumps(g.to_json())
    _require_seed(args)
    inst = mc.sample_instance(g, args.fields, args.seed)
    return dumps(inst.to_json())


def cmd_energy(args) -> str:
    inst = load_instance(args.instance)
    if args.config:
        spins = load_config(args.config)
    elif args.spins:
        spins = _ints(args.spins)
    else:
        raise UsageError("need --config or --spins")
    return dumps({"energy": energy(inst, spins), "v_h": v_h(inst)})


def cmd_ground(args) -> str:
    inst = load_instance(args.instance)
    if args.anneal:
        _require_seed(args)
        params = _annealer_from_args(args)
        lo, hi, cfg = anneal_extremes(inst, params)
        return dumps(
            {
                "config": cfg.astype(int).tolist(),
                "energy": lo,
                "exact": False,
                "min_estimate": lo,
                "max_estimate": hi,
                "annealer": params.to_json(),
            }
        )
    return dumps(ground_state_exact(inst, cap=args.cap).to_json())


def cmd_perturb(args) -> str:
    inst = load_instance(args.instance)
    if (args.bits is None) == (args.delta is None):
        raise UsageError("give exactly one of --bits or --delta")
    if args.bits is not None:
        out, delta = round_off(inst, args.bits)
        spec = PerturbationSpec.roundoff(args.bits)
    else:
        _require_seed(args)
        if not args.delta > 0:
            raise UsageError("--delta must be positive")
        out = perturb_uniform(inst, args.delta, args.seed)
        spec = PerturbationSpec.uniform(args.delta, args.seed)
    return dumps({**out.to_json(), "perturbation": spec.to_json()})


def cmd_bounds(args) -> str:
    if args.sweep is None:
        g = _graph_from_args(args)
        rep = bnd.bound_by_method(g, args.method, args.delta, args.eps)
        if args.format == "csv":
            return to_csv([rep.to_json()], BOUNDS_COLUMNS)
        return dumps(rep.to_json())
    if args.values is None:
        raise UsageError("--sweep needs --values")
    rows = []
    for v in _floats(args.values):
        if args.sweep == "delta":
            g, delta = _graph_from_args(args), v
        else:
            if not args.graph:
                raise UsageError("size sweep needs --graph FAMILY")
            g, delta = family_graph(args.graph, size=int(v), dims=args.dims), args.delta
        rows.append({"size": int(v) if args.sweep == "size" else "", **bnd.bound_by_method(g, args.method, delta, args.eps).to_json()})
    cols = (["size"] if args.sweep == "size" else []) + BOUNDS_COLUMNS
    if args.format == "json":
        return dumps({"rows": rows})
    # sweeps default to csv
    return to_csv(rows, cols)


def cmd_digits(args) -> str:
    rows = []
    for size in _ints(args.sizes):
        g = family_graph(args.graph, size=size, dims=args.dims)
        if args.method == "all":
            methods = [m for m in bnd.METHODS if m != "complete_graph" or g.is_complete] + ["best"]
        else:
            methods = [args.method]
        for m in methods:
            rows.append({"size": size, "min_digits": bnd.min_digits(g, args.eps, args.target, m), "method": m})
    return to_csv(rows, ["size", "min_digits", "method"])


def cmd_compress(args) -> str:
    inst = load_instance(args.instance)
    res = cmp.build_v0(inst, args.delta)
    out = res.to_json()
    if args.exact:
        out["deviation_exact"] = cmp.deviation_exact(inst, res, cap=args.cap)
    return dumps(out)


def cmd_torus_guarantee(args) -> str:
    q = cmp.TorusGuaranteeQuery(args.n, args.eps, args.delta, args.c, args.alpha)
    general, with_size = cmp.torus_guarantee(q)
    return dumps(
        {
            "n": q.n,
            "epsilon": q.epsilon,
            "delta": q.delta,
            "c": q.c,
            "alpha": q.alpha,
            "theta": q.theta,
            "min_removed_size": cmp.minimum_removed_size(q.n, q.c, q.alpha),
            "bound_general": general,
            "bound_with_size": with_size,
        }
    )


def cmd_table1(args) -> str:
    rows = cmp.table1()
    if args.format == "json":
        return dumps({"rows": rows})
    return to_csv(rows, TABLE1_COLUMNS)


def cmd_verify(args) -> str:
    _require_seed(args)
    if args.what == "gap":
        g = _graph_from_args(args)
        if (args.bits is None) == (args.delta is None):
            raise UsageError("give exactly one of --bits or --delta")
        spec = PerturbationSpec.roundoff(args.bits) if args.bits is not None else PerturbationSpec.uniform(args.delta)
        plan = mc.TrialPlan(g, spec, args.eps, args.trials, args.seed, with_fields=not args.no_fields)
        res = mc.estimate_gap_probability(plan, workers=args.threads, keep_records=args.verbose)
        return dumps({"perturbation": spec.to_json(), "epsilon": args.eps, **res.to_json(verbose=args.verbose)})
    if args.what == "moments":
        if args.n is None or args.delta is None:
            raise UsageError("moments needs --n and --delta")
        first, second = mc.estimate_removed_stats(args.n, args.delta, args.trials, args.seed)
        full = mc.estimate_full_removal(args.n, args.delta, args.trials, args.seed)
        return dumps(
            {
                "n": args.n,
                "delta": args.delta,
                "mean": first.to_json(),
                "second_moment": second.to_json(),
                "full_removal": full.to_json(),
            }
        )
    # rh-scan
    if not args.sizes:
        raise UsageError("rh-scan needs --sizes")
    rows = mc.scan_rh_over_n(
        args.dim,
        _ints(args.sizes),
        args.trials,
        args.solver,
        args.seed,
        annealer=_annealer_from_args(args),
        workers=args.threads,
    )
    if args.format == "json":
        return dumps({"rows": rows})
    return to_csv(rows, RH_COLUMNS)


# --- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isingstab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=fn)
        p.add_argument("--out", help="write output here instead of stdout")
        return p

    p = add("gen", cmd_gen, "generate a graph or a Gaussian instance")
    _add_graph_flags(p)
    p.add_argument("--graph-only", action="store_true")
    p.add_argument("--fields", action="store_true", help="also draw Gaussian external fields")
    p.add_argument("--seed", type=int)

    p = add("energy", cmd_energy, "energy of a configuration")
    p.add_argument("--instance", required=True)
    p.add_argument("--config", help="config JSON (e.g. output of 'ground')")
    p.add_argument("--spins", help="comma separated +-1 values")

    p = add("ground", cmd_ground, "ground state by enumeration or annealing")
    p.add_argument("--instance", required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", default=True)
    mode.add_argument("--anneal", action="store_true")
    p.add_argument("--cap", type=int)
    p.add_argument("--seed", type=int)
    _add_annealer_flags(p)

    p = add("perturb", cmd_perturb, "round off or add bounded noise")
    p.add_argument("--instance", required=True)
    p.add_argument("--bits", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--seed", type=int)

    p = add("bounds", cmd_bounds, "ground-state stability probability bounds")
    _add_graph_flags(p)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--method", choices=("best",) + bnd.METHODS, default="best")
    p.add_argument("--sweep", choices=("delta", "size"))
    p.add_argument("--values", help="comma separated sweep values")
    p.add_argument("--format", choices=("json", "csv"), help="default: json, or csv for a sweep")

    p = add("digits", cmd_digits, "minimal binary digits per graph size")
    p.add_argument("--graph", choices=FAMILIES, required=True)
    p.add_argument("--dims", type=_ints, help="torus: number of entries sets the dimension")
    p.add_argument("--sizes", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--target", type=float, default=0.99)
    p.add_argument("--method", choices=("all", "best") + bnd.METHODS, default="all")

    p = add("compress", cmd_compress, "split off weakly coupled vertices")
    p.add_argument("--instance", required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--exact", action="store_true", help="also compute the exact deviation by enumeration")
    p.add_argument("--cap", type=int)

    p = add("torus-guarantee", cmd_torus_guarantee, "1-D torus compression probability bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--alpha", type=float, required=True)

    p = add("table1", cmd_table1, "reference compression-guarantee table")
    p.add_argument("--format", choices=("json", "csv"), default="csv")

    p = add("verify", cmd_verify, "Monte Carlo checks: gap | moments | rh-scan")
    p.add_argument("what", choices=("gap", "moments", "rh-scan"))
    _add_graph_flags(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--bits", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--no-fields", action="store_true")
    p.add_argument("--dim", type=int, default=1, help="rh-scan: torus dimension")
    p.add_argument("--sizes", help="rh-scan: comma separated side lengths")
    p.add_argument("--solver", choices=("exact_1d", "anneal"), default="exact_1d")
    p.add_argument("--threads", type=int, default=1, help="worker cap; results do not depend on it")
    p.add_argument("--verbose", action="store_true", help="include per-trial records")
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    _add_annealer_flags(p)
    return parser


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _emit(args.func(args), args.out)
    except OracleSizeError as exc:
        print(json.dumps({"error": str(exc), "kind": "oracle_size"}), file=sys.stderr)
        return 3
    except (ValueError, KeyError, FileNotFoundError) as exc:
        print(json.dumps({"error": str(exc), "kind": "validation"}), file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
