"""Command-line interface: ``treesearch <subcommand> [options]``.

Each subcommand writes one data file (CSV or JSON) to stdout or, with
``--out-dir``, to ``<out-dir>/<subcommand>.<format>``.  Failures exit
nonzero and print a JSON error object on stderr.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import output
from .centrality import centrality_table
from .classical_walk import classical_complexity_class, hitting_times, monte_carlo_hitting
from .errors import InvalidParameter, NoPeakFound, NumericalFailure, ReductionCheckFailed
from .evolution import Propagator, default_horizon, evolve_amplitude
from .reduction import MAX_VERIFY_DEPTH, comb_reduction_map, reduce, verify_reduction
from .root_analytics import (
    asymptotic_runtime,
    critical_poles,
    critical_residues,
    laplace_psi1,
    small_gamma_efficiency,
)
from .search_analysis import (
    beta_prediction,
    gamma_star_rule,
    level_for,
    measure,
    scaling_experiment,
    sweep_gamma,
)
from .tree_core import TreeParams, build_full_hamiltonian

# Per-subcommand default output format.  Parent-parser actions are shared
# between subparsers, so this cannot go through set_defaults.
DEFAULT_FORMAT = {
    "reduce": "json",
    "evolve": "csv",
    "sweep": "csv",
    "scaling": "json",
    "classical": "csv",
    "centrality": "csv",
    "analytic": "json",
}


def parse_range(text: str) -> list[int]:
    """``8:64:4`` -> [8, 12, ..., 64]; ``8,12,20`` -> explicit list."""
    if ":" in text:
        parts = [int(p) for p in text.split(":")]
        start, stop = parts[0], parts[1]
        step = parts[2] if len(parts) > 2 else 1
        return list(range(start, stop + 1, step))
    return [int(p) for p in text.split(",") if p]


def _config(args: argparse.Namespace) -> dict:
    skip = {"func", "config", "out_dir"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _verification(n: int, l: int, gamma: float) -> dict:
    params = TreeParams(n, l, gamma)
    report = verify_reduction(build_full_hamiltonian(params), comb_reduction_map(n, l), reduce(params))
    return {"n": n, "l": l, "gamma": gamma, **report.to_json()}


def cmd_reduce(args) -> tuple[str, str]:
    params = TreeParams(args.n, args.l, args.gamma)
    if args.verify and args.n > MAX_VERIFY_DEPTH:
        raise InvalidParameter(f"verification requires n <= {MAX_VERIFY_DEPTH}")
    system = reduce(params)
    cfg = _config(args)
    if args.format == "csv":
        rows = [[i, j, v] for i, j, v in system.to_json()["entries"]]
        return output.to_csv(["i", "j", "value"], rows, cfg), "csv"
    payload = {"reduced_system": system.to_json()}
    if args.verify:
        payload["verification"] = _verification(args.n, args.l, args.gamma)
    return output.to_json(payload, cfg), "json"


def cmd_evolve(args) -> tuple[str, str]:
    system = reduce(TreeParams(args.n, args.l, args.gamma))
    prop = Propagator(system)
    t_max = args.t_max if args.t_max is not None else default_horizon(system)
    times = np.linspace(0.0, t_max, args.samples)
    trace = evolve_amplitude(system, times, prop)
    cfg = _config(args)
    if args.format == "json":
        payload = {
            "t": trace.times.tolist(),
            "re_amp": trace.amplitude.real.tolist(),
            "im_amp": trace.amplitude.imag.tolist(),
            "prob": trace.probability.tolist(),
        }
        return output.to_json(payload, cfg), "json"
    return trace.to_csv(header=output.header(cfg)), "csv"


def cmd_sweep(args) -> tuple[str, str]:
    sw = sweep_gamma(
        args.n, args.l, gamma_max=args.gamma_max, coarse=args.coarse, fine=args.fine, method=args.method, workers=args.workers
    )
    cfg = _config(args)
    if args.format == "csv":
        rows = [[p.gamma, p.max_prob, p.t0, p.p0, p.efficiency] for p in sw.points]
        return output.to_csv(["gamma", "max_prob", "t0", "p0", "efficiency"], rows, cfg), "csv"
    payload = {
        "gamma_prime_star": sw.gamma_prime_star,
        "gamma_star": sw.gamma_star,
        "p_max": sw.p_max,
        "points": [
            {"gamma": p.gamma, "max_prob": p.max_prob, "t0": p.t0, "p0": p.p0, "efficiency": p.efficiency, "linear_regime": p.linear_regime}
            for p in sw.points
        ],
    }
    return output.to_json(payload, cfg), "json"


def _level_policy(args):
    if args.l_ratio is not None:
        return float(args.l_ratio)
    return int(args.l)


def cmd_scaling(args) -> tuple[str, str]:
    sizes = parse_range(args.sizes)
    policy = _level_policy(args)
    fit = scaling_experiment(sizes, policy, args.gamma, method=args.method, fit_min_n=args.fit_min_n, workers=args.workers)
    cfg = _config(args)
    slope_by_n = {}
    good = fit.included
    for p, s in zip(good[1:], fit.local_slopes):
        slope_by_n[p.n] = float(s)
    if args.format == "csv":
        rows = [[p.n, p.N, p.t0, p.p0, p.metric, slope_by_n.get(p.n)] for p in fit.points]
        return output.to_csv(["n", "N", "t0", "p0", "metric", "local_slope"], rows, cfg), "csv"
    checkable = max((n for n in sizes if n <= 10), default=min(sizes))
    lv = level_for(checkable, policy)
    g = args.gamma if args.gamma is not None else gamma_star_rule(lv, checkable)
    payload = {
        "beta": fit.beta,
        "beta_stderr": fit.beta_stderr,
        "fit_min_n": fit.fit_min_n,
        "excluded_linear_regime": fit.excluded,
        "beta_prediction_at_largest_n": beta_prediction(level_for(sizes[-1], policy), sizes[-1]),
        "points": [
            {"n": p.n, "N": p.N, "l": p.l, "gamma": p.gamma, "t0": p.t0, "p0": p.p0, "metric": p.metric, "local_slope": slope_by_n.get(p.n)}
            for p in fit.points
        ],
        "provenance": {"verification": _verification(checkable, lv, g)},
    }
    return output.to_json(payload, cfg), "json"


def cmd_classical(args) -> tuple[str, str]:
    ht = hitting_times(args.n)
    cfg = _config(args)
    if args.format == "csv":
        rows = [
            [k, float(t) if not ht.exact else int(t), float(w)]
            for k, (t, w) in enumerate(zip(ht.per_level, ht.weighted), start=1)
        ]
        return output.to_csv(["k", "t_k", "weighted_t_k"], rows, cfg), "csv"
    payload = {"summary": classical_complexity_class(args.n), "T": float(ht.average)}
    if args.mc_walks:
        mean, se = monte_carlo_hitting(args.n, 2, args.mc_walks, seed=args.seed, workers=args.workers)
        payload["monte_carlo_level2"] = {"mean": mean, "stderr": se, "walks": args.mc_walks}
    return output.to_json(payload, cfg), "json"


def cmd_centrality(args) -> tuple[str, str]:
    rows = centrality_table(args.n)
    cfg = _config(args)
    if args.format == "csv":
        table = [[r.l, r.beta_pred, r.closeness_norm, r.kappa_hat, r.betweenness_norm] for r in rows]
        return output.to_csv(["l", "beta_pred", "closeness_norm", "kappa_hat", "betweenness_norm"], table, cfg), "csv"
    payload = {
        "rows": [
            {
                "l": r.l,
                "beta_pred": r.beta_pred,
                "closeness_norm": r.closeness_norm,
                "kappa_hat": r.kappa_hat,
                "betweenness_norm": r.betweenness_norm,
                "betweenness_exponent": r.betweenness_exponent,
                "degree": r.degree,
                "kappa_matches_2beta": r.kappa_matches_2beta,
            }
            for r in rows
        ]
    }
    return output.to_json(payload, cfg), "json"


def cmd_analytic(args) -> tuple[str, str]:
    n = args.n
    svals = [complex(x) for x in args.s.split(",")] if args.s else []
    poles = critical_poles(n)
    residues = critical_residues(n)
    payload = {
        "n": n,
        "N": 2**n - 1,
        "asymptotic_runtime": asymptotic_runtime(n),
        "poles_imag": [p.imag for p in poles],
        "residues": [r.real for r in residues],
        "laplace_psi1": [{"s": [s.real, s.imag], "value": [v.real, v.imag]} for s, v in ((s, laplace_psi1(s, n)) for s in svals)],
    }
    if args.small_gamma is not None:
        payload["small_gamma_efficiency"] = small_gamma_efficiency(args.small_gamma, 2**n - 1)
    cfg = _config(args)
    if args.format == "csv":
        rows = [["asymptotic_runtime", payload["asymptotic_runtime"]]]
        rows += [[f"pole_{i}", v] for i, v in enumerate(payload["poles_imag"])]
        rows += [[f"residue_{i}", v] for i, v in enumerate(payload["residues"])]
        return output.to_csv(["quantity", "value"], rows, cfg), "csv"
    return output.to_json(payload, cfg), "json"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--out-dir", default=None, help="write <subcommand>.<format> here instead of stdout")
    common.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    common.add_argument("--config", default=None, help="key = value file overriding defaults")

    parser = argparse.ArgumentParser(prog="treesearch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def instance(p, gamma=1.0):
        p.add_argument("--n", type=int, default=3)
        p.add_argument("--l", type=int, default=1)
        p.add_argument("--gamma", type=float, default=gamma)

    p = sub.add_parser("reduce", parents=[common], help="emit a reduced Hamiltonian")
    instance(p)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("evolve", parents=[common], help="marked-site amplitude trace")
    instance(p)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--samples", type=int, default=2001)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("sweep", parents=[common], help="gamma sweep for one (n, l)")
    p.add_argument("--n", type=int, default=16)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--gamma-max", type=float, default=3.0)
    p.add_argument("--coarse", type=float, default=0.05)
    p.add_argument("--fine", type=float, default=0.005)
    p.add_argument("--method", choices=("envelope", "scan"), default="envelope")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("scaling", parents=[common], help="t0/p(t0) over sizes and the exponent beta")
    p.add_argument("--n", dest="sizes", default="8:64:4", help="start:stop:step or comma list")
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--l", type=int, default=1)
    grp.add_argument("--l-ratio", type=float, default=None)
    p.add_argument("--gamma", type=float, default=None, help="default: heuristic optimum per level")
    p.add_argument("--method", choices=("envelope", "scan"), default="envelope")
    p.add_argument("--fit-min-n", type=int, default=24)
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("classical", parents=[common], help="random-walk hitting times")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--mc-walks", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_classical)

    p = sub.add_parser("centrality", parents=[common], help="closeness/betweenness table")
    p.add_argument("--n", type=int, default=24)
    p.set_defaults(func=cmd_centrality)

    p = sub.add_parser("analytic", parents=[common], help="closed-form root-case quantities")
    p.add_argument("--n", type=int, default=15)
    p.add_argument("--s", default="", help="comma list of complex frequencies, e.g. 0.1,0.2+0.1j")
    p.add_argument("--small-gamma", type=float, default=None)
    p.set_defaults(func=cmd_analytic)
    return parser


def read_config(path: str) -> dict:
    cp = configparser.ConfigParser()
    cp.read_string("[run]\n" + Path(path).read_text())
    return {k.replace("-", "_"): v for k, v in cp["run"].items()}


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if not args.config:
        return args
    overrides = read_config(args.config)
    sub = parser._subparsers._group_actions[0].choices[args.command]  # noqa: SLF001
    typed = {}
    for action in sub._actions:  # noqa: SLF001
        if action.dest in overrides:
            raw = overrides[action.dest]
            if action.const is True and action.nargs == 0:
                typed[action.dest] = raw.strip().lower() in ("1", "true", "yes", "on")
            else:
                typed[action.dest] = action.type(raw) if action.type else raw
    unknown = set(overrides) - {a.dest for a in sub._actions}  # noqa: SLF001
    if unknown:
        raise InvalidParameter(f"unknown config keys: {sorted(unknown)}")
    for action in sub._actions:  # noqa: SLF001
        if action.dest in typed:
            action.default = typed[action.dest]
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = _apply_config(parser, argv)
        if args.format is None:
            args.format = DEFAULT_FORMAT[args.command]
        text, ext = args.func(args)
    except (InvalidParameter, NoPeakFound, NumericalFailure, ReductionCheckFailed, ValueError, OSError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(err), file=sys.stderr)
        return 2
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{args.command}.{ext}").write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
