"""Command-line entry point.

Exit codes: 0 on success, 1 for usage or configuration errors, 2 for
runtime failures (scale guards, unreachable events, I/O).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import analytics
from .connectivity import find_separator, vertex_connectivity
from .errors import HypergraphError, ScaleGuardError, UnreachableEventError
from .harness import ConfigError, ExperimentConfig, emit, load_config, run_experiment, to_csv, to_json
from .hypergraph import dumps, read_edge_list, write_edge_list
from .random_models import Seed, sample_gnm, sample_gnp

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2

_EXPERIMENTS = {
    "hitting-times": "hitting-times",
    "sweep": "threshold-sweep",
    "poisson": "poisson-count",
    "quasi": "quasi-disjoint",
    "property-q": "property-q",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _shared(p: argparse.ArgumentParser):
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--out", help="output path (stdout when omitted)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--config", help="JSON config; flags override its values")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hyperconn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="sample a random hypergraph as an edge list")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--d", type=int, default=3)
    g.add_argument("--k", type=int, default=2)
    g.add_argument("--model", choices=("gnm", "gnp"), default="gnm")
    g.add_argument("--m", type=int, help="edge count (gnm); default is the threshold at --c")
    g.add_argument("--p", type=float, help="edge probability (gnp); default is the threshold at --c")
    g.add_argument("--c", type=float, default=0.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")

    c = sub.add_parser("connectivity", help="test k-connectivity of an edge-list file")
    c.add_argument("input")
    c.add_argument("--k", type=int, default=1)
    c.add_argument("--kappa", action="store_true", help="also compute the vertex connectivity")
    c.add_argument("--out")

    for name, kind in _EXPERIMENTS.items():
        p = sub.add_parser(name, help=f"run a {kind} experiment")
        _shared(p)
        p.add_argument("--omega", type=float)
        p.add_argument("--workers", type=int)
        p.add_argument("--max-n", type=int, dest="max_n")
        if name == "sweep":
            p.add_argument("--c-min", type=float, default=None)
            p.add_argument("--c-max", type=float, default=None)
            p.add_argument("--c-steps", type=int, default=None)
            p.add_argument("--gnp", action="store_true", help="also sample the binomial model")
        elif name == "poisson":
            p.add_argument("--c", type=float)
    return parser


def _config_from_args(args, kind: str) -> ExperimentConfig:
    data = {}
    if args.config:
        data = load_config(args.config).to_dict()
        if data["kind"] != kind:
            raise ConfigError(f"config file is for {data['kind']}, command runs {kind}")
    data["kind"] = kind
    for flag, key in (("n", "n"), ("d", "d"), ("k", "k"), ("trials", "trials"),
                      ("seed", "master_seed"), ("omega", "omega"),
                      ("workers", "workers"), ("max_n", "max_n")):
        val = getattr(args, flag, None)
        if val is not None:
            data[key] = val
    if kind == "threshold-sweep":
        if args.gnp:
            data["include_gnp"] = True
        given = [args.c_min, args.c_max, args.c_steps]
        if any(v is not None for v in given):
            if any(v is None for v in given):
                raise ConfigError("--c-min, --c-max and --c-steps go together")
            if args.c_steps < 1:
                raise ConfigError("--c-steps must be >= 1")
            data["c_grid"] = np.linspace(args.c_min, args.c_max, args.c_steps).tolist()
    if kind == "poisson-count" and args.c is not None:
        data["c_grid"] = [args.c]
    if "n" not in data:
        raise ConfigError("--n is required (flag or config file)")
    return ExperimentConfig.from_dict(data).validate()


def _write_text(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_gen(args):
    th = analytics.thresholds(args.n, args.d, args.k, args.c) if args.n >= 3 else None
    if args.model == "gnm":
        m = args.m if args.m is not None else (th.m_at_c if th else 0)
        H = sample_gnm(args.n, args.d, m, Seed(args.seed))
    else:
        p = args.p if args.p is not None else (th.p_at_c if th else 0.0)
        H = sample_gnp(args.n, args.d, p, Seed(args.seed))
    if args.out:
        write_edge_list(H, args.out)
    else:
        sys.stdout.write(dumps(H))


def _cmd_connectivity(args):
    H = read_edge_list(args.input)
    w = find_separator(H, args.k)
    report = {
        "n": H.n,
        "d": H.d,
        "m": H.m,
        "k": args.k,
        "min_degree": H.min_degree(),
        "k_connected": H.n > args.k and w is None,
        "witness": w.to_dict() if w is not None else None,
    }
    if args.kappa:
        report["vertex_connectivity"] = vertex_connectivity(H)
    _write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", args.out)


def _cmd_experiment(args):
    cfg = _config_from_args(args, _EXPERIMENTS[args.command])
    summary = run_experiment(cfg)
    if args.out:
        for path in emit(summary, args.out, args.format):
            print(path, file=sys.stderr)
    else:
        sys.stdout.write(to_csv(summary) if args.format == "csv" else to_json(summary))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            _cmd_gen(args)
        elif args.command == "connectivity":
            _cmd_connectivity(args)
        else:
            _cmd_experiment(args)
    except (ConfigError, HypergraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ScaleGuardError, UnreachableEventError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
