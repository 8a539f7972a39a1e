"""Command-line entry point: ``hyperrecon <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from contextlib import contextmanager
from fractions import Fraction

from .cover_oracle import (
    EdgeSet,
    clique_edges,
    clique_g_closed_form,
    constant_profile,
    g_argmax,
    g_value,
    star_edges,
)
from .estimator import read_cliques, recover, write_cliques
from .exact import as_float, to_exact
from .harness import ExperimentConfig, params_from_dict, run_sweep, run_trial
from .model import project, read_graph, read_hypergraph, sample_hypergraph, write_graph, write_hypergraph
from .probability import mc_subgraph_prob, subgraph_prob_bounds, subgraph_prob_exact

log = logging.getLogger("hyperrecon")

GTABLE_HEADER = ("d", "delta", "g_clique", "g_star", "argmax_cover")
PROBCHECK_HEADER = ("n", "formula", "mc_estimate", "stderr", "lower", "upper")


@contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fp:
            yield fp


@contextmanager
def _open_in(path):
    if path in (None, "-"):
        yield sys.stdin
    else:
        with open(path) as fp:
            yield fp


def _load_json(path):
    with open(path) as fp:
        return json.load(fp)


def cmd_generate(args):
    params = params_from_dict(_load_json(args.config))
    h = sample_hypergraph(params, args.seed)
    with _open_out(args.out) as fp:
        write_hypergraph(h, fp)


def cmd_project(args):
    with _open_in(args.input) as fp:
        h = read_hypergraph(fp)
    with _open_out(args.out) as fp:
        write_graph(project(h), fp)


def cmd_recover(args):
    with _open_in(args.input) as fp:
        g = read_graph(fp, n=args.n)
    with _open_out(args.out) as fp:
        write_cliques(recover(g, args.degree), fp)


def cmd_trial(args):
    params = params_from_dict(_load_json(args.config))
    target = params.class_index(args.degree) if args.degree else len(params.classes) - 1
    report = run_trial(params, target, args.seed)
    with _open_out(args.out) as fp:
        json.dump(report.as_dict(), fp, sort_keys=True)
        fp.write("\n")


def cmd_sweep(args):
    config = ExperimentConfig.from_json(args.config)
    if args.seed is not None:
        config = ExperimentConfig.from_dict({**config.to_dict(), "base_seed": args.seed})
    out = args.out if args.out is not None else config.output_path
    if not out:
        raise ValueError("no output path: pass --out or set output_path in the config")
    rows = run_sweep(config, threads=args.threads, output_path=out)
    log.info("wrote %d rows to %s", len(rows), out)


def _parse_deltas(text: str) -> list[Fraction]:
    return [to_exact(float(t)) if "/" not in t else Fraction(t) for t in text.split(",") if t]


def cmd_gtable(args):
    deltas = _parse_deltas(args.deltas)
    with _open_out(args.out) as fp:
        w = csv.writer(fp, lineterminator="\n")
        w.writerow(GTABLE_HEADER)
        for d in range(args.d_min, args.d_max + 1):
            for delta in deltas:
                if d >= 3:
                    g_clique, cover = g_argmax(clique_edges(d), constant_profile(delta, d, [d]))
                    if g_clique != clique_g_closed_form(d, delta):
                        raise RuntimeError(f"oracle and closed form disagree at d={d}, delta={delta}")
                    clique_cell, arg = repr(as_float(g_clique)), cover.describe()
                else:
                    clique_cell, arg = "", ""
                g_star = g_value(star_edges(d), constant_profile(delta, d))
                w.writerow([d, repr(float(delta)), clique_cell, repr(as_float(g_star)), arg])


def cmd_probcheck(args):
    cfg = _load_json(args.config)
    edges = EdgeSet.of(cfg["edges"])
    trials = int(cfg.get("trials", 10_000))
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    with _open_out(args.out) as fp:
        w = csv.writer(fp, lineterminator="\n")
        w.writerow(PROBCHECK_HEADER)
        for n in cfg["n_grid"]:
            params = params_from_dict({"n": n, "classes": cfg["classes"]})
            exact = subgraph_prob_exact(edges, n, params)
            est, se = mc_subgraph_prob(edges, params, trials, seed)
            b = subgraph_prob_bounds(edges, n, params)
            w.writerow([n, repr(exact), repr(est), repr(se), repr(b.lower), repr(b.upper)])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperrecon", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=fn)
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        return p

    p = add("generate", cmd_generate, "sample a hypergraph")
    p.add_argument("--config", required=True, help="JSON with n and classes")
    p.add_argument("--seed", type=int, default=0)

    p = add("project", cmd_project, "project a hypergraph file to its graph")
    p.add_argument("input", nargs="?", default="-")

    p = add("recover", cmd_recover, "maximal cliques of one size from a graph file")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--degree", "-d", type=int, required=True)
    p.add_argument("--n", type=int, default=None, help="vertex count if the file has no header")

    p = add("trial", cmd_trial, "one sample/project/recover/score trial, as JSON")
    p.add_argument("--config", required=True, help="JSON with n and classes")
    p.add_argument("--degree", "-d", type=int, default=None, help="target class degree (default: largest)")
    p.add_argument("--seed", type=int, default=0)

    p = add("sweep", cmd_sweep, "run an experiment grid and write CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None, help="override base_seed")
    p.add_argument("--threads", type=int, default=1)

    p = add("gtable", cmd_gtable, "tabulate g for cliques and stars")
    p.add_argument("--d-min", type=int, default=2)
    p.add_argument("--d-max", type=int, default=5)
    p.add_argument("--deltas", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")

    p = add("probcheck", cmd_probcheck, "exact vs Monte Carlo subgraph probability")
    p.add_argument("--config", required=True, help="JSON with n_grid, classes, edges, trials")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=1, help="accepted for interface symmetry")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except Exception as exc:  # one-line diagnostic, nonzero exit
        print(f"hyperrecon {args.command}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
