"""Command-line interface.

Subcommands: ``partition`` (the multi-level partitioner), ``eval`` (score an
existing partition file), ``baseline`` (one-pass / overlap greedy),
``oracle`` (brute-force optimum on tiny inputs), and ``gen`` (seeded random
instances).

Exit codes: 0 success; 1 parse or I/O failure; 2 infeasible input or oracle
size guard; 3 partition fails the constraints under ``eval``.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .baselines import one_pass, overlap_greedy
from .driver import Config, partition
from .errors import DhgParseError, InfeasibleError, OracleSizeError
from .gen import generate_dhg
from .hgraph import (
    Constraints,
    Partitioning,
    check_validity,
    connectivity,
    load_hypergraph,
    parse_partition,
    write_partition,
)
from .oracles import brute_force_optimal

__all__ = ["main"]


def _add_constraint_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-size", type=int, required=True, help="max fine nodes per partition")
    p.add_argument(
        "--max-inbound", type=int, required=True, help="max distinct inbound edges per partition"
    )


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dhgpart",
        description="Multi-level directed-hypergraph partitioning under size and inbound limits",
    )
    sub = p.add_subparsers(dest="command", required=True)

    pp = sub.add_parser("partition", help="run the multi-level partitioner")
    pp.add_argument("--input", required=True, help="input .dhg (or .hgr) file")
    _add_constraint_flags(pp)
    pp.add_argument("--rounds", type=int, default=8, help="refinement rounds per level")
    pp.add_argument("--batch", type=int, default=32, help="histogram batch size")
    pp.add_argument("--out", default=None, help="partition file (default: stdout)")
    pp.add_argument("--metrics", default=None, help="write run metrics JSON here")
    pp.add_argument("--seed", type=int, default=0, help="reserved; the pipeline is deterministic")
    pp.add_argument(
        "--timings", action="store_true", help="include wall times in metrics (non-reproducible)"
    )

    pe = sub.add_parser("eval", help="evaluate an existing partition file")
    pe.add_argument("--input", required=True)
    pe.add_argument("--parts", required=True, help="partition file, one id per line")
    _add_constraint_flags(pe)

    pb = sub.add_parser("baseline", help="run a baseline partitioner")
    pb.add_argument("--method", choices=("onepass", "overlap"), required=True)
    pb.add_argument("--input", required=True)
    _add_constraint_flags(pb)
    pb.add_argument("--out", default=None)
    pb.add_argument("--metrics", default=None)

    po = sub.add_parser("oracle", help="brute-force optimum (at most 10 nodes)")
    po.add_argument("--input", required=True)
    _add_constraint_flags(po)
    po.add_argument("--out", default=None)
    po.add_argument("--metrics", default=None)

    pg = sub.add_parser("gen", help="generate a seeded random instance")
    pg.add_argument("--nodes", type=int, required=True)
    pg.add_argument("--edges", type=int, required=True)
    pg.add_argument("--max-pins", type=int, required=True)
    pg.add_argument("--seed", type=int, default=0)
    pg.add_argument("--out", default=None, help="output .dhg file (default: stdout)")
    return p


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _validity_report(g, part: Partitioning, c: Constraints) -> dict:
    viols = check_validity(g, part, c)
    return {
        "connectivity": connectivity(g, part),
        "num_partitions": part.num_parts,
        "valid": not viols,
        "violations": [
            {"part": v.part, "kind": v.kind, "actual": v.actual, "limit": v.limit}
            for v in viols
        ],
    }


def _write_metrics(doc: dict, path: str | None) -> None:
    if path is not None:
        Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _cmd_partition(args) -> int:
    g = load_hypergraph(args.input)
    c = Constraints(args.max_size, args.max_inbound)
    cfg = Config(
        constraints=c, max_rounds=args.rounds, batch_size=args.batch, seed=args.seed
    )
    part, stats = partition(g, cfg, timings=args.timings)
    _emit(write_partition(part), args.out)
    doc = stats.to_dict()
    doc.update(_validity_report(g, part, c))
    _write_metrics(doc, args.metrics)
    return 0


def _cmd_eval(args) -> int:
    g = load_hypergraph(args.input)
    c = Constraints(args.max_size, args.max_inbound)
    part = parse_partition(Path(args.parts).read_text())
    if len(part.assign) != g.num_nodes:
        print(
            f"error: partition file covers {len(part.assign)} nodes, graph has {g.num_nodes}",
            file=sys.stderr,
        )
        return 1
    doc = _validity_report(g, part, c)
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return 0 if doc["valid"] else 3


def _cmd_baseline(args) -> int:
    g = load_hypergraph(args.input)
    c = Constraints(args.max_size, args.max_inbound)
    fn = one_pass if args.method == "onepass" else overlap_greedy
    part = fn(g, c)
    _emit(write_partition(part), args.out)
    doc = {"method": args.method}
    doc.update(_validity_report(g, part, c))
    _write_metrics(doc, args.metrics)
    return 0


def _cmd_oracle(args) -> int:
    g = load_hypergraph(args.input)
    c = Constraints(args.max_size, args.max_inbound)
    part, conn = brute_force_optimal(g, c)
    _emit(write_partition(part), args.out)
    doc = _validity_report(g, part, c)
    doc["connectivity"] = conn
    _write_metrics(doc, args.metrics)
    return 0


def _cmd_gen(args) -> int:
    _emit(generate_dhg(args.nodes, args.edges, args.max_pins, args.seed), args.out)
    return 0


_COMMANDS = {
    "partition": _cmd_partition,
    "eval": _cmd_eval,
    "baseline": _cmd_baseline,
    "oracle": _cmd_oracle,
    "gen": _cmd_gen,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (DhgParseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (InfeasibleError, OracleSizeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
