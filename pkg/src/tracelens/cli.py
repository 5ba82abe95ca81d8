"""Command-line entry point.

Subcommands wire the library stages together without adding logic of their
own: ingest (CSV to DAG file), count, enumerate, sample, mine, top-k, stats,
synth, and bench. Exit codes: 0 success, 1 usage error, 2 data error.
Randomized subcommands require --seed (or the TRACELENS_SEED environment
variable) and are byte-reproducible for a fixed configuration, regardless of
--threads.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import dag as dag_mod
from . import ingest as ingest_mod
from .counting import count_traces, total_traces
from .enumeration import (
    DEFAULT_ENUM_LIMIT,
    Fingerprinter,
    all_traces,
    exact_frequencies,
)
from .error_model import error_table, format_error_table
from .errors import TracelensError
from .heavyhitters import mine_frequent, top_k
from .sampling import SAMPLERS, choose_p, prepare_plan
from .synth import PlantedSpec, bench_compare, planted_dag, random_dag, skip_graph

SEED_ENV_VAR = "TRACELENS_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; route that to our usage code.
    def error(self, message):
        raise UsageError(message)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_dag(path: str) -> dag_mod.LabeledDag:
    return dag_mod.loads(_read_text(path))


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{SEED_ENV_VAR} must be an integer, got {env!r}")
    raise UsageError(f"--seed is required (or set {SEED_ENV_VAR})")


def _resolve_p(args, dag, counts_total=None):
    """Exactly one of --p or (--epsilon, --C); --relative scales epsilon by
    the total trace count."""
    has_p = args.p is not None
    has_eps = args.epsilon is not None
    if has_p == has_eps:
        raise UsageError("provide exactly one of --p or --epsilon with --C")
    if has_p:
        if not (0.0 < args.p <= 1.0):
            raise UsageError("--p must be in (0, 1]")
        return args.p, None
    if args.C is None:
        raise UsageError("--epsilon requires --C")
    epsilon = args.epsilon
    if getattr(args, "relative", False):
        if counts_total is None:
            raise UsageError("--relative needs a counted DAG")
        epsilon = epsilon * counts_total
    return choose_p(epsilon, args.C), epsilon


def _print_json(data: dict) -> None:
    sys.stdout.write(json.dumps(data, indent=2) + "\n")


def _cmd_ingest(args) -> None:
    codec = ingest_mod.LabelCodec()
    events = ingest_mod.parse_events(_read_text(args.input).splitlines(), codec)
    cleaned = ingest_mod.clean_events(events, codec)
    graph = ingest_mod.build_dag(cleaned, args.delta)
    _write_text(args.output, dag_mod.dumps(graph))
    if codec.overlap_remaps:
        sys.stderr.write(
            f"note: remapped overlap zones on id collision: {codec.overlap_remaps}\n"
        )


def _cmd_count(args) -> None:
    graph = _load_dag(args.input)
    counts = count_traces(graph, args.m)
    _print_json(
        {
            "vertices": graph.n,
            "edges": graph.edge_count,
            "m": args.m,
            "total_traces": total_traces(counts),
        }
    )


def _cmd_enumerate(args) -> None:
    graph = _load_dag(args.input)
    freqs = exact_frequencies(graph, args.m, limit=args.limit)
    if args.hashed:
        fp = Fingerprinter.from_seed(args.hash_seed)
        keyed: dict[int, int] = {}
        for trace, count in freqs.items():
            keyed[fp.key_of(trace)] = keyed.get(fp.key_of(trace), 0) + count
        for key, count in sorted(keyed.items(), key=lambda kv: (-kv[1], kv[0])):
            sys.stdout.write(f"{key}\t{count}\n")
    else:
        rows = sorted(freqs.items(), key=lambda kv: (-kv[1], kv[0]))
        for trace, count in rows:
            sys.stdout.write("-".join(map(str, trace)) + f"\t{count}\n")


def _cmd_sample(args) -> None:
    graph = _load_dag(args.input)
    seed = _resolve_seed(args)
    counts = count_traces(graph, args.m)
    p, _ = _resolve_p(args, graph, total_traces(counts))
    plan = prepare_plan(graph, counts, p)
    sampler = SAMPLERS[args.sampler]
    if args.hashed:
        fp = Fingerprinter.from_seed(seed)
        sampler(
            graph,
            counts,
            plan,
            seed,
            lambda trace, key: sys.stdout.write(f"{key}\n"),
            fingerprinter=fp,
            threads=args.threads,
        )
    else:
        sampler(
            graph,
            counts,
            plan,
            seed,
            lambda trace: sys.stdout.write("-".join(map(str, trace)) + "\n"),
            threads=args.threads,
        )


def _cmd_mine(args) -> None:
    graph = _load_dag(args.input)
    seed = _resolve_seed(args)
    if args.top_k is not None:
        if args.epsilon is not None:
            raise UsageError("--top-k and --epsilon are mutually exclusive")
        result = top_k(
            graph, args.m, args.top_k, args.C, seed,
            sampler=args.sampler, threads=args.threads,
        )
        payload = result.to_json_dict()
        mine_result = result.mine
    else:
        if args.epsilon is None:
            raise UsageError("mine needs --epsilon (or --top-k)")
        epsilon = args.epsilon
        if args.relative:
            counts = count_traces(graph, args.m)
            epsilon = epsilon * total_traces(counts)
        mine_result = mine_frequent(
            graph, args.m, epsilon, args.C, seed,
            mode=args.mode, sampler=args.sampler, threads=args.threads,
        )
        payload = mine_result.to_json_dict()
    _print_json(payload)
    if args.figures:
        from .report import save_mine_figure

        os.makedirs(args.figures, exist_ok=True)
        save_mine_figure(
            mine_result, os.path.join(args.figures, "mine_candidates.png")
        )


def _cmd_top_k(args) -> None:
    graph = _load_dag(args.input)
    seed = _resolve_seed(args)
    result = top_k(
        graph, args.m, args.k, args.C, seed,
        sampler=args.sampler, threads=args.threads,
    )
    _print_json(result.to_json_dict())


def _cmd_stats(args) -> None:
    cs = [int(c) for c in args.C.split(",") if c.strip()]
    if not cs:
        raise UsageError("--C needs at least one value")
    rows = error_table(cs)
    if args.format == "json":
        _print_json(
            {
                "rows": [
                    {
                        "C": r.C,
                        "fn_prob": r.fn_prob,
                        "sfp_prob": r.sfp_prob,
                        "sfp_prob_inclusive": r.sfp_prob_inclusive,
                    }
                    for r in rows
                ]
            }
        )
    else:
        sys.stdout.write(format_error_table(rows) + "\n")
    if args.figures:
        from .report import save_error_table_figure

        os.makedirs(args.figures, exist_ok=True)
        save_error_table_figure(rows, os.path.join(args.figures, "error_table.png"))


def _cmd_synth(args) -> None:
    if args.family == "skip":
        if args.n is None or args.skips is None:
            raise UsageError("synth skip needs --n and --skips")
        skips = {int(s) for s in args.skips.split(",") if s.strip()}
        graph = skip_graph(args.n, skips, alphabet=args.alphabet)
    elif args.family == "random":
        if args.n is None or args.edge_prob is None:
            raise UsageError("synth random needs --n and --edge-prob")
        graph = random_dag(
            args.n, args.edge_prob, _resolve_seed(args),
            alphabet=args.alphabet or 4,
        )
    else:  # planted
        if args.labels is None or args.multiplicity is None or args.background is None:
            raise UsageError(
                "synth planted needs --labels, --multiplicity and --background"
            )
        spec = PlantedSpec(
            trace=tuple(int(x) for x in args.labels.split(",")),
            multiplicity=args.multiplicity,
            background_vertices=args.background,
            alphabet=args.alphabet or 8,
            seed=_resolve_seed(args),
        )
        graph, truth = planted_dag(spec)
        if args.truth_out:
            with open(args.truth_out, "w", encoding="utf-8") as fh:
                json.dump(
                    {"-".join(map(str, t)): c for t, c in truth.items()}, fh, indent=2
                )
                fh.write("\n")
    _write_text(args.output, dag_mod.dumps(graph))


def _cmd_bench(args) -> None:
    graph = _load_dag(args.input)
    seed = _resolve_seed(args)
    report, result = bench_compare(
        graph, args.m, args.epsilon, args.C, seed,
        sampler=args.sampler, threads=args.threads, limit=args.limit,
    )
    _print_json(report.to_json_dict())
    if args.figures:
        from .report import save_bench_figure, save_mine_figure

        os.makedirs(args.figures, exist_ok=True)
        save_bench_figure(report, os.path.join(args.figures, "bench_items.png"))
        save_mine_figure(result, os.path.join(args.figures, "bench_candidates.png"))


def _add_common_sampling_flags(sub) -> None:
    sub.add_argument("--seed", type=int, default=None, help="random seed")
    sub.add_argument("--sampler", choices=sorted(SAMPLERS), default="exact")
    sub.add_argument("--threads", type=int, default=1, help="worker hint")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tracelens", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("ingest", help="CSV event log to DAG file")
    sub.add_argument("--input", default="-", help="CSV rows timestamp,tag,zone")
    sub.add_argument("--delta", type=float, required=True, help="edge window, minutes")
    sub.add_argument("--output", default="-", help="DAG text output path")
    sub.set_defaults(func=_cmd_ingest)

    sub = subs.add_parser("count", help="count traces of length <= m")
    sub.add_argument("--input", required=True)
    sub.add_argument("-m", type=int, required=True)
    sub.set_defaults(func=_cmd_count)

    sub = subs.add_parser("enumerate", help="exact trace frequencies (TSV)")
    sub.add_argument("--input", required=True)
    sub.add_argument("-m", type=int, required=True)
    sub.add_argument("--hashed", action="store_true", help="emit fingerprints")
    sub.add_argument("--hash-seed", type=int, default=0)
    sub.add_argument("--limit", type=int, default=DEFAULT_ENUM_LIMIT)
    sub.set_defaults(func=_cmd_enumerate)

    sub = subs.add_parser("sample", help="emit an independent trace sample (TSV)")
    sub.add_argument("--input", required=True)
    sub.add_argument("-m", type=int, required=True)
    sub.add_argument("--p", type=float, default=None)
    sub.add_argument("--epsilon", type=float, default=None)
    sub.add_argument("--C", type=float, default=None)
    sub.add_argument("--relative", action="store_true",
                     help="epsilon is a fraction of the total trace count")
    sub.add_argument("--hashed", action="store_true")
    _add_common_sampling_flags(sub)
    sub.set_defaults(func=_cmd_sample)

    sub = subs.add_parser("mine", help="frequent traces above a threshold (JSON)")
    sub.add_argument("--input", required=True)
    sub.add_argument("-m", type=int, required=True)
    sub.add_argument("--epsilon", type=float, default=None)
    sub.add_argument("--C", type=float, required=True)
    sub.add_argument("--relative", action="store_true")
    sub.add_argument("--mode", choices=["regenerate", "fresh"], default="regenerate")
    sub.add_argument("--top-k", type=int, default=None, dest="top_k")
    sub.add_argument("--figures", default=None, help="directory for PNG figures")
    _add_common_sampling_flags(sub)
    sub.set_defaults(func=_cmd_mine)

    sub = subs.add_parser("top-k", help="k most frequent traces (JSON)")
    sub.add_argument("--input", required=True)
    sub.add_argument("-m", type=int, required=True)
    sub.add_argument("--k", type=int, required=True)
    sub.add_argument("--C", type=float, required=True)
    _add_common_sampling_flags(sub)
    sub.set_defaults(func=_cmd_top_k)

    sub = subs.add_parser("stats", help="error-probability table")
    sub.add_argument("--C", default="3,5,10,15,20,30",
                     help="comma-separated oversampling values")
    sub.add_argument("--format", choices=["text", "json"], default="text")
    sub.add_argument("--figures", default=None)
    sub.set_defaults(func=_cmd_stats)

    sub = subs.add_parser("synth", help="generate a synthetic DAG")
    sub.add_argument("--family", choices=["skip", "planted", "random"], required=True)
    sub.add_argument("--n", type=int, default=None)
    sub.add_argument("--skips", default=None, help="comma-separated offsets")
    sub.add_argument("--alphabet", type=int, default=None)
    sub.add_argument("--edge-prob", type=float, default=None)
    sub.add_argument("--labels", default=None, help="planted trace, comma-separated")
    sub.add_argument("--multiplicity", type=int, default=None)
    sub.add_argument("--background", type=int, default=None)
    sub.add_argument("--truth-out", default=None)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--output", default="-")
    sub.set_defaults(func=_cmd_synth)

    sub = subs.add_parser("bench", help="enumeration vs sampling comparison (JSON)")
    sub.add_argument("--input", required=True)
    sub.add_argument("-m", type=int, required=True)
    sub.add_argument("--epsilon", type=float, required=True)
    sub.add_argument("--C", type=float, default=10.0)
    sub.add_argument("--limit", type=int, default=5_000_000)
    sub.add_argument("--figures", default=None)
    _add_common_sampling_flags(sub)
    sub.set_defaults(func=_cmd_bench)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1
    except TracelensError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
