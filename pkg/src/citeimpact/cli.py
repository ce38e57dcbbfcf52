"""Command-line front end.

Exit codes: 0 success, 2 I/O error, 3 parse error, 4 usage error.
Data goes to ``--out`` (default stdout); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from typing import TextIO

from citeimpact import export, stats
from citeimpact.graph import CitationGraph, ParseError, load_graph, read_meta
from citeimpact.indicators import (
    DEFAULT_MIN_CP,
    INDICATOR_NAMES,
    IndicatorRecord,
    batch_compute,
    check_indicator,
    default_threads,
    profile_distribution,
)
from citeimpact.synthgen import SynthParams, generate

logger = logging.getLogger("citeimpact")

EXIT_OK = 0
EXIT_IO = 2
EXIT_PARSE = 3
EXIT_USAGE = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="citeimpact", description=__doc__.splitlines()[0])
    p.add_argument("-q", "--quiet", action="store_true", help="only log warnings and errors")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-q", "--quiet", action="store_true", default=argparse.SUPPRESS,
                        help="only log warnings and errors")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    def io_flags(sp):
        sp.add_argument("--edges", metavar="PATH", default="-",
                        help="edge list TSV (citing<TAB>cited); '-' reads stdin")
        sp.add_argument("--meta", metavar="PATH", help="metadata TSV (id year group doctype)")

    def out_flags(sp):
        sp.add_argument("--out", metavar="PATH", help="output file (default stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    def compute_flags(sp):
        sp.add_argument("--min-cp", type=_nonneg, default=DEFAULT_MIN_CP,
                        help=f"minimum citation count of focal publications "
                             f"(default {DEFAULT_MIN_CP})")
        sp.add_argument("--threads", type=_positive, default=None,
                        help="worker threads (default: all cores)")

    sp = sub.add_parser("compute", help="indicator records for publications with CP >= min-cp")
    io_flags(sp)
    compute_flags(sp)
    out_flags(sp)

    def record_source(sp):
        sp.add_argument("--records", metavar="PATH",
                        help="previously computed indicator CSV (instead of --edges)")
        sp.add_argument("--edges", metavar="PATH", help="edge list to recompute from")
        sp.add_argument("--meta", metavar="PATH", help="metadata TSV")
        compute_flags(sp)

    sp = sub.add_parser("stats", help="mean/median per group, or CDFs")
    record_source(sp)
    sp.add_argument("--indicator", action="append", metavar="NAME",
                    help="indicator to summarize (repeatable or comma-separated; default all)")
    sp.add_argument("--group-by", action="store_true", help="split by metadata group")
    sp.add_argument("--cdf", action="store_true", help="emit cumulative distributions")
    out_flags(sp)

    sp = sub.add_parser("rank", help="top-N publications by one indicator")
    record_source(sp)
    sp.add_argument("--by", required=True, metavar="INDICATOR")
    sp.add_argument("--top", type=_positive, default=10)
    out_flags(sp)

    sp = sub.add_parser("scatter", help="pairs of indicator values per publication")
    record_source(sp)
    sp.add_argument("--x", required=True, metavar="INDICATOR")
    sp.add_argument("--y", required=True, metavar="INDICATOR")
    out_flags(sp)

    sp = sub.add_parser("dist", help="histogram of per-citer R values for one publication")
    io_flags(sp)
    sp.add_argument("--focal", required=True, metavar="TOKEN")
    sp.add_argument("--side", choices=("r_citing", "r_cited"), default="r_citing")
    out_flags(sp)

    sp = sub.add_parser("synth", help="generate a synthetic citation network")
    sp.add_argument("--n", type=_positive, required=True, help="number of publications")
    sp.add_argument("--seed", type=_nonneg, default=0)
    sp.add_argument("--refs-mean", type=float, default=20.0)
    sp.add_argument("--exponent", type=float, default=1.0)
    sp.add_argument("--groups", type=_nonneg, default=5)
    sp.add_argument("--out", metavar="PATH", help="edge list output (default stdout)")
    sp.add_argument("--meta-out", metavar="PATH", help="also write metadata TSV here")

    sp = sub.add_parser("validate", help="parse inputs and report data-quality tallies")
    io_flags(sp)
    out_flags(sp)
    return p


@contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _load(args) -> CitationGraph:
    edges = sys.stdin if args.edges in (None, "-") else args.edges
    t0 = time.perf_counter()
    g, report = load_graph(edges, args.meta)
    logger.info("loaded %d publications, %d edges in %.2fs", g.n, g.edge_count,
                time.perf_counter() - t0)
    logger.info("validation: %s", report.summary())
    return g


def _compute(g: CitationGraph, args) -> list[IndicatorRecord]:
    threads = args.threads or default_threads()
    t0 = time.perf_counter()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = batch_compute(g, args.min_cp, threads=threads, executor=pool)
    else:
        records = batch_compute(g, args.min_cp)
    logger.info("computed %d records (min_cp=%d, threads=%d) in %.2fs",
                len(records), args.min_cp, threads, time.perf_counter() - t0)
    return records


def _records_and_groups(args) -> tuple[list[IndicatorRecord], dict[str, str | None] | None]:
    if args.records and args.edges:
        raise UsageError("give either --records or --edges, not both")
    if args.records:
        with open(args.records, encoding="utf-8", newline="") as fh:
            records = export.read_records(fh, source=args.records)
        groups = None
        if args.meta:
            groups = {m.id: m.group for m in read_meta(args.meta)}
        return records, groups
    if not args.edges:
        args.edges = "-"
    g = _load(args)
    records = _compute(g, args)
    groups = None
    if g.has_meta:
        groups = {}
        for f in range(g.n):
            m = g.meta(f)
            if m is not None:
                groups[m.id] = m.group
    return records, groups


def _indicator_list(raw: Sequence[str] | None) -> list[str]:
    if not raw:
        return list(INDICATOR_NAMES)
    names = [n.strip() for item in raw for n in item.split(",") if n.strip()]
    for n in names:
        _checked(n)
    return names


def _checked(name: str) -> str:
    try:
        return check_indicator(name)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_compute(args) -> int:
    g = _load(args)
    records = _compute(g, args)
    with _output(args.out) as fh:
        export.write_records(fh, records, args.format)
    return EXIT_OK


def cmd_stats(args) -> int:
    indicators = _indicator_list(args.indicator)
    records, groups = _records_and_groups(args)
    if args.group_by and groups is None:
        raise UsageError("--group-by needs --meta")
    if not args.group_by:
        groups = None
    if args.cdf:
        rows = stats.group_cdfs(records, groups, indicators)
        with _output(args.out) as fh:
            if args.format == "csv":
                export.write_csv(fh, ("group", "indicator", "value", "fraction"), rows)
            else:
                export.write_json(fh, [dict(zip(("group", "indicator", "value", "fraction"), r))
                                       for r in rows])
        return EXIT_OK
    table = stats.group_summaries(records, groups, indicators) if records else None
    rows = [(grp, ind, s.n, s.mean, s.median) for grp, ind, s in table.rows()] if table else []
    header = ("group", "indicator", "n", "mean", "median")
    with _output(args.out) as fh:
        if args.format == "csv":
            export.write_csv(fh, header, rows)
        else:
            export.write_json(fh, [dict(zip(header, r)) for r in rows])
    return EXIT_OK


def cmd_rank(args) -> int:
    _checked(args.by)
    records, _ = _records_and_groups(args)
    table = stats.rank_top(records, args.by, args.top)
    with _output(args.out) as fh:
        if args.format == "csv":
            export.write_csv(fh, ("rank", *export.RECORD_HEADER),
                             ([row.rank, *export.record_row(row.record)] for row in table.rows))
        else:
            export.write_json(fh, {
                "indicator": table.indicator,
                "rows": [{"rank": row.rank, **export.record_json(row.record)}
                         for row in table.rows],
            })
    return EXIT_OK


def cmd_scatter(args) -> int:
    _checked(args.x)
    _checked(args.y)
    records, _ = _records_and_groups(args)
    points, omitted = stats.scatter(records, args.x, args.y)
    logger.info("scatter: %d points, %d records omitted (undefined coordinate)",
                len(points), omitted)
    header = ("pub_id", args.x, args.y)
    with _output(args.out) as fh:
        if args.format == "csv":
            export.write_csv(fh, header, points)
        else:
            export.write_json(fh, {"x": args.x, "y": args.y, "omitted": omitted,
                                   "points": [dict(zip(("pub_id", "x", "y"), p))
                                              for p in points]})
    return EXIT_OK


def cmd_dist(args) -> int:
    g = _load(args)
    if args.focal not in g:
        raise UsageError(f"unknown focal publication {args.focal!r}")
    f = g.index(args.focal)
    hist = stats.histogram(profile_distribution(g, f), args.side)
    with _output(args.out) as fh:
        if args.format == "csv":
            export.write_csv(fh, ("value", "count", "mean"),
                             ((v, c, hist.mean) for v, c in hist.bins))
        else:
            export.write_json(fh, {
                "focal": args.focal, "side": args.side, "mean": hist.mean,
                "bins": [{"value": v, "count": c} for v, c in hist.bins],
            })
    return EXIT_OK


def cmd_synth(args) -> int:
    try:
        params = SynthParams(args.n, args.refs_mean, args.exponent, args.groups, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    t0 = time.perf_counter()
    net = generate(params)
    logger.info("generated %d publications, %d edges in %.2fs", net.n_pubs, net.edge_count,
                time.perf_counter() - t0)
    with _output(args.out) as fh:
        net.write_edges(fh)
    if args.meta_out:
        with _output(args.meta_out) as fh:
            net.write_meta(fh)
    return EXIT_OK


def cmd_validate(args) -> int:
    edges = sys.stdin if args.edges in (None, "-") else args.edges
    g, report = load_graph(edges, args.meta)
    summary = {"publications": g.n, "edges": g.edge_count, **report.as_dict()}
    with _output(args.out) as fh:
        if args.format == "csv":
            export.write_csv(fh, ("key", "value"), summary.items())
        else:
            export.write_json(fh, summary)
    return EXIT_OK


COMMANDS = {
    "compute": cmd_compute,
    "stats": cmd_stats,
    "rank": cmd_rank,
    "scatter": cmd_scatter,
    "dist": cmd_dist,
    "synth": cmd_synth,
    "validate": cmd_validate,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="citeimpact: %(message)s", stream=sys.stderr, force=True)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        logger.error("%s", exc)
        return EXIT_USAGE
    except ParseError as exc:
        logger.error("parse error: %s", exc)
        return EXIT_PARSE
    except OSError as exc:
        logger.error("I/O error: %s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
