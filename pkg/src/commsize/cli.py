"""Benchmark command line: detect, evaluate, sweep CAA thresholds, export degree data."""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
import time
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

from . import caa
from .baselines import fast_greedy, import_cover, label_propagation, louvain
from .cliques import maximal_cliques
from .cover import Cover, canonical_key, write_cover
from .graph import Graph, GraphLoadError, load_undirected, write_degree_distribution
from .metrics import MetricReport, SizeClass, evaluate, size_distribution

logger = logging.getLogger("commsize")

OUT_ENV = "COMMSIZE_OUT"
ALGORITHMS = ("caa", "label-prop", "louvain", "fast-greedy", "import")
DEFAULT_GROW_BINS = "1-2,3-9,10-150,151-500,501+"
DEFAULT_PHIS = "0.5,0.7,0.9"
DEFAULT_OMEGAS = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0"


class ConfigError(ValueError):
    pass


def default_out_dir() -> Path:
    return Path(os.environ.get(OUT_ENV, "commsize_out"))


@dataclass
class RunConfig:
    input: Path | None = None
    format: str = "edges"
    algo: str = "caa"
    params: caa.CaaParams = field(default_factory=caa.CaaParams)
    seed: int | None = 0
    out: Path = field(default_factory=default_out_dir)
    threads: int = 1
    cover: Path | None = None
    expect_nodes: int | None = None
    expect_edges: int | None = None

    def validate(self) -> None:
        if self.algo not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algo!r}; choose from {', '.join(ALGORITHMS)}")
        if self.algo == "import" and self.cover is None:
            raise ConfigError("--algo import requires --cover")
        if self.format not in ("edges", "directed-edges"):
            raise ConfigError(f"unknown format {self.format!r}")


def load_graph(config: RunConfig) -> Graph:
    if config.input is None:
        raise ConfigError("--input is required")
    g = load_undirected(config.input, config.format)
    check_expected(g, config.expect_nodes, config.expect_edges)
    return g


def check_expected(g: Graph, nodes: int | None, edges: int | None) -> bool:
    ok = True
    if nodes is not None and g.n != nodes:
        logger.warning("expected %d nodes, loaded %d", nodes, g.n)
        ok = False
    if edges is not None and g.m != edges:
        logger.warning("expected %d edges, loaded %d", edges, g.m)
        ok = False
    return ok


def detect(g: Graph, config: RunConfig) -> Cover:
    """Run the configured detector. Disjoint results come back canonically ordered."""
    config.validate()
    if config.algo == "caa":
        return caa.detect(g, config.params, workers=config.threads)
    if config.algo == "import":
        return import_cover(config.cover, g)
    if config.algo == "label-prop":
        part = label_propagation(g, seed=config.seed)
        if not part.converged:
            logger.warning("label propagation hit the sweep limit without converging")
    elif config.algo == "louvain":
        part = louvain(g, seed=config.seed)
    else:
        part = fast_greedy(g)
    cover = part.to_cover()
    cover.communities.sort(key=lambda c: canonical_key(c.nodes))
    return cover


def run_on_graph(g: Graph, config: RunConfig, out: Path | None = None) -> tuple[MetricReport, Cover]:
    """Detect, evaluate and (if ``out`` is given) write cover, CSV rows and JSON aggregates."""
    start = time.perf_counter()
    cover = detect(g, config)
    elapsed = time.perf_counter() - start
    report = evaluate(g, cover)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        stem = config.algo
        write_cover(cover, g, out / f"{stem}.cover.txt")
        report.write_csv(out / f"{stem}.communities.csv")
        report.write_json(out / f"{stem}.report.json")
    logger.info("%s: %d communities in %.2fs", config.algo, len(cover), elapsed)
    return report, cover


def cmd_run(config: RunConfig) -> tuple[MetricReport, Cover]:
    config.validate()
    g = load_graph(config)
    report, cover = run_on_graph(g, config, config.out)
    print(format_report(report, title=f"{config.algo} on {config.input}"))
    return report, cover


def format_report(report: MetricReport, title: str = "") -> str:
    lines = []
    if title:
        lines.append(title)
    lines.append(f"nodes {report.node_count}  edges {report.edge_count}  "
                 f"communities {report.community_count}  covered {report.covered_nodes}")
    lines.append(f"largest community {report.largest_size} / {100 * report.largest_ratio:.3f}%")
    eq = "undefined" if report.extended_modularity is None else f"{report.extended_modularity:.6f}"
    lines.append(f"extended modularity {eq}")
    lines.append(f"desirable coverage {report.desirable_coverage:.4f}")
    lines.append("")
    lines.append(f"{'size':>9} {'count':>8} {'partialEQ':>10} {'TPR':>7} {'cond':>7} {'density':>8} {'trans':>7}")

    def fmt(x: float | None, width: int) -> str:
        return f"{'-':>{width}}" if x is None else f"{x:>{width}.4f}"

    for sc in SizeClass:
        s = report.classes[sc]
        m = s.means
        lines.append(
            f"{sc.range_label:>9} {s.count:>8} {fmt(s.partial_modularity, 10)} "
            f"{fmt(m['tpr'], 7)} {fmt(m['conductance'], 7)} {fmt(m['internal_density'], 8)} "
            f"{fmt(m['transitivity'], 7)}"
        )
    for err in report.errors:
        lines.append(f"error: {err}")
    return "\n".join(lines)


def conformance_summary(cover: Cover) -> str:
    dist = size_distribution(cover)
    lines = [f"{'size':>9} {'count':>8}"]
    for sc in SizeClass:
        lines.append(f"{sc.range_label:>9} {dist.counts[sc]:>8}")
    lines.append(
        f"{dist.desirable} of {dist.total} communities have size 4-150 "
        f"({100 * dist.desirable_share:.2f}%)"
    )
    return "\n".join(lines)


# --- sweeps ------------------------------------------------------------------------

def parse_bins(spec: str) -> list[tuple[int, int | None]]:
    """``"3-9,10-150,501+"`` -> ``[(3, 9), (10, 150), (501, None)]``."""
    bins: list[tuple[int, int | None]] = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if part.endswith("+"):
            bins.append((int(part[:-1]), None))
        else:
            lo, _, hi = part.partition("-")
            bins.append((int(lo), int(hi or lo)))
    return bins


def bin_label(b: tuple[int, int | None]) -> str:
    return f"{b[0]}+" if b[1] is None else f"{b[0]}-{b[1]}"


def histogram(sizes: Sequence[int], bins: Sequence[tuple[int, int | None]]) -> list[int]:
    counts = [0] * len(bins)
    for s in sizes:
        for i, (lo, hi) in enumerate(bins):
            if s >= lo and (hi is None or s <= hi):
                counts[i] += 1
                break
    return counts


@dataclass
class GrowSweepRow:
    grow: float
    counts: list[int]
    sizes: list[int]

    @property
    def mean_size(self) -> float:
        return sum(self.sizes) / len(self.sizes) if self.sizes else 0.0


def sweep_growing(
    g: Graph,
    phis: Sequence[float],
    omega: float = 0.0,
    min_clique: int = 3,
    bins: Sequence[tuple[int, int | None]] | None = None,
    workers: int = 1,
) -> list[GrowSweepRow]:
    """Community-size histogram for each growing threshold; cliques are enumerated once."""
    if not phis:
        raise ConfigError("need at least one growing threshold")
    bins = list(bins) if bins is not None else parse_bins(DEFAULT_GROW_BINS)
    seeds = caa.filter_overlapping_cliques(maximal_cliques(g, min_clique, workers=workers), omega)
    rows = []
    for phi in phis:
        caa.CaaParams(grow=phi, overlap=omega, min_clique_size=min_clique)
        seen: set[frozenset[int]] = set()
        for s in seeds:
            seen.add(caa.grow_community(g, s, phi).nodes)
        sizes = sorted(len(c) for c in seen)
        rows.append(GrowSweepRow(phi, histogram(sizes, bins), sizes))
    return rows


def sweep_overlap(
    g: Graph, omegas: Sequence[float], min_clique: int = 3, workers: int = 1
) -> list[tuple[float, int]]:
    """Retained seed count for each overlapping threshold.

    The count at ``omega=1`` equals the number of maximal cliques. Counts are
    usually non-decreasing in ``omega`` but not always: a clique admitted
    under a looser threshold can block several later ones.
    """
    for w in omegas:
        if not 0.0 <= w <= 1.0:
            raise ConfigError(f"overlapping threshold {w} outside [0, 1]")
    cliques = maximal_cliques(g, min_clique, workers=workers)
    return [(w, len(caa.filter_overlapping_cliques(cliques, w))) for w in omegas]


def _floats(spec: str) -> list[float]:
    return [float(x) for x in spec.split(",") if x.strip()]


# --- argument handling ----------------------------------------------------------------

def read_config_file(path: str | Path) -> dict[str, str]:
    """``key=value`` lines; ``#`` comments and blank lines ignored; dashes in keys become underscores."""
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ConfigError(f"{path}:{n}: expected key=value")
            values[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return values


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", "-i", type=Path, help="edge-list file (SNAP format, .gz allowed)")
    p.add_argument("--format", choices=("edges", "directed-edges"), default="edges")
    p.add_argument("--out", "-o", type=Path, default=None,
                   help=f"output directory (default ${OUT_ENV} or ./commsize_out)")
    p.add_argument("--threads", type=int, default=1, help="worker processes for clique enumeration")
    p.add_argument("--expect-nodes", type=int, default=None)
    p.add_argument("--expect-edges", type=int, default=None)
    p.add_argument("--config", type=Path, default=None, help="key=value file of option defaults")
    p.add_argument("-v", "--verbose", action="store_true")


def _add_caa(p: argparse.ArgumentParser, phi: bool = True) -> None:
    if phi:
        p.add_argument("--phi", type=float, default=0.7, help="growing threshold")
    p.add_argument("--omega", type=float, default=0.0, help="overlapping threshold")
    p.add_argument("--min-clique", type=int, default=3, help="minimum seed clique size")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="commsize", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="detect communities and write the evaluation report")
    _add_common(p)
    _add_caa(p)
    p.add_argument("--algo", choices=ALGORITHMS, default="caa")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cover", type=Path, default=None, help="cover file for --algo import")

    p = sub.add_parser("import-eval", help="evaluate an externally computed cover")
    _add_common(p)
    p.add_argument("--cover", type=Path, required=False, default=None)

    p = sub.add_parser("sweep-grow", help="community-size histograms across growing thresholds")
    _add_common(p)
    _add_caa(p, phi=False)
    p.add_argument("--phi", default=DEFAULT_PHIS, help="comma-separated growing thresholds")
    p.add_argument("--bins", default=DEFAULT_GROW_BINS, help="comma-separated size bins, e.g. 3-9,10-150,501+")

    p = sub.add_parser("sweep-overlap", help="retained seed cliques across overlapping thresholds")
    _add_common(p)
    p.add_argument("--omega", default=DEFAULT_OMEGAS, help="comma-separated overlapping thresholds")
    p.add_argument("--min-clique", type=int, default=3)

    p = sub.add_parser("degree-dist", help="write rank,degree CSV")
    _add_common(p)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", type=Path)
    known, _ = pre.parse_known_args(argv)
    if known.config is None:
        return
    values = read_config_file(known.config)
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    for sp in subparsers.choices.values():
        types = {a.dest: a.type for a in sp._actions}
        defaults = {}
        for k, v in values.items():
            if k in types:
                conv = types[k]
                defaults[k] = conv(v) if conv is not None else v
        sp.set_defaults(**defaults)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
    except (OSError, ConfigError, ValueError) as exc:
        print(f"commsize: config error: {exc}", file=sys.stderr)
        return 2
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    out = args.out if args.out is not None else default_out_dir()
    try:
        if args.command == "run":
            config = RunConfig(
                input=args.input, format=args.format, algo=args.algo,
                params=caa.CaaParams(args.phi, args.omega, args.min_clique),
                seed=args.seed, out=out, threads=args.threads, cover=args.cover,
                expect_nodes=args.expect_nodes, expect_edges=args.expect_edges,
            )
            cmd_run(config)
        elif args.command == "import-eval":
            config = RunConfig(
                input=args.input, format=args.format, algo="import", out=out,
                cover=args.cover, expect_nodes=args.expect_nodes, expect_edges=args.expect_edges,
            )
            report, cover = cmd_run(config)
            print()
            print(conformance_summary(cover))
        elif args.command == "sweep-grow":
            config = RunConfig(input=args.input, format=args.format,
                               expect_nodes=args.expect_nodes, expect_edges=args.expect_edges)
            g = load_graph(config)
            bins = parse_bins(args.bins)
            rows = sweep_growing(g, _floats(args.phi), args.omega, args.min_clique, bins, args.threads)
            out.mkdir(parents=True, exist_ok=True)
            with open(out / "sweep_grow.csv", "w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["phi", *(bin_label(b) for b in bins), "communities", "mean_size"])
                for r in rows:
                    w.writerow([r.grow, *r.counts, len(r.sizes), f"{r.mean_size:.6f}"])
            print(f"{'phi':>5} " + " ".join(f"{bin_label(b):>9}" for b in bins))
            for r in rows:
                print(f"{r.grow:>5} " + " ".join(f"{c:>9}" for c in r.counts))
        elif args.command == "sweep-overlap":
            config = RunConfig(input=args.input, format=args.format,
                               expect_nodes=args.expect_nodes, expect_edges=args.expect_edges)
            g = load_graph(config)
            rows = sweep_overlap(g, _floats(args.omega), args.min_clique, args.threads)
            out.mkdir(parents=True, exist_ok=True)
            with open(out / "sweep_overlap.csv", "w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["omega", "retained_cliques"])
                w.writerows(rows)
            for omega, count in rows:
                print(f"{omega:>5} {count:>9}")
        elif args.command == "degree-dist":
            config = RunConfig(input=args.input, format=args.format,
                               expect_nodes=args.expect_nodes, expect_edges=args.expect_edges)
            g = load_graph(config)
            out.mkdir(parents=True, exist_ok=True)
            write_degree_distribution(g, out / "degree_distribution.csv")
            print(f"wrote {out / 'degree_distribution.csv'} ({g.n} nodes)")
    except (ConfigError, GraphLoadError, ValueError, OSError) as exc:
        print(f"commsize: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
