"""Command-line surface: cluster, generate, sweep, serve."""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cuts import (
    AutoGap,
    Box,
    CutSpec,
    InvalidCutError,
    TopK,
    apply_cut,
    decision_graph_export,
    document_to_json,
)
from .data import (
    CsvFormatError,
    Dataset,
    GaussianMixtureConfig,
    Metric,
    PairwiseDistances,
    generate_gaussian_mixture,
    load_csv,
    normalize_minmax,
)
from .descent import dnnd, graph_ga, hnnd, nd
from .evaluate import SweepConfig, run_sweep, sweep_to_csv
from .neighbors import build_knn
from .potential import PotentialConfig, PotentialMode, accumulate_potential, kernel_density
from .server import ServeState, make_server
from .tree import resolve_roots

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2
EXIT_PIPELINE = 3

METHODS = ("dnnd", "nd", "hnnd", "graphga")


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports flag problems as ConfigError (exit 1, not 2)."""

    def error(self, message):
        raise ConfigError(message)


def parse_cut_flag(text: str) -> CutSpec:
    kind, _, rest = text.partition(":")
    if kind == "topk":
        try:
            return TopK(int(rest))
        except ValueError as exc:
            raise ConfigError(f"bad topk count {rest!r}") from exc
    if kind == "autogap":
        if not rest:
            return AutoGap()
        try:
            return AutoGap(int(rest))
        except ValueError as exc:
            raise ConfigError(f"bad autogap window {rest!r}") from exc
    if kind == "box":
        parts = rest.split(",")
        if len(parts) != 2:
            raise ConfigError("box cut takes min_edge_len,max_potential")
        try:
            return Box(float(parts[0]), float(parts[1]))
        except ValueError as exc:
            raise ConfigError(f"bad box bounds {rest!r}") from exc
    raise ConfigError(f"unknown cut {text!r}")


def _parse_generate_flag(text: str, seed: int) -> GaussianMixtureConfig:
    parts = text.split(",")
    if len(parts) != 4:
        raise ConfigError("--generate takes M,N,D,SEPARATION")
    try:
        return GaussianMixtureConfig(
            M=int(parts[0]), N=int(parts[1]), d=int(parts[2]),
            separation=float(parts[3]), seed=seed,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


@dataclass(frozen=True)
class PipelineConfig:
    input: Path | None = None
    generate: GaussianMixtureConfig | None = None
    has_labels: bool = False
    header: bool = False
    delimiter: str | None = None
    metric: Metric = Metric.EUCLIDEAN
    normalize: bool = False
    k: int = 5
    mode: PotentialMode = PotentialMode.EXP_KERNEL
    sigma: float = 1.0
    method: str = "dnnd"
    cut: CutSpec | None = None  # None -> AutoGap default (invalid for graphga)


@dataclass(frozen=True)
class PipelineResult:
    dataset: Dataset
    tree: object
    potential: np.ndarray
    labels: np.ndarray
    trace: list[int]
    document: dict


def _load_dataset(cfg: PipelineConfig) -> Dataset:
    if (cfg.input is None) == (cfg.generate is None):
        raise ConfigError("exactly one of an input path or a generator spec is required")
    if cfg.generate is not None:
        return generate_gaussian_mixture(cfg.generate)
    return load_csv(
        cfg.input,
        has_label_column=cfg.has_labels,
        delimiter=cfg.delimiter,
        skip_header=cfg.header,
    )


def _fixed_potential(
    dist: PairwiseDistances, k: int, pot: PotentialConfig
) -> tuple[np.ndarray, np.ndarray]:
    """(potential, density) for the single-pass methods."""
    if pot.mode is PotentialMode.EXP_KERNEL:
        rho = kernel_density(dist, pot.sigma)
        return -rho, rho
    graph = build_knn(np.arange(dist.n, dtype=np.int64), dist, k)
    P = accumulate_potential(np.zeros(dist.n), graph, pot)
    return P, -P


def run_pipeline(cfg: PipelineConfig) -> PipelineResult:
    if cfg.method not in METHODS:
        raise ConfigError(f"unknown method {cfg.method!r}")
    if cfg.method == "graphga" and cfg.cut is not None:
        raise ConfigError("graphga labels come from forest roots; it takes no cut")
    dataset = _load_dataset(cfg)
    if cfg.normalize:
        dataset = normalize_minmax(dataset)
    dist = PairwiseDistances(dataset, cfg.metric)
    pot = PotentialConfig(cfg.mode, cfg.sigma)
    cut = cfg.cut if cfg.cut is not None else AutoGap()

    if cfg.method == "dnnd":
        tree, P, trace = dnnd(dist, cfg.k, pot)
        counts = trace.root_counts
    elif cfg.method == "nd":
        P, _ = _fixed_potential(dist, cfg.k, pot)
        tree = nd(dist, P)
        counts = [1]
    elif cfg.method == "hnnd":
        P, _ = _fixed_potential(dist, cfg.k, pot)
        tree = hnnd(dist, cfg.k, P)
        counts = [int((tree.layer_built == 2).sum()), 1]
    else:  # graphga
        P, rho = _fixed_potential(dist, cfg.k, pot)
        graph = build_knn(np.arange(dist.n, dtype=np.int64), dist, cfg.k)
        tree = graph_ga(graph, rho)
        counts = [int(tree.root_mask.sum())]

    if cfg.method == "graphga":
        roots = resolve_roots(tree)
        _, labels = np.unique(roots, return_inverse=True)
        labels = labels.astype(np.int64)
    else:
        labels = apply_cut(tree, cut, P)

    points2d = dataset.points if dataset.dim == 2 else None
    doc = decision_graph_export(tree, P, points2d, counts)
    return PipelineResult(dataset, tree, P, labels, counts, doc)


def _write_labels_csv(path: Path, result: PipelineResult) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        truth = result.dataset.labels
        if truth is None:
            w.writerow(["id", "cluster"])
            for i, c in enumerate(result.labels.tolist()):
                w.writerow([i, c])
        else:
            w.writerow(["id", "cluster", "truth"])
            for i, c in enumerate(result.labels.tolist()):
                w.writerow([i, c, truth[i]])


def _add_pipeline_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", type=Path, help="dataset CSV, one point per row")
    p.add_argument("--generate", metavar="M,N,D,SEP",
                   help="generate a Gaussian mixture instead of reading a file")
    p.add_argument("--labels", action="store_true",
                   help="last CSV column is a ground-truth label")
    p.add_argument("--header", action="store_true", help="skip the first CSV row")
    p.add_argument("--delimiter", default=None)
    p.add_argument("--metric", choices=[m.value for m in Metric],
                   default=Metric.EUCLIDEAN.value)
    p.add_argument("--normalize", action="store_true",
                   help="min-max normalize each dimension to [0,1]")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--mode", choices=[m.value for m in PotentialMode],
                   default=PotentialMode.EXP_KERNEL.value)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--method", choices=METHODS, default="dnnd")
    p.add_argument("--cut", default=None,
                   help="topk:K | autogap[:WINDOW] | box:MIN_LEN,MAX_POT")
    p.add_argument("--seed", type=int, default=0)


def _pipeline_config(args: argparse.Namespace) -> PipelineConfig:
    gen = None
    if args.generate is not None:
        gen = _parse_generate_flag(args.generate, args.seed)
    return PipelineConfig(
        input=args.input,
        generate=gen,
        has_labels=args.labels or gen is not None,
        header=args.header,
        delimiter=args.delimiter,
        metric=Metric(args.metric),
        normalize=args.normalize,
        k=args.k,
        mode=PotentialMode(args.mode),
        sigma=args.sigma,
        method=args.method,
        cut=parse_cut_flag(args.cut) if args.cut is not None else None,
    )


def cmd_cluster(args: argparse.Namespace) -> int:
    result = run_pipeline(_pipeline_config(args))
    _write_labels_csv(args.labels_out, result)
    args.graph_out.write_text(document_to_json(result.document), encoding="utf-8")
    n_clusters = int(result.labels.max()) + 1
    print(f"n={result.dataset.n} clusters={n_clusters} trace={result.trace}")
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    cfg = GaussianMixtureConfig(
        M=args.m, N=args.n, d=args.d, separation=args.separation, seed=args.seed
    )
    dataset = generate_gaussian_mixture(cfg)
    with open(args.output, "w", newline="", encoding="utf-8") as fh:
        for i in range(dataset.n):
            cells = [repr(v) for v in dataset.points[i].tolist()]
            cells.append(str(int(dataset.labels[i])))
            fh.write(",".join(cells) + "\n")
    print(f"wrote {dataset.n} x {dataset.dim} points to {args.output}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"bad sweep config: {exc}") from exc
    try:
        ds_spec = raw["dataset"]
        if "generator" in ds_spec:
            g = ds_spec["generator"]
            source = GaussianMixtureConfig(
                M=g["m"], N=g["n"], d=g["d"],
                separation=g.get("separation", 10.0), seed=g.get("seed", 0),
            )
        else:
            source = load_csv(
                ds_spec["path"],
                has_label_column=ds_spec.get("labels", True),
                delimiter=ds_spec.get("delimiter"),
                skip_header=ds_spec.get("header", False),
            )
        config = SweepConfig(
            ks=raw["k"],
            sigmas=raw["sigma"],
            modes=raw.get("modes", ["expkernel"]),
            cut=parse_cut_flag(raw.get("cut", "autogap")),
            reps=raw.get("reps", 1),
            metric=Metric(raw.get("metric", "euclidean")),
            normalize=raw.get("normalize", False),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad sweep config: {exc}") from exc
    rows = run_sweep(source, config)
    sweep_to_csv(rows, args.output)
    errs = [r.error for r in rows]
    print(f"{len(rows)} cells, mean error {np.mean(errs):.6f} +/- {np.std(errs):.6f}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    if args.graph is not None:
        try:
            doc = json.loads(Path(args.graph).read_text(encoding="utf-8"))
            state = ServeState.from_document(doc)
        except (json.JSONDecodeError, ValueError) as exc:
            raise ConfigError(f"bad decision-graph document: {exc}") from exc
    else:
        cfg = _pipeline_config(args)
        result = run_pipeline(cfg)
        state = ServeState.from_document(
            result.document,
            {
                "method": cfg.method,
                "k": cfg.k,
                "sigma": cfg.sigma,
                "mode": cfg.mode.value,
            },
        )
    server = make_server(state, args.host, args.port)
    host, port = server.server_address[:2]
    print(f"serving decision graph on http://{host}:{port}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="intree", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="run the pipeline, write labels + decision graph")
    _add_pipeline_flags(p)
    p.add_argument("--labels-out", type=Path, default=Path("labels.csv"))
    p.add_argument("--graph-out", type=Path, default=Path("decision_graph.json"))
    p.set_defaults(fn=cmd_cluster)

    p = sub.add_parser("generate", help="write a labeled Gaussian-mixture CSV")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--separation", type=float, default=10.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", type=Path, required=True)
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("sweep", help="run a k/sigma grid from a JSON config")
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--output", type=Path, required=True)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("serve", help="serve the interactive decision-graph API")
    p.add_argument("--graph", type=Path, default=None,
                   help="previously exported decision-graph JSON")
    _add_pipeline_flags(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8437)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.fn(args)
    except (OSError, CsvFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, InvalidCutError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # anything the pipeline itself raises
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PIPELINE


if __name__ == "__main__":
    sys.exit(main())
