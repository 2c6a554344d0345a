"""Scalability benchmarking on random graphs.

Times each pipeline stage (construct, preprocess, walk, train) over a
geometric series of node counts at fixed mean degree, and over a series of
attributes-per-node at fixed node count, then fits total time against size
by ordinary least squares. Timing covers computation only; no file I/O
happens inside a measured region.
"""

from __future__ import annotations

import csv
import logging
import time
from dataclasses import dataclass, field


import numpy as np

from .graph import AttributedGraph, build_augmented
from .sgns import TrainParams, train
from .walks import WalkParams, generate_corpus, preprocess_transitions

logger = logging.getLogger(__name__)

STAGES = ("construct", "preprocess", "walk", "train")


def erdos_renyi(n: int, mean_degree: float, seed: int) -> AttributedGraph:
    """G(n, p) with p = mean_degree/(n-1), sampled reproducibly.

    Isolated nodes are re-attached with one random edge so every node can
    start a walk.
    """
    if n < 2:
        raise ValueError("need at least 2 nodes")
    if mean_degree >= n:
        raise ValueError("mean degree must be below n")
    rng = np.random.default_rng(seed)
    p = mean_degree / (n - 1)
    n_pairs = n * (n - 1) // 2
    m = int(rng.binomial(n_pairs, p)) if p < 1.0 else n_pairs

    codes = np.empty(0, np.int64)
    while len(codes) < m:
        want = m - len(codes)
        draw = rng.integers(0, n_pairs, size=int(want * 1.1) + 16)
        codes = np.unique(np.concatenate([codes, draw]))
    codes = rng.permutation(codes)[:m]

    # decode triangular index: pair (i, j), i < j
    i = (n - 2 - np.floor((np.sqrt((2 * n - 1) ** 2 - 8 * (codes + 1) + 8) - 1) / 2)).astype(np.int64)
    # guard against float rounding at block boundaries
    first = i * (2 * n - i - 1) // 2
    too_big = first > codes
    i[too_big] -= 1
    first = i * (2 * n - i - 1) // 2
    too_small = codes >= first + (n - 1 - i)
    i[too_small] += 1
    first = i * (2 * n - i - 1) // 2
    j = (codes - first + i + 1).astype(np.int64)

    edge_set = set(map(tuple, np.stack([i, j], axis=1).tolist()))
    deg = np.zeros(n, np.int64)
    for a, b in edge_set:
        deg[a] += 1
        deg[b] += 1
    for v in np.nonzero(deg == 0)[0]:
        v = int(v)
        while True:
            u = int(rng.integers(n))
            key = (u, v) if u < v else (v, u)
            if u != v and key not in edge_set:
                edge_set.add(key)
                deg[u] += 1
                deg[v] += 1
                break

    pairs = sorted(edge_set)
    src = np.fromiter((a for a, _ in pairs), np.int32, len(pairs))
    dst = np.fromiter((b for _, b in pairs), np.int32, len(pairs))
    return AttributedGraph(
        n_nodes=n,
        edge_src=src,
        edge_dst=dst,
        edge_weight=np.ones(len(pairs)),
        node_names=[str(v) for v in range(n)],
    )


def attach_random_attributes(g: AttributedGraph, attrs_per_node: int,
                             universe: int, seed: int) -> AttributedGraph:
    """Give every node ``attrs_per_node`` distinct uniform-random attributes."""
    if attrs_per_node == 0:
        return g
    if universe < attrs_per_node:
        raise ValueError("attribute universe smaller than attrs per node")
    rng = np.random.default_rng(seed)
    n = g.n_nodes
    nodes = np.repeat(np.arange(n, dtype=np.int32), attrs_per_node)
    attrs = np.empty(n * attrs_per_node, np.int32)
    for v in range(n):
        attrs[v * attrs_per_node:(v + 1) * attrs_per_node] = rng.choice(
            universe, size=attrs_per_node, replace=False)
    order = np.lexsort((attrs, nodes))
    return AttributedGraph(
        n_nodes=n,
        edge_src=g.edge_src,
        edge_dst=g.edge_dst,
        edge_weight=g.edge_weight,
        node_names=list(g.node_names),
        n_attrs=universe,
        attr_node=nodes[order],
        attr_id=attrs[order],
        attr_value=np.ones(len(nodes)),
    )


@dataclass
class BenchSpec:
    node_counts: tuple = (100, 1000, 10000, 100000)
    mean_degree: float = 10.0
    attr_counts: tuple = (10, 100, 1000, 10000)
    attr_n_nodes: int = 1000
    repetitions: int = 3
    seed: int = 1
    workers: int = 1
    tau: int = 128
    timeout_seconds: float | None = None
    walk_length: int = 20
    walks_per_node: int = 2
    dimension: int = 8
    window: int = 3
    epochs: int = 1

    def __post_init__(self):
        for v in (*self.node_counts, *self.attr_counts, self.attr_n_nodes,
                  self.repetitions):
            if v < 1:
                raise ValueError("all benchmark counts must be >= 1")


@dataclass
class FitResult:
    slope: float
    intercept: float
    r2: float


@dataclass
class BenchResult:
    rows: list[dict] = field(default_factory=list)   # series, size, stage, median_seconds
    node_fit: FitResult | None = None
    attr_fit: FitResult | None = None
    workers: int = 1
    peak_table_entries: int = 0

    def save_csv(self, path, series: str) -> None:
        """Spec'd columns (size, stage, median_seconds, workers) for one series."""
        with open(path, "w", newline="", encoding="utf-8") as f:
            w = csv.writer(f)
            w.writerow(["size", "stage", "median_seconds", "workers"])
            for r in self.rows:
                if r["series"] != series:
                    continue
                w.writerow([r["size"], r["stage"], f"{r['median_seconds']:.6f}", self.workers])


def ols_fit(x, y) -> FitResult | None:
    """Least-squares line and R^2; None when under 2 points."""
    x = np.asarray(x, np.float64)
    y = np.asarray(y, np.float64)
    if len(x) < 2:
        return None
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(((y - pred) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return FitResult(slope=float(slope), intercept=float(intercept), r2=r2)


def _time_pipeline(g: AttributedGraph, spec: BenchSpec, seed: int):
    """Run construct/preprocess/walk/train once; returns stage seconds + entries."""
    wp = WalkParams(walk_length=spec.walk_length, walks_per_node=spec.walks_per_node,
                    seed=seed)
    tp = TrainParams(dimension=spec.dimension, window=spec.window, epochs=spec.epochs,
                     seed=seed)
    times = {}
    t0 = time.perf_counter()
    ag = build_augmented(g)
    times["construct"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    model = preprocess_transitions(ag, wp, tau=spec.tau, max_entries=2_000_000_000)
    times["preprocess"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    corpus = generate_corpus(ag, model, workers=spec.workers)
    times["walk"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    train(corpus.walks, tp)
    times["train"] = time.perf_counter() - t0
    return times, model.n_precomputed_entries


def run_scaling(spec: BenchSpec, run_nodes: bool = True, run_attrs: bool = True) -> BenchResult:
    """Median stage timings over the node and attribute series, plus OLS fits."""
    result = BenchResult(workers=spec.workers)

    def run_series(series: str, points):
        sizes, totals = [], []
        for point in points:
            reps = []
            for rep in range(spec.repetitions):
                seed = spec.seed + 1000 * rep
                if series == "nodes":
                    g = erdos_renyi(point, spec.mean_degree, seed)
                else:
                    g = erdos_renyi(spec.attr_n_nodes, spec.mean_degree, seed)
                    g = attach_random_attributes(g, point, 2 * point, seed + 7)
                times, entries = _time_pipeline(g, spec, seed)
                result.peak_table_entries = max(result.peak_table_entries, entries)
                reps.append(times)
            medians = {s: float(np.median([t[s] for t in reps])) for s in STAGES}
            total = sum(medians.values())
            size = point if series == "nodes" else point * spec.attr_n_nodes
            for s in STAGES:
                result.rows.append({"series": series, "size": size, "stage": s,
                                    "median_seconds": medians[s]})
            result.rows.append({"series": series, "size": size, "stage": "total",
                                "median_seconds": total})
            sizes.append(size)
            totals.append(total)
            logger.info("bench %s size=%d total=%.3fs", series, size, total)
            if spec.timeout_seconds is not None and total > spec.timeout_seconds:
                logger.warning("bench %s: point %d exceeded timeout; aborting series",
                               series, point)
                break
        return ols_fit(sizes, totals)

    if run_nodes:
        result.node_fit = run_series("nodes", spec.node_counts)
    if run_attrs:
        result.attr_fit = run_series("attrs", spec.attr_counts)
    return result
