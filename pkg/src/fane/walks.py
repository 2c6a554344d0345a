"""Biased second-order random walks over the augmented graph.

A step from v, having arrived via u, scores each neighbor x with
pi(v,x) = w(v,x) * alpha(v,x). alpha applies the attribute bias 1/r
according to the strategy (sf: source is an attribute node, tf: target is,
stf: either is) and otherwise falls back to the return/in-out kernel
beta: 1/p if x == u, 1 if x is adjacent to u, else 1/q.

Sampling uses alias tables precomputed for every directed edge (u -> v)
with deg(v) <= tau; remaining states are sampled on demand. Each walk
draws its randomness from a dedicated counter window of a Philox stream
keyed by (seed, iteration), so corpora are reproducible and independent
of worker scheduling.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass

import numpy as np

from .alias import build_alias
from .graph import AugmentedGraph

SF = "sf"
TF = "tf"
STF = "stf"
STRATEGIES = (SF, TF, STF)

SENTINEL_START = -1

# sub-stream tags for the non-walk generators (shuffle order)
_ORDER_STREAM = 1


class TransitionMemoryError(RuntimeError):
    """Precomputed tables would exceed the entry budget."""


@dataclass(frozen=True)
class WalkParams:
    """Walk configuration: biases (p, q, r), strategy, and corpus shape."""

    p: float = 1.0
    q: float = 1.0
    r: float = 1.0
    strategy: str = TF
    walk_length: int = 80
    walks_per_node: int = 10
    seed: int = 1
    beta_graph: str = "augmented"   # adjacency space for the beta kernel
    raw_starts_only: bool = False

    def __post_init__(self):
        if not (self.p > 0 and self.q > 0 and self.r > 0):
            raise ValueError("p, q, r must all be positive")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if self.walk_length < 2:
            raise ValueError("walk_length must be >= 2")
        if self.walks_per_node < 1:
            raise ValueError("walks_per_node must be >= 1")
        if self.beta_graph not in ("augmented", "raw"):
            raise ValueError("beta_graph must be 'augmented' or 'raw'")


def beta(g: AugmentedGraph, u: int, v: int, x: int, p: float, q: float,
         beta_graph: str = "augmented") -> float:
    """Return/in-out kernel for target x given previous node u (scalar form)."""
    if x == u:
        return 1.0 / p
    if beta_graph == "raw":
        adjacent = u < g.n_raw and x < g.n_raw and g.has_edge(u, x)
    else:
        adjacent = g.has_edge(u, x)
    return 1.0 if adjacent else 1.0 / q


def alpha(g: AugmentedGraph, strategy: str, u: int, v: int, x: int,
          p: float, q: float, r: float, beta_graph: str = "augmented") -> float:
    """Strategy bias for target x from source v arrived-from u (scalar form)."""
    v_attr = v >= g.n_raw
    x_attr = x >= g.n_raw
    if strategy == SF:
        return 1.0 / r if v_attr else beta(g, u, v, x, p, q, beta_graph)
    if strategy == TF:
        return 1.0 / r if x_attr else beta(g, u, v, x, p, q, beta_graph)
    if strategy == STF:
        return 1.0 / r if (v_attr or x_attr) else beta(g, u, v, x, p, q, beta_graph)
    raise ValueError(f"unknown strategy {strategy!r}")


def _pi_first(g: AugmentedGraph, params: WalkParams, v: int) -> np.ndarray:
    """Unnormalized first-step scores: w(v,x) * gamma(x).

    gamma is 1/r when the strategy would damp this move mid-walk (tf/stf and
    x is an attribute node, or sf/stf and v is), else 1; with r = 1 the first
    step degenerates to the weighted-uniform start the (p, q)-only walk uses.
    """
    s, e = g.indptr[v], g.indptr[v + 1]
    nbrs = g.neighbors[s:e]
    w = g.weights[s:e]
    damp = np.zeros(len(nbrs), bool)
    if params.strategy in (TF, STF):
        damp |= nbrs >= g.n_raw
    if params.strategy in (SF, STF) and v >= g.n_raw:
        damp[:] = True
    gamma = np.ones(len(nbrs))
    gamma[damp] = 1.0 / params.r
    return w * gamma


def _pi_step(g: AugmentedGraph, params: WalkParams, u: int, v: int) -> np.ndarray:
    """Unnormalized second-order scores over neighbors of v, previous node u."""
    s, e = g.indptr[v], g.indptr[v + 1]
    nbrs = g.neighbors[s:e]
    w = g.weights[s:e]
    v_attr = v >= g.n_raw
    if params.strategy == SF and v_attr:
        return w / params.r
    if params.strategy == STF and v_attr:
        return w / params.r
    adj = g.has_edge(u, nbrs)
    if params.beta_graph == "raw":
        adj = adj & (nbrs < g.n_raw) & (u < g.n_raw)
    a = np.full(len(nbrs), 1.0 / params.q)
    a[adj] = 1.0
    a[nbrs == u] = 1.0 / params.p
    if params.strategy in (TF, STF):
        a[nbrs >= g.n_raw] = 1.0 / params.r
    return w * a


def first_step_distribution(g: AugmentedGraph, params: WalkParams, v: int) -> np.ndarray:
    """Normalized first-step distribution over the (sorted) neighbors of v."""
    pi = _pi_first(g, params, v)
    if len(pi) == 0:
        raise ValueError(f"node {v} has no neighbors")
    return pi / pi.sum()


def transition_distribution(g: AugmentedGraph, params: WalkParams, u: int, v: int) -> np.ndarray:
    """Normalized transition distribution for state (u, v).

    u = SENTINEL_START selects the first-step distribution. The vector is
    aligned with g.neighbor_slice(v)[0], ascending unified ids.
    """
    if u == SENTINEL_START:
        return first_step_distribution(g, params, v)
    pi = _pi_step(g, params, u, v)
    if len(pi) == 0:
        raise ValueError(f"node {v} has no neighbors")
    return pi / pi.sum()


@dataclass
class TransitionModel:
    """Hybrid precomputed/on-demand transition tables for one parameter set.

    Immutable after preprocessing; shareable across workers. ``edge_off[e]``
    indexes the flat alias arrays for the directed edge with CSR position e,
    or -1 when that state is sampled on demand (same for ``node_off`` and
    first steps).
    """

    params: WalkParams
    tau: int
    node_off: np.ndarray
    node_accept: np.ndarray
    node_alias: np.ndarray
    edge_off: np.ndarray
    edge_accept: np.ndarray
    edge_alias: np.ndarray

    @property
    def n_precomputed_entries(self) -> int:
        return len(self.node_accept) + len(self.edge_accept)


def preprocess_transitions(g: AugmentedGraph, params: WalkParams, tau: int = 1024,
                           max_entries: int = 100_000_000) -> TransitionModel:
    """Build alias tables for all states sampling over nodes of degree <= tau.

    Raises TransitionMemoryError with guidance when the tables would exceed
    ``max_entries`` stored entries; lower tau (tau=0 is fully on-demand).
    """
    if tau < 0:
        raise ValueError("tau must be >= 0")
    deg = np.diff(g.indptr)
    small = deg <= tau
    node_entries = int(deg[small].sum())
    edge_entries = int((deg[small] * deg[small]).sum())
    if node_entries + edge_entries > max_entries:
        raise TransitionMemoryError(
            f"precomputing needs {node_entries + edge_entries} table entries "
            f"(> budget {max_entries}); lower tau (currently {tau}) or use tau=0 "
            f"for fully on-demand sampling"
        )

    n_total = g.n_total
    node_off = np.full(n_total, -1, np.int64)
    node_accept = np.empty(node_entries, np.float64)
    node_alias = np.empty(node_entries, np.int32)
    pos = 0
    for v in np.nonzero(small)[0]:
        pi = _pi_first(g, params, int(v))
        acc, ali = build_alias(pi / pi.sum())
        d = len(acc)
        node_off[v] = pos
        node_accept[pos:pos + d] = acc
        node_alias[pos:pos + d] = ali
        pos += d

    edge_off = np.full(len(g.neighbors), -1, np.int64)
    edge_accept = np.empty(edge_entries, np.float64)
    edge_alias = np.empty(edge_entries, np.int32)
    pos = 0
    indptr = g.indptr
    nbr = g.neighbors
    for u in range(n_total):
        for e in range(indptr[u], indptr[u + 1]):
            v = int(nbr[e])
            if not small[v]:
                continue
            pi = _pi_step(g, params, int(u), v)
            acc, ali = build_alias(pi / pi.sum())
            d = len(acc)
            edge_off[e] = pos
            edge_accept[pos:pos + d] = acc
            edge_alias[pos:pos + d] = ali
            pos += d

    return TransitionModel(
        params=params, tau=tau,
        node_off=node_off, node_accept=node_accept, node_alias=node_alias,
        edge_off=edge_off, edge_accept=edge_accept, edge_alias=edge_alias,
    )


def _iteration_uniforms(seed: int, iteration: int, n_rows: int, walk_length: int) -> np.ndarray:
    """Uniform block for one iteration; row v is the stream of the walk at v.

    Philox is counter-based: row v occupies a fixed counter window, which is
    what makes per-walk randomness independent of batching and scheduling.
    """
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, iteration & 0xFFFFFFFFFFFFFFFF], np.uint64)
    gen = np.random.Generator(np.random.Philox(key=key))
    return gen.random((n_rows, 2 * (walk_length - 1)))


def _sample_on_demand(pi: np.ndarray, u1: float) -> int:
    cdf = np.cumsum(pi)
    j = int(np.searchsorted(cdf, u1 * cdf[-1], side="right"))
    return min(j, len(pi) - 1)


def _walk_batch_impl(g: AugmentedGraph, model: TransitionModel, starts: np.ndarray,
                     ublock: np.ndarray) -> np.ndarray:
    """Advance a batch of walks in lockstep; returns (len(starts), l) ids."""
    params = model.params
    l = params.walk_length
    B = len(starts)
    indptr = g.indptr
    nbr = g.neighbors
    deg = np.diff(indptr)

    walks = np.empty((B, l), np.int32)
    walks[:, 0] = starts
    cur = starts.astype(np.int64)
    prev = np.full(B, SENTINEL_START, np.int64)
    edge = np.full(B, -1, np.int64)   # CSR index of (prev -> cur)

    for s in range(l - 1):
        u1 = ublock[:, 2 * s]
        u2 = ublock[:, 2 * s + 1]
        idx = np.empty(B, np.int64)

        first = edge < 0
        if first.any():
            f = np.nonzero(first)[0]
            offs = model.node_off[cur[f]]
            pre = offs >= 0
            if pre.any():
                sel = f[pre]
                d = deg[cur[sel]]
                j = np.minimum((u1[sel] * d).astype(np.int64), d - 1)
                at = offs[pre] + j
                take = u2[sel] < model.node_accept[at]
                idx[sel] = np.where(take, j, model.node_alias[at])
            for i in f[~pre]:
                idx[i] = _sample_on_demand(_pi_first(g, params, int(cur[i])), u1[i])

        rest = ~first
        if rest.any():
            t = np.nonzero(rest)[0]
            offs = model.edge_off[edge[t]]
            pre = offs >= 0
            if pre.any():
                sel = t[pre]
                d = deg[cur[sel]]
                j = np.minimum((u1[sel] * d).astype(np.int64), d - 1)
                at = offs[pre] + j
                take = u2[sel] < model.edge_accept[at]
                idx[sel] = np.where(take, j, model.edge_alias[at])
            for i in t[~pre]:
                idx[i] = _sample_on_demand(_pi_step(g, params, int(prev[i]), int(cur[i])), u1[i])

        edge = indptr[cur] + idx
        prev = cur
        cur = nbr[edge].astype(np.int64)
        walks[:, s + 1] = cur

    return walks


def edge_csr_index(g: AugmentedGraph, u: int, v: int) -> int:
    """CSR position of the directed edge u -> v; raises if absent."""
    s, e = g.indptr[u], g.indptr[u + 1]
    pos = int(np.searchsorted(g.neighbors[s:e], v))
    if pos >= e - s or g.neighbors[s + pos] != v:
        raise KeyError(f"no edge {u} -> {v}")
    return int(s + pos)


def sample_next(g: AugmentedGraph, model: TransitionModel, u: int, v: int,
                n_samples: int, seed: int) -> np.ndarray:
    """Draw next-step neighbor positions for state (u, v), honoring the
    model's precomputed/on-demand mode for that state. u = SENTINEL_START
    samples the first step."""
    rng = np.random.default_rng(seed)
    u1 = rng.random(n_samples)
    u2 = rng.random(n_samples)
    d = g.degree(v)
    if u == SENTINEL_START:
        off = int(model.node_off[v])
        pi = _pi_first(g, model.params, v)
    else:
        off = int(model.edge_off[edge_csr_index(g, u, v)])
        pi = _pi_step(g, model.params, u, v)
    if off >= 0:
        j = np.minimum((u1 * d).astype(np.int64), d - 1)
        take = u2 < (model.node_accept if u == SENTINEL_START else model.edge_accept)[off + j]
        alias = (model.node_alias if u == SENTINEL_START else model.edge_alias)[off + j]
        return np.where(take, j, alias)
    cdf = np.cumsum(pi)
    j = np.searchsorted(cdf, u1 * cdf[-1], side="right")
    return np.minimum(j, d - 1)


def generate_walk(g: AugmentedGraph, model: TransitionModel, start: int,
                  iteration: int = 0) -> np.ndarray:
    """One walk from ``start``; identical to the corresponding corpus row."""
    if g.degree(start) == 0:
        raise ValueError(f"start node {start} has no neighbors")
    u = _iteration_uniforms(model.params.seed, iteration, g.n_total, model.params.walk_length)
    return _walk_batch_impl(g, model, np.array([start], np.int64), u[start:start + 1])[0]


@dataclass
class Corpus:
    """Walk corpus in canonical (iteration, start id) order."""

    walks: np.ndarray           # (n_walks, walk_length) int32 unified ids
    starts: np.ndarray          # start node per row
    walks_per_node: int
    n_raw: int
    attr_ids: np.ndarray        # attribute node slot -> AttrId (for rendering)

    @property
    def n_walks(self) -> int:
        return self.walks.shape[0]

    @property
    def walk_length(self) -> int:
        return self.walks.shape[1]

    def token(self, v: int) -> str:
        return str(v) if v < self.n_raw else f"a{self.attr_ids[v - self.n_raw]}"

    def save(self, path) -> None:
        """One walk per line, space-separated tokens, attribute nodes a<attrid>."""
        raw = self.walks
        with open(path, "w", encoding="utf-8") as f:
            for row in raw:
                f.write(" ".join(self.token(int(v)) for v in row))
                f.write("\n")


def load_corpus_tokens(path) -> tuple[np.ndarray, list[str]]:
    """Read a corpus file into (index matrix, token list).

    Tokens are numbered in first-appearance order; the matrix holds those
    indices. All lines must have equal length.
    """
    vocab: dict[str, int] = {}
    rows: list[list[int]] = []
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            toks = line.split()
            if not toks:
                continue
            rows.append([vocab.setdefault(t, len(vocab)) for t in toks])
    if not rows:
        raise ValueError("empty corpus file")
    length = len(rows[0])
    if any(len(r) != length for r in rows):
        raise ValueError("corpus walks have unequal lengths")
    tokens = [None] * len(vocab)
    for t, i in vocab.items():
        tokens[i] = t
    return np.asarray(rows, np.int32), tokens


def generate_corpus(g: AugmentedGraph, model: TransitionModel, workers: int = 1,
                    batch_size: int = 16384) -> Corpus:
    """Alg.-style corpus: walks_per_node iterations over every start node.

    Starts cover all of V' (or raw nodes only with raw_starts_only), each
    exactly walks_per_node times. Generation order within an iteration is
    shuffled (and possibly parallel); assembly is canonical by
    (iteration, start id) and independent of worker count.
    """
    params = model.params
    n_total = g.n_total
    n_starts = g.n_raw if params.raw_starts_only else n_total
    starts = np.arange(n_starts, dtype=np.int64)
    l = params.walk_length
    all_walks = np.empty((params.walks_per_node * n_starts, l), np.int32)

    for it in range(params.walks_per_node):
        ublock = _iteration_uniforms(params.seed, it, n_total, l)
        order = np.random.default_rng((params.seed, _ORDER_STREAM, it)).permutation(starts)
        chunks = [order[i:i + batch_size] for i in range(0, n_starts, batch_size)]
        base = it * n_starts

        def run_chunk(chunk):
            res = _walk_batch_impl(g, model, chunk, ublock[chunk])
            all_walks[base + chunk] = res

        if workers > 1 and len(chunks) > 1:
            with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
                list(pool.map(run_chunk, chunks))
        else:
            for chunk in chunks:
                run_chunk(chunk)

    return Corpus(
        walks=all_walks,
        starts=np.tile(starts, params.walks_per_node),
        walks_per_node=params.walks_per_node,
        n_raw=g.n_raw,
        attr_ids=g.attr_ids.copy(),
    )
