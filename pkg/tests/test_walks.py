import io
import json
from pathlib import Path

import numpy as np
import pytest

from fane import (SF, STF, TF, WalkParams, build_augmented, generate_corpus,
                  generate_walk, load_attributes, load_edge_list,
                  preprocess_transitions, transition_distribution,
                  first_step_distribution)
from fane.walks import (SENTINEL_START, TransitionMemoryError, alpha, beta,
                        edge_csr_index, sample_next)
from conftest import random_raw_graph
from oracles import node2vec_reference as n2v
from oracles.stat_helpers import chisquare_gof_pvalue, two_sample_chi2_pvalue

HAND_TABLE = json.loads(
    (Path(__file__).parent / "oracles" / "five_node_hand_table.json").read_text())


def _directed_states(ag):
    for v in range(ag.n_total):
        nbrs, _ = ag.neighbor_slice(v)
        for u in nbrs:
            yield int(u), int(v)


# ---------------------------------------------------------------- kernels

def test_beta_cases(five_node_graph):
    ag = five_node_graph
    # x == u
    assert beta(ag, 1, 0, 1, p=4.0, q=0.25) == 0.25
    # triangle: u=1, v=0, x=2 with (1,2) an edge
    assert beta(ag, 1, 0, 2, p=4.0, q=0.25) == 1.0
    # distance 2: u=1, v=0, x=4
    assert beta(ag, 1, 0, 4, p=4.0, q=0.25) == 4.0


def test_beta_unbiased_when_p_q_one(five_node_graph):
    ag = five_node_graph
    for x in (1, 2, 4):
        assert beta(ag, 1, 0, x, p=1.0, q=1.0) == 1.0


def test_alpha_strategy_cases(five_node_graph):
    ag = five_node_graph
    # tf: x is the attribute node 5
    assert alpha(ag, TF, 0, 1, 5, p=1.0, q=1.0, r=2.0) == 0.5
    # raw v, raw x, u adjacent to x -> falls through to beta = 1
    for strat in (SF, TF, STF):
        assert alpha(ag, strat, 1, 0, 2, p=3.0, q=0.25, r=9.0) == 1.0
    # stf with attribute source: 1/r regardless of d_ux
    assert alpha(ag, STF, 1, 5, 3, p=3.0, q=0.25, r=8.0) == 0.125
    assert alpha(ag, STF, 1, 5, 1, p=3.0, q=0.25, r=8.0) == 0.125


# ---------------------------------------------------------------- first step

def test_first_step_weighted_uniform_at_r_one(five_node_graph):
    params = WalkParams(r=1.0, strategy=TF)
    dist = first_step_distribution(five_node_graph, params, 0)
    assert np.allclose(dist, [0.5, 0.25, 0.25], atol=1e-15)


def test_first_step_attr_pull():
    g = load_edge_list(io.StringIO("0 1\n0 2\n0 3\n"))
    load_attributes(io.StringIO("0 0\n1 0\n"), g)
    ag = build_augmented(g)
    params = WalkParams(r=0.1, strategy=TF)
    dist = first_step_distribution(ag, params, 0)
    nbrs, _ = ag.neighbor_slice(0)
    attr_pos = int(np.nonzero(nbrs >= ag.n_raw)[0][0])
    assert dist[attr_pos] == pytest.approx(10.0 / 13.0, abs=1e-12)


def test_first_step_from_attr_node_sf_is_weighted_uniform(five_node_graph):
    params = WalkParams(r=10.0, strategy=SF)
    dist = first_step_distribution(five_node_graph, params, 5)
    assert np.allclose(dist, [0.5, 0.5], atol=1e-15)


# ---------------------------------------------------------------- transitions

def test_uniform_when_all_params_one():
    g = load_edge_list(io.StringIO("0 1\n0 2\n1 2\n2 3\n"))
    ag = build_augmented(g)
    params = WalkParams(p=1.0, q=1.0, r=1.0)
    dist = transition_distribution(ag, params, 0, 2)
    assert np.allclose(dist, np.full(3, 1 / 3), atol=1e-15)


def test_hand_table_all_strategies(five_node_graph):
    ag = five_node_graph
    for strat, states in HAND_TABLE.items():
        for state, expected in states.items():
            u_tok, v_tok = state.split(",")
            v = int(v_tok)
            u = SENTINEL_START if u_tok == "start" else int(u_tok)
            params = WalkParams(p=2.0, q=0.5, r=0.25, strategy=strat)
            dist = transition_distribution(ag, params, u, v)
            nbrs, _ = ag.neighbor_slice(v)
            assert len(dist) == len(expected)
            for x, prob in zip(nbrs, dist):
                assert prob == pytest.approx(expected[str(int(x))], abs=1e-12), (
                    strat, state, int(x))


def test_node2vec_degeneracy_on_random_fixtures():
    rng = np.random.default_rng(123)
    for _ in range(10):
        ag, triples = random_raw_graph(rng)
        adj = n2v.build_adj(triples)
        for p, q in ((0.25, 4.0), (1.0, 1.0), (4.0, 0.25)):
            for strat in (SF, TF, STF):
                params = WalkParams(p=p, q=q, r=rng.uniform(0.1, 10.0), strategy=strat)
                for u, v in _directed_states(ag):
                    expected = n2v.step_probs(adj, u, v, p, q)
                    got = transition_distribution(ag, params, u, v)
                    assert np.allclose(got, expected, atol=1e-12)


def test_monotone_attr_mass_in_r(five_node_graph):
    ag = five_node_graph
    for strat in (TF, STF):
        masses = []
        for r in (4.0, 1.0, 0.25):
            params = WalkParams(p=2.0, q=0.5, r=r, strategy=strat)
            dist = transition_distribution(ag, params, 0, 1)
            nbrs, _ = ag.neighbor_slice(1)
            masses.append(dist[nbrs >= ag.n_raw].sum())
        assert masses[0] < masses[1] < masses[2]


def test_sf_with_raw_source_ignores_r(five_node_graph):
    ag = five_node_graph
    for u, v in _directed_states(ag):
        if v >= ag.n_raw:
            continue
        lo = transition_distribution(ag, WalkParams(p=2, q=0.5, r=0.01, strategy=SF), u, v)
        hi = transition_distribution(ag, WalkParams(p=2, q=0.5, r=100.0, strategy=SF), u, v)
        assert np.array_equal(lo, hi)


def test_beta_graph_raw_flag():
    g = load_edge_list(io.StringIO("0 1\n"))
    load_attributes(io.StringIO("0 0\n1 0\n"), g)
    ag = build_augmented(g)
    attr = ag.n_raw  # unified id 2
    # state (u=attr, v=0): target x=1 is connected to u only by a virtual edge
    aug = transition_distribution(ag, WalkParams(p=1, q=0.25, r=1, strategy=TF,
                                                 beta_graph="augmented"), attr, 0)
    raw = transition_distribution(ag, WalkParams(p=1, q=0.25, r=1, strategy=TF,
                                                 beta_graph="raw"), attr, 0)
    nbrs, _ = ag.neighbor_slice(0)
    x1 = int(np.nonzero(nbrs == 1)[0][0])
    # augmented counts the virtual edge: beta = 1; raw does not: beta = 1/q = 4
    assert raw[x1] > aug[x1]


def test_distribution_sums_to_one(five_node_graph):
    params = WalkParams(p=3.0, q=0.15, r=2.0)
    for u, v in _directed_states(five_node_graph):
        dist = transition_distribution(five_node_graph, params, u, v)
        assert abs(dist.sum() - 1.0) < 1e-12


# ---------------------------------------------------------------- model

def test_path_graph_edge_table_count():
    g = load_edge_list(io.StringIO("0 1\n1 2\n"))
    ag = build_augmented(g)
    model = preprocess_transitions(ag, WalkParams(), tau=16)
    assert int((model.edge_off >= 0).sum()) == 4


def test_tau_zero_is_fully_on_demand(five_node_graph):
    model = preprocess_transitions(five_node_graph, WalkParams(), tau=0)
    assert model.n_precomputed_entries == 0
    assert np.all(model.edge_off < 0)
    assert np.all(model.node_off < 0)


def test_memory_budget_error(five_node_graph):
    with pytest.raises(TransitionMemoryError, match="lower tau"):
        preprocess_transitions(five_node_graph, WalkParams(), tau=1024, max_entries=3)


def test_stored_distributions_match_on_demand(five_node_graph):
    """Alias tables must encode exactly the analytic distributions."""
    from fane.alias import implied_probs
    params = WalkParams(p=2.0, q=0.5, r=0.25, strategy=TF)
    model = preprocess_transitions(five_node_graph, params, tau=64)
    for u, v in _directed_states(five_node_graph):
        e = edge_csr_index(five_node_graph, u, v)
        off = int(model.edge_off[e])
        assert off >= 0
        d = five_node_graph.degree(v)
        probs = implied_probs(model.edge_accept[off:off + d], model.edge_alias[off:off + d] )
        assert np.allclose(probs, transition_distribution(five_node_graph, params, u, v),
                           atol=1e-12)


# ---------------------------------------------------------------- sampling

def test_sampler_chi_square_both_modes(five_node_graph):
    params = WalkParams(p=2.0, q=0.5, r=0.25, strategy=TF)
    pre = preprocess_transitions(five_node_graph, params, tau=64)
    ond = preprocess_transitions(five_node_graph, params, tau=0)
    n = 100_000
    for u, v in list(_directed_states(five_node_graph))[:6]:
        probs = transition_distribution(five_node_graph, params, u, v)
        for model in (pre, ond):
            draws = sample_next(five_node_graph, model, u, v, n, seed=99)
            counts = np.bincount(draws, minlength=len(probs))
            assert chisquare_gof_pvalue(counts, probs) > 0.01


def test_precomputed_and_on_demand_statistically_identical(five_node_graph):
    params = WalkParams(p=2.0, q=0.5, r=0.25, strategy=TF)
    pre = preprocess_transitions(five_node_graph, params, tau=64)
    ond = preprocess_transitions(five_node_graph, params, tau=0)
    n = 100_000
    for u, v in list(_directed_states(five_node_graph))[:4]:
        k = five_node_graph.degree(v)
        a = np.bincount(sample_next(five_node_graph, pre, u, v, n, seed=7), minlength=k)
        b = np.bincount(sample_next(five_node_graph, ond, u, v, n, seed=8), minlength=k)
        assert two_sample_chi2_pvalue(a, b) > 0.01


# ---------------------------------------------------------------- walks

def test_walk_length_and_start(five_node_graph):
    params = WalkParams(walk_length=2, seed=3)
    model = preprocess_transitions(five_node_graph, params)
    w = generate_walk(five_node_graph, model, 2)
    assert len(w) == 2
    assert w[0] == 2
    nbrs, _ = five_node_graph.neighbor_slice(2)
    assert w[1] in nbrs


def test_walk_edges_exist(five_node_graph):
    params = WalkParams(walk_length=30, seed=11)
    model = preprocess_transitions(five_node_graph, params)
    w = generate_walk(five_node_graph, model, 0)
    for a, b in zip(w[:-1], w[1:]):
        assert five_node_graph.has_edge(int(a), int(b))


def test_corpus_counts_and_coverage():
    g = load_edge_list(io.StringIO("0 1\n1 2\n"))
    ag = build_augmented(g)
    params = WalkParams(walk_length=5, walks_per_node=1, seed=1)
    model = preprocess_transitions(ag, params)
    corpus = generate_corpus(ag, model)
    assert corpus.n_walks == 3

    params = WalkParams(walk_length=5, walks_per_node=4, seed=1)
    model = preprocess_transitions(ag, params)
    corpus = generate_corpus(ag, model)
    assert corpus.n_walks == 4 * ag.n_total
    starts, counts = np.unique(corpus.walks[:, 0], return_counts=True)
    assert starts.tolist() == list(range(ag.n_total))
    assert np.all(counts == 4)


def test_corpus_includes_attr_starts_unless_disabled(five_node_graph):
    params = WalkParams(walk_length=4, walks_per_node=2, seed=5)
    model = preprocess_transitions(five_node_graph, params)
    corpus = generate_corpus(five_node_graph, model)
    assert corpus.n_walks == 2 * 6
    assert (corpus.walks[:, 0] >= five_node_graph.n_raw).sum() == 2

    params = WalkParams(walk_length=4, walks_per_node=2, seed=5, raw_starts_only=True)
    model = preprocess_transitions(five_node_graph, params)
    corpus = generate_corpus(five_node_graph, model)
    assert corpus.n_walks == 2 * 5
    assert np.all(corpus.walks[:, 0] < five_node_graph.n_raw)


def test_determinism_across_runs_and_workers(five_node_graph):
    params = WalkParams(p=2.0, q=0.5, r=0.5, walk_length=12, walks_per_node=3, seed=77)
    model = preprocess_transitions(five_node_graph, params)
    a = generate_corpus(five_node_graph, model, workers=1)
    b = generate_corpus(five_node_graph, model, workers=1)
    c = generate_corpus(five_node_graph, model, workers=3, batch_size=2)
    assert np.array_equal(a.walks, b.walks)
    assert np.array_equal(a.walks, c.walks)
    w = generate_walk(five_node_graph, model, 4, iteration=2)
    assert np.array_equal(w, a.walks[2 * 6 + 4])


def test_seed_changes_corpus(five_node_graph):
    p1 = WalkParams(walk_length=12, walks_per_node=2, seed=1)
    p2 = WalkParams(walk_length=12, walks_per_node=2, seed=2)
    a = generate_corpus(five_node_graph, preprocess_transitions(five_node_graph, p1))
    b = generate_corpus(five_node_graph, preprocess_transitions(five_node_graph, p2))
    assert not np.array_equal(a.walks, b.walks)


def test_walk_bigram_frequencies_match_distributions(five_node_graph):
    params = WalkParams(p=2.0, q=0.5, r=0.5, strategy=TF, walk_length=40,
                        walks_per_node=300, seed=13)
    model = preprocess_transitions(five_node_graph, params)
    corpus = generate_corpus(five_node_graph, model)
    counts: dict[tuple[int, int], np.ndarray] = {}
    for row in corpus.walks:
        for i in range(1, len(row) - 1):
            u, v, x = int(row[i - 1]), int(row[i]), int(row[i + 1])
            nbrs, _ = five_node_graph.neighbor_slice(v)
            pos = int(np.searchsorted(nbrs, x))
            counts.setdefault((u, v), np.zeros(len(nbrs)))[pos] += 1
    tested = 0
    for (u, v), c in counts.items():
        if c.sum() < 1500:
            continue
        probs = transition_distribution(five_node_graph, params, u, v)
        assert chisquare_gof_pvalue(c, probs) > 0.01, (u, v)
        tested += 1
    assert tested >= 5


def test_attr_bridge_rarely_crossed_at_huge_r():
    # two raw components joined only through the attribute node
    g = load_edge_list(io.StringIO("0 1\n1 2\n3 4\n4 5\n"))
    load_attributes(io.StringIO("0 0\n3 0\n"), g)
    ag = build_augmented(g)
    params = WalkParams(r=1e6, strategy=TF, walk_length=10, walks_per_node=20000,
                        seed=21, raw_starts_only=True)
    model = preprocess_transitions(ag, params)
    corpus = generate_corpus(ag, model)
    assert corpus.n_walks >= 100_000
    non_start = corpus.walks[:, 1:]
    frac = float((non_start >= ag.n_raw).mean())
    assert frac < 0.001


def test_corpus_file_round_trip(five_node_graph, tmp_path):
    params = WalkParams(walk_length=6, walks_per_node=2, seed=3)
    model = preprocess_transitions(five_node_graph, params)
    corpus = generate_corpus(five_node_graph, model)
    path = tmp_path / "corpus.txt"
    corpus.save(path)
    from fane.walks import load_corpus_tokens
    matrix, tokens = load_corpus_tokens(path)
    assert matrix.shape == corpus.walks.shape
    # attribute tokens rendered as a<attrid>
    assert "a0" in tokens
    # token indices decode back to the original walks
    decoded = np.array([[tokens[t] for t in row] for row in matrix])
    expected = np.array([[corpus.token(int(v)) for v in row] for row in corpus.walks])
    assert np.array_equal(decoded, expected)


def test_isolated_start_rejected(five_node_graph):
    model = preprocess_transitions(five_node_graph, WalkParams())
    with pytest.raises((ValueError, IndexError)):
        generate_walk(five_node_graph, model, 99)


def test_walk_params_validation():
    with pytest.raises(ValueError):
        WalkParams(p=0.0)
    with pytest.raises(ValueError):
        WalkParams(walk_length=1)
    with pytest.raises(ValueError):
        WalkParams(strategy="bogus")
    with pytest.raises(ValueError):
        WalkParams(beta_graph="nope")
