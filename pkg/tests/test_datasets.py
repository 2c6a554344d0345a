import numpy as np

from fane import build_augmented, stats
from fane.datasets import SPECS, load_dir

EXPECTED = {
    "cora": (2708, 5278, 1433, 7),
    "webkb": (877, 1608, 1703, 5),
    "citeseer": (3312, 4732, 3703, 6),
    "adjnoun": (112, 425, 2, 0),
}


def test_surrogates_match_reference_statistics(data_root):
    for name, (n, e, m, k) in EXPECTED.items():
        g = load_dir(data_root / name)
        assert g.n_nodes == n, name
        assert g.n_edges == e, name
        assert g.n_attrs == m, name
        assert len(set(g.labels.values())) == (k if k else 0), name


def test_surrogate_augmented_invariants(data_root):
    for name in EXPECTED:
        g = load_dir(data_root / name)
        ag = build_augmented(g)
        s = stats(ag)
        assert s["n_total_edges"] == g.n_edges + g.nnz_attributes, name
        assert s["n_attr_nodes"] <= g.n_attrs, name
        # every attribute occurs at least once by construction
        assert s["n_attr_nodes"] == g.n_attrs, name
        assert s["n_total_nodes"] == g.n_nodes + g.n_attrs, name


def test_synthesis_is_deterministic(tmp_path, data_root):
    from fane.datasets import synthesize
    out = synthesize("adjnoun", tmp_path / "adjnoun")
    for fn in ("edges.txt", "attrs.txt"):
        assert (out / fn).read_bytes() == (data_root / "adjnoun" / fn).read_bytes()


def test_adjnoun_one_attribute_per_node(data_root):
    g = load_dir(data_root / "adjnoun")
    assert g.nnz_attributes == g.n_nodes
    per_node = np.bincount(g.attr_node, minlength=g.n_nodes)
    assert np.all(per_node == 1)
    sizes = np.bincount(g.attr_id, minlength=2)
    assert sorted(sizes.tolist()) == sorted(s for s in SPECS["adjnoun"].class_sizes)
