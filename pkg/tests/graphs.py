"""Hypothesis strategies producing connected arithmetic-genus-one dual graphs."""

from hypothesis import strategies as st

from mstable.dualgraph import DualGraph


@st.composite
def genus_one_graphs(draw, max_n=6, max_vertices=5, source=None, max_hub=None, allow_mult=True):
    """Random tree of rational components plus exactly one genus source.

    ``source`` is ``"vertex"`` (a genus-one component), ``"cycle"`` (one extra
    edge, possibly a loop) or ``"hub"`` (an elliptic l-fold point joining l
    separate trees).  Marks are spread uniformly over the components.
    """
    n = draw(st.integers(1, max_n))
    source = source or draw(st.sampled_from(["vertex", "cycle", "hub"]))
    k = draw(st.integers(1, max_vertices))
    ids = [f"v{i}" for i in range(k)]
    genus = {v: 0 for v in ids}
    edges = []
    hub = None

    def mult():
        return draw(st.integers(1, 3)) if allow_mult else 1

    if source == "hub":
        cap = k if max_hub is None else min(k, max_hub)
        l = draw(st.integers(1, cap))
        roots = ids[:l]
        for i in range(l, k):
            parent = ids[draw(st.integers(0, i - 1))]
            edges.append((parent, ids[i], mult()))
        hub = roots
    else:
        for i in range(1, k):
            parent = ids[draw(st.integers(0, i - 1))]
            edges.append((parent, ids[i], mult()))
        if source == "vertex":
            genus[ids[draw(st.integers(0, k - 1))]] = 1
        else:
            a = ids[draw(st.integers(0, k - 1))]
            b = ids[draw(st.integers(0, k - 1))]
            edges.append((a, b, 1))
    owner = [ids[draw(st.integers(0, k - 1))] for _ in range(n)]
    marks = {v: [i + 1 for i, o in enumerate(owner) if o == v] for v in ids}
    return DualGraph.build(n, [(v, genus[v], marks[v]) for v in ids], edges, hub)


@st.composite
def one_node_graphs(draw, max_n=6):
    """An elliptic component joined by one node to a rational component carrying S."""
    n = draw(st.integers(2, max_n))
    S = draw(st.sets(st.integers(1, n), min_size=2))
    rest = [i for i in range(1, n + 1) if i not in S]
    return DualGraph.build(n, [("E", 1, rest), ("R", 0, sorted(S))], [("E", "R")])
