from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mstable.dualgraph import (
    DualGraph,
    Subcurve,
    arithmetic_genus,
    check_m_stability,
    combinatorial_type,
    disconnecting_nodes,
    genus_one_subcurves,
    is_m_stable,
    isomorphic,
    level,
    minimal_elliptic_subcurve,
    require_genus_one,
)
from mstable.errors import DualGraphError
from mstable.picard import MarkSet

from .graphs import genus_one_graphs


# -- independent oracles -----------------------------------------------------------

def delta_genus(g, vids=None):
    """Arithmetic genus from delta-invariants: sum g_v + sum delta - #components + 1."""
    vids = set(g.ids if vids is None else vids)
    nodes = sum(1 for e in g.edges if e.a in vids and e.b in vids)
    hub = 0
    if g.hub is not None:
        r = sum(1 for b in g.hub.branches if b in vids)
        hub = g.hub.l if r == g.hub.l else max(r - 1, 0)
    return sum(g.vertex(v).genus for v in vids) + nodes + hub - len(vids) + 1


def connected(g, vids, skip=None):
    vids = set(vids)
    adj = {v: set() for v in vids}
    for i, e in enumerate(g.edges):
        if i != skip and e.a in vids and e.b in vids:
            adj[e.a].add(e.b)
            adj[e.b].add(e.a)
    if g.hub is not None:
        inside = [b for b in g.hub.branches if b in vids]
        for a in inside:
            adj[a].update(inside)
    start = next(iter(vids))
    seen, stack = {start}, [start]
    while stack:
        for w in adj[stack.pop()] - seen:
            seen.add(w)
            stack.append(w)
    return seen == vids


def oracle_cores(g):
    out = []
    for k in range(1, len(g.ids) + 1):
        for combo in combinations(g.ids, k):
            if not connected(g, combo) or delta_genus(g, combo) != 1:
                continue
            inner = [i for i, e in enumerate(g.edges) if e.a in combo and e.b in combo and not e.is_loop]
            if all(connected(g, combo, skip=i) for i in inner):
                out.append(frozenset(combo))
    return out


def oracle_level(g, vids):
    marks = sum(len(g.vertex(v).marks) for v in vids)
    return marks + sum(1 for e in g.edges if (e.a in vids) != (e.b in vids))


# -- hand examples -------------------------------------------------------------------

TAIL = DualGraph.build(3, [("E", 1, []), ("R", 0, [1, 2, 3])], [("E", "R")])


def test_unmarked_elliptic_tail():
    assert arithmetic_genus(TAIL) == 1
    z = minimal_elliptic_subcurve(TAIL)
    assert z == Subcurve(frozenset({"E"}))
    assert level(TAIL, z) == 1
    assert is_m_stable(TAIL, 0)
    report = check_m_stability(TAIL, 1)
    assert not report and len(report.violations) == 1


def test_tacnode_on_one_component_has_genus_two():
    g = DualGraph.build(2, [("A", 0, [1, 2])], hub=["A", "A"])
    assert arithmetic_genus(g) == 2
    with pytest.raises(DualGraphError) as exc:
        require_genus_one(g)
    assert exc.value.code == "GENUS_NOT_ONE"


def test_cusp_and_tacnode():
    cusp = DualGraph.build(3, [("R", 0, [1, 2, 3])], hub=["R"])
    assert arithmetic_genus(cusp) == 1 and is_m_stable(cusp, 1)
    assert not is_m_stable(cusp, 0)
    assert combinatorial_type(cusp) == (MarkSet.of([1, 2, 3]),)
    tac = DualGraph.build(3, [("A", 0, [1]), ("B", 0, [2, 3])], hub=["A", "B"])
    assert arithmetic_genus(tac) == 1 and is_m_stable(tac, 2) and not is_m_stable(tac, 1)
    assert combinatorial_type(tac) == (MarkSet.of([1]), MarkSet.of([2, 3]))


def test_rational_nodal_curve_and_cycles():
    loop = DualGraph.build(1, [("R", 0, [1])], [("R", "R")])
    assert arithmetic_genus(loop) == 1
    assert minimal_elliptic_subcurve(loop).vertices == {"R"}
    ring = DualGraph.build(3, [("A", 0, [1]), ("B", 0, [2]), ("C", 0, [3]), ("T", 0, [])],
                           [("A", "B"), ("B", "C"), ("C", "A"), ("A", "T")])
    assert minimal_elliptic_subcurve(ring).vertices == {"A", "B", "C"}
    assert [S for _, S in disconnecting_nodes(ring)] == [MarkSet(0)]


def test_all_singleton_branches_are_unstable():
    g = DualGraph.build(3, [("A", 0, [1]), ("B", 0, [2]), ("C", 0, [3])], hub=["A", "B", "C"])
    report = check_m_stability(g, 2, clauses=("rational",))
    assert not report.stable
    assert check_m_stability(g, 2, clauses=("rational",)).violations == (
        "every branch of the elliptic point has only 2 special points",)


def test_singularity_clause():
    g = DualGraph.build(4, [("A", 0, [1, 2]), ("B", 0, [3, 4])], hub=["A", "B"])
    assert is_m_stable(g, 2)
    assert not is_m_stable(g, 1)
    assert is_m_stable(g, 1, clauses=("levels", "rational"))


def test_combinatorial_type_errors():
    with pytest.raises(DualGraphError) as exc:
        combinatorial_type(TAIL)
    assert exc.value.code == "NO_HUB"
    g = DualGraph.build(2, [("A", 0, []), ("B", 0, [1, 2])], hub=["A", "B"])
    with pytest.raises(DualGraphError) as exc:
        combinatorial_type(g)
    assert exc.value.code == "EMPTY_PART"


def test_structural_errors():
    with pytest.raises(DualGraphError):
        DualGraph.build(2, [("A", 0, [1])])
    with pytest.raises(DualGraphError):
        DualGraph.build(1, [("A", 0, [1]), ("A", 0, [])])
    with pytest.raises(DualGraphError):
        DualGraph.build(1, [("A", 0, [1])], [("A", "B")])
    with pytest.raises(DualGraphError):
        DualGraph.build(1, [("A", 2, [1])])
    with pytest.raises(DualGraphError) as exc:
        arithmetic_genus(DualGraph.build(2, [("A", 1, [1]), ("B", 0, [2])]))
    assert exc.value.code == "DISCONNECTED"
    with pytest.raises(DualGraphError):
        DualGraph.loads('{"n": 1, "vertices": [{"id": "A", "marks": [1]}], "hub": {"branches": ["A"], "l": 2}}')
    with pytest.raises(DualGraphError) as exc:
        level(TAIL, Subcurve(frozenset({"X"})))
    assert exc.value.code == "INVALID_SUBCURVE"


def test_json_format():
    g = DualGraph.build(3, [("A", 0, [1]), ("B", 0, [2, 3])], [("A", "B", 2)], hub=None)
    data = g.to_json()
    assert data["edges"] == [["A", "B", 2]]
    assert data["hub"] is None
    assert DualGraph.from_json(data) == g


# -- properties ------------------------------------------------------------------------

@given(genus_one_graphs())
def test_genus_matches_delta_invariant(g):
    assert arithmetic_genus(g) == delta_genus(g) == 1


@given(genus_one_graphs())
def test_minimal_subcurve_is_the_unique_bridge_free_core(g):
    cores = oracle_cores(g)
    assert cores == [minimal_elliptic_subcurve(g).vertices]


@given(genus_one_graphs())
def test_genus_one_subcurves_exhaustive(g):
    want = sorted((frozenset(c) for k in range(1, len(g.ids) + 1) for c in combinations(g.ids, k)
                   if connected(g, c) and delta_genus(g, c) == 1), key=sorted)
    got = sorted((z.vertices for z in genus_one_subcurves(g)), key=sorted)
    assert got == want


@given(genus_one_graphs(source="vertex"))
def test_levels_match_oracle(g):
    for z in genus_one_subcurves(g):
        assert level(g, z) == oracle_level(g, z.vertices)


@given(genus_one_graphs(), st.integers(0, 5))
def test_stability_equals_clause_conjunction(g, m):
    full = check_m_stability(g, m)
    parts = [check_m_stability(g, m, clauses=(c,)) for c in ("singularities", "levels", "rational", "elliptic")]
    assert full.violations == tuple(v for p in parts for v in p.violations)


@given(genus_one_graphs())
def test_json_round_trip(g):
    assert DualGraph.loads(g.dumps()) == g
    assert isomorphic(DualGraph.loads(g.dumps()), g)


@given(genus_one_graphs(source="hub"))
def test_combinatorial_type_partitions_marks(g):
    try:
        parts = combinatorial_type(g)
    except DualGraphError as exc:
        assert exc.code == "EMPTY_PART"
        return
    assert len(parts) == g.hub.l
    union = 0
    for p in parts:
        assert union & p.mask == 0
        union |= p.mask
    assert union == MarkSet.full(g.n).mask
    assert list(parts) == sorted(parts, key=lambda p: p.members[0])


@given(genus_one_graphs())
def test_disconnecting_nodes_types(g):
    z = minimal_elliptic_subcurve(g).vertices
    core_marks = {i for v in z for i in g.vertex(v).marks}
    for _, S in disconnecting_nodes(g):
        assert not (set(S.members) & core_marks)


def test_isomorphism_ignores_names():
    a = DualGraph.build(3, [("A", 0, [1]), ("B", 0, [2, 3])], hub=["A", "B"])
    b = DualGraph.build(3, [("x", 0, [1]), ("y", 0, [2, 3])], hub=["y", "x"])
    c = DualGraph.build(3, [("x", 0, [2]), ("y", 0, [1, 3])], hub=["y", "x"])
    assert isomorphic(a, b) and not isomorphic(a, c)
