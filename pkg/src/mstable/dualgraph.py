"""Dual graphs of n-pointed arithmetic genus one curves.

Vertices are irreducible components (geometric genus 0 or 1), edges are
nodes, and an optional *hub* records a single elliptic l-fold point whose
``l`` branches lie on the listed vertices.  The hub is a genus source: an
elliptic l-fold point has delta-invariant ``l`` on ``l`` branches, so in the
incidence complex (hub as an extra vertex joined by its ``l`` branches) it
contributes its first-Betti share plus one.

Edges carry a multiplicity ``mult >= 1``: a node of a one-parameter family
whose total space has an ``A_{mult-1}`` singularity there.  Multiplicity does
not affect the genus of the fiber.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from .errors import DualGraphError
from .picard import MarkSet

HUB = "__hub__"


@dataclass(frozen=True)
class Vertex:
    id: str
    genus: int = 0
    marks: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "marks", frozenset(self.marks))
        if self.genus not in (0, 1):
            raise DualGraphError(f"vertex {self.id}: geometric genus must be 0 or 1")


@dataclass(frozen=True, order=True)
class Edge:
    a: str
    b: str
    mult: int = 1

    def __post_init__(self):
        if self.a > self.b:
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)
        if self.mult < 1:
            raise DualGraphError("edge multiplicity must be >= 1")

    @property
    def is_loop(self) -> bool:
        return self.a == self.b

    def other(self, v: str) -> str:
        return self.b if v == self.a else self.a


@dataclass(frozen=True)
class Hub:
    branches: tuple  # multiset of vertex ids, sorted

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(sorted(self.branches)))
        if not self.branches:
            raise DualGraphError("hub needs at least one branch")

    @property
    def l(self) -> int:
        return len(self.branches)


@dataclass(frozen=True)
class DualGraph:
    n: int
    vertices: tuple
    edges: tuple = ()
    hub: Hub | None = None
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        verts = tuple(sorted(self.vertices, key=lambda v: v.id))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))
        ids = [v.id for v in verts]
        if len(set(ids)) != len(ids):
            raise DualGraphError("duplicate vertex id", code="INVALID_GRAPH")
        if HUB in ids:
            raise DualGraphError(f"vertex id {HUB!r} is reserved")
        index = {v.id: v for v in verts}
        object.__setattr__(self, "_index", index)
        for e in self.edges:
            if e.a not in index or e.b not in index:
                raise DualGraphError(f"edge {e} references unknown vertex")
        if self.hub is not None:
            for b in self.hub.branches:
                if b not in index:
                    raise DualGraphError(f"hub branch on unknown vertex {b}")
        seen = []
        for v in verts:
            seen.extend(v.marks)
        if sorted(seen) != list(range(1, self.n + 1)):
            raise DualGraphError("marks must partition {1..n}", code="BAD_MARKS")

    # -- construction / serialization ------------------------------------

    @classmethod
    def build(cls, n: int, vertices: Iterable, edges: Iterable = (), hub: Iterable | None = None):
        """Shorthand: ``vertices`` as ``(id, genus, marks)`` triples, edges as pairs
        or ``(a, b, mult)`` triples, hub as a list of branch vertex ids."""
        vs = [v if isinstance(v, Vertex) else Vertex(v[0], v[1], frozenset(v[2])) for v in vertices]
        es = [e if isinstance(e, Edge) else Edge(*e) for e in edges]
        h = None if hub is None else Hub(tuple(hub))
        return cls(n, tuple(vs), tuple(es), h)

    def to_json(self) -> dict:
        edges = []
        for e in self.edges:
            edges.append([e.a, e.b] if e.mult == 1 else [e.a, e.b, e.mult])
        return {
            "n": self.n,
            "vertices": [{"id": v.id, "genus": v.genus, "marks": sorted(v.marks)}
                         for v in self.vertices],
            "edges": edges,
            "hub": None if self.hub is None else {"branches": list(self.hub.branches),
                                                  "l": self.hub.l},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: Mapping) -> "DualGraph":
        try:
            vs = [Vertex(str(v["id"]), int(v.get("genus", 0)), frozenset(int(i) for i in v.get("marks", [])))
                  for v in data["vertices"]]
            es = [Edge(str(e[0]), str(e[1]), int(e[2]) if len(e) > 2 else 1)
                  for e in data.get("edges", [])]
            hub = None
            if data.get("hub"):
                branches = tuple(str(b) for b in data["hub"]["branches"])
                if "l" in data["hub"] and int(data["hub"]["l"]) != len(branches):
                    raise DualGraphError("hub multiplicity l must equal the number of branches")
                hub = Hub(branches)
            return cls(int(data["n"]), tuple(vs), tuple(es), hub)
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise DualGraphError(f"malformed graph JSON: {exc}") from exc

    @classmethod
    def loads(cls, text: str) -> "DualGraph":
        return cls.from_json(json.loads(text))

    # -- basic queries ------------------------------------------------------

    def vertex(self, vid: str) -> Vertex:
        return self._index[vid]

    @property
    def ids(self) -> tuple:
        return tuple(v.id for v in self.vertices)

    def branch_count(self, vid: str) -> int:
        return 0 if self.hub is None else self.hub.branches.count(vid)

    def special_points(self, vid: str) -> int:
        """Marks, node branches (a loop counts twice) and hub branches on ``vid``."""
        v = self.vertex(vid)
        k = len(v.marks) + self.branch_count(vid)
        for e in self.edges:
            if e.a == vid:
                k += 1
            if e.b == vid:
                k += 1
        return k

    def marks_on(self, vids: Iterable[str]) -> MarkSet:
        out = []
        for vid in vids:
            out.extend(self.vertex(vid).marks)
        return MarkSet.of(out)

    def with_(self, vertices=None, edges=None, hub="keep") -> "DualGraph":
        return DualGraph(self.n,
                         tuple(self.vertices if vertices is None else vertices),
                         tuple(self.edges if edges is None else edges),
                         self.hub if hub == "keep" else hub)


@dataclass(frozen=True)
class Subcurve:
    vertices: frozenset
    include_hub: bool = False

    def __repr__(self):
        hub = "+hub" if self.include_hub else ""
        return "Subcurve{" + ",".join(sorted(self.vertices)) + "}" + hub


# -- connectivity and genus --------------------------------------------------

class _UF:
    def __init__(self, items):
        self.p = {x: x for x in items}

    def find(self, x):
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a, b):
        self.p[self.find(a)] = self.find(b)

    def classes(self) -> int:
        return len({self.find(x) for x in self.p})


def _hub_touches(g: DualGraph, vids: frozenset) -> bool:
    return g.hub is not None and any(b in vids for b in g.hub.branches)


def _full_hub(g: DualGraph, vids: frozenset) -> bool:
    return g.hub is not None and all(b in vids for b in g.hub.branches)


def _induced(g: DualGraph, vids: frozenset, skip_edge: int | None = None):
    """Nodes, edges and hub incidences of the incidence complex restricted to ``vids``."""
    nodes = set(vids)
    links = []
    for idx, e in enumerate(g.edges):
        if idx == skip_edge:
            continue
        if e.a in vids and e.b in vids:
            links.append((e.a, e.b))
    if _hub_touches(g, vids):
        nodes.add(HUB)
        links.extend((HUB, b) for b in g.hub.branches if b in vids)
    return nodes, links


def _components(nodes, links) -> int:
    uf = _UF(nodes)
    for a, b in links:
        uf.union(a, b)
    return uf.classes()


def is_connected(g: DualGraph, vids: Iterable[str] | None = None) -> bool:
    vids = frozenset(g.ids if vids is None else vids)
    if not vids:
        return False
    nodes, links = _induced(g, vids)
    return _components(nodes, links) == 1


def subcurve_genus(g: DualGraph, vids: Iterable[str]) -> int:
    """Arithmetic genus of the union of the components ``vids``.

    A partial set of hub branches meets in a rational (seminormal) point, so
    the hub adds its extra 1 only when all of its branches are present.
    """
    vids = frozenset(vids)
    nodes, links = _induced(g, vids)
    c = _components(nodes, links)
    betti = len(links) - len(nodes) + c
    geometric = sum(g.vertex(v).genus for v in vids)
    return geometric + betti + (1 if _full_hub(g, vids) else 0) - (c - 1)


def arithmetic_genus(g: DualGraph) -> int:
    if not is_connected(g):
        raise DualGraphError("graph is disconnected", code="DISCONNECTED")
    return subcurve_genus(g, g.ids)


def require_genus_one(g: DualGraph) -> None:
    pa = arithmetic_genus(g)
    if pa != 1:
        raise DualGraphError(f"arithmetic genus is {pa}, not 1", code="GENUS_NOT_ONE")


def internal_bridges(g: DualGraph, vids: Iterable[str]) -> list[int]:
    """Indices of edges inside ``vids`` that disconnect the subcurve (disconnecting nodes)."""
    vids = frozenset(vids)
    nodes, links = _induced(g, vids)
    base = _components(nodes, links)
    out = []
    for idx, e in enumerate(g.edges):
        if e.is_loop or not (e.a in vids and e.b in vids):
            continue
        n2, l2 = _induced(g, vids, skip_edge=idx)
        if _components(n2, l2) > base:
            out.append(idx)
    return out


def disconnecting_nodes(g: DualGraph) -> list[tuple[Edge, MarkSet]]:
    """Every disconnecting node with its type S (marks on the genus-zero side)."""
    require_genus_one(g)
    core = minimal_elliptic_subcurve(g).vertices
    out = []
    for idx in internal_bridges(g, g.ids):
        e = g.edges[idx]
        nodes, links = _induced(g, frozenset(g.ids), skip_edge=idx)
        uf = _UF(nodes)
        for a, b in links:
            uf.union(a, b)
        anchor = uf.find(next(iter(core)))
        side = e.a if uf.find(e.a) != anchor else e.b
        root = uf.find(side)
        away = [v for v in g.ids if uf.find(v) == root]
        out.append((e, g.marks_on(away)))
    return out


def disconnecting_count(g: DualGraph, with_multiplicity: bool = True) -> int:
    return sum(e.mult if with_multiplicity else 1 for e, _ in disconnecting_nodes(g))


# -- the minimal elliptic subcurve and levels -----------------------------------

def minimal_elliptic_subcurve(g: DualGraph) -> Subcurve:
    """The unique connected genus-one subcurve with no disconnecting node."""
    require_genus_one(g)
    elliptic = [v.id for v in g.vertices if v.genus == 1]
    if elliptic:
        z = Subcurve(frozenset(elliptic[:1]))
    elif g.hub is not None:
        z = Subcurve(frozenset(g.hub.branches), True)
    else:
        bridges = set(internal_bridges(g, g.ids))
        cyc = set()
        for idx, e in enumerate(g.edges):
            if idx not in bridges:
                cyc.update((e.a, e.b))
        z = Subcurve(frozenset(cyc))
    if not (is_connected(g, z.vertices) and subcurve_genus(g, z.vertices) == 1
            and not internal_bridges(g, z.vertices)):
        raise DualGraphError("no bridge-free genus-one core found", code="INVARIANT_BREACH")
    return z


def _check_subcurve(g: DualGraph, z: Subcurve) -> None:
    if not z.vertices or any(v not in g._index for v in z.vertices):
        raise DualGraphError(f"{z!r} is not a subcurve", code="INVALID_SUBCURVE")
    if z.include_hub != _full_hub(g, z.vertices):
        raise DualGraphError(f"{z!r}: hub flag disagrees with branch vertices",
                             code="INVALID_SUBCURVE")


def outgoing_nodes(g: DualGraph, vids: Iterable[str]) -> list[Edge]:
    vids = frozenset(vids)
    return [e for e in g.edges if (e.a in vids) != (e.b in vids)]


def level(g: DualGraph, z: Subcurve) -> int:
    """Marked points on ``z`` plus points where ``z`` meets the rest of the curve."""
    _check_subcurve(g, z)
    meet = len(outgoing_nodes(g, z.vertices))
    if _hub_touches(g, z.vertices) and not z.include_hub:
        meet += 1
    return len(g.marks_on(z.vertices)) + meet


def subcurve_of(g: DualGraph, vids: Iterable[str]) -> Subcurve:
    vids = frozenset(vids)
    return Subcurve(vids, _full_hub(g, vids))


def genus_one_subcurves(g: DualGraph) -> list[Subcurve]:
    """All connected genus-one subcurves: the connected supersets of the core."""
    core = minimal_elliptic_subcurve(g).vertices
    adj = {v: set() for v in g.ids}
    for e in g.edges:
        adj[e.a].add(e.b)
        adj[e.b].add(e.a)
    if g.hub is not None:
        for a in g.hub.branches:
            adj[a].update(g.hub.branches)
    seen = {core}
    stack = [core]
    while stack:
        cur = stack.pop()
        frontier = set().union(*(adj[v] for v in cur)) - cur
        for w in frontier:
            nxt = cur | {w}
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return [subcurve_of(g, s) for s in sorted(seen, key=lambda s: (len(s), sorted(s)))]


# -- m-stability ---------------------------------------------------------------

ALL_CLAUSES = ("singularities", "levels", "rational", "elliptic")


@dataclass(frozen=True)
class StabilityReport:
    m: int
    violations: tuple = ()

    @property
    def stable(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.stable


def check_m_stability(g: DualGraph, m: int, clauses: Iterable[str] = ALL_CLAUSES) -> StabilityReport:
    """Test the m-stability conditions clause by clause.

    ``singularities``: the elliptic point (if any) has at most ``m`` branches.
    ``levels``: every connected genus-one subcurve has level > m.
    ``rational``: genus-zero components have >= 3 special points; a component
    carrying hub branches may have 2, provided some branch component has >= 3.
    ``elliptic``: a genus-one component has at least one special point.
    """
    require_genus_one(g)
    clauses = tuple(clauses)
    bad = []
    if "singularities" in clauses and g.hub is not None and g.hub.l > m:
        bad.append(f"elliptic {g.hub.l}-fold point exceeds m={m}")
    if "levels" in clauses:
        for z in genus_one_subcurves(g):
            lv = level(g, z)
            if lv <= m:
                bad.append(f"elliptic {lv}-bridge {z!r} (level {lv} <= {m})")
    if "rational" in clauses:
        branch_ids = set(g.hub.branches) if g.hub is not None else set()
        for v in g.vertices:
            if v.genus != 0:
                continue
            need = 2 if v.id in branch_ids else 3
            if g.special_points(v.id) < need:
                bad.append(f"rational component {v.id} has {g.special_points(v.id)} special points")
        if branch_ids and not any(g.special_points(b) >= 3 for b in branch_ids
                                  if g.vertex(b).genus == 0):
            bad.append("every branch of the elliptic point has only 2 special points")
    if "elliptic" in clauses:
        for v in g.vertices:
            if v.genus == 1 and g.special_points(v.id) < 1:
                bad.append(f"elliptic component {v.id} has no special points")
    return StabilityReport(m, tuple(bad))


def is_m_stable(g: DualGraph, m: int, clauses: Iterable[str] = ALL_CLAUSES) -> bool:
    return check_m_stability(g, m, clauses).stable


# -- combinatorial type --------------------------------------------------------

def combinatorial_type(g: DualGraph) -> tuple:
    """Partition of [n] cut out by the components of C minus its elliptic point."""
    if g.hub is None:
        raise DualGraphError("graph has no elliptic point", code="NO_HUB")
    uf = _UF(g.ids)
    for e in g.edges:
        uf.union(e.a, e.b)
    roots = []
    for b in g.hub.branches:
        r = uf.find(b)
        if r not in roots:
            roots.append(r)
    if len(roots) != g.hub.l:
        raise DualGraphError("two branches lie on one connected piece", code="GENUS_NOT_ONE")
    parts = []
    for r in roots:
        marks = g.marks_on(v for v in g.ids if uf.find(v) == r)
        if len(marks) == 0:
            raise DualGraphError("a branch carries no marked point", code="EMPTY_PART")
        parts.append(marks)
    return tuple(sorted(parts, key=lambda s: s.members[0]))


# -- isomorphism -----------------------------------------------------------------

def to_networkx(g: DualGraph):
    import networkx as nx

    G = nx.MultiGraph()
    for v in g.vertices:
        G.add_node(v.id, genus=v.genus, marks=v.marks)
    for e in g.edges:
        G.add_edge(e.a, e.b, kind="node", mult=e.mult)
    if g.hub is not None:
        G.add_node(HUB, genus=-1, marks=frozenset())
        for b in g.hub.branches:
            G.add_edge(HUB, b, kind="branch", mult=1)
    return G


def isomorphic(g1: DualGraph, g2: DualGraph) -> bool:
    """Isomorphism of decorated graphs, ignoring vertex names."""
    import networkx as nx

    if g1.n != g2.n or len(g1.vertices) != len(g2.vertices):
        return False

    def nm(a, b):
        return a["genus"] == b["genus"] and a["marks"] == b["marks"]

    def em(a, b):
        ka = Counter((d["kind"], d["mult"]) for d in a.values())
        kb = Counter((d["kind"], d["mult"]) for d in b.values())
        return ka == kb

    return nx.is_isomorphic(to_networkx(g1), to_networkx(g2), node_match=nm, edge_match=em)


def brute_force_cores(g: DualGraph) -> list[Subcurve]:
    """Every connected genus-one subcurve without disconnecting nodes (exhaustive)."""
    out = []
    ids = g.ids
    for k in range(1, len(ids) + 1):
        for combo in combinations(ids, k):
            vids = frozenset(combo)
            if (is_connected(g, vids) and subcurve_genus(g, vids) == 1
                    and not internal_bridges(g, vids)):
                out.append(subcurve_of(g, vids))
    return out
