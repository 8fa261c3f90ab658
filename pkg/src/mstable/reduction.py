"""Stable reduction to m-stable limits, and the rational map phi on fibers.

Given a one-parameter family whose central fiber has dual graph ``g`` (edge
multiplicities recording the local equation ``xy = t^mult`` of the total
space), :func:`mstable_reduce` repeats the following step while the minimal
elliptic subcurve Z has level at most m:

    blow up the marked points on Z, then contract Z to an elliptic
    l-fold point, where l = (#marks on Z) + (#nodes joining Z to the rest).

Each step produces a fresh rational component per marked point on Z, each
carrying one branch of the new singular point; the remaining branches lie on
the components that met Z.  A final pass contracts rational components left
with too few special points.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dualgraph import (
    DualGraph,
    Edge,
    Hub,
    Vertex,
    check_m_stability,
    disconnecting_nodes,
    level,
    minimal_elliptic_subcurve,
    outgoing_nodes,
    require_genus_one,
)
from .errors import DualGraphError, InvariantBreach, PreconditionViolated


@dataclass(frozen=True)
class ReductionStep:
    n_i: int  # marked points on Z
    m_i: int  # nodes joining Z to the rest of the fiber

    @property
    def l_i(self) -> int:
        return self.n_i + self.m_i


@dataclass(frozen=True)
class ReductionTrace:
    steps: tuple = ()
    intermediates: tuple = field(default=(), compare=False, repr=False)

    @property
    def k(self) -> int:
        return len(self.steps)

    # degree changes of the tautological classes along the family
    @property
    def d_lambda(self) -> int:
        return self.k

    @property
    def d_psi(self) -> int:
        return sum(s.n_i for s in self.steps)

    @property
    def d_delta0(self) -> int:
        return -sum(s.m_i for s in self.steps)

    @property
    def d_psi_minus_delta0(self) -> int:
        return sum(s.l_i for s in self.steps)

    def to_json(self) -> dict:
        return {
            "steps": [{"n_i": s.n_i, "m_i": s.m_i, "l_i": s.l_i} for s in self.steps],
            "k": self.k,
            "d_lambda": self.d_lambda,
            "d_psi": self.d_psi,
            "d_delta0": self.d_delta0,
        }


def _resolve_multiplicities(g: DualGraph) -> DualGraph:
    """Replace each node of multiplicity d by a chain of d-1 bare rational components."""
    verts = list(g.vertices)
    edges = []
    taken = set(g.ids)
    for idx, e in enumerate(g.edges):
        if e.mult == 1:
            edges.append(e)
            continue
        prev = e.a
        for j in range(e.mult - 1):
            vid = f"c{idx}_{j}"
            while vid in taken:
                vid += "'"
            taken.add(vid)
            verts.append(Vertex(vid, 0, frozenset()))
            edges.append(Edge(prev, vid))
            prev = vid
        edges.append(Edge(prev, e.b))
    return DualGraph(g.n, tuple(verts), tuple(edges), g.hub)


def _drop_tails(g: DualGraph) -> DualGraph:
    """Remove rational leaves with at most one other special point (moving a mark inward)."""
    changed = True
    while changed:
        changed = False
        branch_ids = set(g.hub.branches) if g.hub is not None else set()
        for v in g.vertices:
            if v.genus or v.id in branch_ids:
                continue
            inc = [e for e in g.edges if v.id in (e.a, e.b)]
            if len(inc) != 1 or inc[0].is_loop or len(v.marks) > 1:
                continue
            e = inc[0]
            w = e.other(v.id)
            verts = []
            for u in g.vertices:
                if u.id == v.id:
                    continue
                if u.id == w:
                    u = Vertex(u.id, u.genus, u.marks | v.marks)
                verts.append(u)
            g = g.with_(verts, [x for x in g.edges if x is not e])
            changed = True
            break
    return g


def _contract_bridges(g: DualGraph) -> DualGraph:
    """Contract bare rational components with exactly two special points.

    Chains between two nodes become one node of summed multiplicity; a
    component carrying one node and one mark (or one hub branch) hands it to
    its neighbour.
    """
    changed = True
    while changed:
        changed = False
        branch_ids = g.hub.branches if g.hub is not None else ()
        for v in g.vertices:
            if v.genus or g.special_points(v.id) != 2:
                continue
            inc = [e for e in g.edges if v.id in (e.a, e.b)]
            nb = branch_ids.count(v.id)
            if any(e.is_loop for e in inc):
                continue
            others = [u for u in g.vertices if u.id != v.id]
            rest = [e for e in g.edges if v.id not in (e.a, e.b)]
            hub = g.hub
            if len(inc) == 2:
                a, b = inc[0].other(v.id), inc[1].other(v.id)
                rest.append(Edge(a, b, inc[0].mult + inc[1].mult))
            elif len(inc) == 1 and (len(v.marks) == 1 or nb == 1):
                w = inc[0].other(v.id)
                others = [Vertex(u.id, u.genus, u.marks | v.marks) if u.id == w else u
                          for u in others]
                if nb:
                    hub = Hub(tuple(w if b == v.id else b for b in branch_ids))
            else:
                continue
            g = DualGraph(g.n, tuple(others), tuple(rest), hub)
            changed = True
            break
    return g


def reduction_step(g: DualGraph, tag: str) -> tuple[DualGraph, ReductionStep]:
    """Replace the minimal elliptic subcurve by an elliptic l-fold point."""
    z = minimal_elliptic_subcurve(g)
    marks = sorted(g.marks_on(z.vertices))
    out = outgoing_nodes(g, z.vertices)
    if any(e.mult != 1 for e in out):
        raise InvariantBreach("multiplicities must be resolved before a step")
    taken = set(g.ids)
    sprouts = []
    for i in marks:
        vid = f"s{tag}_{i}"
        while vid in taken:
            vid += "'"
        taken.add(vid)
        sprouts.append(Vertex(vid, 0, frozenset({i})))
    keep = [v for v in g.vertices if v.id not in z.vertices]
    edges = [e for e in g.edges if e.a not in z.vertices and e.b not in z.vertices]
    branches = [s.id for s in sprouts]
    for e in out:
        branches.append(e.b if e.a in z.vertices else e.a)
    new = DualGraph(g.n, tuple(keep + sprouts), tuple(edges), Hub(tuple(branches)))
    return new, ReductionStep(len(marks), len(out))


def _needs_step(g: DualGraph, m: int) -> bool:
    return level(g, minimal_elliptic_subcurve(g)) <= m


def mstable_reduce(g: DualGraph, m: int, keep_intermediates: bool = False):
    """Return the m-stable limit of the family with central fiber ``g`` and its trace."""
    require_genus_one(g)
    if not 0 <= m < g.n:
        raise PreconditionViolated(f"need 0 <= m < n, got m={m}, n={g.n}")
    cur = _drop_tails(_resolve_multiplicities(g))
    require_genus_one(cur)
    if cur.hub is not None:
        for b in set(cur.hub.branches):
            v = cur.vertex(b)
            if not v.genus and not v.marks and not any(b in (e.a, e.b) for e in cur.edges):
                raise PreconditionViolated(f"branch {b} of the elliptic point carries no other special point")
    steps = []
    history = [cur]
    bound = g.n + len(cur.edges) + 1
    while _needs_step(cur, m):
        if len(steps) >= bound:
            raise InvariantBreach("reduction did not terminate", code="NON_TERMINATION")
        cur, step = reduction_step(cur, str(len(steps)))
        try:
            require_genus_one(cur)
        except DualGraphError as exc:
            raise InvariantBreach(f"genus changed during reduction: {exc}") from exc
        steps.append(step)
        history.append(cur)
    result = _contract_bridges(cur)
    report = check_m_stability(result, m)
    if not report.stable:
        raise InvariantBreach(f"reduction produced an unstable curve: {report.violations}")
    trace = ReductionTrace(tuple(steps), tuple(history) if keep_intermediates else ())
    return result, trace


# -- the map phi on boundary fibers --------------------------------------------

def phi_limit(g: DualGraph, n: int, m: int) -> DualGraph:
    """Image of a fiber with one disconnecting node of type |S| >= n-m+1.

    The elliptic side collapses to an elliptic (n-|S|+1)-fold point whose
    branches are the rational component carrying S and one fresh rational
    component for each remaining mark.
    """
    if g.n != n:
        raise PreconditionViolated("graph has a different number of marks")
    if g.hub is not None:
        raise PreconditionViolated("phi_limit expects a nodal fiber")
    require_genus_one(g)
    nodes = disconnecting_nodes(g)
    if len(nodes) != 1:
        raise PreconditionViolated(f"expected exactly one disconnecting node, found {len(nodes)}")
    edge, S = nodes[0]
    if not n - m + 1 <= len(S) <= n:
        raise PreconditionViolated(f"|S| = {len(S)} outside [{n - m + 1}, {n}]")
    far = _side(g, edge, minimal_elliptic_subcurve(g).vertices)
    rational = edge.a if edge.a in far else edge.b
    rv = g.vertex(rational)
    verts = [Vertex(rv.id, 0, rv.marks)]
    branches = [rv.id]
    taken = {rv.id}
    for i in range(1, n + 1):
        if i in S:
            continue
        vid = f"p{i}"
        while vid in taken:
            vid += "'"
        taken.add(vid)
        verts.append(Vertex(vid, 0, frozenset({i})))
        branches.append(vid)
    return DualGraph(n, tuple(verts), (), Hub(tuple(branches)))


def _side(g: DualGraph, edge: Edge, core) -> set:
    """Vertices on the far side of ``edge`` from the elliptic core."""
    adj = {v: [] for v in g.ids}
    for e in g.edges:
        if e is edge:
            continue
        adj[e.a].append(e.b)
        adj[e.b].append(e.a)
    seen = set(core)
    stack = list(core)
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return set(g.ids) - seen


def is_phi_regular_at(g: DualGraph, n: int, m: int) -> bool:
    """Whether phi: M_{1,n}(m-1) --> M_{1,n}(m) is regular at a nodal fiber ``g``.

    Regular iff no disconnecting node has type |S| >= n-m+1, or the fiber has
    a single disconnecting node.
    """
    if g.hub is not None:
        raise PreconditionViolated("expects a nodal fiber")
    if g.n != n:
        raise PreconditionViolated("graph has a different number of marks")
    nodes = disconnecting_nodes(g)
    clean = all(len(S) < n - m + 1 for _, S in nodes)
    return clean or len(nodes) == 1

