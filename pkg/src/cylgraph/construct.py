"""The two central constructions: gluing product and exponential.

The *gluing product* ``cyl_product(g, cset)`` blows every vertex of ``g`` up
into one slot per cylinder width, then replaces each edge by a copy of the
cylinder its label selects, with the label's two slot permutations deciding
which slot each boundary row vertex lands on.  Copies that land the same
boundary vertex on two slots identify them; same-label parallel edges arising
from the overlaps are collapsed.

The *exponential* ``exponential(cset, h)`` goes the other way: vertices are
orbit representatives of width-length tuples over ``V(h)`` under the slot
group, and an edge carries label ``(d-, key, d+)`` exactly when some labeled
homomorphism from that cylinder into ``h`` restricts on the marked rows to the
endpoint tuples shifted by ``d-`` and ``d+``.  Isolated representatives are
dropped at the end.

Both functions return trace objects that remember where every piece came
from; the duality maps in :mod:`cylgraph.duality` are built on those traces.
"""

from __future__ import annotations

import itertools
import json

from .core import GammaLabel, Graph, UnionFind, label_sort_key
from .cylinder import CylinderSet, make_cylinder
from .errors import DomainError, LabelConflict, NotATwist, ResourceLimit
from .hom import iter_homs
from .perm import Perm, PermGroup, act

MAX_PRODUCT_EDGES = 2_000_000
MAX_TUPLE_SPACE = 400_000


def uniform_labels(g: Graph, key, width: int = 1) -> Graph:
    """Copy of ``g`` with every edge labeled ``(id, key, id)`` at the given
    width.  This is how a plain graph enters the product or a homomorphism
    against a labeled one."""
    ident = Perm.identity(width)
    out = Graph(symmetric=g.symmetric)
    for v in g.vertices:
        out.add_vertex(v)
    lab = GammaLabel(ident, key, ident)
    for eid, e in g.edges.items():
        out.add_edge(e.tail, e.head, lab, eid)
    out.pairing = dict(g.pairing)
    out.validate()
    return out


def _slot_name(v, i: int) -> str:
    return f"{v}#{i}"


class ProductTrace:
    """Result of :func:`cyl_product` plus provenance.

    slot       -- (source vertex, slot index 1..k) -> final vertex name
    copy       -- (source edge id, cylinder vertex) -> final vertex name
    edge_src   -- final edge id -> list of (source edge id, cylinder edge id)
    src_edge   -- (source edge id, cylinder edge id) -> final edge id
    """

    __slots__ = ("graph", "source", "cset", "slot", "copy", "edge_src", "src_edge")

    def __init__(self, graph, source, cset, slot, copy, edge_src, src_edge):
        self.graph = graph
        self.source = source
        self.cset = cset
        self.slot = slot
        self.copy = copy
        self.edge_src = edge_src
        self.src_edge = src_edge

    def blowup(self, v) -> tuple:
        k = self.cset.width
        return tuple(self.slot[(v, i)] for i in range(1, k + 1))

    def __repr__(self) -> str:
        return (
            f"ProductTrace({len(self.graph.vertices)} vertices, "
            f"{len(self.graph.edges)} edges from {len(self.source.edges)} source edges)"
        )


def _audit_product_labels(g: Graph, cset: CylinderSet) -> None:
    group = cset.group
    k = cset.width
    for eid, e in g.edges.items():
        lab = e.label
        if not isinstance(lab, GammaLabel):
            raise LabelConflict(f"edge {eid!r} carries {lab!r}, not a slot-group label")
        if lab.key not in cset:
            raise DomainError(f"edge {eid!r} asks for cylinder {lab.key!r}, which the set lacks")
        if lab.pre.degree != k or lab.post.degree != k:
            raise DomainError(f"edge {eid!r} twists {lab.pre.degree} slots, cylinders have {k}")
        if lab.pre not in group or lab.post not in group:
            raise NotATwist(f"edge {eid!r} twists by a permutation outside the slot group")


def cyl_product(g: Graph, cset: CylinderSet) -> ProductTrace:
    """Glue one cylinder copy onto every edge of ``g``.

    Boundary row vertex ``y_b`` of the copy on edge ``u -> v`` labeled
    ``(pre, key, post)`` lands on slot ``u#pre(b)``, and ``z_b`` on
    ``v#post(b)``.  Rows sharing a vertex weld the two slots together.
    """
    if g.symmetric != cset.symmetric:
        raise DomainError("source graph and cylinders disagree about being symmetric")
    g.validate()
    _audit_product_labels(g, cset)
    k = cset.width

    slot = {(v, i): _slot_name(v, i) for v in g.vertices for i in range(1, k + 1)}
    if len(set(slot.values())) != len(slot):
        raise DomainError("vertex names collide after slotting; rename the source vertices")

    src_eids = sorted(g.canonical_edges() if g.symmetric else g.edges, key=str)

    uf = UnionFind()
    for nm in slot.values():
        uf.find(nm)
    copy: dict = {}
    inner_names: set = set()
    n_pre = 0
    for eid in src_eids:
        e = g.edges[eid]
        lab = e.label
        cyl = cset[lab.key]
        n_pre += len(cyl.graph.edges)
        if n_pre > MAX_PRODUCT_EDGES:
            raise ResourceLimit(f"product would exceed {MAX_PRODUCT_EDGES} edges before merging")
        ypos = {v: b for b, v in enumerate(cyl.y, start=1)}
        zpos = {v: b for b, v in enumerate(cyl.z, start=1)}
        for x in cyl.graph.vertices:
            aliases = []
            if x in ypos:
                aliases.append(slot[(e.tail, lab.pre(ypos[x]))])
            if x in zpos:
                aliases.append(slot[(e.head, lab.post(zpos[x]))])
            if not aliases:
                nm = f"{eid}@{x}"
                if nm in inner_names:
                    raise DomainError(f"inner vertex name {nm!r} collides; rename edges or cylinder vertices")
                inner_names.add(nm)
                aliases.append(nm)
            copy[(eid, x)] = aliases[0]
            uf.find(aliases[0])
            for other in aliases[1:]:
                uf.union(aliases[0], other)
    if inner_names & set(slot.values()):
        raise DomainError("inner vertex names collide with slot names; rename the source vertices")

    cmap = uf.canonical_map()
    final_slot = {key: cmap[nm] for key, nm in slot.items()}
    final_copy = {key: cmap[nm] for key, nm in copy.items()}

    out = Graph(symmetric=g.symmetric)
    for nm in sorted(set(cmap.values()), key=str):
        out.add_vertex(nm)

    edge_src: dict = {}
    src_edge: dict = {}

    if not g.symmetric:
        groups: dict = {}
        order: list = []
        for eid in src_eids:
            cyl = cset[g.edges[eid].label.key]
            for ce in sorted(cyl.graph.edges, key=str):
                ed = cyl.graph.edges[ce]
                t, h = final_copy[(eid, ed.tail)], final_copy[(eid, ed.head)]
                gk = (t, h, label_sort_key(ed.label))
                if gk not in groups:
                    groups[gk] = (ed.label, [])
                    order.append(gk)
                groups[gk][1].append((eid, ce))
        for gk in order:
            lab, members = groups[gk]
            fid = f"{members[0][0]}@{members[0][1]}"
            out.add_edge(gk[0], gk[1], lab, fid)
            edge_src[fid] = list(members)
            for m in members:
                src_edge[m] = fid
    else:
        # merge whole twin pairs so the pairing survives
        groups = {}
        order = []
        for eid in src_eids:
            cyl = cset[g.edges[eid].label.key]
            for ce in sorted(cyl.graph.canonical_edges(), key=str):
                tw = cyl.graph.pairing[ce]
                e1, e2 = cyl.graph.edges[ce], cyl.graph.edges[tw]
                k1 = (final_copy[(eid, e1.tail)], final_copy[(eid, e1.head)], label_sort_key(e1.label))
                k2 = (final_copy[(eid, e2.tail)], final_copy[(eid, e2.head)], label_sort_key(e2.label))
                gk = (min(k1, k2), max(k1, k2))
                if gk not in groups:
                    groups[gk] = []
                    order.append(gk)
                groups[gk].append((eid, ce, tw, k1))
        for gk in order:
            members = groups[gk]
            eid0, ce0, tw0, k1_0 = members[0]
            src0 = cset[g.edges[eid0].label.key].graph
            fid_a, fid_b = f"{eid0}@{ce0}", f"{eid0}@{tw0}"
            ea, eb = src0.edges[ce0], src0.edges[tw0]
            out.add_edge(final_copy[(eid0, ea.tail)], final_copy[(eid0, ea.head)], ea.label, fid_a)
            out.add_edge(final_copy[(eid0, eb.tail)], final_copy[(eid0, eb.head)], eb.label, fid_b)
            out.pair_edges(fid_a, fid_b)
            edge_src[fid_a] = []
            edge_src[fid_b] = []
            for eid, ce, tw, k1 in members:
                f_ce, f_tw = (fid_a, fid_b) if k1 == k1_0 else (fid_b, fid_a)
                src_edge[(eid, ce)] = f_ce
                src_edge[(eid, tw)] = f_tw
                edge_src[f_ce].append((eid, ce))
                edge_src[f_tw].append((eid, tw))

    out.validate()
    return ProductTrace(out, g, cset, final_slot, final_copy, edge_src, src_edge)


def _tuple_key(t) -> tuple:
    return tuple(str(x) for x in t)


def _tuple_name(t) -> str:
    return json.dumps(list(t), separators=(",", ":"), default=str)


class ExpoTrace:
    """Result of :func:`exponential` plus everything the duality maps need.

    tuple_of       -- final vertex name -> representative tuple
    witnesses      -- final edge id -> hom from that cylinder's graph into target
    edge_by_triple -- (tail name, head name, label key) -> final edge id
    """

    __slots__ = (
        "graph",
        "cset",
        "target",
        "tuple_of",
        "witnesses",
        "edge_by_triple",
        "rep_choice",
        "_reps",
    )

    def __init__(self, graph, cset, target, tuple_of, witnesses, edge_by_triple, rep_choice):
        self.graph = graph
        self.cset = cset
        self.target = target
        self.tuple_of = tuple_of
        self.witnesses = witnesses
        self.edge_by_triple = edge_by_triple
        self.rep_choice = rep_choice
        self._reps: dict = {}

    def rep(self, t: tuple) -> tuple:
        """Canonical representative of the slot-group orbit of ``t``."""
        t = tuple(t)
        hit = self._reps.get(t)
        if hit is None:
            orbit = {p.act(t) for p in self.cset.group}
            pick = min if self.rep_choice == "min" else max
            hit = pick(orbit, key=_tuple_key)
            for q in orbit:
                self._reps[q] = hit
        return hit

    def name(self, t: tuple) -> str:
        return _tuple_name(self.rep(t))

    def find_edge(self, tail_name: str, head_name: str, label: GammaLabel):
        return self.edge_by_triple.get((tail_name, head_name, label_sort_key(label)))

    def __repr__(self) -> str:
        return f"ExpoTrace({len(self.graph.vertices)} vertices, {len(self.graph.edges)} edges)"


def exponential(
    cset: CylinderSet,
    h: Graph,
    *,
    rep_choice: str = "min",
    budget: int | None = None,
    max_vertices: int = 10_000,
) -> ExpoTrace:
    """Build the exponential of ``h`` by the cylinder set.

    Vertices: one representative per orbit of ``V(h)^k`` under the slot group
    (lexicographically smallest by default; ``rep_choice="max"`` picks the
    largest, which must give an isomorphic answer).  Edges: ``(R1, R2)`` gets
    label ``(d-, key, d+)`` when some labeled homomorphism ``s`` from that
    cylinder's graph into ``h`` satisfies ``s(y_b) = R1[d-(b)]`` and
    ``s(z_b) = R2[d+(b)]`` for every slot ``b``.  Vertices left isolated are
    dropped.
    """
    if rep_choice not in ("min", "max"):
        raise DomainError(f"rep_choice must be 'min' or 'max', not {rep_choice!r}")
    if h.symmetric != cset.symmetric:
        raise DomainError("target graph and cylinders disagree about being symmetric")
    h.validate()
    group = cset.group
    k = cset.width
    pick = min if rep_choice == "min" else max

    verts = sorted(h.vertices, key=str)
    if verts and len(verts) ** k > MAX_TUPLE_SPACE:
        raise ResourceLimit(f"tuple space {len(verts)}^{k} exceeds {MAX_TUPLE_SPACE}")

    trace = ExpoTrace(Graph(symmetric=h.symmetric), cset, h, {}, {}, {}, rep_choice)

    reps: list = []
    seen: set = set()
    for t in itertools.product(verts, repeat=k):
        if t in seen:
            continue
        orbit = {p.act(t) for p in group}
        seen |= orbit
        r = pick(orbit, key=_tuple_key)
        for q in orbit:
            trace._reps[q] = r
        reps.append(r)
        if len(reps) > max_vertices:
            raise ResourceLimit(f"more than {max_vertices} orbit representatives")

    # one witness per realized (tail, head, label) triple
    triples: dict = {}
    order: list = []
    for key in sorted(cset.keys(), key=str):
        cyl = cset[key]
        for hom in iter_homs(cyl.graph, h, mode="labeled", budget=budget):
            p = tuple(hom.vertex(v) for v in cyl.y)
            q = tuple(hom.vertex(v) for v in cyl.z)
            r1, r2 = trace.rep(p), trace.rep(q)
            dm = [d for d in group if act(r1, d) == p]
            dp = [d for d in group if act(r2, d) == q]
            for a in dm:
                for b in dp:
                    lab = GammaLabel(a, key, b)
                    tk = (_tuple_name(r1), _tuple_name(r2), label_sort_key(lab))
                    if tk not in triples:
                        triples[tk] = (r1, r2, lab, hom)
                        order.append(tk)

    g = Graph(symmetric=h.symmetric)
    for r in reps:
        g.add_vertex(_tuple_name(r))

    witnesses: dict = {}
    edge_by_triple: dict = {}
    if not h.symmetric:
        for n, tk in enumerate(sorted(order)):
            r1, r2, lab, hom = triples[tk]
            eid = f"x{n}"
            g.add_edge(tk[0], tk[1], lab, eid)
            witnesses[eid] = hom
            edge_by_triple[(tk[0], tk[1], tk[2])] = eid
    else:
        def reverse_key(tk):
            r1, r2, lab, _ = triples[tk]
            return (tk[1], tk[0], label_sort_key(lab.reversed()))

        for tk in order:
            if reverse_key(tk) not in triples:
                raise LabelConflict(
                    "exponential edge set is not reversal-closed; the cylinders are not genuinely symmetric"
                )
        n = 0
        for tk in sorted(order):
            rk = reverse_key(tk)
            if rk < tk and rk != tk:
                continue
            r1, r2, lab, hom = triples[tk]
            eid = f"x{n}"
            n += 1
            g.add_edge(tk[0], tk[1], lab, eid)
            witnesses[eid] = hom
            edge_by_triple[(tk[0], tk[1], tk[2])] = eid
            tid = f"{eid}t"
            _, _, rlab, rhom = triples[rk]
            g.add_edge(tk[1], tk[0], rlab, tid)
            witnesses[tid] = rhom
            if rk != tk:
                edge_by_triple[(rk[0], rk[1], rk[2])] = tid
            g.pair_edges(eid, tid)

    g = g.reduced()
    g.validate()
    trace.graph = g
    trace.tuple_of = {_tuple_name(r): r for r in reps if g.has_vertex(_tuple_name(r))}
    trace.witnesses = {eid: w for eid, w in witnesses.items() if eid in g.edges}
    trace.edge_by_triple = {tk: eid for tk, eid in edge_by_triple.items() if eid in g.edges}
    return trace


def cylinders_from_surjection(g: Graph, h: Graph, vmap: dict) -> tuple[Graph, CylinderSet]:
    """Encode a vertex-surjective homomorphism ``vmap: g -> h`` as cylinders.

    Each edge of ``h`` receives its own empty-based cylinder whose rungs are
    the ``g``-edges between the two fibers; ``h`` comes back labeled so that
    its product with the set rebuilds ``g`` (up to the padding slots, which
    stay isolated: strip them afterwards).  Parallel ``g``-edges between the
    same pair of vertices would collapse; feed simple graphs.
    """
    if g.symmetric != h.symmetric:
        raise DomainError("graphs disagree about being symmetric")
    g.validate()
    h.validate()
    for v in g.vertices:
        if vmap.get(v) is None or not h.has_vertex(vmap[v]):
            raise DomainError(f"vertex {v!r} is not mapped into the target")

    fibers: dict = {w: [] for w in h.vertices}
    for v in sorted(g.vertices, key=str):
        fibers[vmap[v]].append(v)
    empty = [w for w, fb in fibers.items() if not fb]
    if empty:
        raise DomainError(f"map is not vertex-surjective; nothing lands on {empty[0]!r}")
    k = max(len(fb) for fb in fibers.values())
    pos = {v: i for fb in fibers.values() for i, v in enumerate(fb, start=1)}

    def h_edge_between(a, b):
        cands = [eid for eid in h.out_edges(a) if h.edges[eid].head == b]
        if not cands:
            return None
        return min(cands, key=str)

    canon = sorted(h.canonical_edges() if h.symmetric else h.edges, key=str)
    rungs: dict = {eid: [] for eid in canon}
    for geid in sorted(g.canonical_edges() if g.symmetric else g.edges, key=str):
        e = g.edges[geid]
        a, b = vmap[e.tail], vmap[e.head]
        target = h_edge_between(a, b)
        if target is not None and target not in rungs:
            target = h.pairing.get(target)
        if target is None or target not in rungs:
            raise DomainError(f"edge {geid!r} does not sit over any target edge")
        te = h.edges[target]
        if (a, b) == (te.tail, te.head):
            rungs[target].append((pos[e.tail], pos[e.head]))
        else:
            rungs[target].append((pos[e.head], pos[e.tail]))

    cyls = {}
    for eid in canon:
        cg = Graph(symmetric=g.symmetric)
        ys = [f"y{i}" for i in range(1, k + 1)]
        zs = [f"z{i}" for i in range(1, k + 1)]
        cg.add_vertices(ys)
        cg.add_vertices(zs)
        for (i, j) in sorted(set(rungs[eid])):
            if g.symmetric:
                cg.add_sym_edge(ys[i - 1], zs[j - 1], None)
            else:
                cg.add_edge(ys[i - 1], zs[j - 1], None)
        cyls[eid] = make_cylinder(cg, ys, zs)

    labeled = Graph(symmetric=h.symmetric)
    for v in h.vertices:
        labeled.add_vertex(v)
    ident = Perm.identity(k)
    for eid, e in h.edges.items():
        key = eid if eid in rungs else h.pairing[eid]
        labeled.add_edge(e.tail, e.head, GammaLabel(ident, key, ident), eid)
    labeled.pairing = dict(h.pairing)
    labeled.validate()

    return labeled, CylinderSet(PermGroup.trivial(k), cyls)
