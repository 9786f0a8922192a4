"""Directed labeled multigraphs, optionally with a symmetric edge pairing.

A graph holds named vertices and a dict of edges ``id -> (tail, head, label)``.
Labels are arbitrary hashable values; the gluing constructions use
:class:`GammaLabel` triples.  A *symmetric* graph is a directed graph together
with a fixed-point-free involution pairing every edge with a reverse twin —
an undirected edge is such a pair, and an undirected loop is a pair of twin
directed loops.

Graphs are built by mutation and then treated as immutable.
"""

from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

from .errors import DomainError, LabelConflict, ResourceLimit
from .perm import Perm, compose


@dataclass(frozen=True)
class GammaLabel:
    """Edge label ``(pre, key, post)``: which cylinder a gluing construction
    hangs on the edge, and the two attachment permutations for its ends."""

    pre: Perm
    key: object
    post: Perm

    def reversed(self) -> GammaLabel:
        return GammaLabel(self.post, self.key, self.pre)

    def __str__(self) -> str:
        return f"({_perm_str(self.pre)}|{self.key}|{_perm_str(self.post)})"

    def to_json(self) -> dict:
        return {"pre": list(self.pre.images), "cyl": self.key, "post": list(self.post.images)}

    @classmethod
    def from_json(cls, data: dict) -> GammaLabel:
        return cls(Perm(data["pre"]), data["cyl"], Perm(data["post"]))


def _perm_str(p: Perm) -> str:
    cycs = p.cycles()
    if not cycs:
        return "id"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cycs)


class Edge(NamedTuple):
    tail: object
    head: object
    label: object


def label_to_json(label) -> object:
    if isinstance(label, GammaLabel):
        return label.to_json()
    return label


def label_from_json(data) -> object:
    if isinstance(data, dict) and set(data) == {"pre", "cyl", "post"}:
        return GammaLabel.from_json(data)
    return data


_label_keys: dict = {}


def label_sort_key(label) -> str:
    """A deterministic (not semantic) ordering key for arbitrary labels."""
    try:
        hit = _label_keys.get(label)
    except TypeError:  # unhashable label; compute without caching
        return json.dumps(label_to_json(label), sort_keys=True, default=str)
    if hit is None:
        if len(_label_keys) > 100_000:
            _label_keys.clear()
        hit = _label_keys[label] = json.dumps(label_to_json(label), sort_keys=True, default=str)
    return hit


class Graph:
    def __init__(self, symmetric: bool = False):
        self.symmetric = symmetric
        self._vertices: dict = {}          # insertion-ordered set
        self.edges: dict[str, Edge] = {}
        self.pairing: dict[str, str] = {}  # edge id -> twin id (symmetric mode)
        self._auto = 0
        self._adj: tuple | None = None     # cached (out, in) adjacency

    # -- construction ------------------------------------------------------

    def add_vertex(self, v) -> None:
        self._vertices.setdefault(v, None)
        self._adj = None

    def add_vertices(self, vs: Iterable) -> None:
        for v in vs:
            self.add_vertex(v)

    def _fresh_eid(self) -> str:
        while True:
            eid = f"e{self._auto}"
            self._auto += 1
            if eid not in self.edges:
                return eid

    def add_edge(self, tail, head, label=None, eid: str | None = None) -> str:
        if tail not in self._vertices:
            raise DomainError(f"unknown tail vertex {tail!r}")
        if head not in self._vertices:
            raise DomainError(f"unknown head vertex {head!r}")
        if eid is None:
            eid = self._fresh_eid()
        else:
            eid = str(eid)
            if eid in self.edges:
                raise DomainError(f"duplicate edge id {eid!r}")
        self.edges[eid] = Edge(tail, head, label)
        self._adj = None
        return eid

    def add_sym_edge(self, u, v, label=None, eid: str | None = None, twin_eid: str | None = None) -> tuple[str, str]:
        """Add an undirected edge as a pair of reverse twins.

        The twin's label is the reverse of a :class:`GammaLabel`, otherwise
        the same value.  Works for loops too (two paired directed loops).
        """
        if not self.symmetric:
            raise DomainError("add_sym_edge on a non-symmetric graph")
        back = label.reversed() if isinstance(label, GammaLabel) else label
        e1 = self.add_edge(u, v, label, eid)
        e2 = self.add_edge(v, u, back, twin_eid)
        self.pair_edges(e1, e2)
        return e1, e2

    def pair_edges(self, e1: str, e2: str) -> None:
        a, b = self.edges[e1], self.edges[e2]
        if (a.tail, a.head) != (b.head, b.tail):
            raise DomainError(f"edges {e1!r}, {e2!r} are not mutual reverses")
        if e1 == e2:
            raise DomainError("an edge cannot be its own twin")
        self.pairing[e1] = e2
        self.pairing[e2] = e1

    # -- views -------------------------------------------------------------

    @property
    def vertices(self) -> list:
        return list(self._vertices)

    def has_vertex(self, v) -> bool:
        return v in self._vertices

    def _adjacency(self):
        if self._adj is None:
            out: dict = {v: [] for v in self._vertices}
            inn: dict = {v: [] for v in self._vertices}
            for eid, e in self.edges.items():
                out[e.tail].append(eid)
                inn[e.head].append(eid)
            self._adj = (out, inn)
        return self._adj

    def out_edges(self, v) -> list[str]:
        return self._adjacency()[0][v]

    def in_edges(self, v) -> list[str]:
        return self._adjacency()[1][v]

    def degree(self, v) -> int:
        """Out-degree; for symmetric graphs this is the undirected degree
        (a twin loop pair contributes 2)."""
        return len(self.out_edges(v))

    def isolated_vertices(self) -> list:
        return [v for v in self._vertices if not self.out_edges(v) and not self.in_edges(v)]

    def canonical_edges(self) -> list[str]:
        """All edge ids, one per twin pair in symmetric mode."""
        if not self.symmetric:
            return list(self.edges)
        return [eid for eid in self.edges if eid <= self.pairing.get(eid, eid)]

    def pair_class(self, eid: str) -> frozenset:
        return frozenset({eid, self.pairing.get(eid, eid)})

    def has_gamma_labels(self) -> bool:
        return all(isinstance(e.label, GammaLabel) for e in self.edges.values())

    def validate(self) -> None:
        for eid, e in self.edges.items():
            if e.tail not in self._vertices or e.head not in self._vertices:
                raise DomainError(f"edge {eid!r} has a missing endpoint")
        if self.symmetric:
            if set(self.pairing) != set(self.edges):
                missing = set(self.edges) - set(self.pairing)
                raise DomainError(f"symmetric graph with unpaired edges: {sorted(missing)[:5]}")
            for eid, tw in self.pairing.items():
                if self.pairing.get(tw) != eid or tw == eid:
                    raise DomainError(f"pairing is not a fixed-point-free involution at {eid!r}")
                a, b = self.edges[eid], self.edges[tw]
                if (a.tail, a.head) != (b.head, b.tail):
                    raise DomainError(f"paired edges {eid!r}/{tw!r} are not mutual reverses")
                want = a.label.reversed() if isinstance(a.label, GammaLabel) else a.label
                if b.label != want:
                    raise LabelConflict(f"paired edges {eid!r}/{tw!r} carry incompatible labels")
        elif self.pairing:
            raise DomainError("non-symmetric graph must not carry a pairing")

    # -- equality and copying ----------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.symmetric == other.symmetric
            and set(self._vertices) == set(other._vertices)
            and self.edges == other.edges
            and self.pairing == other.pairing
        )

    def __hash__(self):
        raise TypeError("graphs are not hashable")

    def __repr__(self) -> str:
        kind = "sym" if self.symmetric else "dir"
        return f"Graph({kind}, {len(self._vertices)} vertices, {len(self.edges)} edges)"

    def copy(self) -> Graph:
        g = Graph(self.symmetric)
        g._vertices = dict(self._vertices)
        g.edges = dict(self.edges)
        g.pairing = dict(self.pairing)
        g._auto = self._auto
        return g

    # -- structural operations ----------------------------------------------

    def induced(self, keep: Iterable) -> Graph:
        keep = set(keep)
        unknown = keep - set(self._vertices)
        if unknown:
            raise DomainError(f"unknown vertices {sorted(map(str, unknown))[:5]}")
        g = Graph(self.symmetric)
        for v in self._vertices:
            if v in keep:
                g.add_vertex(v)
        for eid, e in self.edges.items():
            if e.tail in keep and e.head in keep:
                g.add_edge(e.tail, e.head, e.label, eid)
        for eid, tw in self.pairing.items():
            if eid in g.edges and tw in g.edges:
                g.pairing[eid] = tw
        return g

    def reduced(self) -> Graph:
        """Drop isolated vertices."""
        iso = set(self.isolated_vertices())
        return self.induced(v for v in self._vertices if v not in iso)

    def without_loops(self) -> Graph:
        g = Graph(self.symmetric)
        g.add_vertices(self._vertices)
        for eid, e in self.edges.items():
            if e.tail != e.head:
                g.add_edge(e.tail, e.head, e.label, eid)
        for eid, tw in self.pairing.items():
            if eid in g.edges and tw in g.edges:
                g.pairing[eid] = tw
        return g

    def stripped(self) -> Graph:
        """Forget all edge labels (same vertices, edges, and pairing)."""
        g = Graph(self.symmetric)
        g.add_vertices(self._vertices)
        for eid, e in self.edges.items():
            g.add_edge(e.tail, e.head, None, eid)
        g.pairing = dict(self.pairing)
        return g

    def relabel(self, mapping: Mapping) -> Graph:
        """Rename vertices injectively (vertices not in the mapping keep their name)."""
        tr = {v: mapping.get(v, v) for v in self._vertices}
        if len(set(tr.values())) != len(tr):
            raise DomainError("relabel mapping is not injective")
        g = Graph(self.symmetric)
        for v in self._vertices:
            g.add_vertex(tr[v])
        for eid, e in self.edges.items():
            g.add_edge(tr[e.tail], tr[e.head], e.label, eid)
        g.pairing = dict(self.pairing)
        return g

    def components(self) -> list[list]:
        """Weakly connected components, each sorted, in first-seen order."""
        seen: set = set()
        nbrs: dict = {v: set() for v in self._vertices}
        for e in self.edges.values():
            nbrs[e.tail].add(e.head)
            nbrs[e.head].add(e.tail)
        comps = []
        for v in self._vertices:
            if v in seen:
                continue
            comp = []
            stack = [v]
            seen.add(v)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in nbrs[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            comps.append(sorted(comp, key=str))
        return comps

    def girth(self) -> int | None:
        """Length of a shortest cycle in the undirected view (None if acyclic).
        A loop gives 1; two parallel undirected edge classes give 2."""
        classes: dict[frozenset, set] = defaultdict(set)
        for eid in self.canonical_edges():
            e = self.edges[eid]
            if e.tail == e.head:
                return 1
            classes[frozenset((e.tail, e.head))].add(eid)
        if any(len(s) > 1 for s in classes.values()):
            return 2
        nbrs: dict = {v: [] for v in self._vertices}
        for pair in classes:
            u, v = tuple(pair)
            nbrs[u].append(v)
            nbrs[v].append(u)
        best = None
        for start in self._vertices:
            dist = {start: 0}
            parent = {start: None}
            queue = [start]
            while queue:
                nxt = []
                for x in queue:
                    for y in nbrs[x]:
                        if y not in dist:
                            dist[y] = dist[x] + 1
                            parent[y] = x
                            nxt.append(y)
                        elif parent[x] != y and parent.get(y) != x:
                            cyc = dist[x] + dist[y] + 1
                            if best is None or cyc < best:
                                best = cyc
                queue = nxt
        return best

    def symmetrize(self) -> Graph:
        """Return the symmetric graph obtained by twinning every edge."""
        g = Graph(symmetric=True)
        g.add_vertices(self._vertices)
        for eid, e in self.edges.items():
            back = e.label.reversed() if isinstance(e.label, GammaLabel) else e.label
            a = g.add_edge(e.tail, e.head, e.label, eid)
            b = g.add_edge(e.head, e.tail, back, f"{eid}~")
            g.pair_edges(a, b)
        return g

    # -- serialisation -------------------------------------------------------

    def to_json(self) -> dict:
        data = {
            "symmetric": self.symmetric,
            "vertices": sorted(self._vertices, key=str),
            "edges": [
                {"id": eid, "tail": e.tail, "head": e.head, "label": label_to_json(e.label)}
                for eid, e in sorted(self.edges.items())
            ],
        }
        if self.symmetric:
            data["pairing"] = {eid: self.pairing[eid] for eid in sorted(self.pairing)}
        return data

    @classmethod
    def from_json(cls, data: dict) -> Graph:
        g = cls(bool(data.get("symmetric", False)))
        g.add_vertices(data.get("vertices", ()))
        for rec in data.get("edges", ()):
            g.add_edge(rec["tail"], rec["head"], label_from_json(rec.get("label")), rec.get("id"))
        for eid, tw in data.get("pairing", {}).items():
            g.pair_edges(eid, tw)
        if g.symmetric:
            g.validate()
        return g

    def to_dot(self, name: str = "G") -> str:
        def q(x) -> str:
            return '"' + str(x).replace('"', r"\"") + '"'

        lines = []
        if self.symmetric:
            lines.append(f"graph {q(name)} {{")
            arrow = "--"
            eids = self.canonical_edges()
        else:
            lines.append(f"digraph {q(name)} {{")
            arrow = "->"
            eids = list(self.edges)
        for v in sorted(self._vertices, key=str):
            lines.append(f"  {q(v)};")
        for eid in sorted(eids):
            e = self.edges[eid]
            attr = "" if e.label is None else f" [label={q(e.label)}]"
            lines.append(f"  {q(e.tail)} {arrow} {q(e.head)}{attr};")
        lines.append("}")
        return "\n".join(lines) + "\n"


# -- quotients and gluing ----------------------------------------------------


class UnionFind:
    """Disjoint sets over arbitrary hashable items; representative is the
    smallest member by string order, fixed at query time."""

    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        if p != x:
            self.parent[x] = p = self.find(p)
        return p

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if str(rb) < str(ra):
                ra, rb = rb, ra
            self.parent[rb] = ra

    def canonical_map(self) -> dict:
        """item -> smallest member of its class (by string order)."""
        classes: dict = defaultdict(list)
        for x in self.parent:
            classes[self.find(x)].append(x)
        out = {}
        for members in classes.values():
            rep = min(members, key=str)
            for x in members:
                out[x] = rep
        return out


def identify_vertices(g: Graph, mapping: Mapping) -> Graph:
    """Quotient: send each vertex through ``mapping`` (vertices absent from the
    mapping keep their name).  Parallel edges and loops created by the
    identification are kept; edge ids survive."""
    tr = {v: mapping.get(v, v) for v in g.vertices}
    out = Graph(g.symmetric)
    for v in g.vertices:
        out.add_vertex(tr[v])
    for eid, e in g.edges.items():
        out.add_edge(tr[e.tail], tr[e.head], e.label, eid)
    out.pairing = dict(g.pairing)
    return out


def merge_parallel(g: Graph) -> Graph:
    """Collapse same-label parallel edges, keeping the lowest edge id of each
    bundle.  In symmetric mode the merge works on twin pairs, so a loop keeps
    its twin (one undirected loop survives as two paired directed loops)."""
    out = Graph(g.symmetric)
    out.add_vertices(g.vertices)
    if not g.symmetric:
        seen: dict = {}
        for eid in sorted(g.edges):
            e = g.edges[eid]
            key = (e.tail, e.head, e.label)
            if key not in seen:
                seen[key] = eid
                out.add_edge(e.tail, e.head, e.label, eid)
        return out
    seen = {}
    for eid in sorted(g.canonical_edges()):
        e = g.edges[eid]
        tw = g.pairing[eid]
        t = g.edges[tw]
        key = min((e.tail, e.head, label_sort_key(e.label)), (t.tail, t.head, label_sort_key(t.label)), key=str)
        if key not in seen:
            seen[key] = eid
            out.add_edge(e.tail, e.head, e.label, eid)
            out.add_edge(t.tail, t.head, t.label, tw)
            out.pair_edges(eid, tw)
    return out


def disjoint_union(a: Graph, b: Graph, suffixes: tuple[str, str] = (".0", ".1")) -> Graph:
    """Disjoint union; every vertex and edge id gets the side's suffix."""
    if a.symmetric != b.symmetric:
        raise DomainError("cannot union a symmetric with a non-symmetric graph")
    out = Graph(a.symmetric)
    for g, sfx in ((a, suffixes[0]), (b, suffixes[1])):
        for v in g.vertices:
            out.add_vertex(f"{v}{sfx}")
        for eid, e in g.edges.items():
            out.add_edge(f"{e.tail}{sfx}", f"{e.head}{sfx}", e.label, f"{eid}{sfx}")
        for eid, tw in g.pairing.items():
            out.pairing[f"{eid}{sfx}"] = f"{tw}{sfx}"
    return out


def amalgam(a: Graph, b: Graph, shared: Graph) -> Graph:
    """Glue ``a`` and ``b`` along the common subgraph ``shared``.

    Vertices are identified by name: the vertex sets of ``a`` and ``b`` must
    overlap exactly in the vertices of ``shared``.  Every edge of ``shared``
    (by tail, head and label, with multiplicity) is matched against one edge
    of ``a`` and one of ``b`` — lowest ids first — and those two become one.
    Unmatched edges stay separate, so the gluing never merges extra parallels.
    """
    for g, side in ((a, "left"), (b, "right")):
        for v in shared.vertices:
            if not g.has_vertex(v):
                raise DomainError(f"shared vertex {v!r} missing from {side} graph")
    overlap = set(a.vertices) & set(b.vertices)
    if overlap != set(shared.vertices):
        extra = overlap - set(shared.vertices)
        raise DomainError(f"vertex names collide outside the shared part: {sorted(map(str, extra))[:5]}")
    if a.symmetric != b.symmetric or shared.symmetric != a.symmetric:
        raise DomainError("amalgam parts must agree on symmetry")

    def match(g: Graph, sig: tuple, taken: set) -> str:
        for eid in sorted(g.edges):
            if eid in taken:
                continue
            e = g.edges[eid]
            if (e.tail, e.head, e.label) == sig:
                return eid
        raise LabelConflict(f"no unmatched edge {sig[0]!r}->{sig[1]!r} with the shared label")

    taken_a: set = set()
    drop_b: dict[str, str] = {}  # b edge id -> a edge id it folds into
    sig_edges = shared.canonical_edges() if shared.symmetric else list(shared.edges)
    for seid in sorted(sig_edges):
        se = shared.edges[seid]
        sig = (se.tail, se.head, se.label)
        ea = match(a, sig, taken_a)
        eb = match(b, sig, set(drop_b))
        taken_a.add(ea)
        drop_b[eb] = ea
        if shared.symmetric:
            ta, tb = a.pairing[ea], b.pairing[eb]
            taken_a.add(ta)
            drop_b[tb] = ta

    out = a.copy()
    for v in b.vertices:
        out.add_vertex(v)
    rename: dict[str, str] = dict(drop_b)
    for eid in sorted(b.edges):
        if eid in drop_b:
            continue
        e = b.edges[eid]
        new = eid if eid not in out.edges else None
        rename[eid] = out.add_edge(e.tail, e.head, e.label, new)
    for eid, tw in b.pairing.items():
        e1, e2 = rename[eid], rename[tw]
        if e1 in out.pairing:
            continue
        out.pairing[e1] = e2
        out.pairing[e2] = e1
    return out


def alpha_shift(g: Graph, alphas: Mapping) -> Graph:
    """Precompose both attachment permutations of every edge with per-vertex
    permutations: the edge u->v labeled (pre, j, post) becomes
    (alphas[u]*pre, j, alphas[v]*post).  Missing vertices act as identity."""
    out = Graph(g.symmetric)
    out.add_vertices(g.vertices)
    for eid, e in g.edges.items():
        if not isinstance(e.label, GammaLabel):
            raise DomainError(f"edge {eid!r} does not carry an attachment label")
        au = alphas.get(e.tail)
        av = alphas.get(e.head)
        pre = compose(au, e.label.pre) if au is not None else e.label.pre
        post = compose(av, e.label.post) if av is not None else e.label.post
        out.add_edge(e.tail, e.head, GammaLabel(pre, e.label.key, post), eid)
    out.pairing = dict(g.pairing)
    return out


# -- isomorphism --------------------------------------------------------------


def _invariants(g: Graph, rounds: int = 2) -> dict:
    inv: dict = {}
    for v in g.vertices:
        outs = Counter(g.edges[eid].label for eid in g.out_edges(v))
        ins = Counter(g.edges[eid].label for eid in g.in_edges(v))
        loops = sum(1 for eid in g.out_edges(v) if g.edges[eid].head == v)
        inv[v] = (frozenset(outs.items()), frozenset(ins.items()), loops)
    for _ in range(rounds):
        nxt = {}
        for v in g.vertices:
            around = Counter()
            for eid in g.out_edges(v):
                e = g.edges[eid]
                around[("o", e.label, inv[e.head])] += 1
            for eid in g.in_edges(v):
                e = g.edges[eid]
                around[("i", e.label, inv[e.tail])] += 1
            nxt[v] = (inv[v], frozenset(around.items()))
        inv = nxt
    return inv


def _edge_labels_between(g: Graph, u, v) -> Counter:
    return Counter(g.edges[eid].label for eid in g.out_edges(u) if g.edges[eid].head == v)


def isomorphic(g: Graph, h: Graph, budget: int = 2_000_000) -> dict | None:
    """Search for a label-preserving digraph isomorphism.

    Returns ``{"vertices": vmap, "edges": emap}`` or None.  Uses refined
    degree/label invariants to cut the search; raises :class:`ResourceLimit`
    if the backtracking exceeds ``budget`` nodes.
    """
    if g.symmetric != h.symmetric:
        return None
    if len(g.vertices) != len(h.vertices) or len(g.edges) != len(h.edges):
        return None
    gi = _invariants(g)
    hi = _invariants(h)
    if Counter(gi.values()) != Counter(hi.values()):
        return None

    by_inv: dict = defaultdict(list)
    for v in h.vertices:
        by_inv[hi[v]].append(v)

    gverts = sorted(g.vertices, key=lambda v: (len(by_inv[gi[v]]), str(v)))
    # prefer extending along adjacency: reorder greedily so each vertex touches a prior one
    order: list = []
    placed: set = set()
    pool = list(gverts)
    nbrs: dict = {v: set() for v in g.vertices}
    for e in g.edges.values():
        nbrs[e.tail].add(e.head)
        nbrs[e.head].add(e.tail)
    while pool:
        pick = None
        for v in pool:
            if nbrs[v] & placed:
                pick = v
                break
        if pick is None:
            pick = pool[0]
        pool.remove(pick)
        placed.add(pick)
        order.append(pick)

    vmap: dict = {}
    used: set = set()
    nodes = 0

    def extend(i: int) -> bool:
        nonlocal nodes
        if i == len(order):
            return True
        u = order[i]
        for w in by_inv[gi[u]]:
            if w in used:
                continue
            nodes += 1
            if nodes > budget:
                raise ResourceLimit(f"isomorphism search exceeded {budget} nodes")
            ok = True
            for x, mx in vmap.items():
                if _edge_labels_between(g, u, x) != _edge_labels_between(h, w, mx):
                    ok = False
                    break
                if _edge_labels_between(g, x, u) != _edge_labels_between(h, mx, w):
                    ok = False
                    break
            if not ok:
                continue
            if _edge_labels_between(g, u, u) != _edge_labels_between(h, w, w):
                continue
            vmap[u] = w
            used.add(w)
            if extend(i + 1):
                return True
            del vmap[u]
            used.remove(w)
        return False

    if not extend(0):
        return None

    emap: dict = {}
    buckets: dict = defaultdict(list)
    for eid in sorted(h.edges):
        e = h.edges[eid]
        buckets[(e.tail, e.head, e.label)].append(eid)
    for eid in sorted(g.edges):
        e = g.edges[eid]
        emap[eid] = buckets[(vmap[e.tail], vmap[e.head], e.label)].pop(0)
    return {"vertices": vmap, "edges": emap}
