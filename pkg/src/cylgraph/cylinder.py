"""Cylinders: a graph with two marked rows of boundary vertices.

A width-k cylinder marks a row ``y = (y_1..y_k)`` and a row ``z = (z_1..z_k)``
in a graph so that the slotwise map ``y_i -> z_i`` is an isomorphism between
the subgraphs the rows induce (the two *bases*).  Rows may overlap: the
partial injection ``eps = {(i, j) : y_i is z_j}`` is read off from vertex
identity, never stored separately.

A :class:`CylinderSet` bundles keyed cylinders of one width with a permutation
group acting on the slots; every group element must be an automorphism of the
common base.  These sets parameterise the gluing product and the exponential.
"""

from __future__ import annotations

from collections import Counter
from typing import Mapping

from .core import Graph, UnionFind, disjoint_union, identify_vertices, merge_parallel
from .errors import DomainError, EpsilonError, NotACylinder, NotATwist
from .perm import Perm, PermGroup


def _labels_between(g: Graph, u, v) -> Counter:
    return Counter(g.edges[eid].label for eid in g.out_edges(u) if g.edges[eid].head == v)


def _rows_slot_isomorphic(ga: Graph, row_a, gb: Graph, row_b) -> bool:
    k = len(row_a)
    return all(
        _labels_between(ga, row_a[i], row_a[j]) == _labels_between(gb, row_b[i], row_b[j])
        for i in range(k)
        for j in range(k)
    )


class Cylinder:
    __slots__ = ("graph", "y", "z")

    def __init__(self, graph: Graph, y, z):
        self.graph = graph
        self.y = tuple(y)
        self.z = tuple(z)

    @property
    def width(self) -> int:
        return len(self.y)

    def eps(self) -> dict[int, int]:
        """Row overlap as 1-based slot pairs: eps[i] = j iff y_i is z_j."""
        pos = {v: j for j, v in enumerate(self.z, start=1)}
        return {i: pos[v] for i, v in enumerate(self.y, start=1) if v in pos}

    def inner_vertices(self) -> list:
        boundary = set(self.y) | set(self.z)
        return [v for v in self.graph.vertices if v not in boundary]

    def base(self) -> Graph:
        return self.graph.induced(self.y)

    def validate(self) -> None:
        self.graph.validate()
        if len(self.y) != len(self.z):
            raise NotACylinder(f"row lengths differ: {len(self.y)} vs {len(self.z)}")
        if not self.y:
            raise NotACylinder("cylinder width must be at least 1")
        for row, name in ((self.y, "y"), (self.z, "z")):
            for v in row:
                if not self.graph.has_vertex(v):
                    raise DomainError(f"{name}-row vertex {v!r} not in graph")
            if len(set(row)) != len(row):
                raise EpsilonError(f"{name}-row has repeated vertices: {row!r}")
        if not _rows_slot_isomorphic(self.graph, self.y, self.graph, self.z):
            raise NotACylinder("slotwise map between the rows is not an isomorphism of the bases")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Cylinder)
            and self.graph == other.graph
            and self.y == other.y
            and self.z == other.z
        )

    def __repr__(self) -> str:
        return f"Cylinder(width={self.width}, {len(self.graph.vertices)} vertices, {len(self.graph.edges)} edges)"

    def to_json(self) -> dict:
        return {"graph": self.graph.to_json(), "y": list(self.y), "z": list(self.z)}

    @classmethod
    def from_json(cls, data: dict) -> Cylinder:
        return make_cylinder(Graph.from_json(data["graph"]), data["y"], data["z"])


def make_cylinder(graph: Graph, y, z, eps: Mapping[int, int] | None = None) -> Cylinder:
    """Validated constructor.  If ``eps`` is given it is cross-checked against
    the actual row overlap (both inclusions)."""
    cyl = Cylinder(graph, y, z)
    cyl.validate()
    if eps is not None:
        actual = cyl.eps()
        if dict(eps) != actual:
            raise EpsilonError(f"declared overlap {dict(eps)!r} but rows overlap as {actual!r}")
    return cyl


def base_automorphism(cyl: Cylinder, g: Perm, row: str = "y") -> bool:
    """Does slot permutation ``g`` preserve the base induced by the given row?"""
    vs = cyl.y if row == "y" else cyl.z
    k = len(vs)
    if g.degree != k:
        return False
    moved = tuple(vs[g(i + 1) - 1] for i in range(k))
    return _rows_slot_isomorphic(cyl.graph, vs, cyl.graph, moved)


def twist(cyl: Cylinder, g: Perm, l: Perm) -> Cylinder:
    """Re-mark the rows: the new slot i holds the old y_{g^-1(i)} / z_{l^-1(i)}.
    Both permutations must preserve their base."""
    if not base_automorphism(cyl, g, "y"):
        raise NotATwist(f"{g!r} is not an automorphism of the y-base")
    if not base_automorphism(cyl, l, "z"):
        raise NotATwist(f"{l!r} is not an automorphism of the z-base")
    gi, li = g.inverse(), l.inverse()
    new_y = gi.act(cyl.y)
    new_z = li.act(cyl.z)
    out = Cylinder(cyl.graph, new_y, new_z)
    out.validate()
    return out


def cyl_sum(a: Cylinder, b: Cylinder) -> Cylinder:
    """Glue two cylinders slotwise along both rows.  Same-label parallel edges
    arising from the identification are collapsed."""
    if a.width != b.width:
        raise DomainError(f"cannot sum cylinders of widths {a.width} and {b.width}")
    u = disjoint_union(a.graph, b.graph, (".a", ".b"))
    uf = UnionFind()
    for v in u.vertices:
        uf.find(v)
    for i in range(a.width):
        uf.union(f"{a.y[i]}.a", f"{b.y[i]}.b")
        uf.union(f"{a.z[i]}.a", f"{b.z[i]}.b")
    cmap = uf.canonical_map()
    g = merge_parallel(identify_vertices(u, cmap))
    y = tuple(cmap[f"{v}.a"] for v in a.y)
    z = tuple(cmap[f"{v}.a"] for v in a.z)
    out = Cylinder(g, y, z)
    out.validate()
    return out


def cyl_disjoint(a: Cylinder, b: Cylinder) -> Cylinder:
    """Side-by-side juxtaposition; the width is the sum of the widths."""
    g = disjoint_union(a.graph, b.graph, (".a", ".b"))
    y = tuple(f"{v}.a" for v in a.y) + tuple(f"{v}.b" for v in b.y)
    z = tuple(f"{v}.a" for v in a.z) + tuple(f"{v}.b" for v in b.z)
    out = Cylinder(g, y, z)
    out.validate()
    return out


def generalized_loop(cyl: Cylinder, g: Perm, l: Perm) -> Cylinder:
    """Close a cylinder onto itself through slot permutations: slot vertex
    s_{g(b)} absorbs y_b and s_{l(b)} absorbs z_b.  The result is marked with
    both rows equal to the slot row.  Fails if the row overlap forces two
    slots together."""
    k = cyl.width
    if g.degree != k or l.degree != k:
        raise DomainError("slot permutations must match the cylinder width")
    prefix = "s"
    names = set(map(str, cyl.graph.vertices))
    while any(f"{prefix}{i}" in names for i in range(1, k + 1)):
        prefix += "_"
    slots = [f"{prefix}{i}" for i in range(1, k + 1)]

    uf = UnionFind()
    for v in cyl.graph.vertices:
        uf.find(v)
    for s in slots:
        uf.find(s)
    for b in range(1, k + 1):
        uf.union(slots[g(b) - 1], cyl.y[b - 1])
        uf.union(slots[l(b) - 1], cyl.z[b - 1])
    cmap = uf.canonical_map()
    if len({cmap[s] for s in slots}) != k:
        raise EpsilonError("row overlap merges two slots; the closure is not a cylinder")

    # rename each class to its slot vertex where one is present
    final: dict = {}
    slot_of_class = {cmap[s]: s for s in slots}
    for v, rep in cmap.items():
        final[v] = slot_of_class.get(rep, rep)
    g2 = Graph(cyl.graph.symmetric)
    for s in slots:
        g2.add_vertex(s)
    for v in cyl.graph.vertices:
        g2.add_vertex(final[v])
    for eid, e in cyl.graph.edges.items():
        g2.add_edge(final[e.tail], final[e.head], e.label, eid)
    g2.pairing = dict(cyl.graph.pairing)
    g2 = merge_parallel(g2)
    out = Cylinder(g2, slots, slots)
    out.validate()
    return out


class CylinderSet:
    """Keyed cylinders of one width plus a slot group.

    Every cylinder's rows must induce one common base (slotwise), and every
    group element must be an automorphism of it.
    """

    __slots__ = ("group", "cyls")

    def __init__(self, group: PermGroup, cyls: Mapping):
        self.group = group
        self.cyls: dict = dict(cyls)
        self.validate()

    @property
    def width(self) -> int:
        return self.group.degree

    def keys(self):
        return self.cyls.keys()

    def __getitem__(self, key) -> Cylinder:
        if key not in self.cyls:
            raise DomainError(f"no cylinder with key {key!r}")
        return self.cyls[key]

    def __contains__(self, key) -> bool:
        return key in self.cyls

    def validate(self) -> None:
        if not self.cyls:
            raise NotACylinder("cylinder set is empty")
        first = None
        for key, cyl in self.cyls.items():
            cyl.validate()
            if cyl.width != self.group.degree:
                raise NotACylinder(
                    f"cylinder {key!r} has width {cyl.width}, group acts on {self.group.degree} slots"
                )
            if first is None:
                first = cyl
            else:
                if cyl.graph.symmetric != first.graph.symmetric:
                    raise NotACylinder("cylinders mix symmetric and directed graphs")
                if not _rows_slot_isomorphic(first.graph, first.y, cyl.graph, cyl.y):
                    raise NotACylinder(f"cylinder {key!r} does not share the common base")
        for g in self.group:
            moved = tuple(first.y[g(i) - 1] for i in range(1, first.width + 1))
            if not _rows_slot_isomorphic(first.graph, first.y, first.graph, moved):
                raise NotATwist(f"group element {g!r} is not an automorphism of the base")

    @property
    def symmetric(self) -> bool:
        return next(iter(self.cyls.values())).graph.symmetric

    def base(self) -> Graph:
        return next(iter(self.cyls.values())).base()

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "cylinders": [
                {"key": key, "cyl": cyl.to_json()}
                for key, cyl in sorted(self.cyls.items(), key=lambda kv: str(kv[0]))
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> CylinderSet:
        group = PermGroup.from_json(data["group"])
        cyls = {rec["key"]: Cylinder.from_json(rec["cyl"]) for rec in data["cylinders"]}
        return cls(group, cyls)


# -- builtin shapes -----------------------------------------------------------


def identity_cyl(k: int, directed: bool = False) -> Cylinder:
    """Width-k matching: two disjoint empty rows joined by the rung y_i - z_i
    in each slot.  Gluing it reproduces the edge (slot by slot), so it is the
    unit of the gluing product; with a nontrivial slot group it builds lifts."""
    g = Graph(symmetric=not directed)
    ys = [f"y{i}" for i in range(1, k + 1)]
    zs = [f"z{i}" for i in range(1, k + 1)]
    g.add_vertices(ys)
    g.add_vertices(zs)
    for i in range(k):
        if directed:
            g.add_edge(ys[i], zs[i], None)
        else:
            g.add_sym_edge(ys[i], zs[i], None)
    return make_cylinder(g, ys, zs)


def path_cyl(n: int, labels=None, directed: bool = False) -> Cylinder:
    """Width-1 path with n edges from the y end to the z end (n = 0 collapses
    the rows onto one vertex, which makes gluing contract the edge)."""
    if n < 0:
        raise DomainError("path length must be >= 0")
    if labels is not None and len(labels) != n:
        raise DomainError(f"need {n} labels, got {len(labels)}")
    g = Graph(symmetric=not directed)
    vs = [f"w{i}" for i in range(n + 1)]
    g.add_vertices(vs)
    for i in range(n):
        lab = None if labels is None else labels[i]
        if directed:
            g.add_edge(vs[i], vs[i + 1], lab)
        else:
            g.add_sym_edge(vs[i], vs[i + 1], lab)
    return make_cylinder(g, [vs[0]], [vs[-1]])


def contraction_cyl(directed: bool = False) -> Cylinder:
    return path_cyl(0, directed=directed)


def deletion_cyl(directed: bool = False) -> Cylinder:
    """Width-1, two isolated marked vertices: gluing it erases the edge."""
    g = Graph(symmetric=not directed)
    g.add_vertices(["y1", "z1"])
    return make_cylinder(g, ["y1"], ["z1"])


def sqcap_cyl() -> Cylinder:
    """Width-2: an edge on each row plus one rung y1-z1."""
    g = Graph(symmetric=True)
    g.add_vertices(["y1", "y2", "z1", "z2"])
    g.add_sym_edge("y1", "y2")
    g.add_sym_edge("z1", "z2")
    g.add_sym_edge("y1", "z1")
    return make_cylinder(g, ["y1", "y2"], ["z1", "z2"])


def wedge_cyl() -> Cylinder:
    """Width-2: the rows share their first vertex, with one edge hanging off
    it on each side."""
    g = Graph(symmetric=True)
    g.add_vertices(["c", "y2", "z2"])
    g.add_sym_edge("c", "y2")
    g.add_sym_edge("c", "z2")
    return make_cylinder(g, ["c", "y2"], ["c", "z2"])


def square_cyl() -> Cylinder:
    """Width-2 four-cycle: an edge on each row and both rungs."""
    g = Graph(symmetric=True)
    g.add_vertices(["y1", "y2", "z1", "z2"])
    g.add_sym_edge("y1", "y2")
    g.add_sym_edge("z1", "z2")
    g.add_sym_edge("y1", "z1")
    g.add_sym_edge("y2", "z2")
    return make_cylinder(g, ["y1", "y2"], ["z1", "z2"])


_BUILTINS = {
    "identity": lambda k=1, directed=False: identity_cyl(int(k), directed),
    "path": lambda n=1, labels=None, directed=False: path_cyl(int(n), labels, directed),
    "contraction": lambda directed=False: contraction_cyl(directed),
    "deletion": lambda directed=False: deletion_cyl(directed),
    "sqcap": lambda: sqcap_cyl(),
    "wedge": lambda: wedge_cyl(),
    "square": lambda: square_cyl(),
}


def builtin_cylinder(name: str, **params) -> Cylinder:
    if name not in _BUILTINS:
        raise DomainError(f"unknown builtin cylinder {name!r} (have: {', '.join(sorted(_BUILTINS))})")
    return _BUILTINS[name](**params)
