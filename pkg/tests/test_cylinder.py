import pytest

from cylgraph.core import Graph
from cylgraph.cylinder import (
    Cylinder,
    CylinderSet,
    builtin_cylinder,
    contraction_cyl,
    cyl_disjoint,
    cyl_sum,
    deletion_cyl,
    generalized_loop,
    identity_cyl,
    make_cylinder,
    path_cyl,
    sqcap_cyl,
    square_cyl,
    twist,
    wedge_cyl,
)
from cylgraph.core import isomorphic
from cylgraph.errors import DomainError, EpsilonError, NotACylinder, NotATwist
from cylgraph.perm import Perm, PermGroup


def test_identity_cylinder_shape():
    c = identity_cyl(3)
    assert c.width == 3
    assert c.eps() == {}
    assert c.inner_vertices() == []
    assert len(c.graph.vertices) == 6
    # one rung per slot, nothing within a row
    assert len(c.graph.canonical_edges()) == 3
    assert len(c.base().edges) == 0
    d = identity_cyl(2, directed=True)
    assert [(e.tail, e.head) for e in d.graph.edges.values()] == [("y1", "z1"), ("y2", "z2")]


def test_path_cylinder_shape():
    c = path_cyl(3)
    assert c.width == 1
    assert c.y != c.z
    assert c.eps() == {}
    assert len(c.graph.edges) == 6  # symmetric: twins
    assert c.inner_vertices() == ["w1", "w2"]
    d = path_cyl(2, labels=[0, 1], directed=True)
    assert [d.graph.edges[e].label for e in sorted(d.graph.edges)] == [0, 1]
    assert path_cyl(0).eps() == {1: 1}


def test_sqcap_wedge_square_shapes():
    assert sqcap_cyl().width == 2
    assert len(sqcap_cyl().graph.edges) == 6
    w = wedge_cyl()
    assert w.eps() == {1: 1}
    assert len(w.graph.vertices) == 3
    assert len(square_cyl().graph.edges) == 8
    assert square_cyl().graph.girth() == 4


def test_make_cylinder_rejects_repeated_row():
    g = Graph()
    g.add_vertices("ab")
    with pytest.raises(EpsilonError):
        make_cylinder(g, ["a", "a"], ["a", "b"])


def test_make_cylinder_rejects_missing_vertex():
    g = Graph()
    g.add_vertex("a")
    with pytest.raises(DomainError):
        make_cylinder(g, ["a"], ["b"])


def test_make_cylinder_rejects_base_mismatch():
    g = Graph()
    g.add_vertices(["y1", "y2", "z1", "z2"])
    g.add_edge("y1", "y2")
    with pytest.raises(NotACylinder):
        make_cylinder(g, ["y1", "y2"], ["z1", "z2"])


def test_make_cylinder_eps_crosscheck():
    c = wedge_cyl()
    assert make_cylinder(c.graph, c.y, c.z, eps={1: 1}) is not None
    with pytest.raises(EpsilonError):
        make_cylinder(c.graph, c.y, c.z, eps={})
    with pytest.raises(EpsilonError):
        make_cylinder(c.graph, c.y, c.z, eps={1: 1, 2: 2})


def test_twist_moves_rows_and_eps():
    tau = Perm((2, 1))
    c = sqcap_cyl()
    t = twist(c, tau, tau)
    assert t.y == ("y2", "y1")
    assert t.z == ("z2", "z1")
    w = wedge_cyl()
    t2 = twist(w, tau, Perm.identity(2))
    # shared vertex sat in slot (1,1); moving the y row sends it to slot 2
    assert t2.eps() == {2: 1}


def test_twist_rejects_non_automorphism():
    g = Graph(symmetric=True)
    g.add_vertices(["y1", "y2", "z1", "z2"])
    g.add_sym_edge("y1", "y1")
    g.add_sym_edge("z1", "z1")
    c = make_cylinder(g, ["y1", "y2"], ["z1", "z2"])
    with pytest.raises(NotATwist):
        twist(c, Perm((2, 1)), Perm((2, 1)))


def test_cyl_sum_identity_absorbs():
    one = identity_cyl(1)
    s = cyl_sum(one, one)
    assert s.width == 1
    assert len(s.graph.vertices) == 2
    # the two rungs land on the same endpoints and collapse to one
    assert len(s.graph.canonical_edges()) == 1
    assert s.y != s.z


def test_cyl_sum_merges_base_edges():
    s = cyl_sum(sqcap_cyl(), sqcap_cyl())
    # rows identified, base edges merged, both rungs merged into one
    assert len(s.graph.vertices) == 4
    assert len(s.graph.canonical_edges()) == 3
    t = cyl_sum(sqcap_cyl(), square_cyl())
    assert len(t.graph.canonical_edges()) == 4  # gains the second rung


def test_cyl_sum_width_mismatch():
    with pytest.raises(DomainError):
        cyl_sum(identity_cyl(1), identity_cyl(2))


def test_cyl_disjoint_widths_add():
    d = cyl_disjoint(path_cyl(1), identity_cyl(2))
    assert d.width == 3
    assert d.eps() == {}
    d.validate()
    w = cyl_disjoint(path_cyl(0), wedge_cyl())
    assert w.eps() == {1: 1, 2: 2}


def test_generalized_loop_closes_path():
    # closing a 3-path onto one slot gives a 3-cycle
    lp = generalized_loop(path_cyl(3), Perm.identity(1), Perm.identity(1))
    assert lp.width == 1
    assert len(lp.graph.vertices) == 3
    assert len(lp.graph.canonical_edges()) == 3
    assert lp.y == lp.z
    # a 2-path closes onto a doubled edge, which same-label merging collapses
    lp2 = generalized_loop(path_cyl(2), Perm.identity(1), Perm.identity(1))
    assert len(lp2.graph.vertices) == 2
    assert len(lp2.graph.canonical_edges()) == 1
    # a 1-path closes onto an undirected loop (kept as a twin pair)
    lp1 = generalized_loop(path_cyl(1), Perm.identity(1), Perm.identity(1))
    lp1.graph.validate()
    assert len(lp1.graph.edges) == 2
    assert len(lp1.graph.canonical_edges()) == 1


def test_generalized_loop_rejects_slot_collapse():
    with pytest.raises(EpsilonError):
        generalized_loop(wedge_cyl(), Perm.identity(2), Perm((2, 1)))


def test_generalized_loop_identity_merges_rows():
    lp = generalized_loop(identity_cyl(2), Perm.identity(2), Perm.identity(2))
    assert lp.width == 2
    assert len(lp.graph.vertices) == 2
    # each rung closes onto an undirected loop at its slot
    assert len(lp.graph.canonical_edges()) == 2
    assert all(e.tail == e.head for e in lp.graph.edges.values())


def test_cylinder_set_validation():
    s2 = PermGroup.symmetric(2)
    CylinderSet(s2, {0: sqcap_cyl()})
    CylinderSet(PermGroup.trivial(1), {"del": deletion_cyl(), "con": contraction_cyl(), "id": identity_cyl(1)})
    with pytest.raises(NotACylinder):
        CylinderSet(s2, {})
    with pytest.raises(NotACylinder):
        CylinderSet(s2, {0: identity_cyl(3)})
    with pytest.raises(NotACylinder):
        CylinderSet(PermGroup.trivial(2), {0: sqcap_cyl(), 1: identity_cyl(2)})  # bases differ


def test_cylinder_set_group_must_fix_base():
    g = Graph(symmetric=True)
    g.add_vertices(["y1", "y2", "z1", "z2"])
    g.add_sym_edge("y1", "y1")
    g.add_sym_edge("z1", "z1")
    c = make_cylinder(g, ["y1", "y2"], ["z1", "z2"])
    with pytest.raises(NotATwist):
        CylinderSet(PermGroup.symmetric(2), {0: c})
    CylinderSet(PermGroup.trivial(2), {0: c})


def test_cylinder_json_roundtrip():
    c = sqcap_cyl()
    back = Cylinder.from_json(c.to_json())
    assert back == c
    cs = CylinderSet(PermGroup.symmetric(2), {0: sqcap_cyl()})
    again = CylinderSet.from_json(cs.to_json())
    assert again.group == cs.group
    assert again[0] == cs[0]


def test_builtin_dispatcher():
    assert builtin_cylinder("identity", k=2).width == 2
    assert builtin_cylinder("sqcap") == sqcap_cyl()
    with pytest.raises(DomainError):
        builtin_cylinder("nope")


def test_det_cyl_bases_trivial():
    d = deletion_cyl()
    assert d.eps() == {}
    assert isomorphic(d.base(), identity_cyl(1).base()) is not None
