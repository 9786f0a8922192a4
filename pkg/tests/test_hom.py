import random

import pytest

from cylgraph.core import GammaLabel, Graph, disjoint_union
from cylgraph.errors import DomainError, ResourceLimit
from cylgraph.hom import (
    Homomorphism,
    check_hom,
    compose_homs,
    count_homs,
    extract_alphas,
    find_hom,
    identity_hom,
    label_difference,
    list_homs,
)
from cylgraph.perm import Perm, PermGroup


def sym_cycle(n):
    g = Graph(symmetric=True)
    g.add_vertices(range(n))
    for i in range(n):
        g.add_sym_edge(i, (i + 1) % n)
    return g


def sym_path(n):
    g = Graph(symmetric=True)
    g.add_vertices(range(n + 1))
    for i in range(n):
        g.add_sym_edge(i, i + 1)
    return g


def complete(n):
    g = Graph(symmetric=True)
    g.add_vertices(range(n))
    for i in range(n):
        for j in range(i + 1, n):
            g.add_sym_edge(i, j)
    return g


def two_loops():
    g = Graph(symmetric=True)
    g.add_vertices(["p", "q"])
    g.add_sym_edge("p", "p")
    g.add_sym_edge("q", "q")
    return g


def test_odd_cycle_vs_cliques():
    c5 = sym_cycle(5)
    assert find_hom(c5, complete(3)) is not None
    assert find_hom(c5, complete(2)) is None
    assert find_hom(sym_cycle(4), complete(2)) is not None


def test_cycle_to_clique_count_closed_form():
    # maps of an n-cycle into a clique: (k-1)^n + (-1)^n (k-1)
    assert count_homs(sym_cycle(5), complete(3)) == 2**5 - 2
    assert count_homs(sym_cycle(20), complete(5)) == 4**20 + 4


def test_two_loop_target_counts_components():
    tgt = two_loops()
    assert count_homs(sym_path(2), tgt) == 2
    g = disjoint_union(sym_path(1), sym_cycle(3))
    assert count_homs(g, tgt) == 4
    homs = list_homs(sym_path(1), tgt)
    assert len(homs) == 2
    assert all(check_hom(sym_path(1), tgt, s) is None for s in homs)


def test_count_matches_enumeration_randomised():
    rng = random.Random(11)
    for _ in range(25):
        n, m = rng.randint(1, 4), rng.randint(1, 3)
        g = Graph(symmetric=True)
        g.add_vertices(range(n))
        for _ in range(rng.randint(0, 4)):
            a, b = rng.randrange(n), rng.randrange(n)
            g.add_sym_edge(a, b, rng.choice(["r", "s"]))
        h = Graph(symmetric=True)
        h.add_vertices(range(m))
        for _ in range(rng.randint(0, 4)):
            a, b = rng.randrange(m), rng.randrange(m)
            h.add_sym_edge(a, b, rng.choice(["r", "s"]))
        for mode in ("plain", "labeled"):
            homs = list_homs(g, h, mode=mode)
            assert count_homs(g, h, mode=mode) == len(homs)
            assert len(set(homs)) == len(homs)
            for s in homs:
                assert check_hom(g, h, s, mode=mode) is None


def test_count_matches_enumeration_directed():
    rng = random.Random(5)
    for _ in range(25):
        n, m = rng.randint(1, 4), rng.randint(1, 3)
        g = Graph()
        g.add_vertices(range(n))
        for _ in range(rng.randint(0, 5)):
            g.add_edge(rng.randrange(n), rng.randrange(n), rng.choice([None, "t"]))
        h = Graph()
        h.add_vertices(range(m))
        for _ in range(rng.randint(0, 5)):
            h.add_edge(rng.randrange(m), rng.randrange(m), rng.choice([None, "t"]))
        for mode in ("plain", "labeled"):
            assert count_homs(g, h, mode=mode) == len(list_homs(g, h, mode=mode))


def test_labels_respected():
    g = Graph()
    g.add_vertices("uv")
    g.add_edge("u", "v", "red")
    h = Graph()
    h.add_vertices("ab")
    h.add_edge("a", "b", "blue")
    assert find_hom(g, h, mode="labeled") is None
    assert find_hom(g, h, mode="plain") is not None


def test_pins():
    p = sym_path(2)  # 0-1-2
    homs = list_homs(p, p, pins={0: 0, 2: 2})
    assert len(homs) == 1
    assert homs[0].vmap == {0: 0, 1: 1, 2: 2}
    assert count_homs(p, p, pins={0: 0, 2: 2}) == 1
    c4 = sym_cycle(4)
    assert count_homs(p, c4, pins={0: 0, 2: 0}) == 2  # middle folds to 1 or 3
    with pytest.raises(DomainError):
        find_hom(p, p, pins={99: 0})


def test_empty_and_edgeless():
    e3 = Graph(symmetric=True)
    e3.add_vertices("xyz")
    assert count_homs(e3, complete(4)) == 4**3
    none = Graph(symmetric=True)
    assert count_homs(none, complete(2)) == 1
    assert count_homs(e3, Graph(symmetric=True)) == 0


def test_symmetry_mismatch_rejected():
    d = Graph()
    d.add_vertex("a")
    with pytest.raises(DomainError):
        find_hom(d, complete(2))


def gamma_edge(lab, sym=False):
    g = Graph(symmetric=sym)
    g.add_vertices("uv")
    if sym:
        g.add_sym_edge("u", "v", lab)
    else:
        g.add_edge("u", "v", lab)
    return g


def test_gamma_mode_twists():
    ident = Perm.identity(2)
    tau = Perm((2, 1))
    s2 = PermGroup.symmetric(2)
    g = gamma_edge(GammaLabel(ident, 0, ident))
    h = gamma_edge(GammaLabel(tau, 0, tau))
    homs = list_homs(g, h, mode="gamma", group=s2)
    assert len(homs) == 1
    assert homs[0].alphas == {"u": tau, "v": tau}
    assert check_hom(g, h, homs[0], mode="gamma", group=s2) is None
    assert find_hom(g, h, mode="gamma", group=PermGroup.trivial(2)) is None
    assert count_homs(g, h, mode="gamma", group=s2) == 1


def test_gamma_key_must_match():
    ident = Perm.identity(2)
    s2 = PermGroup.symmetric(2)
    g = gamma_edge(GammaLabel(ident, 0, ident))
    h = gamma_edge(GammaLabel(ident, 1, ident))
    assert find_hom(g, h, mode="gamma", group=s2) is None


def test_gamma_count_matches_enumeration():
    ident = Perm.identity(2)
    tau = Perm((2, 1))
    s2 = PermGroup.symmetric(2)
    rng = random.Random(3)
    for _ in range(20):
        g = Graph()
        h = Graph()
        g.add_vertices(range(3))
        h.add_vertices(range(3))
        for _ in range(rng.randint(1, 3)):
            g.add_edge(rng.randrange(3), rng.randrange(3),
                       GammaLabel(rng.choice([ident, tau]), rng.choice([0, 1]), rng.choice([ident, tau])))
        for _ in range(rng.randint(1, 4)):
            h.add_edge(rng.randrange(3), rng.randrange(3),
                       GammaLabel(rng.choice([ident, tau]), rng.choice([0, 1]), rng.choice([ident, tau])))
        homs = list_homs(g, h, mode="gamma", group=s2)
        assert count_homs(g, h, mode="gamma", group=s2) == len(homs)
        assert len(set(homs)) == len(homs)
        for s in homs:
            assert check_hom(g, h, s, mode="gamma", group=s2) is None
            assert extract_alphas(g, h, s, s2) == s.alphas


def test_gamma_requires_group_and_labels():
    g = gamma_edge(GammaLabel(Perm.identity(1), 0, Perm.identity(1)))
    with pytest.raises(DomainError):
        find_hom(g, g, mode="gamma")
    p = Graph()
    p.add_vertices("uv")
    p.add_edge("u", "v", "plain")
    with pytest.raises(DomainError):
        find_hom(p, p, mode="gamma", group=PermGroup.trivial(1))


def test_identity_hom_and_compose():
    c = sym_cycle(4)
    ident = identity_hom(c)
    assert check_hom(c, c, ident) is None
    rot = find_hom(c, c, pins={0: 1})
    assert rot is not None
    both = compose_homs(ident, rot)
    assert both.vmap == rot.vmap
    assert check_hom(c, c, both) is None


def test_check_hom_reports_failures():
    g = sym_path(1)
    h = sym_path(1)
    good = find_hom(g, h)
    bad = Homomorphism(dict(good.vmap), dict(good.emap))
    bad.vmap[0] = "nope"
    assert check_hom(g, h, bad) is not None
    partial = Homomorphism({0: 0}, {})
    assert "unmapped" in check_hom(g, h, partial)


def test_label_difference():
    tau = Perm((2, 1))
    l1 = GammaLabel(Perm.identity(2), 0, tau)
    l2 = GammaLabel(tau, 0, tau)
    assert label_difference(l1, l2, "pre", "pre") == tau
    assert label_difference(l1, l2, "post", "post") == Perm.identity(2)
    assert label_difference(l1, l2, "post", "pre") == Perm.identity(2)


def test_budget_limits():
    big = complete(7)
    with pytest.raises(ResourceLimit):
        list_homs(sym_cycle(7), big, budget=50)
