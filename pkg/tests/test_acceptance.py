"""End-to-end acceptance checks.

Each test here covers one numbered acceptance criterion and records a single
PASS/FAIL verdict line (with its wall-clock time) on the scoreboard that the
conftest hook replays at the end of the run.  Expected values are frozen
oracle outputs; time budgets are asserted, not advisory.
"""

import random
import time
from collections import deque
from contextlib import contextmanager
from itertools import islice

import _criteria
from util import random_graph, random_gamma_labels

from cylgraph.catalog import (
    NEPS_KINDS,
    complete_graph,
    cycle_graph,
    function_power,
    function_power_direct,
    kneser_graph,
    neps_cylinder,
    neps_direct,
    neps_product,
    path_graph,
    petersen,
    petersen_dumbbell,
    voltage_lift,
    walk_power,
    walk_power_direct,
    zigzag_product,
    zigzag_via_walks,
)
from cylgraph.construct import (
    cyl_product,
    cylinders_from_surjection,
    exponential,
    uniform_labels,
)
from cylgraph.core import GammaLabel, Graph, disjoint_union, isomorphic
from cylgraph.cylinder import CylinderSet, identity_cyl, path_cyl, sqcap_cyl, square_cyl
from cylgraph.duality import (
    exponential_map,
    gamma_acts_freely,
    is_lower_closed,
    product_map,
    retraction,
    section,
)
from cylgraph.hom import (
    check_hom,
    compose_homs,
    count_homs,
    find_hom,
    identity_hom,
    iter_homs,
)
from cylgraph.perm import Perm, PermGroup


@contextmanager
def criterion(num: int, desc: str, limit: float | None = None):
    t0 = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - t0
        late = limit is not None and elapsed > limit
        verdict = "PASS" if ok and not late else "FAIL"
        line = f"[criterion {num:02d}] {verdict} ({elapsed:.2f}s) {desc}"
        _criteria.record(line)
        print(line)
    if late:
        raise AssertionError(f"criterion {num} took {elapsed:.2f}s, budget {limit:.0f}s")


def _star(n: int) -> Graph:
    g = Graph(symmetric=True)
    g.add_vertices(range(n + 1))
    for leaf in range(1, n + 1):
        g.add_sym_edge(0, leaf)
    return g


def _girth(g: Graph) -> int | None:
    """Length of a shortest cycle, by BFS from every root."""
    adj: dict = {v: set() for v in g.vertices}
    for e in g.edges.values():
        if e.tail != e.head:
            adj[e.tail].add(e.head)
            adj[e.head].add(e.tail)
    best = None
    for root in g.vertices:
        dist = {root: 0}
        parent = {root: None}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    cyc = dist[u] + dist[w] + 1
                    if best is None or cyc < best:
                        best = cyc
    return best


# -- criterion 1: the one-slot identity cylinder is neutral on both sides ----

def test_identity_cylinder_is_neutral():
    rng = random.Random(11)
    battery = [
        complete_graph(1), complete_graph(2), complete_graph(4), complete_graph(5),
        cycle_graph(3), cycle_graph(5), cycle_graph(8),
        path_graph(1), path_graph(4), path_graph(7),
    ]
    while len(battery) < 20:
        battery.append(random_graph(
            rng, rng.randint(2, 8), p=0.5,
            symmetric=rng.random() < 0.6,
            loops=rng.random() < 0.3,
            keep_isolated=rng.random() < 0.5,
        ))
    with criterion(1, "identity cylinder neutral on 20 graphs, both sides, <1s each"):
        for g in battery:
            t0 = time.perf_counter()
            ident = CylinderSet(
                PermGroup.trivial(1),
                {1: identity_cyl(1, directed=not g.symmetric)},
            )
            tr = cyl_product(uniform_labels(g, 1), ident)
            assert isomorphic(tr.graph.stripped(), g) is not None
            et = exponential(ident, g)
            assert isomorphic(et.graph.stripped(), g.reduced()) is not None
            assert time.perf_counter() - t0 < 1.0


# -- criterion 2: the twisted-pentagon lift is the Petersen graph ------------

def test_pentagon_lift_is_petersen():
    with criterion(2, "pentagon/pentagram lift = Kneser(5,2), right shape", limit=1.0):
        p = petersen()
        assert len(p.vertices) == 10
        assert len(list(p.canonical_edges())) == 15
        assert all(p.degree(v) == 3 for v in p.vertices)
        assert _girth(p) == 5
        assert isomorphic(p, kneser_graph(5, 2)) is not None


# -- criterion 3: path cylinders subdivide under the product and take walk
#    powers under the exponential ---------------------------------------------

def test_path_cylinders_subdivide_and_power():
    rng = random.Random(31)
    with criterion(3, "C5 x P4 = C20; frozen cube of C6+chord; 10 matrix-oracle powers", limit=5.0):
        p4 = CylinderSet(PermGroup.trivial(1), {1: path_cyl(4)})
        tr = cyl_product(uniform_labels(cycle_graph(5), 1), p4)
        assert isomorphic(tr.graph.stripped(), cycle_graph(20)) is not None

        # Frozen: the length-3 walk power of a hexagon with one long chord.
        g = cycle_graph(6)
        g.add_sym_edge(0, 3)
        cube = walk_power(g, 3)
        expect = Graph(symmetric=True)
        expect.add_vertices(range(6))
        for a, b in [(0, 1), (0, 3), (0, 5), (1, 2), (1, 4),
                     (2, 3), (2, 5), (3, 4), (4, 5)]:
            expect.add_sym_edge(a, b)
        assert len(cube.vertices) == 6
        assert all(e.tail != e.head for e in cube.edges.values())
        assert isomorphic(cube, expect) is not None

        for _ in range(10):
            n = rng.randint(1, 3)
            h = random_graph(rng, rng.randint(2, 5), p=0.6,
                             symmetric=rng.random() < 0.7,
                             loops=rng.random() < 0.2)
            assert isomorphic(walk_power(h, n), walk_power_direct(h, n)) is not None


# -- criterion 4: odd cycles complete under the right walk power -------------

def test_odd_cycles_complete_under_walk_powers():
    with criterion(4, "walk power 2k-1 of C(2k+1) is K(2k+1) for k=1,2,3", limit=1.0):
        for k in (1, 2, 3):
            n = 2 * k + 1
            got = walk_power(cycle_graph(n), 2 * k - 1)
            assert isomorphic(got, complete_graph(n)) is not None


# -- criterion 5: randomized product/exponential duality battery -------------

def test_randomized_duality_battery():
    rng = random.Random(500)
    clusters = {
        1: [[lambda: path_cyl(1), lambda: path_cyl(2), lambda: path_cyl(3),
             lambda: identity_cyl(1)]],
        2: [[sqcap_cyl, square_cyl], [lambda: identity_cyl(2)]],
        3: [[lambda: identity_cyl(3)]],
    }
    groups = {
        1: [PermGroup.trivial(1)],
        2: [PermGroup.trivial(2), PermGroup.symmetric(2)],
        3: [PermGroup.trivial(3), PermGroup.cyclic(3), PermGroup.symmetric(3)],
    }
    cap = 150
    accepted = attempts = twisted = roundtrips = 0
    with criterion(5, ">=200 random triples: existence equiv, count gap, section/retract", limit=60.0):
        while accepted < 210 and attempts < 2000:
            attempts += 1
            k = rng.choice([1, 1, 2, 2, 3])
            group = rng.choice(groups[k])
            cluster = rng.choice(clusters[k])
            m = rng.randint(1, min(2, len(cluster)))
            picks = rng.sample(range(len(cluster)), m)
            cset = CylinderSet(group, {j + 1: cluster[i]() for j, i in enumerate(picks)})
            base = random_graph(rng, rng.randint(2, 5), p=0.6, keep_isolated=False)
            if not base.edges:
                continue
            g = random_gamma_labels(rng, base, cset)
            h = random_graph(rng, rng.randint(2, 5), p=0.6,
                             loops=rng.random() < 0.1, keep_isolated=True)
            et = exponential(cset, h)
            # The count and round-trip guarantees hold when the twist group
            # moves every realized tuple freely; stay inside that territory.
            if not gamma_acts_freely(et):
                continue
            homs = list(islice(
                iter_homs(g, et.graph, mode="gamma", group=cset.group), cap + 1))
            if len(homs) > cap:
                continue
            tr = cyl_product(g, cset)
            n_product = count_homs(tr.graph, h, mode="labeled")
            assert (n_product > 0) == (len(homs) > 0)
            assert n_product >= len(homs)
            for structured in homs:
                sigma = section(tr, et, structured)
                assert check_hom(tr.graph, h, sigma, mode="labeled") is None
                assert retraction(tr, et, sigma) == structured
                roundtrips += 1
            accepted += 1
            if len(group.elements) > 1:
                twisted += 1
        assert accepted >= 200
        assert twisted >= 10
        assert roundtrips > 500


# -- criterion 6: where counts match exactly and where they split ------------

def test_count_tightness_and_gaps():
    with criterion(6, "tensor cylinder tight; 2^components on both sides; loop gap 6 vs 3", limit=10.0):
        # (a) the tensor cylinder of a small pattern graph counts the same on
        # both sides of every tested triple.
        rng = random.Random(61)
        matched = attempts = 0
        while matched < 10 and attempts < 40:
            attempts += 1
            g = random_graph(rng, rng.randint(2, 4), p=0.7, keep_isolated=False)
            h = random_graph(rng, rng.randint(2, 4), p=0.7)
            # An isolated vertex in the mapped graph turns into a bare slot
            # row, which the two sides count differently; stay isolated-free.
            f = random_graph(rng, rng.randint(2, 4), p=0.7, keep_isolated=False)
            if not g.edges or not f.edges:
                continue
            width = len(g.vertices)
            cset = CylinderSet(PermGroup.trivial(width),
                               {1: neps_cylinder(g, "tensor")})
            fl = uniform_labels(f, 1, width=width)
            tr = cyl_product(fl, cset)
            et = exponential(cset, h)
            n_product = count_homs(tr.graph, h, mode="labeled")
            n_expo = count_homs(fl, et.graph, mode="gamma", group=cset.group)
            assert n_product == n_expo
            matched += 1
        assert matched >= 10

        # (b) a two-step path cylinder against an edge counts 2 per component
        # on both sides.
        rng = random.Random(62)
        p2 = CylinderSet(PermGroup.trivial(1), {1: path_cyl(2)})
        k2 = complete_graph(2)

        def connected(n: int) -> Graph:
            g = Graph(symmetric=True)
            g.add_vertices(range(n))
            order = list(range(n))
            rng.shuffle(order)
            for i in range(1, n):
                g.add_sym_edge(order[i], rng.choice(order[:i]))
            return g

        for _ in range(10):
            parts = [connected(rng.randint(1, 4)) for _ in range(rng.randint(1, 3))]
            g = parts[0]
            for extra in parts[1:]:
                g = disjoint_union(g, extra)
            c = len(g.components())
            gl = uniform_labels(g, 1)
            tr = cyl_product(gl, p2)
            assert count_homs(tr.graph, k2, mode="labeled") == 2 ** c
            et = exponential(p2, k2)
            assert count_homs(gl, et.graph, mode="gamma", group=p2.group) == 2 ** c

        # (c) frozen gap witness: a three-step path cylinder on a single loop
        # against a triangle counts 6 on the product side, 3 on the other.
        loop = Graph(symmetric=True)
        loop.add_vertex("v")
        loop.add_sym_edge("v", "v")
        p3 = CylinderSet(PermGroup.trivial(1), {1: path_cyl(3)})
        k3 = complete_graph(3)
        tr = cyl_product(uniform_labels(loop, 1), p3)
        assert count_homs(tr.graph, k3, mode="labeled") == 6
        et = exponential(p3, k3)
        assert count_homs(uniform_labels(loop, 1), et.graph,
                          mode="gamma", group=p3.group) == 3


# -- criterion 7: closure verdicts for the built-in cylinders ----------------

def test_closure_verdicts():
    with criterion(7, "square cylinder lower-closed x10; P2 fails at K3; P3 holds x5", limit=10.0):
        square = CylinderSet(PermGroup.trivial(2), {1: square_cyl()})
        for h in [complete_graph(2), complete_graph(3), complete_graph(4),
                  cycle_graph(4), cycle_graph(5), cycle_graph(6),
                  path_graph(2), path_graph(3), _star(3), complete_graph(5)]:
            assert is_lower_closed(square, h) is True

        p2 = CylinderSet(PermGroup.trivial(1), {1: path_cyl(2)})
        assert is_lower_closed(p2, complete_graph(3)) is False

        p3 = CylinderSet(PermGroup.trivial(1), {1: path_cyl(3)})
        for h in [complete_graph(2), complete_graph(3), complete_graph(4),
                  cycle_graph(5), cycle_graph(7)]:
            assert is_lower_closed(p3, h) is True


# -- criterion 8: function powers and the four NEPS kinds match oracles ------

def test_function_powers_and_neps_match_oracles():
    with criterion(8, "5 function powers + 4 NEPS kinds x5 agree with direct oracles", limit=10.0):
        pairs = [
            (complete_graph(2), complete_graph(2)),
            (complete_graph(2), complete_graph(3)),
            (path_graph(2), complete_graph(2)),
            (cycle_graph(3), complete_graph(3)),
            (path_graph(1), cycle_graph(4)),
        ]
        for g, h in pairs:
            assert isomorphic(function_power(g, h), function_power_direct(g, h)) is not None

        rng = random.Random(80)
        for kind in NEPS_KINDS:
            matched = 0
            while matched < 5:
                # Isolated vertices of either factor leave bare slot rows in
                # the glued product, so the textbook comparison needs both
                # factors isolated-free (the builders document this).
                h = random_graph(rng, rng.randint(2, 3), p=0.7, keep_isolated=False)
                g = random_graph(rng, rng.randint(2, 3), p=0.7, keep_isolated=False)
                if not h.edges or not g.edges:
                    continue
                assert isomorphic(neps_product(h, g, kind), neps_direct(h, g, kind)) is not None
                matched += 1


# -- criterion 9: zig-zag products, direct walk bookkeeping vs cylinders -----

def test_zigzag_products_two_ways():
    with criterion(9, "zigzag K4*C3 (12 vertices, 4-regular) and C4*K2 match both routes", limit=30.0):
        zz = zigzag_product(complete_graph(4), cycle_graph(3))
        assert len(zz.vertices) == 12
        assert all(zz.degree(v) == 4 for v in zz.vertices)
        via = zigzag_via_walks(complete_graph(4), cycle_graph(3))
        assert isomorphic(zz, via.stripped()) is not None

        zz2 = zigzag_product(cycle_graph(4), complete_graph(2))
        assert len(zz2.vertices) == 8
        via2 = zigzag_via_walks(cycle_graph(4), complete_graph(2))
        assert isomorphic(zz2, via2.stripped()) is not None


# -- criterion 10: voltage lifts ----------------------------------------------

def test_voltage_lifts():
    with criterion(10, "dumbbell voltages lift to Petersen; trivial voltages stack copies", limit=1.0):
        assert isomorphic(petersen_dumbbell(), petersen()) is not None

        base = cycle_graph(4)
        volts = {eid: Perm.identity(3) for eid in base.canonical_edges()}
        lifted = voltage_lift(base, volts, 3)
        copies = disjoint_union(base, disjoint_union(cycle_graph(4), cycle_graph(4)))
        assert len(lifted.components()) == 3
        assert isomorphic(lifted, copies) is not None


# -- criterion 11: both constructions act on maps, functorially and naturally -

def test_functor_laws_and_naturality():
    rng = random.Random(1100)

    def copy_digraph(g: Graph) -> Graph:
        out = Graph()
        out.add_vertices(g.vertices)
        for eid, e in g.edges.items():
            out.add_edge(e.tail, e.head, e.label, eid)
        return out

    def rand_label(cset: CylinderSet) -> GammaLabel:
        elems = list(cset.group)
        keys = sorted(cset.keys(), key=str)
        return GammaLabel(rng.choice(elems), rng.choice(keys), rng.choice(elems))

    def add_random_edge(g: Graph, label=None, loops=False) -> bool:
        for _ in range(30):
            u, v = rng.choice(g.vertices), rng.choice(g.vertices)
            if u == v and not loops:
                continue
            if any(e.tail == u and e.head == v for e in g.edges.values()):
                continue
            g.add_edge(u, v, label)
            return True
        return False

    def labeled_base(n: int, cset: CylinderSet) -> Graph:
        g = Graph()
        g.add_vertices(range(n))
        while g.isolated_vertices() or not g.edges:
            if not add_random_edge(g, rand_label(cset)):
                break
        for _ in range(rng.randint(0, 2)):
            add_random_edge(g, rand_label(cset))
        return g

    def plain_base(n: int, loops=False) -> Graph:
        g = Graph()
        g.add_vertices(range(n))
        while g.isolated_vertices() or not g.edges:
            if not add_random_edge(g):
                break
        for _ in range(rng.randint(0, 2)):
            add_random_edge(g, loops=loops)
        return g

    done = attempts = square1 = square2 = 0
    with criterion(11, "50 instances: identity/composition laws + two naturality squares", limit=30.0):
        while done < 50 and attempts < 600:
            attempts += 1
            if rng.random() < 0.5:
                grp = rng.choice([PermGroup.trivial(2), PermGroup.symmetric(2)])
                cset = CylinderSet(grp, {1: identity_cyl(2, directed=True)})
            else:
                grp = PermGroup.trivial(1)
                cset = CylinderSet(grp, {1: path_cyl(rng.randint(1, 2), directed=True)})
            g1 = labeled_base(rng.randint(2, 3), cset)
            g2 = copy_digraph(g1)
            add_random_edge(g2, rand_label(cset))
            g3 = copy_digraph(g2)
            add_random_edge(g3, rand_label(cset))
            f = find_hom(g1, g2, mode="gamma", group=grp)
            k = find_hom(g2, g3, mode="gamma", group=grp)
            if f is None or k is None:
                continue
            twisted = len(grp.elements) > 1
            # Loops create tuples a non-trivial twist group can stabilize;
            # the retraction square needs the action free, so loops only go
            # into the untwisted instances.
            h1 = plain_base(rng.randint(2, 3), loops=not twisted)
            h2 = copy_digraph(h1)
            add_random_edge(h2, loops=not twisted)
            h3 = copy_digraph(h2)
            add_random_edge(h3, loops=not twisted)
            q = find_hom(h1, h2, mode="labeled")
            r = find_hom(h2, h3, mode="labeled")
            if q is None or r is None:
                continue

            tr1, tr2, tr3 = (cyl_product(x, cset) for x in (g1, g2, g3))
            et1, et2, et3 = (exponential(cset, x) for x in (h1, h2, h3))
            if not et1.graph.vertices:
                continue
            if twisted and not all(gamma_acts_freely(e) for e in (et1, et2, et3)):
                continue

            assert product_map(identity_hom(g1), tr1, tr1) == identity_hom(tr1.graph)
            bf = product_map(f, tr1, tr2)
            bk = product_map(k, tr2, tr3)
            assert check_hom(tr1.graph, tr2.graph, bf, mode="labeled") is None
            assert product_map(compose_homs(f, k), tr1, tr3) == compose_homs(bf, bk)

            assert exponential_map(identity_hom(h1), et1, et1) == identity_hom(et1.graph)
            bq = exponential_map(q, et1, et2)
            br = exponential_map(r, et2, et3)
            assert check_hom(et1.graph, et2.graph, bq, mode="gamma", group=grp) is None
            assert exponential_map(compose_homs(q, r), et1, et3) == compose_homs(bq, br)

            checked1 = 0
            for structured in islice(iter_homs(g2, et1.graph, mode="gamma", group=grp), 30):
                left = section(tr1, et1, compose_homs(f, structured))
                right = compose_homs(bf, section(tr2, et1, structured))
                assert left == right
                checked1 += 1
            checked2 = 0
            for sigma in islice(iter_homs(tr1.graph, h1, mode="labeled"), 30):
                left = retraction(tr1, et2, compose_homs(sigma, q))
                right = compose_homs(retraction(tr1, et1, sigma), bq)
                assert left == right
                checked2 += 1
            square1 += checked1
            square2 += checked2
            if checked1 == 0 and checked2 == 0:
                continue
            done += 1
        assert done == 50
        assert square1 > 50 and square2 > 50


# -- criterion 12: cylinders recovered from a vertex surjection rebuild the
#    source graph --------------------------------------------------------------

def test_surjection_cylinders_rebuild_source():
    rng = random.Random(1200)
    done = attempts = 0
    with criterion(12, "10 random vertex surjections round-trip through fiber cylinders", limit=10.0):
        while done < 10 and attempts < 60:
            attempts += 1
            g = random_graph(rng, rng.randint(3, 6), p=0.5, keep_isolated=False)
            if len(g.vertices) < 2 or not g.edges:
                continue
            adj: dict = {v: set() for v in g.vertices}
            for e in g.edges.values():
                adj[e.tail].add(e.head)
                adj[e.head].add(e.tail)
            verts = sorted(g.vertices, key=str)
            rng.shuffle(verts)
            color: dict = {}
            fresh = 0
            for v in verts:
                taken = {color[w] for w in adj[v] if w in color}
                reusable = [c for c in range(fresh) if c not in taken]
                if reusable and rng.random() < 0.8:
                    color[v] = rng.choice(reusable)
                else:
                    color[v] = fresh
                    fresh += 1
            target = Graph(symmetric=True)
            target.add_vertices(f"c{i}" for i in range(fresh))
            seen = set()
            for e in g.edges.values():
                a, b = color[e.tail], color[e.head]
                key = (min(a, b), max(a, b))
                if key not in seen:
                    seen.add(key)
                    target.add_sym_edge(f"c{a}", f"c{b}")
            vmap = {v: f"c{color[v]}" for v in g.vertices}
            labeled, cs = cylinders_from_surjection(g, target, vmap)
            tr = cyl_product(labeled, cs)
            assert isomorphic(tr.graph.reduced().stripped(), g) is not None
            done += 1
        assert done == 10
