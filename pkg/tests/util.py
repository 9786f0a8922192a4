"""Small graph builders shared by the test modules."""

from cylgraph.core import GammaLabel, Graph


def cycle(n):
    g = Graph(symmetric=True)
    g.add_vertices(range(n))
    for i in range(n):
        g.add_sym_edge(i, (i + 1) % n)
    return g


def complete(n):
    g = Graph(symmetric=True)
    g.add_vertices(range(n))
    for i in range(n):
        for j in range(i + 1, n):
            g.add_sym_edge(i, j)
    return g


def path_graph(n):
    """Path with n edges on vertices 0..n."""
    g = Graph(symmetric=True)
    g.add_vertices(range(n + 1))
    for i in range(n):
        g.add_sym_edge(i, i + 1)
    return g


def random_graph(rng, n, p=0.5, symmetric=True, loops=False, keep_isolated=True):
    g = Graph(symmetric=symmetric)
    g.add_vertices(range(n))
    for i in range(n):
        for j in range(i if loops else i + 1, n):
            if rng.random() < p:
                if symmetric:
                    g.add_sym_edge(i, j)
                elif rng.random() < 0.5:
                    g.add_edge(i, j)
                else:
                    g.add_edge(j, i)
    if not keep_isolated:
        lonely = g.isolated_vertices()
        vs = [v for v in g.vertices if v not in set(lonely)]
        g = g.induced(vs)
    return g


def random_gamma_labels(rng, g, cset):
    """Relabel every edge of ``g`` with a random cylinder key and random
    twists drawn from the set's group."""
    out = Graph(symmetric=g.symmetric)
    out.add_vertices(g.vertices)
    keys = sorted(cset.keys(), key=str)
    elems = list(cset.group)
    canon = g.canonical_edges() if g.symmetric else list(g.edges)
    for eid in sorted(canon):
        e = g.edges[eid]
        lab = GammaLabel(rng.choice(elems), rng.choice(keys), rng.choice(elems))
        if g.symmetric:
            out.add_sym_edge(e.tail, e.head, lab, eid, g.pairing[eid])
        else:
            out.add_edge(e.tail, e.head, lab, eid)
    return out
