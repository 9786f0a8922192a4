"""The two directions of the product/exponential correspondence.

A map out of a glued product ``G (x) C -> H`` can be folded down to a
structured map ``G -> [C, H]``: each base vertex reads off the tuple of
values its slot row takes, and the orbit representative of that tuple is
the image vertex (``retraction``).  Conversely a structured map can be
expanded back over the product, filling cylinder interiors with the
stored witness maps (``section``).  On instances where the slot group
moves every realized tuple freely, retraction undoes section exactly and
the two hom counts agree; without freeness only existence transfers.

Both constructions are functorial, and ``product_map`` / ``exponential_map``
give the induced maps on products and exponential graphs.  ``check_duality``
bundles the whole story for one (base, cylinders, target) triple into a
small report.
"""

from __future__ import annotations

from dataclasses import dataclass

from .construct import ExpoTrace, ProductTrace, cyl_product, exponential, uniform_labels
from .core import GammaLabel, Graph
from .cylinder import CylinderSet
from .errors import DomainError
from .hom import (
    Homomorphism,
    check_hom,
    count_homs,
    extract_alphas,
    find_hom,
    identity_hom,
    iter_homs,
)
from .perm import Perm, compose


def _canonical_edges(g: Graph) -> list[str]:
    return sorted(g.canonical_edges()) if g.symmetric else sorted(g.edges)


def _fill_twin(g_src: Graph, g_tgt: Graph, emap: dict, eid: str, image: str) -> None:
    emap[eid] = image
    if g_src.symmetric:
        emap[g_src.pairing[eid]] = g_tgt.pairing[image]


def retraction(tr: ProductTrace, et: ExpoTrace, sigma: Homomorphism) -> Homomorphism:
    """Fold a map off the product down to a structured map on the base.

    ``sigma`` maps the product graph into the exponential's target; the
    result maps the labeled base graph into the exponential graph, twist
    group and all.  Only the vertex part of ``sigma`` is consulted.
    """
    g = tr.source
    group = tr.cset.group
    vmap: dict = {}
    shift: dict = {}
    for v in g.vertices:
        row = tuple(sigma.vmap[s] for s in tr.blowup(v))
        rep = et.rep(row)
        name = et.name(row)
        if not et.graph.has_vertex(name):
            raise DomainError(
                f"the slot row of {v!r} lands on a tuple with no surviving "
                "representative in the exponential graph"
            )
        vmap[v] = name
        shift[v] = next(a for a in group if a.act(rep) == row)

    emap: dict = {}
    alphas: dict = {}
    for eid in _canonical_edges(g):
        e = g.edges[eid]
        want = GammaLabel(
            compose(shift[e.tail], e.label.pre),
            e.label.key,
            compose(shift[e.head], e.label.post),
        )
        x = et.find_edge(vmap[e.tail], vmap[e.head], want)
        if x is None:
            raise DomainError(
                f"no exponential edge realizes the image of {eid!r}; "
                "the given map does not respect the product structure"
            )
        _fill_twin(g, et.graph, emap, eid, x)
        alphas[e.tail] = shift[e.tail].inverse()
        alphas[e.head] = shift[e.head].inverse()
    return Homomorphism(vmap, emap, alphas)


def section(tr: ProductTrace, et: ExpoTrace, sp: Homomorphism) -> Homomorphism:
    """Expand a structured map on the base to a map off the whole product.

    Slot rows are filled from the image tuples, cylinder interiors from the
    witness map stored with each exponential edge.  The two necessarily
    agree where rows overlap; a disagreement means ``sp`` was not a valid
    structured map and raises :class:`DomainError`.
    """
    g = tr.source
    group = tr.cset.group
    ident = Perm.identity(tr.cset.width)
    alphas = sp.alphas
    if alphas is None:
        alphas = extract_alphas(g, et.graph, sp, group)

    vmap: dict = {}

    def put(name, value) -> None:
        old = vmap.setdefault(name, value)
        if old != value:
            raise DomainError(
                f"product vertex {name!r} receives two different values; "
                "the structured map is not internally consistent"
            )

    for v in g.vertices:
        row = et.tuple_of[sp.vmap[v]]
        beta = alphas.get(v, ident).inverse()
        for b in range(1, tr.cset.width + 1):
            put(tr.slot[(v, b)], row[beta(b) - 1])
    for (eid, x), name in tr.copy.items():
        witness = et.witnesses[sp.emap[eid]]
        put(name, witness.vmap[x])

    emap: dict = {}
    for fid in tr.graph.edges:
        src_eid, ce = tr.edge_src[fid][0]
        witness = et.witnesses[sp.emap[src_eid]]
        emap[fid] = witness.emap[ce]
    return Homomorphism(vmap, emap)


def product_map(f: Homomorphism, tr1: ProductTrace, tr2: ProductTrace) -> Homomorphism:
    """The induced map between two products over the same cylinder set.

    ``f`` must be a structured map between the two labeled base graphs.
    Slot rows follow the base vertices (reindexed by the per-vertex twist),
    cylinder copies follow the base edges.
    """
    g1, g2 = tr1.source, tr2.source
    cset = tr1.cset
    if tr2.cset.width != cset.width or tr2.cset.group != cset.group:
        raise DomainError("the two products use different cylinder sets")
    alphas = f.alphas
    if alphas is None:
        alphas = extract_alphas(g1, g2, f, cset.group)
    ident = Perm.identity(cset.width)
    canon2 = set(_canonical_edges(g2))
    reversals: dict = {}

    def reversal(key) -> Homomorphism:
        if key not in reversals:
            cyl = cset[key]
            pins = {}
            for yb, zb in zip(cyl.y, cyl.z):
                for a, b in ((yb, zb), (zb, yb)):
                    if pins.setdefault(a, b) != b:
                        raise DomainError(
                            f"cylinder {key!r} has no end-for-end reversal; "
                            "cannot carry a pair-reversing base map across the product"
                        )
            rho = find_hom(cyl.graph, cyl.graph, mode="labeled", pins=pins)
            if rho is None:
                raise DomainError(
                    f"cylinder {key!r} has no end-for-end reversal; "
                    "cannot carry a pair-reversing base map across the product"
                )
            reversals[key] = rho
        return reversals[key]

    vmap: dict = {}

    def put(name, value) -> None:
        old = vmap.setdefault(name, value)
        if old != value:
            raise DomainError(
                f"product vertex {name!r} receives two different images; "
                "the base map is not a valid structured map"
            )

    for v in g1.vertices:
        beta = alphas.get(v, ident).inverse()
        for b in range(1, cset.width + 1):
            put(tr1.slot[(v, b)], tr2.slot[(f.vmap[v], beta(b))])

    by_copy: dict = {}
    for (ee, x), name in tr1.copy.items():
        by_copy.setdefault(ee, []).append((x, name))

    emap: dict = {}
    for eid in _canonical_edges(g1):
        img = f.emap[eid]
        key = g1.edges[eid].label.key
        if img in canon2 or not g2.symmetric:
            carry_v = {x: x for x in cset[key].graph.vertices}
            carry_e = {ce: ce for ce in cset[key].graph.edges}
            target = img
        else:
            rho = reversal(key)
            carry_v, carry_e = rho.vmap, rho.emap
            target = g2.pairing[img]
        for x, name in by_copy.get(eid, ()):
            put(name, tr2.copy[(target, carry_v[x])])
        for ce in cset[key].graph.edges:
            fid = tr1.src_edge[(eid, ce)]
            if fid not in emap:
                emap[fid] = tr2.src_edge[(target, carry_e[ce])]
    return Homomorphism(vmap, emap)


def exponential_map(f: Homomorphism, et1: ExpoTrace, et2: ExpoTrace) -> Homomorphism:
    """The induced structured map between two exponential graphs.

    ``f`` maps target to target; tuples are pushed through it entrywise and
    snapped to their orbit representative, with the snapping twist recorded
    so edge labels stay aligned.
    """
    cset = et1.cset
    if et2.cset.width != cset.width or et2.cset.group != cset.group:
        raise DomainError("the two exponential graphs use different cylinder sets")
    x1, x2 = et1.graph, et2.graph

    vmap: dict = {}
    snap: dict = {}
    for name, row in et1.tuple_of.items():
        pushed = tuple(f.vmap[t] for t in row)
        rep = et2.rep(pushed)
        image = et2.name(pushed)
        if not x2.has_vertex(image):
            raise DomainError(
                f"the image tuple of {name!r} has no surviving representative; "
                "the target map does not carry this exponential graph over"
            )
        vmap[name] = image
        snap[name] = next(a for a in cset.group if a.act(rep) == pushed)

    emap: dict = {}
    alphas: dict = {}
    for eid in _canonical_edges(x1):
        e = x1.edges[eid]
        want = GammaLabel(
            compose(snap[e.tail], e.label.pre),
            e.label.key,
            compose(snap[e.head], e.label.post),
        )
        img = et2.find_edge(vmap[e.tail], vmap[e.head], want)
        if img is None:
            raise DomainError(
                f"no edge of the image exponential graph realizes the image of {eid!r}"
            )
        _fill_twin(x1, x2, emap, eid, img)
        alphas[e.tail] = snap[e.tail].inverse()
        alphas[e.head] = snap[e.head].inverse()
    return Homomorphism(vmap, emap, alphas)


def unit_map(g: Graph, cset: CylinderSet, *, budget: int | None = None):
    """The canonical structured map from a labeled base graph into the
    exponential of its own product.  Returns (map, product trace, expo trace)."""
    tr = cyl_product(g, cset)
    et = exponential(cset, tr.graph, budget=budget)
    return retraction(tr, et, identity_hom(tr.graph)), tr, et


def counit_map(cset: CylinderSet, h: Graph, *, budget: int | None = None):
    """The canonical evaluation map from the product of an exponential graph
    back onto the original target.  Returns (map, product trace, expo trace)."""
    et = exponential(cset, h, budget=budget)
    tr = cyl_product(et.graph, cset)
    return section(tr, et, identity_hom(et.graph)), tr, et


def gamma_acts_freely(et: ExpoTrace) -> bool:
    """Does every tuple realized in the exponential graph have a trivial
    stabilizer inside the slot group?"""
    for row in et.tuple_of.values():
        for a in et.cset.group:
            if not a.is_identity() and a.act(row) == row:
                return False
    return True


@dataclass
class DualityReport:
    """Outcome of one product-versus-exponential comparison."""

    count_product_side: int
    count_exponential_side: int
    exists_equiv: bool
    retraction_section_identity: bool
    tight_on_G: bool
    gamma_action_free: bool
    maps_checked: int

    def to_json(self) -> dict:
        return {
            "count_product_side": self.count_product_side,
            "count_exponential_side": self.count_exponential_side,
            "exists_equiv": self.exists_equiv,
            "retraction_section_identity": self.retraction_section_identity,
            "tight_on_G": self.tight_on_G,
            "gamma_action_free": self.gamma_action_free,
            "maps_checked": self.maps_checked,
        }


def check_duality(g: Graph, cset: CylinderSet, h: Graph, *,
                  budget: int | None = None) -> DualityReport:
    """Compare the two sides of the correspondence for one triple.

    Counts maps out of the product against structured maps into the
    exponential graph, and round-trips every structured map through
    section and retraction.  Where the slot group fails to act freely the
    round-trip and the count comparison are reported as observed — they
    are only promised under freeness.
    """
    tr = cyl_product(g, cset)
    et = exponential(cset, h, budget=budget)
    n_product = count_homs(tr.graph, h, mode="labeled", budget=budget)
    n_expo = count_homs(g, et.graph, mode="gamma", group=cset.group, budget=budget)

    roundtrip_ok = True
    checked = 0
    for sp in iter_homs(g, et.graph, mode="gamma", group=cset.group, budget=budget):
        sigma = section(tr, et, sp)
        if check_hom(tr.graph, h, sigma, mode="labeled") is not None:
            roundtrip_ok = False
            break
        if retraction(tr, et, sigma) != sp:
            roundtrip_ok = False
            break
        checked += 1

    return DualityReport(
        count_product_side=n_product,
        count_exponential_side=n_expo,
        exists_equiv=(n_product > 0) == (n_expo > 0),
        retraction_section_identity=roundtrip_ok,
        tight_on_G=n_product == n_expo,
        gamma_action_free=gamma_acts_freely(et),
        maps_checked=checked,
    )


def _single_key(cset: CylinderSet):
    keys = list(cset.keys())
    if len(keys) != 1:
        raise DomainError("closedness checks need a single-cylinder set")
    return keys[0]


def is_lower_closed(cset: CylinderSet, h: Graph, *, budget: int | None = None) -> bool:
    """Can the exponential of the target's own product be mapped back onto
    the target (as structured maps over the uniform labeling)?"""
    key = _single_key(cset)
    hl = uniform_labels(h, key, width=cset.width)
    tr = cyl_product(hl, cset)
    et = exponential(cset, tr.graph, budget=budget)
    return find_hom(et.graph, hl, mode="gamma", group=cset.group, budget=budget) is not None


def is_upper_closed(cset: CylinderSet, g: Graph, *, budget: int | None = None) -> bool:
    """Can the base graph be mapped into the product of its own exponential?"""
    _single_key(cset)
    et = exponential(cset, g, budget=budget)
    tr = cyl_product(et.graph, cset)
    return find_hom(g, tr.graph, mode="labeled", budget=budget) is not None
