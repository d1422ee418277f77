"""Pullbacks of graph bundles, the induced-voltage and adjacency theorems,
and the subdirect product of bundles over a common base.

Both constructions are instances of one typed fiber product: vertices are
compatible pairs, and edges come in three kinds (fiber edges, collapsed
base edges, twisted diagonal edges).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Optional

import numpy as np

from .bundles import (
    DEFAULT_FIBER_AUT_BOUND,
    FiberVoltage,
    GraphBundle,
    bundles_equivalent,
    fiber_automorphisms,
    make_fiber_voltage,
    verify_bundle,
    voltage_indicator,
)
from .errors import BaseMismatch, CompositeCollapses, CompositesDisagree, NotAMorphism
from .graphs import (
    Graph,
    GraphMorphism,
    Label,
    compose,
    make_graph,
    make_morphism,
    pair_label,
    preserves_edges,
    split_pair_label,
    validate_morphism,
)
from .matrices import Matrix, adjacency_matrix, hadamard, identity, perm_block
from .perms import Perm, kron as perm_kron
from .products import cartesian_product

EDGE_KIND_FIBER = "I"
EDGE_KIND_COLLAPSED = "II"
EDGE_KIND_DIAGONAL = "III"


@dataclass(frozen=True)
class TypedEdge:
    """Edge of a typed fiber product, tagged with its kind (I, II, or III)."""

    endpoints: tuple[Label, Label]
    kind: str


def typed_edge_counts(edges: tuple[TypedEdge, ...]) -> dict[str, int]:
    counts = {EDGE_KIND_FIBER: 0, EDGE_KIND_COLLAPSED: 0, EDGE_KIND_DIAGONAL: 0}
    for e in edges:
        counts[e.kind] += 1
    return counts


def typed_edges_json(edges: tuple[TypedEdge, ...]) -> dict:
    """Report shape: per-kind counts plus the tagged edge list."""
    out: dict = dict(typed_edge_counts(edges))
    out["edges"] = [[e.endpoints[0], e.endpoints[1], e.kind] for e in edges]
    return out


def pullback_vertex(v: Label, x: Label) -> Label:
    return f"({v}|{x})"


def split_pullback_vertex(label: Label) -> tuple[Label, Label]:
    body = label[1:-1]
    depth = 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "|" and depth == 0:
            return body[:i], body[i + 1 :]
    raise ValueError(f"not a pullback vertex label: {label!r}")


def _typed_fiber_product(
    left: Graph,
    left_to_target: Mapping[Label, Label],
    right: Graph,
    right_to_target: Mapping[Label, Label],
    target: Graph,
    label_fn: Callable[[Label, Label], Label],
) -> tuple[Graph, tuple[TypedEdge, ...]]:
    """Fiber product on compatible pairs, left coordinate major, with the
    three-kind edge rule (kind II collapses on the left coordinate)."""
    pairs = [
        (a, b)
        for a in left.vertices
        for b in right.vertices
        if left_to_target[a] == right_to_target[b]
    ]
    labels = [label_fn(a, b) for a, b in pairs]
    index = {p: label_fn(*p) for p in pairs}
    typed: list[TypedEdge] = []
    for i, (a, b) in enumerate(pairs):
        for a2, b2 in pairs[i + 1 :]:
            if a == a2 and right.has_edge(b, b2):
                kind = EDGE_KIND_FIBER
            elif left.has_edge(a, a2) and left_to_target[a] == left_to_target[a2] and b == b2:
                kind = EDGE_KIND_COLLAPSED
            elif (
                left.has_edge(a, a2)
                and target.has_edge(left_to_target[a], left_to_target[a2])
                and right.has_edge(b, b2)
            ):
                kind = EDGE_KIND_DIAGONAL
            else:
                continue
            typed.append(TypedEdge((index[(a, b)], index[(a2, b2)]), kind))
    graph = make_graph(labels, [e.endpoints for e in typed])
    return graph, tuple(typed)


@dataclass(frozen=True, eq=False)
class PullbackBundle(GraphBundle):
    """Pullback of a bundle along a base morphism, with its typed edges and
    the decoding of each total vertex back to its (base, total) pair."""

    typed_edges: tuple[TypedEdge, ...] = ()

    def pair_of(self, label: Label) -> tuple[Label, Label]:
        return split_pullback_vertex(label)


def pullback_bundle(f: GraphMorphism, b: GraphBundle) -> PullbackBundle:
    """Pull a bundle back along f into a verified bundle over f's domain."""
    if f.codomain != b.base:
        raise BaseMismatch("codomain of the morphism must equal the bundle base")
    ok, bad = validate_morphism(f)
    if not ok:
        raise NotAMorphism(f"not a morphism; violating edges: {bad}")
    total, typed = _typed_fiber_product(
        f.domain, f.map, b.total, b.projection.map, b.base, pullback_vertex
    )
    projection = make_morphism(
        total, f.domain, {x: split_pullback_vertex(x)[0] for x in total.vertices}
    )
    verified = verify_bundle(total, projection, b.fiber)
    return PullbackBundle(
        verified.total,
        verified.projection,
        verified.base,
        verified.fiber,
        verified.fiber_isos,
        verified.transitions,
        typed,
    )


def pullback_voltage(f: GraphMorphism, fv: FiberVoltage) -> FiberVoltage:
    """Induced voltage on f's domain: identity on collapsed edges, the
    original voltage of the image edge otherwise."""
    if f.codomain != fv.base:
        raise BaseMismatch("codomain of the morphism must equal the voltage base")
    ok, bad = validate_morphism(f)
    if not ok:
        raise NotAMorphism(f"not a morphism; violating edges: {bad}")
    ident = Perm.identity(fv.fiber.n)
    assignments = {}
    for v, w in f.domain.edge_list():
        if f(v) == f(w):
            assignments[(v, w)] = ident
        else:
            assignments[(v, w)] = fv.phi[(f(v), f(w))]
    return make_fiber_voltage(f.domain, fv.fiber, assignments)


@dataclass(frozen=True, eq=False)
class MorphismMatrix:
    """0/1 matrix of a vertex map: rows index the codomain, columns the domain."""

    matrix: Matrix
    f: GraphMorphism


def morphism_matrix(f: GraphMorphism) -> MorphismMatrix:
    rows, cols = f.codomain.n, f.domain.n
    m = np.zeros((rows, cols))
    for v in f.domain.vertices:
        m[f.codomain.index[f(v)], f.domain.index[v]] = 1.0
    return MorphismMatrix(Matrix(m), f)


def pullback_b_matrix(f: GraphMorphism, fv: FiberVoltage, psi: Perm) -> Matrix:
    """The conjugated indicator block for one fiber automorphism.

    For the identity the collapsed edges contribute as well, so the middle
    factor gains an identity summand (sized by the codomain).
    """
    m = morphism_matrix(f).matrix
    middle = voltage_indicator(fv, psi)
    if psi.is_identity():
        middle = middle + identity(fv.base.n)
    return m.transpose() @ middle @ m


def pullback_indicator(f: GraphMorphism, fv: FiberVoltage, psi: Perm) -> Matrix:
    """Voltage indicator of the pulled-back voltage, computed matricially as
    the Hadamard product of the domain adjacency with the conjugated block."""
    return hadamard(adjacency_matrix(f.domain), pullback_b_matrix(f, fv, psi))


def pullback_adjacency(
    f: GraphMorphism, fv: FiberVoltage, aut_bound: int = DEFAULT_FIBER_AUT_BOUND
) -> Matrix:
    """Adjacency of the pullback total space, by the closed matrix formula."""
    if f.codomain != fv.base:
        raise BaseMismatch("codomain of the morphism must equal the voltage base")
    auts = fiber_automorphisms(fv.fiber, aut_bound)
    n, m = f.domain.n, fv.fiber.n
    out = np.zeros((n * m, n * m))
    for psi in auts:
        indicator = pullback_indicator(f, fv, psi)
        if not indicator.data.any():
            continue
        out += np.kron(indicator.data, perm_block(psi).data)
    out += np.kron(np.eye(n), adjacency_matrix(fv.fiber).data)
    result = Matrix(out)
    assert result.is_adjacency()
    return result


def canonical_map(f: GraphMorphism, b: GraphBundle, pb: Optional[PullbackBundle] = None) -> GraphMorphism:
    """The universal map from the pullback total into the original total,
    dropping the base coordinate.  The projection square commutes pointwise."""
    if pb is None:
        pb = pullback_bundle(f, b)
    mapping = {x: split_pullback_vertex(x)[1] for x in pb.total.vertices}
    univ = make_morphism(pb.total, b.total, mapping)
    ok, bad = validate_morphism(univ)
    if not ok:
        raise NotAMorphism(f"universal map is not a morphism; violating edges: {bad}")
    for x in pb.total.vertices:
        if b.projection(univ(x)) != f(pb.projection(x)):
            raise AssertionError("internal error: universal square does not commute")
    return univ


def compose_pullbacks_check(
    f: GraphMorphism, g: GraphMorphism, b: GraphBundle, aut_bound: int = DEFAULT_FIBER_AUT_BOUND
) -> bool:
    """Functoriality: pulling back along g then f agrees, up to equivalence,
    with pulling back along the composite g ∘ f."""
    twice = pullback_bundle(f, pullback_bundle(g, b))
    once = pullback_bundle(compose(g, f), b)
    return bundles_equivalent(twice, once, aut_bound) is not None


# --- subdirect product ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SubdirectBundle(GraphBundle):
    """Subdirect product of two bundles over a common base: a bundle whose
    fiber is the box product of the factor fibers."""

    typed_edges: tuple[TypedEdge, ...] = ()

    def pair_of(self, label: Label) -> tuple[Label, Label]:
        return split_pair_label(label)


def subdirect_product(b1: GraphBundle, b2: GraphBundle) -> SubdirectBundle:
    """Pull b2 back along b1's projection and read the result as a bundle
    over the common base, with vertex pairs (x, y) as first-class labels."""
    if b1.base != b2.base:
        raise BaseMismatch("subdirect product needs a common base graph")
    total, typed = _typed_fiber_product(
        b1.total, b1.projection.map, b2.total, b2.projection.map, b1.base, pair_label
    )
    projection = make_morphism(
        total,
        b1.base,
        {lab: b1.projection(split_pair_label(lab)[0]) for lab in total.vertices},
    )
    fiber = cartesian_product(b1.fiber, b2.fiber)
    verified = verify_bundle(total, projection, fiber)
    return SubdirectBundle(
        verified.total,
        verified.projection,
        verified.base,
        verified.fiber,
        verified.fiber_isos,
        verified.transitions,
        typed,
    )


def subdirect_adjacency(
    fv1: FiberVoltage, fv2: FiberVoltage, aut_bound: int = DEFAULT_FIBER_AUT_BOUND
) -> Matrix:
    """Adjacency of the subdirect total space in (base, fiber1, fiber2)
    lexicographic order, by the closed double-sum formula."""
    if fv1.base != fv2.base:
        raise BaseMismatch("subdirect adjacency needs a common base graph")
    base = fv1.base
    n = base.n
    m1, m2 = fv1.fiber.n, fv2.fiber.n
    auts1 = fiber_automorphisms(fv1.fiber, aut_bound)
    auts2 = fiber_automorphisms(fv2.fiber, aut_bound)
    out = np.zeros((n * m1 * m2, n * m1 * m2))
    for psi1 in auts1:
        for psi2 in auts2:
            indicator = np.zeros((n, n))
            hit = False
            for (v, w), value in fv1.phi.items():
                if value == psi1 and fv2.phi[(v, w)] == psi2:
                    indicator[base.index[v], base.index[w]] = 1.0
                    hit = True
            if not hit:
                continue
            block = np.kron(perm_block(psi1).data, perm_block(psi2).data)
            out += np.kron(indicator, block)
    a1 = adjacency_matrix(fv1.fiber).data
    a2 = adjacency_matrix(fv2.fiber).data
    out += np.kron(np.eye(n), np.kron(a1, np.eye(m2)))
    out += np.kron(np.eye(n), np.kron(np.eye(m1), a2))
    result = Matrix(out)
    assert result.is_adjacency()
    return result


def subdirect_voltage(fv1: FiberVoltage, fv2: FiberVoltage) -> FiberVoltage:
    """Voltage of the subdirect product on the box-product fiber, acting
    coordinatewise in lexicographic index order."""
    if fv1.base != fv2.base:
        raise BaseMismatch("subdirect voltage needs a common base graph")
    fiber = cartesian_product(fv1.fiber, fv2.fiber)
    assignments = {
        (v, w): perm_kron(fv1.phi[(v, w)], fv2.phi[(v, w)])
        for v, w in fv1.base.edge_list()
    }
    return make_fiber_voltage(fv1.base, fiber, assignments)


def pair_morphism(
    alpha1: GraphMorphism,
    alpha2: GraphMorphism,
    b1: GraphBundle,
    b2: GraphBundle,
    sp: Optional[SubdirectBundle] = None,
) -> GraphMorphism:
    """Pair two maps into the factors as a map into the subdirect product.

    Requires the two projected composites to agree pointwise and to
    preserve edges; a collapsing composite admits no pairing.
    """
    if alpha1.domain != alpha2.domain:
        raise CompositesDisagree("paired morphisms must share a domain")
    comp1 = compose(b1.projection, alpha1)
    comp2 = compose(b2.projection, alpha2)
    if comp1.map != comp2.map:
        raise CompositesDisagree("projected composites disagree on some vertex")
    if not preserves_edges(comp1):
        raise CompositeCollapses("projected composite collapses an edge")
    if sp is None:
        sp = subdirect_product(b1, b2)
    mapping = {y: pair_label(alpha1(y), alpha2(y)) for y in alpha1.domain.vertices}
    paired = make_morphism(alpha1.domain, sp.total, mapping)
    ok, bad = validate_morphism(paired)
    if not ok:
        raise NotAMorphism(f"paired map is not a morphism; violating edges: {bad}")
    return paired


def is_section(beta: GraphMorphism, b: GraphBundle) -> bool:
    """True when beta is a bundle section: its domain is a subgraph of the
    base, it is a valid morphism into the total space, and projecting it
    back is the identity."""
    dom = beta.domain
    if beta.codomain != b.total:
        return False
    if not all(v in b.base.index for v in dom.vertices):
        return False
    if not all(b.base.has_edge(a, c) for a, c in dom.edge_list()):
        return False
    ok, _ = validate_morphism(beta)
    if not ok:
        return False
    return all(b.projection(beta(v)) == v for v in dom.vertices)


# --- mixed-base diagnostic -------------------------------------------------------

@dataclass(frozen=True)
class MixedBaseProduct:
    """Diagnostic fiber product of two bundles whose bases differ.

    The second bundle's projection is composed with a linking morphism into
    the first base; the result is reported as a plain graph with typed
    edges, not as a bundle over a common base.
    """

    graph: Graph
    typed_edges: tuple[TypedEdge, ...]
    base_mismatch: bool


def mixed_base_subdirect(b1: GraphBundle, b2: GraphBundle, link: GraphMorphism) -> MixedBaseProduct:
    """Fiber product of b1's projection with link ∘ (b2's projection)."""
    if link.domain != b2.base or link.codomain != b1.base:
        raise BaseMismatch("link must map the second base onto the first base")
    composed = compose(link, b2.projection)
    graph, typed = _typed_fiber_product(
        b1.total, b1.projection.map, b2.total, composed.map, b1.base, pair_label
    )
    return MixedBaseProduct(graph, typed, base_mismatch=b1.base != b2.base)
