"""Graph bundles over a base graph: construction from fiber voltages,
structural verification, equivalence testing, and the adjacency formula.

A bundle is verified against two characterizations at once, the
three-condition definition (fibers, covering, transition isomorphisms) and
local triviality over every base edge; disagreement between them would be
an implementation bug, not bad input, and raises immediately.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Mapping, Optional

import numpy as np

from .errors import (
    BaseMismatch,
    FiberMismatch,
    FiberNotIsomorphic,
    FiberSizeMismatch,
    LocalTrivialityFails,
    NoLifting,
    NotACovering,
    NotAMorphism,
    ParseError,
    TransitionNotIso,
)
from .graphs import (
    Graph,
    GraphMorphism,
    Label,
    complete_graph,
    find_isomorphism,
    induced_subgraph,
    make_graph,
    make_morphism,
    pair_label,
    split_edge_key,
    validate_morphism,
)
from .graphs import automorphisms as graph_automorphisms
from .matrices import Matrix, adjacency_matrix, perm_block
from .perms import Perm
from .products import cartesian_product, verify_kfold_covering

#: Default cap on fiber size for automorphism-group enumeration.
DEFAULT_FIBER_AUT_BOUND = 8


def fiber_automorphisms(fiber: Graph, aut_bound: int = DEFAULT_FIBER_AUT_BOUND) -> list[Perm]:
    return graph_automorphisms(fiber, bound=aut_bound)


def is_fiber_automorphism(fiber: Graph, perm: Perm) -> bool:
    if perm.n != fiber.n:
        return False
    idx = fiber.index
    return all(
        fiber.has_edge(fiber.vertices[perm(idx[a])], fiber.vertices[perm(idx[b])])
        for a, b in fiber.edge_list()
    )


def aut_from_label_map(fiber: Graph, mapping: Mapping[Label, Label]) -> Perm:
    """Convert a label-to-label fiber automorphism into an index permutation."""
    idx = fiber.index
    return Perm(tuple(idx[mapping[v]] for v in fiber.vertices))


@dataclass(frozen=True, eq=False)
class FiberVoltage:
    """Assignment of fiber automorphisms to the oriented edges of a base graph.

    phi holds both orientations; the reverse orientation always carries the
    inverse permutation.  Permutations act on fiber vertex indices.
    """

    base: Graph
    fiber: Graph
    phi: Mapping[tuple[Label, Label], Perm]

    def __post_init__(self) -> None:
        oriented = set()
        for a, b in self.base.edge_list():
            oriented.add((a, b))
            oriented.add((b, a))
        if set(self.phi) != oriented:
            raise ParseError("voltage must cover exactly the oriented edges of the base")
        for (v, w), perm in self.phi.items():
            if not is_fiber_automorphism(self.fiber, perm):
                raise ParseError(f"voltage on ({v!r}, {w!r}) is not a fiber automorphism")
            if self.phi[(w, v)] != perm.inverse():
                raise ParseError(f"voltage on ({w!r}, {v!r}) must invert ({v!r}, {w!r})")

    def apply(self, v: Label, w: Label, f: Label) -> Label:
        """Image of fiber vertex f under the voltage of oriented edge (v, w)."""
        perm = self.phi[(v, w)]
        return self.fiber.vertices[perm(self.fiber.index[f])]

    def serialized(self) -> tuple[tuple[int, ...], ...]:
        """Image tuples over canonically oriented edges, in base edge order."""
        return tuple(self.phi[(a, b)].images for a, b in self.base.edge_list())

    def to_json(self) -> dict:
        phi = {}
        for a, b in self.base.edge_list():
            perm = self.phi[(a, b)]
            phi[f"{a},{b}"] = [self.fiber.vertices[perm(i)] for i in range(self.fiber.n)]
        return {"base": self.base.to_json(), "fiber": self.fiber.to_json(), "phi": phi}

    @staticmethod
    def from_json(data: Mapping) -> FiberVoltage:
        try:
            base = Graph.from_json(data["base"])
            fiber = Graph.from_json(data["fiber"])
            raw = data["phi"]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"bad fiber voltage JSON: {exc}") from exc
        assignments = {}
        for key, images in raw.items():
            v, w = split_edge_key(key)
            idx = fiber.index
            try:
                perm = Perm(tuple(idx[label] for label in images))
            except KeyError as exc:
                raise ParseError(f"unknown fiber vertex in voltage: {exc}") from exc
            assignments[(v, w)] = perm
        return make_fiber_voltage(base, fiber, assignments)


def make_fiber_voltage(
    base: Graph, fiber: Graph, assignments: Mapping[tuple[Label, Label], Perm]
) -> FiberVoltage:
    """Build a voltage from one orientation per edge; inverses are derived."""
    phi: dict[tuple[Label, Label], Perm] = {}
    for (v, w), perm in assignments.items():
        if (w, v) in phi and phi[(w, v)] != perm.inverse():
            raise ParseError(f"conflicting voltages on edge {{{v!r}, {w!r}}}")
        phi[(v, w)] = perm
        phi[(w, v)] = perm.inverse()
    for a, b in base.edge_list():
        if (a, b) not in phi:
            raise ParseError(f"missing voltage for edge {{{a!r}, {b!r}}}")
    return FiberVoltage(base, fiber, phi)


def trivial_voltage(base: Graph, fiber: Graph) -> FiberVoltage:
    ident = Perm.identity(fiber.n)
    return make_fiber_voltage(base, fiber, {(a, b): ident for a, b in base.edge_list()})


def identity_bundle(base: Graph) -> GraphBundle:
    """The base over itself with a one-vertex fiber; neutral for the
    subdirect product."""
    point = make_graph(["1"], [])
    projection = make_morphism(base, base, {v: v for v in base.vertices})
    return verify_bundle(base, projection, point)


@dataclass(frozen=True, eq=False)
class GraphBundle:
    """A verified bundle: total space, projection, base, fiber, and the
    per-vertex fiber identifications sigma with per-edge transitions psi."""

    total: Graph
    projection: GraphMorphism
    base: Graph
    fiber: Graph
    fiber_isos: Mapping[Label, Mapping[Label, Label]]
    transitions: Mapping[tuple[Label, Label], Mapping[Label, Label]]

    @cached_property
    def fibers(self) -> dict[Label, tuple[Label, ...]]:
        out: dict[Label, list[Label]] = {v: [] for v in self.base.vertices}
        for x in self.total.vertices:
            out[self.projection(x)].append(x)
        return {v: tuple(xs) for v, xs in out.items()}

    @cached_property
    def inverse_fiber_isos(self) -> dict[Label, dict[Label, Label]]:
        return {v: {f: x for x, f in iso.items()} for v, iso in self.fiber_isos.items()}

    def __repr__(self) -> str:
        return (
            f"GraphBundle(total {self.total.n} vertices, base {self.base.n}, "
            f"fiber {self.fiber.n})"
        )


def voltage_bundle(fv: FiberVoltage) -> GraphBundle:
    """Total space of a fiber voltage: vertices (v,f), cross edges twisted by
    the voltage, plus one copy of the fiber over each base vertex."""
    base, fiber = fv.base, fv.fiber
    vs = [pair_label(v, f) for v in base.vertices for f in fiber.vertices]
    edges = []
    for v in base.vertices:
        for a, b in fiber.edge_list():
            edges.append((pair_label(v, a), pair_label(v, b)))
    for a, b in base.edge_list():
        for f in fiber.vertices:
            edges.append((pair_label(a, f), pair_label(b, fv.apply(a, b, f))))
    total = make_graph(vs, edges)
    projection = make_morphism(total, base, {pair_label(v, f): v for v in base.vertices for f in fiber.vertices})
    fiber_isos = {
        v: {pair_label(v, f): f for f in fiber.vertices} for v in base.vertices
    }
    transitions: dict[tuple[Label, Label], dict[Label, Label]] = {}
    for a, b in base.edge_list():
        for v, w in ((a, b), (b, a)):
            transitions[(v, w)] = {
                pair_label(v, f): pair_label(w, fv.apply(v, w, f)) for f in fiber.vertices
            }
    return GraphBundle(total, projection, base, fiber, fiber_isos, transitions)


def _check_conditions(total: Graph, p: GraphMorphism, fiber: Graph):
    """Covering plus transition-isomorphism conditions; returns transitions."""
    base = p.codomain
    cross = [(a, b) for a, b in total.edge_list() if p(a) != p(b)]
    skeleton = make_graph(total.vertices, cross)
    p_tilde = make_morphism(skeleton, base, p.map)
    try:
        covering = verify_kfold_covering(p_tilde, fiber.n)
    except (FiberSizeMismatch, NoLifting) as exc:
        raise NotACovering(f"edge-deleted total space is not a {fiber.n}-fold covering: {exc}") from exc
    fibers: dict[Label, list[Label]] = {v: [] for v in base.vertices}
    for x in total.vertices:
        fibers[p(x)].append(x)
    fiber_graphs = {v: induced_subgraph(total, fibers[v]) for v in base.vertices}
    transitions: dict[tuple[Label, Label], dict[Label, Label]] = {}
    for a, b in base.edge_list():
        for v, w in ((a, b), (b, a)):
            psi = {x: covering.liftings[(v, x)][w] for x in fibers[v]}
            fib_v, fib_w = fiber_graphs[v], fiber_graphs[w]
            forward_ok = all(
                fib_w.has_edge(psi[x], psi[y]) for x, y in fib_v.edge_list()
            )
            if not forward_ok or len(fib_v.edges) != len(fib_w.edges):
                raise TransitionNotIso(f"transition over base edge ({v!r}, {w!r}) is not an isomorphism")
            transitions[(v, w)] = psi
    return transitions


def _check_local_triviality(total: Graph, p: GraphMorphism, fiber: Graph) -> None:
    base = p.codomain
    k2f = cartesian_product(complete_graph(2), fiber)
    for v, w in base.edge_list():
        pre = [x for x in total.vertices if p(x) in (v, w)]
        local = induced_subgraph(total, pre)
        if find_isomorphism(local, k2f) is None:
            raise LocalTrivialityFails(f"preimage of base edge ({v!r}, {w!r}) is not a box product with the fiber")


def verify_bundle(total: Graph, p: GraphMorphism, fiber: Graph) -> GraphBundle:
    """Verify the bundle structure of (total, p, base) with the given fiber.

    Both the three-condition definition and the local-triviality
    characterization are evaluated; they must agree, and the first failing
    witness of the definition is raised when both reject.
    """
    ok, bad = validate_morphism(p)
    if not ok:
        raise NotAMorphism(f"projection is not a morphism; violating edges: {bad}")
    base = p.codomain
    fibers: dict[Label, list[Label]] = {v: [] for v in base.vertices}
    for x in total.vertices:
        fibers[p(x)].append(x)
    sigma: dict[Label, dict[Label, Label]] = {}
    for v in base.vertices:
        fib = induced_subgraph(total, fibers[v])
        iso = find_isomorphism(fib, fiber)
        if iso is None:
            raise FiberNotIsomorphic(f"fiber over {v!r} is not isomorphic to the fiber graph")
        sigma[v] = iso

    definition_error: Exception | None = None
    transitions: dict[tuple[Label, Label], dict[Label, Label]] | None = None
    try:
        transitions = _check_conditions(total, p, fiber)
    except (NotACovering, TransitionNotIso) as exc:
        definition_error = exc

    local_error: Exception | None = None
    try:
        _check_local_triviality(total, p, fiber)
    except LocalTrivialityFails as exc:
        local_error = exc

    if (definition_error is None) != (local_error is None):
        raise AssertionError(
            "internal error: bundle definition and local triviality disagree: "
            f"{definition_error or local_error}"
        )
    if definition_error is not None:
        raise definition_error
    assert transitions is not None
    return GraphBundle(total, p, base, fiber, sigma, transitions)


def bundle_to_voltage(b: GraphBundle) -> FiberVoltage:
    """Extract the voltage sigma_w ∘ psi_vw ∘ sigma_v⁻¹ on every oriented edge."""
    fiber = b.fiber
    idx = fiber.index
    assignments: dict[tuple[Label, Label], Perm] = {}
    for a, w in b.base.edge_list():
        images = [0] * fiber.n
        inv_sigma_v = b.inverse_fiber_isos[a]
        for i, f in enumerate(fiber.vertices):
            x = inv_sigma_v[f]
            y = b.transitions[(a, w)][x]
            images[i] = idx[b.fiber_isos[w][y]]
        assignments[(a, w)] = Perm(tuple(images))
    return make_fiber_voltage(b.base, fiber, assignments)


# --- equivalence -------------------------------------------------------------

def _gauge_witnesses(
    base: Graph,
    auts: list[Perm],
    phi1: Mapping[tuple[Label, Label], Perm],
    phi2: Mapping[tuple[Label, Label], Perm],
) -> Iterator[dict[Label, Perm]]:
    """Yield all per-vertex automorphism families g with
    phi2(v,w) = g_w ∘ phi1(v,w) ∘ g_v⁻¹ on every oriented base edge.

    Choices propagate along a spanning forest, so the search is linear in
    the base size for each root choice.
    """
    components: list[list[Label]] = []
    seen: set[Label] = set()
    for root in base.vertices:
        if root in seen:
            continue
        comp = [root]
        seen.add(root)
        queue = [root]
        while queue:
            v = queue.pop(0)
            for w in base.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        components.append(comp)

    def component_solutions(comp: list[Label]) -> list[dict[Label, Perm]]:
        root = comp[0]
        sols = []
        for g_root in auts:
            g: dict[Label, Perm] = {root: g_root}
            queue = [root]
            ok = True
            while queue and ok:
                v = queue.pop(0)
                for w in base.neighbors(v):
                    forced = phi2[(v, w)].compose(g[v]).compose(phi1[(v, w)].inverse())
                    if w in g:
                        if g[w] != forced:
                            ok = False
                            break
                    else:
                        g[w] = forced
                        queue.append(w)
            if ok:
                sols.append(g)
        return sols

    per_component = [component_solutions(c) for c in components]
    if any(not sols for sols in per_component):
        return
    for combo in itertools.product(*per_component):
        merged: dict[Label, Perm] = {}
        for part in combo:
            merged.update(part)
        yield merged


def _witness_from_gauge(b1: GraphBundle, b2: GraphBundle, g: Mapping[Label, Perm]) -> dict[Label, Label]:
    fiber = b1.fiber
    mapping: dict[Label, Label] = {}
    for v in b1.base.vertices:
        inv2 = b2.inverse_fiber_isos[v]
        for x in b1.fibers[v]:
            i = fiber.index[b1.fiber_isos[v][x]]
            mapping[x] = inv2[fiber.vertices[g[v](i)]]
    return mapping


def bundles_equivalent(
    b1: GraphBundle, b2: GraphBundle, aut_bound: int = DEFAULT_FIBER_AUT_BOUND
) -> Optional[dict[Label, Label]]:
    """Search for an equivalence: a total-space isomorphism over the identity
    on the base.  Returns the lexicographically least witness, or None.

    The search ranges over per-vertex fiber automorphisms only, never raw
    vertex bijections of the total spaces.
    """
    if b1.base != b2.base:
        raise BaseMismatch("bundles have different base graphs")
    if b1.fiber != b2.fiber:
        raise FiberMismatch("bundles have different fiber graphs")
    auts = fiber_automorphisms(b1.fiber, aut_bound)
    phi1 = bundle_to_voltage(b1).phi
    phi2 = bundle_to_voltage(b2).phi
    witnesses = [
        _witness_from_gauge(b1, b2, g)
        for g in _gauge_witnesses(b1.base, auts, phi1, phi2)
    ]
    if not witnesses:
        return None
    return min(witnesses, key=lambda m: tuple(m[x] for x in b1.total.vertices))


def is_equivalence_witness(b1: GraphBundle, b2: GraphBundle, mapping: Mapping[Label, Label]) -> bool:
    """Validate a proposed total-space map as a bundle equivalence."""
    from .graphs import is_isomorphism

    if not is_isomorphism(dict(mapping), b1.total, b2.total):
        return False
    return all(b2.projection(mapping[x]) == b1.projection(x) for x in b1.total.vertices)


def is_trivial(b: GraphBundle, aut_bound: int = DEFAULT_FIBER_AUT_BOUND) -> bool:
    """True when the bundle is equivalent to the box product over the same base."""
    reference = voltage_bundle(trivial_voltage(b.base, b.fiber))
    return bundles_equivalent(b, reference, aut_bound) is not None


def with_fiber(b: GraphBundle, new_fiber: Graph) -> GraphBundle:
    """Re-express a bundle with an isomorphic replacement fiber graph.

    Any graph isomorphism works as the alignment: the residual ambiguity is
    a constant automorphism twist, which bundle equivalence absorbs.
    """
    if b.fiber == new_fiber:
        return b
    lam = find_isomorphism(b.fiber, new_fiber)
    if lam is None:
        raise FiberMismatch("replacement fiber is not isomorphic to the bundle fiber")
    fiber_isos = {
        v: {x: lam[f] for x, f in iso.items()} for v, iso in b.fiber_isos.items()
    }
    return GraphBundle(b.total, b.projection, b.base, new_fiber, fiber_isos, b.transitions)


# --- adjacency ----------------------------------------------------------------

def voltage_indicator(fv: FiberVoltage, psi: Perm) -> Matrix:
    """Base-indexed 0/1 matrix marking oriented edges whose voltage is psi."""
    n = fv.base.n
    out = np.zeros((n, n))
    for (v, w), perm in fv.phi.items():
        if perm == psi:
            out[fv.base.index[v], fv.base.index[w]] = 1.0
    return Matrix(out)


def bundle_adjacency(fv: FiberVoltage, aut_bound: int = DEFAULT_FIBER_AUT_BOUND) -> Matrix:
    """Adjacency matrix of the voltage total space, computed by the closed
    formula: voltage indicators tensored with fiber actions, plus the fiber
    adjacency on the diagonal blocks."""
    auts = fiber_automorphisms(fv.fiber, aut_bound)
    n, m = fv.base.n, fv.fiber.n
    out = np.zeros((n * m, n * m))
    for psi in auts:
        indicator = voltage_indicator(fv, psi)
        if not indicator.data.any():
            continue
        out += np.kron(indicator.data, perm_block(psi).data)
    out += np.kron(np.eye(n), adjacency_matrix(fv.fiber).data)
    result = Matrix(out)
    assert result.is_adjacency()
    return result
