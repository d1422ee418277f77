"""Constructive toolkit for graph bundles and their products.

Submodules:
  graphs    finite simple graphs, weak morphisms, isomorphism search
  matrices  dense matrices, Kronecker/Hadamard products, Jacobi eigensolver
  products  box and strong products, k-fold coverings, covering voltages
  bundles   fiber voltages, bundle verification, equivalence, adjacency
  pullback  pullback bundles, subdirect products, typed edges, sections
  ktheory   bundle-class monoids and bounded Grothendieck verdicts
  groups    finite groups, Cayley graphs, subdirect groups, bundle theorems
  cli       command-line interface
"""

from .graphs import (
    Graph,
    GraphMorphism,
    automorphisms,
    complete_graph,
    compose,
    cycle_graph,
    empty_graph,
    fiber,
    find_isomorphism,
    identity_morphism,
    induced_subgraph,
    make_graph,
    make_morphism,
    neighborhood,
    path_graph,
    preserves_edges,
    star_graph,
    validate_morphism,
)
from .matrices import Matrix, Spectrum, adjacency_matrix, hadamard, kronecker, perm_matrix, spectrum
from .perms import Perm
from .products import (
    Covering,
    CoveringVoltage,
    cartesian_product,
    cartesian_spectrum,
    covering_adjacency,
    covering_voltage,
    strong_product,
    strong_spectrum,
    verify_kfold_covering,
)
from .bundles import (
    FiberVoltage,
    GraphBundle,
    bundle_adjacency,
    bundle_to_voltage,
    bundles_equivalent,
    identity_bundle,
    is_trivial,
    make_fiber_voltage,
    trivial_voltage,
    verify_bundle,
    voltage_bundle,
)
from .pullback import (
    MorphismMatrix,
    PullbackBundle,
    SubdirectBundle,
    TypedEdge,
    canonical_map,
    compose_pullbacks_check,
    is_section,
    mixed_base_subdirect,
    morphism_matrix,
    pair_morphism,
    pullback_adjacency,
    pullback_bundle,
    pullback_voltage,
    subdirect_adjacency,
    subdirect_product,
)
from .ktheory import (
    BundleClass,
    KClassMonoid,
    KGroupElement,
    enumerate_bundle_classes,
    fiber_power,
    grothendieck_equal,
    k0_map,
)
from .groups import (
    FiniteGroup,
    GeneratorSystem,
    GroupHom,
    SubdirectGroup,
    cayley_bundle,
    cayley_graph,
    cyclic,
    direct_product,
    generator_system,
    hom,
    induced_generators,
    is_admissible,
    is_surjective,
    kernel,
    make_group,
    subdirect_group,
    surjective_homs,
    symmetric_closure,
    symmetric_generating_sets,
    admissible_generating_sets,
    transversal_section,
    verify_invariance,
)

__version__ = "0.1.0"
