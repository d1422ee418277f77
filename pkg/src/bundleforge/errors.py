"""Exception types shared across the package.

Every failure mode carries the witness that triggered it, so callers can
report exactly which vertex, edge, or pair broke an invariant.
"""

from __future__ import annotations


class BundleForgeError(Exception):
    """Base class for all library errors."""


class ParseError(BundleForgeError):
    """Malformed JSON input or schema violation."""


# --- graph construction -------------------------------------------------

class DuplicateVertex(BundleForgeError):
    pass


class LoopEdge(BundleForgeError):
    pass


class UnknownEndpoint(BundleForgeError):
    pass


class UnknownVertex(BundleForgeError):
    pass


# --- morphisms ----------------------------------------------------------

class NotAMorphism(BundleForgeError):
    """A vertex map violates the weak morphism condition on some edge."""


# --- search budgets -----------------------------------------------------

class SearchBudgetExceeded(BundleForgeError):
    """Isomorphism search ran out of nodes; result is unknown, not negative."""


class EnumerationBoundExceeded(BundleForgeError):
    """An exhaustive enumeration would exceed its configured cap."""


# --- matrices -----------------------------------------------------------

class ShapeMismatch(BundleForgeError):
    pass


class NotSymmetric(BundleForgeError):
    pass


class NotABijection(BundleForgeError):
    pass


# --- coverings ----------------------------------------------------------

class FiberSizeMismatch(BundleForgeError):
    """A fiber does not contain exactly k vertices; carries the base vertex."""


class NoLifting(BundleForgeError):
    """The projection is not invertible on some star; carries (v, x)."""


# --- bundles ------------------------------------------------------------

class FiberNotIsomorphic(BundleForgeError):
    pass


class NotACovering(BundleForgeError):
    pass


class TransitionNotIso(BundleForgeError):
    pass


class LocalTrivialityFails(BundleForgeError):
    pass


class BaseMismatch(BundleForgeError):
    pass


class FiberMismatch(BundleForgeError):
    pass


# --- pullbacks and pairings ----------------------------------------------

class CompositesDisagree(BundleForgeError):
    pass


class CompositeCollapses(BundleForgeError):
    """The shared composite collapses an edge, so no paired map exists."""


# --- groups ---------------------------------------------------------------

class NotAGroup(BundleForgeError):
    """A multiplication table violates a group axiom; carries the witness."""


class NotAHomomorphism(BundleForgeError):
    pass


class NotSurjective(BundleForgeError):
    pass


class InvalidGeneratorSystem(BundleForgeError):
    pass


class NoTransversalSection(BundleForgeError):
    """No symmetric one-lift-per-generator section exists for the datum."""
