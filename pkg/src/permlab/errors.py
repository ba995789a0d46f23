"""Exception types shared across the library."""


class PermlabError(Exception):
    """Base class for all permlab errors."""


class InvalidPermutationError(PermlabError, ValueError):
    """Input does not describe a (partial) permutation of 1..n."""


class CycleError(PermlabError, ValueError):
    """An iterated preimage was queried for an element lying on a cycle."""


class NotInImageError(PermlabError, ValueError):
    """Data handed to an inverse map is inconsistent with every possible input."""


class InternalInvariantError(PermlabError, RuntimeError):
    """A step contradicted a guaranteed invariant; signals a bug, not bad input."""


class CapExceededError(PermlabError, ValueError):
    """An exhaustive computation was requested above the configured cap."""
