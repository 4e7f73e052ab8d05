"""Exception types shared across modules."""


class HypergraphError(ValueError):
    """Invalid hypergraph construction (arity, range, duplicates)."""


class ScaleGuardError(RuntimeError):
    """An exhaustive routine was asked to run beyond its configured scale."""


class UnreachableEventError(RuntimeError):
    """The edge process ran out of edges before an event occurred."""
