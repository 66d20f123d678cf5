"""Exception types shared across the package."""


class CyldomError(Exception):
    """Base class for package-specific failures."""


class CapacityError(CyldomError):
    """A configured resource limit (size cap, value width) would be exceeded."""


class IncompleteTableError(CyldomError):
    """A waste table was queried beyond its certified range."""


class InfeasiblePartitionError(CyldomError):
    """No strip partition can be assembled from the available tables."""


class NoWitnessError(CyldomError):
    """No vertex set realises the requested DP value (it is infinite)."""
