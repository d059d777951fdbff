"""Exception types shared across the package."""


class GraphMergeError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(GraphMergeError):
    """Operands have incompatible shapes or lengths."""


class SingularMatrix(GraphMergeError):
    """A square GF(2) matrix has no inverse."""


class BadPartition(GraphMergeError):
    """A vertex partition references unknown or duplicated vertices."""


class CapacityExceeded(GraphMergeError):
    """A backend or enumeration limit would be exceeded."""


class ForcedOutcomeImpossible(GraphMergeError):
    """A forced measurement outcome has probability zero.

    Raised during branch enumeration to prune invalid branches.
    """


class InvalidCorrection(GraphMergeError):
    """A Pauli correction was rejected by the correction validator."""


class OddInputSum(GraphMergeError):
    """Verification-round inputs must have even parity."""


class UnsupportedCorruption(GraphMergeError):
    """Operation only defined for the all-honest configuration."""


class InvalidParameters(GraphMergeError):
    """Bound parameters violate their positivity constraints."""


class OutOfRange(GraphMergeError):
    """A numeric argument lies outside its admissible interval."""


class AbortedUpstream(GraphMergeError):
    """A composed protocol step ran on an aborted sub-session."""


class EmptyHonestSet(GraphMergeError):
    """The GHZ merge shortcut needs at least one honest qubit."""
