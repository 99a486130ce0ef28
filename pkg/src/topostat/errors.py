"""Exception types shared across the package."""


class TopostatError(Exception):
    """Base class for all errors raised by topostat."""


class DataError(TopostatError, ValueError):
    """Malformed or inconsistent input data."""


class FormatError(DataError):
    """A text file could not be parsed.

    ``line`` is the 1-based line number of the offending line, when known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ResourceCapError(TopostatError):
    """A configured size cap (simplex count, oracle size, ...) was exceeded."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class ReplicationError(TopostatError):
    """A replication of a convergence experiment failed.

    Carries the sample size, replication index and derived seed so the
    failing draw can be reproduced; the original exception is chained.
    """

    def __init__(self, n, rep, seed, cause):
        super().__init__(f"replication failed at n={n}, rep={rep}, seed={seed}: {cause}")
        self.n = n
        self.rep = rep
        self.seed = seed
