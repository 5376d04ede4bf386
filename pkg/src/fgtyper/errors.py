"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ConfigError and UsageError exit 1,
DataError (and its parse/path subclasses) exit 2, BackendError exit 3.
"""


class FgtyperError(Exception):
    """Base class for all package errors."""


class UsageError(FgtyperError):
    """Bad command-line invocation."""


class ConfigError(FgtyperError):
    """Invalid run configuration (weights, vote threshold, missing resources)."""


class DataError(FgtyperError):
    """Malformed or inconsistent input data."""


class PathSyntaxError(DataError):
    """A type path that does not parse."""


class UnknownPathError(DataError):
    """A type path that is not present in the ontology."""


class PatternError(DataError):
    """A prompt template missing its mention or mask slot."""


class SpanError(DataError):
    """A mention span outside its sentence bounds."""


class BackendError(FgtyperError):
    """Model backend failure (network, protocol, missing fixture)."""


class ProtocolError(BackendError):
    """A backend response that violates the wire contract."""


class MissingFixtureError(BackendError):
    """Replay of a request that was never recorded."""

    def __init__(self, request_hash: str):
        super().__init__(f"no fixture recorded for request {request_hash}")
        self.request_hash = request_hash


class FixtureCorruptionError(BackendError):
    """Two distinct requests hashing to the same fixture key."""
