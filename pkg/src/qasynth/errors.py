class QasynthError(Exception):
    """Base class for all toolkit errors."""


class DataError(QasynthError):
    """Malformed or inconsistent input data (bad record, unknown id, invariant violation)."""
