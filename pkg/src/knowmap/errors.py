"""Exception types shared across the package."""


class KnowmapError(Exception):
    """Base class for all errors raised by this package."""


class CorpusFormatError(KnowmapError):
    """A corpus input file is malformed (bad row, bad value, duplicate id)."""


class IntegrityError(KnowmapError):
    """A graph invariant is violated (dangling reference, count mismatch)."""


class VersionError(KnowmapError):
    """A persisted graph was written by an incompatible format version."""


class UnknownIdError(KnowmapError):
    """An entity or document id does not exist in the graph."""
