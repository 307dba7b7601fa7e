"""Exception types shared across the segcarve package."""


class SegcarveError(Exception):
    """Base class for all segcarve errors."""


# --- file format / parsing ---

class BadMagic(SegcarveError):
    pass


class UnsupportedField(SegcarveError):
    pass


class TruncatedData(SegcarveError):
    pass


class ParseError(SegcarveError):
    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


class DuplicateLabel(SegcarveError):
    pass


class SchemaError(SegcarveError):
    pass


# --- volume / buffer shape ---

class DimsMismatch(SegcarveError):
    pass


# --- session ---

class LabelOutOfRange(SegcarveError):
    pass


class NothingToRemove(SegcarveError):
    pass


# --- metrics ---

class EmptyData(SegcarveError):
    pass


class ItemNeverRanked(SegcarveError):
    pass


class LengthMismatch(SegcarveError):
    pass


class TooFewPoints(SegcarveError):
    pass


# --- phantom ---

class BadSpec(SegcarveError):
    pass
