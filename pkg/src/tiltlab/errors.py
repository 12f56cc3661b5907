"""Exception hierarchy shared by the whole package.

The CLI maps these onto process exit codes, so every library-level failure
mode has exactly one class here:

    ParseError          malformed input file                (exit 2)
    ValidationError     structurally bad quiver             (exit 2)
    PreconditionError   an operation's gate failed          (exit 3)
    OverflowLimitError  a table value left the 64-bit range (exit 4)
    InternalCheckError  a proved property failed — a bug    (exit 5)
"""


class TiltlabError(Exception):
    pass


class ParseError(TiltlabError):
    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


class ValidationError(TiltlabError):
    pass


class PreconditionError(TiltlabError):
    pass


class OverflowLimitError(TiltlabError):
    pass


class InternalCheckError(TiltlabError):
    pass


# Dimension tables refuse to grow values past this bound (checked 64-bit
# contract; Python ints would happily keep going, the CLI should not).
DIM_LIMIT = 2**63 - 1
