"""Exception hierarchy for quartica.

Two families: ``InputError`` for malformed or unsupported input (CLI exit 2),
``CheckFailure`` for a mathematical check that did not go through (CLI exit 1).
"""


class QuarticaError(Exception):
    """Base class for every error raised by the engine"""


# ---------------------------------------------------------------- input side


class InputError(QuarticaError):
    """Input that cannot be processed as given"""


class FieldMismatchError(InputError):
    """Operands live in different number fields"""


class FieldDivisionError(InputError, ZeroDivisionError):
    """Inversion of the zero element"""


class ZeroFormError(InputError):
    """Operation undefined on the zero polynomial"""


class SameLineError(InputError):
    """Two equal lines were asked for their intersection point"""


class DuplicateLineError(InputError):
    """An arrangement lists the same projective line twice"""

    def __init__(self, first: int, second: int):
        self.first = first
        self.second = second
        super().__init__(f"lines {first} and {second} are the same projective line")


class NonReducedError(InputError):
    """The union curve has a repeated component"""


class DegreeCapError(InputError):
    """The linear-algebra path was asked for a curve above the degree cap"""


class HyperflexRangeError(InputError):
    """Hyperflex count outside 0..12"""


class UnboundedSystemError(InputError):
    """A Diophantine system leaves some unknown without a finite bound"""


class UnknownBuiltinError(InputError):
    """No registry entry with the requested name"""


# --------------------------------------------------------- mathematical side


class CheckFailure(QuarticaError):
    """A computation ran but its result violates an expected identity"""


class RootFindingError(CheckFailure):
    """Simultaneous root iteration hit its iteration cap"""


class UnsupportedSingularityError(CheckFailure):
    """A singular point outside the supported catalog of local types"""

    def __init__(self, message: str, point=None):
        self.point = point
        super().__init__(message)


class StabilizationError(CheckFailure):
    """Milnor-algebra dimensions did not settle inside the scan window"""


class ResolutionError(CheckFailure):
    """Generator extraction or the Hilbert-numerator solve failed"""


class InconsistentClassificationError(CheckFailure):
    """Resolution shape and numerical identity disagree"""


class BitangentCountError(CheckFailure):
    """The numeric finder did not end with exactly 28 lines"""

    def __init__(self, message: str, lines=None, residuals=None):
        self.lines = lines or []
        self.residuals = residuals or []
        super().__init__(message)
