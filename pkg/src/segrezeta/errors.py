"""Exception hierarchy shared by every module of the toolkit."""


class SegreZetaError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(SegreZetaError, ValueError):
    """Operands live in incompatible rings, ambients or block structures."""


class PolynomialParseError(StructuralError):
    """A polynomial string does not follow the grammar.

    ``column`` is the 1-based position of the offending character and
    ``line`` is filled in by callers that read polynomials out of files.
    """

    def __init__(self, message, text="", column=None, line=None):
        self.text = text
        self.column = column
        self.line = line
        super().__init__(message)

    def __str__(self):
        where = []
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.column is not None:
            where.append(f"column {self.column}")
        prefix = f"{', '.join(where)}: " if where else ""
        return prefix + self.args[0]


class InhomogeneousError(StructuralError):
    """A polynomial mixes terms of different block degrees."""


class ZeroPolynomialError(StructuralError):
    """The zero polynomial has no multidegree."""


class DimensionError(SegreZetaError):
    """A quotient ring expected to be finite dimensional is not."""


class NonUnitDenominatorError(SegreZetaError, ZeroDivisionError):
    """A rational expansion was requested with a non-invertible denominator."""


class ZeroMapError(StructuralError):
    """All forms defining a rational map vanish identically."""


class FullAmbientError(SegreZetaError):
    """The ideal is zero, so the subscheme is the whole ambient space."""


class RankConstraintError(SegreZetaError):
    """The rank of the bundle is too large for the requested construction."""

    def __init__(self, message, g=None, e=None):
        self.g = g
        self.e = e
        super().__init__(message)


class GenericityExhaustedError(SegreZetaError):
    """Random choices kept failing to be generic.

    ``log`` holds one human readable entry per failed attempt.
    """

    def __init__(self, message, log=()):
        self.log = list(log)
        super().__init__(message)
