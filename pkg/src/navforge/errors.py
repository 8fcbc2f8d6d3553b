"""Exception hierarchy shared by all navforge modules.

The CLI maps these onto exit codes, so every error raised by library code
derives from :class:`NavForgeError`.
"""


class NavForgeError(Exception):
    """Base class for all library errors."""


# --- time -----------------------------------------------------------------

class DateOutOfRange(NavForgeError, ValueError):
    pass


class ScaleOverflow(NavForgeError, ValueError):
    pass


class NegativeAge(NavForgeError, ValueError):
    pass


# --- framing --------------------------------------------------------------

class InvalidSubframeId(NavForgeError, ValueError):
    pass


class FieldOverflow(NavForgeError, ValueError):
    """A value does not fit the bit width of its field."""

    def __init__(self, field, value, stored=None):
        self.field = field
        self.value = value
        self.stored = stored
        msg = f"field {field!r}: value {value!r} does not fit"
        if stored is not None:
            msg += f" (scaled integer {stored})"
        super().__init__(msg)


class MissingField(NavForgeError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class UnknownField(NavForgeError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


# --- clock / ephemeris ----------------------------------------------------

class NegativeInterval(NavForgeError, ValueError):
    pass


class NonPositiveAxis(NavForgeError, ValueError):
    pass


class HalfWeekExceeded(NavForgeError, UserWarning):
    """Extrapolation interval longer than half a GPS week.

    Emitted as a warning by default; callers may ask for it to be raised.
    """


# --- rinex ----------------------------------------------------------------

class RinexError(NavForgeError, ValueError):
    """Base for all RINEX parse failures.

    ``line`` is the 1-based line number in the source text when known.
    """

    def __init__(self, message, line=None, columns=None):
        self.line = line
        self.columns = columns
        where = ""
        if line is not None:
            where = f"line {line}"
            if columns is not None:
                where += f", columns {columns[0]}-{columns[1]}"
            where += ": "
        super().__init__(where + message)


class MissingHeaderEnd(RinexError):
    pass


class MalformedNumber(RinexError):
    pass


class MissingValue(RinexError):
    pass


class MalformedEpoch(RinexError):
    pass


class TruncatedRecord(RinexError):
    pass


# --- geometry -------------------------------------------------------------

class NoConvergence(NavForgeError, ArithmeticError):
    pass


class InsufficientSatellites(NavForgeError, ValueError):
    pass


class SingularGeometry(NavForgeError, ArithmeticError):
    pass


class UnknownPrn(NavForgeError, LookupError):
    pass
