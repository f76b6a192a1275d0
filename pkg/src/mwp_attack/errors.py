"""Exception types shared across the toolkit."""


class MwpAttackError(Exception):
    """Base class for all toolkit errors."""


class EmptyInput(MwpAttackError):
    pass


class NoQuestionFound(MwpAttackError):
    pass


class NoBodySentences(MwpAttackError):
    pass


class ParseError(MwpAttackError):
    """Equation text is not well formed; for solver output this marks the prediction invalid."""


class DivisionByZero(MwpAttackError):
    """An exactly-evaluated divisor was zero."""


class MissingGold(MwpAttackError):
    """Neither a gold equation nor a gold answer was supplied."""


class OracleUnavailable(MwpAttackError):
    """A remote solver/paraphrase endpoint could not be reached (after retries)."""


class MalformedResponse(MwpAttackError):
    """Remote endpoint answered, but not with the expected JSON shape."""


class InvalidConfig(MwpAttackError):
    pass


class FormatError(MwpAttackError):
    """Dataset file is malformed.  Carries file/line diagnostics when known."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f" [{path}" + (f":{line}" if line is not None else "") + "]"
        super().__init__(message + where)
