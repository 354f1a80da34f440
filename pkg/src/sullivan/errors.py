"""Exception hierarchy shared by every module."""


class SullivanError(Exception):
    """Base class for domain errors (CLI exit code 1)."""

    kind = "error"

    def to_dict(self) -> dict:
        return {"error": self.kind, "message": str(self)}


class ParseError(SullivanError):
    kind = "parse_error"

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["line"] = self.line
        return d


class CapExceeded(SullivanError):
    kind = "cap_exceeded"


class AlgebraMismatch(SullivanError):
    kind = "algebra_mismatch"


class NotMinimalError(SullivanError):
    kind = "not_minimal"


class NotSimplyConnected(SullivanError):
    kind = "not_simply_connected"


class NotCocycle(SullivanError):
    kind = "not_cocycle"


class FiltrationError(SullivanError):
    kind = "filtration_error"


class IncompatibleFamily(SullivanError):
    kind = "incompatible_family"
