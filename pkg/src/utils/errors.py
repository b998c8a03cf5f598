from dataclasses import dataclass
from typing import List


class NokError(Exception):
    """Base class of every domain error. The CLI maps it to exit code 2."""


class ContractViolation(NokError):
    pass


class PreconditionError(NokError):
    pass


class InconsistentInputError(NokError):
    pass


class UnsupportedError(NokError):
    pass


class ModelInconsistencyError(NokError):
    pass


class NotPseudoEffectiveError(NokError):
    pass


class NotBigError(NokError):
    pass


class FlagInNegativePartError(NokError):
    pass


class UnboundedError(NokError):
    "Raised when a parametric maximum has no finite value."
    pass


class UnknownLabelError(NokError):
    pass


@dataclass(frozen=True)
class Diagnostic:
    location: str
    message: str

    def __str__(self) -> str:
        return f"{self.location}: {self.message}"


class SurfaceFileError(NokError):
    def __init__(self, diagnostics: List[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


class DivisorSyntaxError(NokError):
    def __init__(self, text: str, column: int, message: str):
        self.text = text
        self.column = column
        super().__init__(f"column {column}: {message} in {text!r}")
