"""Exceptions raised by expectlogic.

All errors derive from ExpectLogicError so the command line app can map them
to a single exit code.
"""


class ExpectLogicError(Exception):
    pass


class FormulaSyntaxError(ExpectLogicError):
    """Formula text does not conform to the grammar."""

    def __init__(self, msg: str, line: int, column: int, offset: int):
        super().__init__(msg)
        self.line = line
        self.column = column
        self.offset = offset


class UnassignedPropositionError(ExpectLogicError, KeyError):
    def __str__(self):
        # KeyError would quote the message
        return str(self.args[0]) if self.args else ""


class AtomCapError(ExpectLogicError):
    pass


class BudgetExceededError(ExpectLogicError):
    pass


class StructureError(ExpectLogicError):
    """Schema or validation failure of a structure document."""

    def __init__(self, msg: str, violations: list[str] | None = None):
        super().__init__(msg)
        self.violations = list(violations or [])


class KindMismatchError(ExpectLogicError):
    pass


class LPError(ExpectLogicError):
    pass


class CertificateError(ExpectLogicError):
    pass


class TranslationError(ExpectLogicError):
    pass


class InconsistentAssumptionsError(ExpectLogicError):
    pass


class ProofFormatError(ExpectLogicError):
    pass
