"""Exception hierarchy shared by every construction."""


class PoscommError(Exception):
    pass


class ShapeError(PoscommError, ValueError):
    """Operands have incompatible dimensions."""


class PreconditionError(PoscommError, ValueError):
    """A hypothesis of a construction does not hold for the given input.

    ``hypothesis`` names the violated condition so the CLI can echo it.
    """

    def __init__(self, message, hypothesis=None):
        super().__init__(message)
        self.hypothesis = hypothesis or message


class NegativeEntryError(PreconditionError):
    def __init__(self, where="C"):
        super().__init__(f"{where} has a negative entry", f"{where} is not positive")


class NotNilpotentError(PreconditionError):
    def __init__(self, where="C", detail=""):
        msg = f"{where} is not nilpotent"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg, f"{where} is not nilpotent")


class ScheduleUnreachableError(PreconditionError):
    def __init__(self, required_count):
        super().__init__(
            f"epsilon schedule cannot be met inside the truncation; need count >= {required_count}",
            "truncation too short",
        )
        self.required_count = required_count


class VerificationError(PoscommError):
    """A produced or loaded certificate does not satisfy its identity."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location
