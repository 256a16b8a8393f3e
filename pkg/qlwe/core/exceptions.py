"""Exception hierarchy shared by every qlwe module."""


class QlweError(Exception):
    """Base class for all qlwe errors."""


class ParameterError(QlweError, ValueError):
    """A parameter lies outside the domain an operation accepts."""


class DimensionError(ParameterError):
    """Matrix or vector dimensions are inconsistent or too small."""


class ShapeMismatch(ParameterError):
    """A quantum state does not have the register layout an operation needs."""


class SizeGuardError(QlweError):
    """An exhaustive computation would exceed its enumeration guard."""

    def __init__(self, guard: str, size: int, limit: int):
        self.guard = guard
        self.size = size
        self.limit = limit
        super().__init__(f"{guard}: size {size} exceeds limit {limit}")


class InversionFailed(QlweError):
    """Gadget decoding produced an inconsistent preimage."""


class AmbiguousPreimage(QlweError):
    """Two preimages lie within the bound, so the column distance is too small."""


class PreconditionViolation(QlweError):
    """A documented precondition does not hold and no override was given."""


class ProtocolPhaseError(QlweError):
    """A verifier or prover was driven out of its phase order."""


class UnsupportedOperation(QlweError):
    """The object cannot perform the requested operation (e.g. no snapshot support)."""


class CircuitValidationError(QlweError):
    """A layered circuit violates a structural rule."""


class ConfigError(QlweError):
    """A configuration file is missing, malformed or schema-invalid."""

    def __init__(self, message: str, errors: list[str] | None = None):
        self.errors = errors or []
        detail = "; ".join(self.errors)
        super().__init__(f"{message}: {detail}" if detail else message)


class ReplayMismatch(QlweError):
    """A replayed transcript does not reproduce its logged verdict."""
