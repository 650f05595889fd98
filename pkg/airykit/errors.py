from typing import Any


class AirykitError(Exception):
    pass


class DomainError(AirykitError, ValueError):
    pass


class DegreeTooHigh(DomainError):
    pass


class NonConvergence(AirykitError, ArithmeticError):
    def __init__(
        self,
        message: str,
        *,
        value: complex = float("nan"),
        est_error: float = float("inf"),
        **inputs: Any,
    ) -> None:
        super().__init__(message)
        self.value = value
        self.est_error = est_error
        self.inputs = inputs

    def __str__(self) -> str:
        msg = super().__str__()
        if self.inputs:
            args = ", ".join(f"{k}={v!r}" for k, v in sorted(self.inputs.items()))
            msg = f"{msg} ({args})"
        return msg


class StabilityError(AirykitError, ArithmeticError):
    pass


class ZeroNorm(AirykitError, ArithmeticError):
    pass
