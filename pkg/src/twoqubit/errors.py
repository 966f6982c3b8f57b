"""Exception types raised by the simulator."""


class ContractViolation(ValueError):
    """An input broke a documented precondition (e.g. a non-Hermitian matrix)."""


class ValidationError(ValueError):
    """Physical parameters violate a model invariant."""


class DegenerateSpectrumError(ValidationError):
    """Uncoupled identical qubits: the secular construction is undefined."""


class BasisError(ValueError):
    """A density matrix was handed over in the wrong basis."""


class IntegrationError(RuntimeError):
    """The propagated state left the set of valid density matrices."""


class StiffnessError(IntegrationError):
    """The adaptive step size underflowed."""


class NumericalValidityError(ArithmeticError):
    """A quantity that must be non-negative came out clearly negative."""


class StateSpecError(ValueError):
    """Malformed initial-state text. ``offset`` points at the offending character."""

    def __init__(self, message, text="", offset=0):
        super().__init__(f"{message} (at offset {offset} in {text!r})")
        self.text = text
        self.offset = offset
