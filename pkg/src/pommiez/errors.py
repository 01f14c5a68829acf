"""Exception hierarchy shared by every subsystem.

Each error maps 1:1 onto a machine-readable ``error.kind`` in the CLI
(the kind is the snake_case class name).
"""


class PommiezError(Exception):
    """Base class for all domain errors raised by this package."""

    @property
    def kind(self):
        name = type(self).__name__
        out = []
        for i, ch in enumerate(name):
            if ch.isupper() and i > 0:
                out.append("_")
            out.append(ch.lower())
        return "".join(out)


class NonConvergence(PommiezError):
    """An iterative kernel failed to meet its certification bound."""


class SingularAtZero(PommiezError):
    """Series division by t with a nonzero constant term."""


class PrecisionExhausted(PommiezError):
    """A jet does not carry enough valid coefficients for the request."""


class ExponentMismatch(PommiezError):
    """Operands were required to live on the same exponential line."""


class ZeroFunction(PommiezError):
    """The zero function is outside the operation's domain."""


class StrictNestingViolated(PommiezError):
    """A region step Q_n -> Q_{n+1} is not strictly increasing."""


class UnsupportedClosedForm(PommiezError):
    """No closed form for this input class; use the series fallback."""


class PreconditionViolated(PommiezError):
    """Input violates a documented precondition."""


class InvalidG0(PommiezError):
    """The generator function must satisfy g0(0) = 1 exactly."""


class ExprSyntaxError(PommiezError):
    """Expression text does not conform to the grammar."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class NonlinearExponent(PommiezError):
    """exp(...) argument is not of the linear form lambda*z."""

    def __init__(self, message="exponential argument must be linear in z", position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position
