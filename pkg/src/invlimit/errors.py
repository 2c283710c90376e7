"""Exception types shared across the package."""


class InvLimitError(Exception):
    """Base class for every error raised by invlimit."""


class PoleError(InvLimitError, ZeroDivisionError):
    def __init__(self, location):
        self.location = location
        super().__init__(f"pole at x = {location!r}")


class SingularTransformError(InvLimitError):
    pass


class AllPointsFixed(InvLimitError):
    """The identity transform: every point is fixed."""


class ParameterError(InvLimitError, ValueError):
    """Parameter tuple violates the constraints of the family.

    `violations` lists one message per failed constraint.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class DomainError(InvLimitError, ValueError):
    pass


class ImageError(InvLimitError, ValueError):
    """A backward step is impossible: the value is not in the branch image."""

    def __init__(self, message, step=None):
        self.step = step
        super().__init__(message if step is None else f"step {step}: {message}")


class CaseError(InvLimitError, ValueError):
    pass


class MembershipError(InvLimitError, ValueError):
    pass


class InadmissibleCode(InvLimitError, ValueError):
    pass


class DepthExhausted(InvLimitError):
    pass


class OutOfRange(InvLimitError, ValueError):
    pass
