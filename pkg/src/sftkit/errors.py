"""Exception types shared by all modules."""


class SftkitError(Exception):
    """Base class; the CLI maps every subclass to exit code 2."""


class InputError(SftkitError):
    pass


class BoundaryError(SftkitError):
    """A required element lies outside the finite window."""


class PreconditionError(SftkitError):
    pass


class MembershipError(SftkitError):
    """The requested point is rejected by the effectively closed set."""


class BudgetError(SftkitError):
    """Instance too large for exhaustive treatment."""


class InternalError(SftkitError):
    pass
