"""Exception hierarchy shared by all modules."""


class PolyinvError(Exception):
    pass


class InputError(PolyinvError, ValueError):
    """Malformed input: dimension mismatch, bad file, unknown name."""


class UnboundedPolyhedron(PolyinvError):
    """Raised when a generator form is requested for an unbounded set."""


class UnsupportedGuard(PolyinvError):
    """A polynomial atom outside the fragment the checker decides exactly."""


class PreconditionViolated(PolyinvError):
    pass


class RunNotHalted(PolyinvError):
    pass
