"""Exception types raised across the package."""


class InvalidParameter(ValueError):
    pass


class WrongConstructor(ValueError):
    """A reduction was requested for a configuration it does not cover."""


class NumericalFailure(RuntimeError):
    def __init__(self, message: str, fingerprint: str = ""):
        super().__init__(f"{message} [matrix {fingerprint}]" if fingerprint else message)
        self.fingerprint = fingerprint


class NoPeakFound(RuntimeError):
    """No qualifying probability peak inside the (possibly extended) horizon.

    This is the signature of the trivial-oscillation regime, where the
    search runs in linear time.
    """


class ReductionCheckFailed(RuntimeError):
    def __init__(self, check: str, deviation: float, tolerance: float):
        super().__init__(f"reduction check {check!r} failed: max deviation {deviation:.3e} > {tolerance:.1e}")
        self.check = check
        self.deviation = deviation
        self.tolerance = tolerance
