"""Exception hierarchy for the solver stack."""


class CoupledGRPError(Exception):
    """Base class for every error raised by this package."""


class NumericalError(CoupledGRPError):
    """A numerical failure (maps to CLI exit code 3)."""


class NonPhysicalState(NumericalError):
    pass


class VacuumState(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class SupersonicInterface(NumericalError):
    pass


class NegativeVelocity(NumericalError):
    pass


class SonicFan(NumericalError):
    """The t-axis falls inside a rarefaction fan."""


class SingularSystem(NumericalError):
    pass


class SingularCoupling(NumericalError):
    pass


class WindowExceeded(NumericalError):
    pass


class MismatchedDomains(CoupledGRPError):
    pass


class ConfigError(CoupledGRPError):
    """Invalid configuration (maps to CLI exit code 2)."""


class ParseError(ConfigError):
    def __init__(self, msg, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            msg = f"line {lineno}: {msg}"
        super().__init__(msg)


class ValidationError(ConfigError):
    pass
