"""Exception types raised by dyonlab."""


class DyonlabError(Exception):
    """Base class for all library errors."""


class DomainError(DyonlabError, ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class ContractError(DyonlabError, ValueError):
    """A structural precondition (e.g. a closed path) is not met."""


class DivergenceError(DomainError):
    """Evaluation requested at a physical singularity."""


class ConvergenceError(DyonlabError, RuntimeError):
    """A regularized sum failed its tail estimate."""


class InstabilityError(DyonlabError, RuntimeError):
    """Time stepping produced norm growth beyond the allowed bound."""


class InvalidRunError(DyonlabError, RuntimeError):
    """A simulation violated its own validity conditions."""
