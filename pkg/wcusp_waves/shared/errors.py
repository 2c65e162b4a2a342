"""Exception hierarchy shared by every wcusp-waves module."""

__all__ = [
    "WcuspError",
    "PreconditionError",
    "NumericalError",
    "NoConvergence",
    "DomainError",
    "UnresolvedFold",
    "WrongRootCount",
    "NoBistableRange",
    "NotBistable",
    "ShootingDiverged",
    "RadicandNegative",
    "NonGenericGrazing",
    "NoSymmetricCrossing",
    "FoldCollision",
    "BranchGap",
    "LemmaConditionFailed",
    "NoStableRest",
    "StepRejected",
    "BlowUp",
    "NoFront",
    "Inconclusive",
    "PatternMismatch",
]


class WcuspError(Exception):
    pass


class PreconditionError(WcuspError):
    """A scientific precondition does not hold for the given parameters."""


class NumericalError(WcuspError):
    """A numerical method failed to produce a trustworthy answer."""


### core_unfolding ###
class NoConvergence(NumericalError):
    pass


class DomainError(PreconditionError, ValueError):
    pass


class UnresolvedFold(PreconditionError):
    pass


class WrongRootCount(PreconditionError):
    pass


### skeleton ###
class NoBistableRange(PreconditionError):
    pass


class NotBistable(PreconditionError):
    pass


class ShootingDiverged(NumericalError):
    pass


class RadicandNegative(PreconditionError):
    pass


class NonGenericGrazing(PreconditionError):
    pass


class NoSymmetricCrossing(PreconditionError):
    pass


class FoldCollision(PreconditionError):
    pass


class BranchGap(NumericalError):
    pass


class LemmaConditionFailed(PreconditionError):
    """Raised with the name of the failed condition as its first argument."""

    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        super().__init__(f"{condition}: {detail}" if detail else condition)


### pde_sim ###
class NoStableRest(PreconditionError):
    pass


class StepRejected(NumericalError):
    pass


class BlowUp(NumericalError):
    pass


class NoFront(PreconditionError):
    pass


class Inconclusive(PreconditionError):
    """Carries the classifier diagnostics as its first argument."""

    def __init__(self, diagnostics: dict):
        self.diagnostics = diagnostics
        super().__init__(diagnostics)


class PatternMismatch(PreconditionError):
    pass
