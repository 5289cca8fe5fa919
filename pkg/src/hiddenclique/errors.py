"""Exception hierarchy. Every error the library raises derives from HiddenCliqueError."""


class HiddenCliqueError(Exception):
    """Base class for all hiddenclique errors."""


class InvalidParams(HiddenCliqueError, ValueError):
    """An argument is outside its documented range or inconsistent with the others."""


class FormatError(HiddenCliqueError, ValueError):
    """A graph file is malformed or violates a structural invariant on decode."""


class DegenerateRates(HiddenCliqueError):
    """A rate underflowed to zero, so the derived quantities are meaningless."""


class NoCrossing(HiddenCliqueError):
    """No clique-size constant within the bracket makes the clique rate reach sqrt(tau)."""


class NoFeasibleParams(HiddenCliqueError):
    """Parameter search found no point with growth factor above one."""


class SubcriticalParams(HiddenCliqueError):
    """The clique fraction would not improve per iteration (growth <= 1)."""


class EmptySample(HiddenCliqueError):
    """An iteration drew an empty reference sample."""


class IterationCollapse(HiddenCliqueError):
    """No vertex survived the degree threshold in some iteration."""

    def __init__(self, message: str, level: int = 0):
        super().__init__(message)
        self.level = level


class CoreExtractionFailed(HiddenCliqueError):
    """Top-degree filtering of the shrunken graph produced no usable core."""


class SeedTooWeak(HiddenCliqueError):
    """The seed set is too small or too impure to expand into a full candidate."""


class AmplificationExhausted(HiddenCliqueError):
    """No verified candidate within the allowed number of restriction trials."""

    def __init__(self, message: str, trials: int = 0):
        super().__init__(message)
        self.trials = trials
