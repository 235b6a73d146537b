"""Exception hierarchy shared by all qamlab modules."""


class QamlabError(Exception):
    """Base class for all qamlab errors."""


class DimensionMismatch(QamlabError):
    """Operands live in different ambient dimensions."""


class DomainViolation(QamlabError):
    """A point lies outside the generator's open domain C."""


class PointOutsideImage(QamlabError):
    """A point has no preimage: it is not in f[C]."""


class NumericalFailure(QamlabError):
    """A numeric routine (LP, inversion) failed to converge."""


class NotKDimensional(QamlabError):
    """An operation required a full-dimensional set and got a degenerate one."""


class ResolutionTooCoarse(QamlabError):
    """Grid sampling produced no points; the pitch exceeds the hull size."""


class ToleranceTooTight(QamlabError):
    """Witness search exhausted its margin-relaxation floor without success."""


class SubsetBudgetExceeded(QamlabError):
    """A subset-enumeration operation was given too large a base set."""


class OrbitCapExceeded(QamlabError):
    """A weight-orbit step exceeded its point cap; reduce the iteration depth."""


class ScenarioError(QamlabError):
    """A scenario file failed to parse or validate."""
