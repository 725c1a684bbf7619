"""Exception hierarchy shared by the algebra, the derivations and the CLI.

Every exception carries an ``exit_code`` so management commands can turn it
into a ``CommandError`` with the matching return code.
"""


class RGEngineError(Exception):
    exit_code = 3


class InputError(RGEngineError):
    """The caller handed in data that cannot describe a valid system."""

    exit_code = 2


class BasisMismatch(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class NonLatticeFrequency(InputError):
    pass


class DerivationError(RGEngineError):
    exit_code = 3


class MeanNotZero(DerivationError):
    pass


class ZeroFrequencyCollision(DerivationError):
    """An integer frequency vector k != 0 produced the exponent 0."""

    def __init__(self, k):
        self.k = tuple(k)
        super().__init__(
            f"Frequency vector {self.k} is resonant with the zero frequency; "
            "the declared basis is not rationally independent."
        )


class InconsistentDerivation(DerivationError):
    """A recursion identity that must hold exactly did not."""


class EquivarianceViolation(DerivationError):
    pass


class SplitError(DerivationError):
    """Tangent/stable splitting failed (spectral gap or chart violated)."""


class NumericalError(RGEngineError):
    exit_code = 4


class IntegrationFailure(NumericalError):
    pass


class TrajectoryEscape(IntegrationFailure):
    """The state left the configured escape radius."""


class NewtonDivergence(NumericalError):
    pass


class CycleNotFound(NumericalError):
    pass


class AdjointDegeneracy(NumericalError):
    pass
