"""Exception and warning types shared across the package."""


class EigenbandError(Exception):
    """Base class for all package errors."""


class NonSquare(EigenbandError, ValueError):
    pass


class NonHermitian(EigenbandError, ValueError):
    pass


class NonUnitary(EigenbandError, ValueError):
    pass


class DimensionMismatch(EigenbandError, ValueError):
    pass


class DimensionCapExceeded(EigenbandError, ValueError):
    pass


class BadControlIndex(EigenbandError, IndexError):
    pass


class ValueOutOfRange(EigenbandError, ValueError):
    """Eigenvalues (or band endpoints) outside [0, 1]."""


class NotOrthonormal(EigenbandError, ValueError):
    pass


class InvalidBand(EigenbandError, ValueError):
    pass


class EmptyBand(EigenbandError, ValueError):
    """No representable phase value falls inside the requested band."""


class DegenerateProbability(EigenbandError, ValueError):
    """Success probability of exactly 0 or 1; no rotation angle to work with."""


class ZeroProbabilityBranch(EigenbandError, ValueError):
    pass


class HullOutOfRange(EigenbandError, ValueError):
    """Gershgorin hull leaves [0, 1].

    ``hull`` is the offending (lo, hi) interval and ``rescale`` the
    suggested (shift, scale) pair such that (x - shift) / scale maps the
    hull onto [0, 1].
    """

    def __init__(self, hull, rescale):
        self.hull = hull
        self.rescale = rescale
        lo, hi = hull
        s, r = rescale
        super().__init__(
            f"Gershgorin hull [{lo:.6g}, {hi:.6g}] is not inside [0, 1]; "
            f"rescale with (H - {s:.6g} I) / {r:.6g}"
        )


class InexactPhase(UserWarning):
    """Eigenvalue not representable with the available phase-register bits."""


class PhaseAliasing(UserWarning):
    """Eigenvalues 0 and 1 share phase index 0 and cannot be told apart."""
