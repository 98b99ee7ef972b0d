"""Exception types raised by the library."""


class LFAError(Exception):
    """Base class for all library errors."""


class AtomSpaceMismatch(LFAError, ValueError):
    def __init__(self, left, right):
        super().__init__(f"atom spaces differ: {left} vs {right}")
        self.left = left
        self.right = right


class FieldError(LFAError, TypeError):
    """A real-only operation received complex data (or vice versa)."""


class ShapeError(LFAError, ValueError):
    pass


class NotInvertible(LFAError, ArithmeticError):
    def __init__(self, atoms):
        self.atoms = tuple(int(a) for a in atoms)
        super().__init__(f"not invertible on atoms {set(self.atoms)}")


class NotRegular(LFAError, ArithmeticError):
    def __init__(self, atoms):
        self.atoms = tuple(int(a) for a in atoms)
        super().__init__(f"idempotent reaches outside the support on atoms {set(self.atoms)}")


class Undominated(LFAError, ValueError):
    """The functional is not dominated by the sublinear map on its domain.

    ``witness`` is a vector of the domain on which the domination fails.
    """

    def __init__(self, witness, atoms):
        self.witness = witness
        self.atoms = tuple(int(a) for a in atoms)
        super().__init__(f"phi <= sigma fails on atoms {set(self.atoms)}")


class ParallelogramViolation(LFAError, ValueError):
    def __init__(self, x, y, defect):
        self.x = x
        self.y = y
        self.defect = defect
        super().__init__(f"parallelogram law fails (max defect {defect:.3g})")


class LPFailure(LFAError, RuntimeError):
    """The simplex kernel returned a status other than optimal."""

    def __init__(self, status, atoms):
        self.status = status
        self.atoms = tuple(int(a) for a in atoms)
        super().__init__(f"LP {status} on atoms {set(self.atoms)}")
