"""Exception types raised across the package."""


class ZetaError(Exception):
    """Base class for every error raised by zetaspaces."""


class ZeroConstantTerm(ZetaError):
    pass


class BadConstantTerm(ZetaError):
    def __init__(self, value, expected):
        super().__init__(f"constant term must be {expected}, got {value}")
        self.value = value
        self.expected = expected


class NonInvertible(ZetaError):
    pass


class InsufficientPrecision(ZetaError):
    pass


class NotRational(ZetaError):
    pass


class NotComparable(ZetaError):
    def __init__(self, x, y):
        super().__init__(f"{x!r} is not <= {y!r}")
        self.x = x
        self.y = y


class NonFiniteInterval(ZetaError):
    pass


class NonInvertibleOnDiagonal(ZetaError):
    def __init__(self, x):
        super().__init__(f"element vanishes on the trivial interval at {x!r}")
        self.x = x


class BadLocalFactor(ZetaError):
    def __init__(self, p, value):
        super().__init__(f"local factor at p={p} has constant term {value}, expected 1")
        self.p = p
        self.value = value


class InvalidDiscriminant(ZetaError):
    pass


class FieldTooLarge(ZetaError):
    """Enumeration would exceed the configured budget (CLI exit code 3)."""

    def __init__(self, needed, budget):
        super().__init__(f"enumeration needs {needed} evaluations, budget is {budget}")
        self.needed = needed
        self.budget = budget


class InconsistentCounts(ZetaError):
    pass


class NotHomogeneous(ZetaError):
    pass


class ParseError(ZetaError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ArityError(ZetaError):
    pass


class SimplicialIdentityError(ZetaError):
    pass


class LevelTooShallow(ZetaError):
    pass


class NotInvertible(ZetaError):
    def __init__(self, witness):
        super().__init__(f"zeta is not invertible; witness edge {witness!r}")
        self.witness = witness


class UnknownSuite(ZetaError):
    pass
