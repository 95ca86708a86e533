"""Exception hierarchy.

Each error class carries the CLI exit code it maps to, so the command
layer never has to guess.
"""


class MRDPError(Exception):
    exit_code = 2


class InputError(MRDPError, ValueError):
    """Malformed or inconsistent input (bad poset, bad values, bad knots)."""


class PosetError(InputError):
    pass


class MissingValueError(InputError):
    pass


class ComonotonicityError(InputError):
    def __init__(self, edge, lower_value, upper_value, strict=False):
        self.edge = edge
        kind = "strictly increasing" if strict else "non-decreasing"
        super().__init__(
            f"grading function is not {kind} on cover edge "
            f"{edge[0]!r} -> {edge[1]!r} ({lower_value!r} -> {upper_value!r})"
        )


class DegenerateRangeError(InputError):
    pass


class NotEvenSidedError(InputError):
    pass


class ConstraintError(InputError):
    """Knot / cost constraints are infeasible or violate an invariant."""


class RootBracketError(InputError):
    pass


class DivergenceUndefinedError(MRDPError):
    """An increment f_k > 0 met a null increment g_k = 0."""

    exit_code = 3


class EnumerationLimitError(MRDPError):
    """A combinatorial cap (chains, elements, grid points) was exceeded."""

    exit_code = 4


class VerificationError(MRDPError):
    exit_code = 5
