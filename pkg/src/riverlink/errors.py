"""Exception hierarchy shared by the library and the CLI."""


class RiverlinkError(ValueError):
    """Base class for domain errors (CLI exit code 1)."""


class InvalidFormError(RiverlinkError):
    """Coefficients do not describe a primitive indefinite non-split form."""


class InvalidDiscriminantError(RiverlinkError):
    """Integer is not a positive nonsquare discriminant."""


class InvalidMatrixError(RiverlinkError):
    """Matrix is not in SL(2,Z), or fails a hyperbolicity precondition."""


class StrongEquivalenceError(RiverlinkError):
    """The pair of forms is not strongly inequivalent."""


class ScopeError(RiverlinkError):
    """Inputs fall outside the hypotheses of the counting formula."""
