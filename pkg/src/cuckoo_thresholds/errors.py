"""Exception types shared across the package."""


class UnsupportedCaseError(ValueError):
    """Raised for parameter combinations outside the supported theory.

    The main offender is ``k + ell <= 4`` (plain-graph 2-cores, i.e. standard
    2-ary cuckoo hashing), which the fixed-point analysis deliberately
    excludes.
    """


class SubcriticalDensityError(ValueError):
    """Raised when an edge density lies below the core appearance point.

    No supercritical fixed-point branch exists there, so quantities such as
    core sizes are undefined (the core is empty with high probability).
    """


class NumericalError(RuntimeError):
    """Raised when bracketing, bisection or a sanity assertion fails.

    Carries human-readable diagnostics; seeing this means either a genuinely
    pathological input or a bug, never a routine condition.
    """
