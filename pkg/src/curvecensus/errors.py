"""Exception types shared across the package."""


class ConsistencyError(ArithmeticError):
    """Two independent computation routes that must agree exactly did not.

    Raised when a dual-route identity (e.g. the order-count decomposition or
    the 2-adic density sum) fails; this always signals an implementation bug,
    never bad user input.
    """
