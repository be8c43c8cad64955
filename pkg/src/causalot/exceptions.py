"""Exception types raised across the package."""


class InputError(ValueError):
    """Malformed or inconsistent input (bad event id, bad weights, ...)."""


class CapacityError(ValueError):
    """A brute-force routine was asked to exceed its size bound."""


class UnsupportedModelError(TypeError):
    """The operation is undefined for this kind of spacetime model."""
