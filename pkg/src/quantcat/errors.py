"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or mismatched input: unknown elements, endpoint clashes, bad files."""


class LatticeError(InputError):
    """A hom-poset lacks a required meet or join."""


class ResourceCapError(RuntimeError):
    """An enumeration or fixpoint exceeded its configured cap."""

    def __init__(self, message: str, cap: int | None = None, culprit=None):
        super().__init__(message)
        self.cap = cap
        self.culprit = culprit
