"""Exception types shared across the pipeline."""


class InvalidInputError(ValueError):
    """An operation received inputs violating its preconditions."""


class NumericError(RuntimeError):
    """A numerical routine produced non-finite values or failed to factorize."""


class DegenerateCoarseMapError(Exception):
    """Coarse saliency carries no signal (all scores equal); refinement cannot train."""
