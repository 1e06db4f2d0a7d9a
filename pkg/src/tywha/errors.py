"""Exception types shared across the package."""


class SizeError(ValueError):
    """An enumeration or construction exceeds its configured size bound."""


class InvariantError(ValueError):
    """Input data violates a structural invariant (not a subgroup, degenerate
    bicharacter, non-additive character, malformed classification data)."""


class StructuralError(RuntimeError):
    """An internal consistency check failed; this signals a construction bug,
    not bad user input."""
