"""Exception hierarchy shared across the package.

Every error raised on a user-facing path derives from ArchmatError so the
CLI and the HTTP service can map failures to exit codes / status codes in
one place.
"""


class ArchmatError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(ArchmatError, ValueError):
    """A caller supplied an argument outside the documented domain."""


class UnknownTopologyError(InvalidArgumentError):
    """Lattice topology name not in the catalog."""

    def __init__(self, name, known):
        self.name = name
        self.known = list(known)
        super().__init__(
            f"unknown topology {name!r}; known topologies: {', '.join(self.known)}"
        )


class UnknownLabelError(InvalidArgumentError):
    """Categorical label absent from the fitted encoder."""

    def __init__(self, label, known):
        self.label = label
        self.known = list(known)
        super().__init__(
            f"unknown lattice label {label!r}; known labels: {', '.join(self.known)}"
        )


class CsvSchemaError(ArchmatError):
    """CSV input does not match the documented dataset schema."""


class GeometryError(ArchmatError):
    """Lattice geometry violates a physical precondition."""


class DensityError(GeometryError):
    """Relative density reached or exceeded 1 (solid material)."""


class MechanismError(ArchmatError):
    """The constrained frame system is singular (zero-energy mechanism)."""


class NumericalError(ArchmatError):
    """A solve produced non-finite values or failed to converge."""


class SingularStiffnessError(NumericalError):
    """Effective stiffness matrix is not invertible."""


class DegenerateTargetError(ArchmatError):
    """A statistic is undefined because the target vector is constant."""


class SlotConflictError(ArchmatError):
    """A model slot is already being trained by another request."""


class UnknownSlotError(ArchmatError):
    """Requested model slot does not exist in the registry."""
