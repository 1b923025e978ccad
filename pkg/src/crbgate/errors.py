"""Exception types shared across the toolkit."""


class CrbGateError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(CrbGateError):
    """Input data violates a documented invariant or schema."""


class DomainError(CrbGateError):
    """Numeric argument outside its mathematical domain."""


class DegenerateDistance(CrbGateError):
    """Target is closer to an anchor than the 1 cm singularity guard."""

    def __init__(self, anchor_id: str, distance: float):
        super().__init__(
            f"target within {distance:.4g} m of anchor {anchor_id!r} "
            "(minimum 0.01 m)"
        )
        self.anchor_id = anchor_id
        self.distance = distance


class NonFiniteDensity(CrbGateError):
    """log-density returned a non-finite value at a sampled point."""


class SingularFim(CrbGateError):
    """Information matrix is not invertible: geometry is unlocalizable."""

    def __init__(self, eigenvalues):
        super().__init__(
            f"information matrix is singular (eigenvalues {list(eigenvalues)})"
        )
        self.eigenvalues = tuple(float(v) for v in eigenvalues)


class UnknownAnchor(CrbGateError):
    """Measurement references an anchor id that is not in the scene."""


class InsufficientAnchors(CrbGateError):
    """Fewer than three usable readings: 2D position is not estimable."""


class BehindCamera(CrbGateError):
    """Point projects at or behind the optical center."""


class RegionOutsideImage(CrbGateError):
    """Projected region does not intersect the image rectangle."""


class StreamOrderViolation(CrbGateError):
    """Measurement stream timestamps decreased."""


class LengthMismatch(CrbGateError):
    """Prediction and ground-truth sequences differ in length."""


class EmptyCurve(CrbGateError):
    """Success curve has too few points to integrate."""


class DegenerateWaypoints(CrbGateError):
    """Trajectory waypoints describe a zero-length path."""


class UnknownScene(CrbGateError):
    """No stored scene with the requested id."""


class StaleRevision(CrbGateError):
    """Scene was modified since the revision the client saw."""

    def __init__(self, scene_id: str, expected: int, current: int):
        super().__init__(
            f"scene {scene_id}: client revision {expected} "
            f"but store is at {current}"
        )
        self.scene_id = scene_id
        self.expected = expected
        self.current = current
