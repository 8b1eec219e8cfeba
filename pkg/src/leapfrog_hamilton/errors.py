from __future__ import annotations

from typing import Any


class LeapfrogError(Exception):
    """Root of every error raised by leapfrog_hamilton."""


class ConfigError(LeapfrogError, ValueError):
    pass


class InstanceTooLarge(LeapfrogError):
    pass


# planar_code / map input


class PlanarCodeError(LeapfrogError, ValueError):
    pass


class MissingHeader(PlanarCodeError):
    pass


class TruncatedRecord(PlanarCodeError):
    pass


class NonSimpleGraph(PlanarCodeError):
    pass


class InconsistentAdjacency(PlanarCodeError):
    pass


class VertexCountOverflow(PlanarCodeError):
    pass


class MapError(LeapfrogError, ValueError):
    pass


class MalformedMap(MapError):
    pass


class DegreeTooLow(MapError):
    pass


# fullerene validation


class FullereneError(LeapfrogError, ValueError):
    pass


class NotCubic(FullereneError):
    pass


class BadFaceSize(FullereneError):
    pass


class Not3Connected(FullereneError):
    pass


class PentagonCountMismatch(FullereneError):
    pass


# ear decompositions


class EarDecompositionError(LeapfrogError):
    pass


class NotAdjacent(EarDecompositionError):
    pass


class NotHexagon(EarDecompositionError):
    pass


class NotPentagon(EarDecompositionError):
    pass


class NoHexagon(EarDecompositionError):
    pass


class EarTooLong(EarDecompositionError):
    pass


class DanglingEar(EarDecompositionError):
    pass


# stable-tree decompositions


class DecompositionError(LeapfrogError):
    pass


class NotADecomposition(DecompositionError):
    pass


class NotSameComponent(DecompositionError):
    pass


class NoInternalEars(DecompositionError):
    pass


class InvariantViolation(DecompositionError):
    pass


class WrongResidue(LeapfrogError):
    """n is not congruent to 2 mod 4, so no 2^k certificate exists."""


# cycles


class HamiltonError(LeapfrogError):
    pass


class NotTwoRegular(HamiltonError):
    pass


class Disconnected(HamiltonError):
    pass


class NotSpanning(HamiltonError):
    pass


class Finding(LeapfrogError):
    """An observed contradiction of a claim the construction relies on.

    Findings are reported, never skipped: the CLI turns them into a report
    record and a nonzero exit status.
    """

    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        super().__init__(message)
        self.details: dict[str, Any] = dict(details or {})

    @property
    def name(self) -> str:
        return type(self).__name__

    def record(self) -> dict[str, Any]:
        return {"finding": self.name, "message": str(self), "details": self.details}


class NoNiceDecompositionFound(Finding):
    pass


class ParityViolation(Finding):
    pass


class CandidateValidationFailure(Finding):
    pass


class ConnectorShortage(Finding):
    pass


class ClaimViolation(Finding):
    pass


class CycleCollision(Finding):
    pass


class CycleVerificationFailure(Finding):
    pass
