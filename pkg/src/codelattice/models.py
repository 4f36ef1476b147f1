"""Shared data models for the code-lattice toolkit."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional


class CodeKind(Enum):
    """Parity class of a binary self-dual code."""

    DOUBLY_EVEN = "doubly-even"
    SINGLY_EVEN = "singly-even"


class Z4Type(Enum):
    """Verdict of the Z4 self-duality check."""

    TYPE_I = "I"
    TYPE_II = "II"
    NOT_SELF_DUAL = "not-self-dual"


class FrameType(Enum):
    """Position of a frame relative to its lattice."""

    A = "A"
    B = "B"
    C = "C"
    INVALID = "invalid"


class JacobiKind(Enum):
    """Named q-series with fixed expansions."""

    THETA2 = "theta2"
    THETA3 = "theta3"
    THETA4 = "theta4"
    DELTA8 = "delta8"


class LatticeConstruction(Enum):
    """Code-to-lattice constructions."""

    LA = "la"
    LB = "lb"
    LC = "lc"
    LODD = "lodd"
    A4 = "a4"


class ValidationError(Exception):
    """Raised when model validation fails."""


class ComputationError(Exception):
    """Base class for failures of a mathematical operation."""


@dataclass(frozen=True)
class WeightDistribution:
    """Number of codewords (or vectors) of each weight."""

    counts: dict[int, int] = field(default_factory=dict)

    def validate(self) -> None:
        """Validate the distribution.

        Raises:
            ValidationError: If a weight or count is negative.
        """
        for weight, count in self.counts.items():
            if weight < 0:
                raise ValidationError(f"negative weight {weight}")
            if count < 0:
                raise ValidationError(f"negative count {count} at weight {weight}")

    def __post_init__(self) -> None:
        """Validate after initialization."""
        self.validate()

    def __getitem__(self, weight: int) -> int:
        return self.counts.get(weight, 0)

    @property
    def total(self) -> int:
        """Total number of words counted."""
        return sum(self.counts.values())

    def min_nonzero_weight(self) -> Optional[int]:
        """Smallest positive weight with a nonzero count, or None."""
        weights = [w for w, c in self.counts.items() if w > 0 and c > 0]
        return min(weights) if weights else None

    def nonzero(self) -> dict[int, int]:
        """The support of the distribution in increasing weight order."""
        return {w: self.counts[w] for w in sorted(self.counts) if self.counts[w]}

    def to_json(self) -> dict[str, int]:
        """JSON map {weight: count} with string keys."""
        return {str(w): c for w, c in self.nonzero().items()}


@dataclass
class RunManifest:
    """Record of one command-line invocation."""

    command: str
    inputs: dict[str, str] = field(default_factory=dict)
    parameters: dict[str, Any] = field(default_factory=dict)
    outputs: list[str] = field(default_factory=list)
    wall_time: float = 0.0
    threads: int = 1

    def validate(self) -> None:
        """Validate the manifest data.

        Raises:
            ValidationError: If validation fails.
        """
        if not isinstance(self.command, str) or not self.command:
            raise ValidationError("command must be a non-empty string")
        if self.threads < 1:
            raise ValidationError("threads must be at least 1")
        if self.wall_time < 0:
            raise ValidationError("wall_time must be nonnegative")

    def __post_init__(self) -> None:
        """Validate after initialization."""
        self.validate()

    def to_dict(self) -> dict[str, Any]:
        """Serializable form, keys in a fixed order."""
        return {
            "command": self.command,
            "inputs": dict(sorted(self.inputs.items())),
            "parameters": self.parameters,
            "outputs": list(self.outputs),
            "wall_time": round(self.wall_time, 3),
            "threads": self.threads,
        }
