"""Result records shared by the verifier, the analysis layer and reports."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .interval import Interval


class Verdict(str, enum.Enum):
    PROVED = "PROVED"
    REFUTED = "REFUTED"
    UNDECIDED = "UNDECIDED"

    def __str__(self):
        return self.value


@dataclass
class VerdictRecord:
    """Outcome of one rigorous check.

    ``margin`` encloses the infimum of (lhs - rhs) over the explored region.
    ``asserted`` is False for informational checks whose failure is not a
    failure of the run (they are still reported).
    """

    claim: str
    verdict: Verdict
    margin: Interval
    boxes_explored: int = 0
    tail_handled: bool = False
    strict: bool = True
    tail_window: str = ""
    witness: tuple | None = None
    notes: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    asserted: bool = True
    seconds: float = 0.0

    @property
    def proved(self) -> bool:
        return self.verdict is Verdict.PROVED

    def summary(self) -> str:
        return (f"{self.claim:<34} {self.verdict.value:<9} margin={self.margin} "
                f"boxes={self.boxes_explored}")
