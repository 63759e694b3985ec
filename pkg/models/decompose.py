# models/decompose.py
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from models.complex import BlockComponent, Interval
from models.detideal import GeneratorSet

IntervalSequence = Tuple[Interval, ...]


def sequence_violation(intervals: Sequence[Interval], component: BlockComponent, rows: int) -> Optional[Tuple[int, str]]:
    """First violated prime-sequence condition as (number, message), or None"""
    m, last = rows, component.size
    if not intervals:
        return 1, "sequence is empty"
    starts = [a for a, _ in intervals]
    ends = [b for _, b in intervals]
    if starts[0] != 1 or ends[-1] != last:
        return 1, f"intervals must start at position 1 and end at position {last}"
    if any(x >= y for x, y in zip(starts, starts[1:])) or any(x >= y for x, y in zip(ends, ends[1:])):
        return 1, "interval endpoints must be strictly increasing"
    t = len(intervals)
    for idx, (a, b) in enumerate(intervals):
        need = m - 1 if idx in (0, t - 1) else m
        if b - a < need:
            return 2, f"interval [{a},{b}] is narrower than b-a >= {need}"
    for (_, b), (a, _) in zip(intervals, intervals[1:]):
        if not 0 <= b - a <= m - 2:
            return 3, f"overlap b-a = {b - a} outside [0, {m - 2}]"
    for s, e in component.large_blocks(m):
        if not any(a <= s and e <= b for a, b in intervals):
            return 4, f"sub-block [{s},{e}] lies in no interval"
    return None


@dataclass(frozen=True)
class PrimeSequence:
    """One interval list per block component, in component order"""

    parts: Tuple[IntervalSequence, ...]

    def describe(self, components: Sequence[BlockComponent]) -> List[dict]:
        return [
            {
                "component": idx + 1,
                "positions": [list(iv) for iv in part],
                "labels": [[comp.label(a), comp.label(b)] for a, b in part],
            }
            for idx, (part, comp) in enumerate(zip(self.parts, components))
        ]


@dataclass(frozen=True)
class Candidate:
    index: int
    generators: GeneratorSet
    sequence: Optional[PrimeSequence] = None
    origin: str = "enumerated"

    def to_dict(self, components: Sequence[BlockComponent] = ()) -> dict:
        return {
            "index": self.index,
            "origin": self.origin,
            "sequence": self.sequence.describe(components) if self.sequence else None,
            "minors": self.generators.brackets(),
            "generator_count": len(self.generators),
        }


@dataclass(frozen=True)
class VerificationResult:
    containment: Tuple[bool, ...]
    containment_matrix: Tuple[Tuple[bool, ...], ...]
    pruned: Tuple[int, ...]
    intersection_equal: Optional[bool]
    timings_ms: Dict[str, float] = field(default_factory=dict, compare=False)
    error: Optional[str] = None

    @property
    def survivors(self) -> Tuple[int, ...]:
        return tuple(i for i in range(len(self.containment)) if i not in self.pruned)

    @property
    def minimal_as_given(self) -> bool:
        return not self.pruned

    @property
    def pairwise_incomparable(self) -> bool:
        s = self.survivors
        return not any(self.containment_matrix[i][j] for i in s for j in s if i != j)

    @property
    def verdict(self) -> bool:
        return (self.error is None
                and all(self.containment[i] for i in self.survivors)
                and self.intersection_equal is True
                and self.pairwise_incomparable)

    def to_dict(self) -> dict:
        return {
            "verdict": "pass" if self.verdict else "fail",
            "containment": list(self.containment),
            "intersection_equal": self.intersection_equal,
            "minimality_matrix": [list(row) for row in self.containment_matrix],
            "minimal_as_given": self.minimal_as_given,
            "pruned": list(self.pruned),
            "survivors": list(self.survivors),
            "timings_ms": self.timings_ms,
            "error": self.error,
        }


@dataclass(frozen=True)
class DecompositionReport:
    mode: str
    rows: int
    components: Tuple[BlockComponent, ...]
    candidates: Tuple[Candidate, ...]
    verification: Optional[VerificationResult] = None
    graph: Optional[dict] = None
    forest_conditions: Optional[dict] = None
    groups: Tuple[Tuple[int, ...], ...] = ()
    notes: Tuple[str, ...] = ()
    requested_mode: Optional[str] = None
    timings_ms: Dict[str, float] = field(default_factory=dict, compare=False)

    @property
    def passed(self) -> Optional[bool]:
        return None if self.verification is None else self.verification.verdict

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "requested_mode": self.requested_mode or self.mode,
            "rows": self.rows,
            "components": [c.to_dict() for c in self.components],
            "groups": [list(g) for g in self.groups],
            "intersection_graph": self.graph,
            "forest_conditions": self.forest_conditions,
            "candidate_count": len(self.candidates),
            "candidates": [c.to_dict(self.components) for c in self.candidates],
            "verification": self.verification.to_dict() if self.verification else None,
            "notes": list(self.notes),
            "timings_ms": self.timings_ms,
        }
