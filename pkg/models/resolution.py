# models/resolution.py
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from models.ring import Monomial

BettiKey = Tuple[int, int]


@dataclass(frozen=True)
class GradedBettiTable:
    """Graded Betti numbers of a quotient R/I.

    `entries[(h, d)]` is the rank of R(-d) in homological position h; (0, 0) = 1
    always. The ideal-indexed numbers are beta_i(I) = entries[(i + 1, d)].
    """

    entries: Mapping[BettiKey, int]
    multigraded: Tuple[Tuple[int, Monomial, int], ...] = field(default=(), compare=False)

    def __post_init__(self):
        cleaned = {k: v for k, v in self.entries.items() if v}
        if cleaned.get((0, 0)) != 1:
            raise ValueError("Quotient tables carry rank 1 at (0, 0)")
        if any(h < 0 or d < 0 or v < 0 for (h, d), v in cleaned.items()):
            raise ValueError("Betti entries are non-negative")
        object.__setattr__(self, "entries", dict(sorted(cleaned.items())))

    @classmethod
    def unit(cls) -> "GradedBettiTable":
        return cls({(0, 0): 1})

    @classmethod
    def principal(cls, degree: int) -> "GradedBettiTable":
        return cls({(0, 0): 1, (1, degree): 1})

    @classmethod
    def from_ideal_betti(cls, ideal_betti: Mapping[BettiKey, int]) -> "GradedBettiTable":
        entries = {(i + 1, d): v for (i, d), v in ideal_betti.items()}
        entries[(0, 0)] = 1
        return cls(entries)

    def rank(self, h: int, d: int) -> int:
        return self.entries.get((h, d), 0)

    def ideal_view(self) -> Dict[BettiKey, int]:
        return {(h - 1, d): v for (h, d), v in self.entries.items() if h >= 1}

    def totals(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for (h, _), v in self.entries.items():
            out[h] = out.get(h, 0) + v
        return out

    @property
    def length(self) -> int:
        return max(h for h, _ in self.entries)

    def to_json(self) -> List[dict]:
        return [{"h": h, "d": d, "rank": v} for (h, d), v in self.entries.items()]

    def to_dict(self) -> dict:
        return {"convention": "quotient R/I, (h, d) = rank of R(-d) at position h", "entries": self.to_json()}

    def render(self) -> str:
        """Betti diagram: column h, row d - h"""
        hs = range(self.length + 1)
        offsets = sorted({d - h for h, d in self.entries})
        width = max(len(str(v)) for v in list(self.entries.values()) + list(self.totals().values()))
        width = max(width, len(str(self.length)))

        def cell(v) -> str:
            return str(v).rjust(width)

        lines = ["       " + " ".join(cell(h) for h in hs),
                 "total: " + " ".join(cell(self.totals().get(h, 0)) for h in hs)]
        for r in offsets:
            row = [self.entries.get((h, h + r)) for h in hs]
            lines.append(f"{r:>5}: " + " ".join(cell(v) if v else cell(".") for v in row))
        return "\n".join(lines)


@dataclass(frozen=True)
class HilbertSummary:
    """H(t) = Q(t) / (1 - t)^dimension with (1 - t) not dividing Q"""

    numerator: Tuple[int, ...]
    dimension: int
    nvars: int

    @property
    def multiplicity(self) -> int:
        return sum(self.numerator)

    @property
    def height(self) -> int:
        return self.nvars - self.dimension

    def to_dict(self) -> dict:
        return {
            "numerator": list(self.numerator),
            "dim": self.dimension,
            "e": self.multiplicity,
            "height": self.height,
            "nvars": self.nvars,
        }


@dataclass(frozen=True)
class InvariantCheck:
    name: str
    formula: Optional[object]
    computed: Optional[object]
    error: Optional[str] = None

    @property
    def agree(self) -> Optional[bool]:
        if self.error is not None:
            return None
        return self.formula == self.computed

    def to_dict(self) -> dict:
        return {"name": self.name, "formula": self.formula, "computed": self.computed,
                "agree": self.agree, "error": self.error}
