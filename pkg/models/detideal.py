# models/detideal.py
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Tuple

from models.errors import DocumentError, LayoutError
from models.ideal import IdealPresentation
from models.ring import Polynomial, PolynomialRing

_BRACKET = re.compile(r"^\[\s*([\d,\s]+?)\s*\|\s*([\d,\s]+?)\s*\]$")


def _indices(text: str) -> Tuple[int, ...]:
    text = text.strip()
    if "," in text or " " in text:
        return tuple(int(p) for p in re.split(r"[,\s]+", text) if p)
    return tuple(int(ch) for ch in text)


@dataclass(frozen=True, order=True)
class MinorSpec:
    rows: Tuple[int, ...]
    cols: Tuple[int, ...]

    def __post_init__(self):
        rows, cols = tuple(self.rows), tuple(self.cols)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        if not rows or len(rows) != len(cols):
            raise LayoutError("Minor needs equally many rows and columns", rows=list(rows), cols=list(cols))
        for seq in (rows, cols):
            if seq[0] < 1 or any(a >= b for a, b in zip(seq, seq[1:])):
                raise LayoutError("Minor indices must be positive and strictly increasing",
                                  rows=list(rows), cols=list(cols))

    @property
    def size(self) -> int:
        return len(self.rows)

    @classmethod
    def parse(cls, text: str) -> "MinorSpec":
        match = _BRACKET.match(text.strip())
        if not match:
            raise DocumentError("Minor must look like [12|34] or [1,2|10,11]", minor=text)
        return cls(_indices(match.group(1)), _indices(match.group(2)))

    def __str__(self) -> str:
        wide = max(self.rows + self.cols) > 9
        sep = "," if wide else ""
        return f"[{sep.join(map(str, self.rows))}|{sep.join(map(str, self.cols))}]"


class Provenance(str, Enum):
    FACET = "facet_ideal"
    INTERVAL = "prime_item_i"
    OVERLAP = "prime_item_ii"
    MIXED = "mixed"


@dataclass(frozen=True)
class GeneratorSet:
    ring: PolynomialRing
    specs: Tuple[MinorSpec, ...]
    polynomials: Tuple[Polynomial, ...]
    provenance: Tuple[Provenance, ...]

    @classmethod
    def empty(cls, ring: PolynomialRing) -> "GeneratorSet":
        return cls(ring, (), (), ())

    def __len__(self):
        return len(self.specs)

    @property
    def tag(self) -> Provenance:
        kinds = set(self.provenance)
        return kinds.pop() if len(kinds) == 1 else Provenance.MIXED

    def union(self, *others: "GeneratorSet") -> "GeneratorSet":
        seen = set(self.specs)
        specs, polys, prov = list(self.specs), list(self.polynomials), list(self.provenance)
        for other in others:
            for spec, poly, origin in zip(other.specs, other.polynomials, other.provenance):
                if spec not in seen:
                    seen.add(spec)
                    specs.append(spec)
                    polys.append(poly)
                    prov.append(origin)
        return GeneratorSet(self.ring, tuple(specs), tuple(polys), tuple(prov))

    def ideal(self) -> IdealPresentation:
        return IdealPresentation.of(self.polynomials, self.ring)

    def brackets(self) -> list:
        return [str(s) for s in self.specs]

    def to_dict(self) -> dict:
        return {"tag": self.tag.value, "minors": self.brackets(), "count": len(self.specs)}


def build_generator_set(ring: PolynomialRing, items: Iterable[Tuple[MinorSpec, Polynomial, Provenance]]) -> GeneratorSet:
    seen = set()
    specs, polys, prov = [], [], []
    for spec, poly, origin in items:
        if spec in seen:
            continue
        seen.add(spec)
        specs.append(spec)
        polys.append(poly)
        prov.append(origin)
    return GeneratorSet(ring, tuple(specs), tuple(polys), tuple(prov))
