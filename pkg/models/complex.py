# models/complex.py
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from models.errors import StructuralError

Facet = Tuple[int, ...]
Interval = Tuple[int, int]


@dataclass(frozen=True)
class SimplicialComplex:
    """Facets as sorted label tuples; `rows` is the ambient row count m"""

    rows: int
    facets: Tuple[Facet, ...]
    universe: Tuple[int, ...] = ()

    @classmethod
    def from_facets(cls, rows: int, facets: Iterable[Iterable[int]],
                    universe: Optional[Iterable[int]] = None, min_size: int = 1) -> "SimplicialComplex":
        normalized = sorted({tuple(sorted(set(int(v) for v in F))) for F in facets})
        if rows < 1:
            raise StructuralError("Row count must be positive", rows=rows)
        if not normalized:
            raise StructuralError("A complex needs at least one facet")
        for F in normalized:
            if not F or F[0] < 1:
                raise StructuralError("Vertex labels must be positive integers", facet=list(F))
            if not min_size <= len(F) <= rows:
                raise StructuralError(f"Facet sizes must lie between {min_size} and m={rows}",
                                      facet=list(F), size=len(F))
        as_sets = [set(F) for F in normalized]
        for a, b in combinations(range(len(normalized)), 2):
            if as_sets[a] <= as_sets[b] or as_sets[b] <= as_sets[a]:
                raise StructuralError("No facet may contain another",
                                      facets=[list(normalized[a]), list(normalized[b])])
        extra = tuple(sorted(set(universe or ())))
        return cls(rows, tuple(normalized), extra)

    @property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.universe).union(*map(set, self.facets))))

    @property
    def dimension(self) -> int:
        return max(len(F) for F in self.facets) - 1

    @property
    def is_pure(self) -> bool:
        return len({len(F) for F in self.facets}) == 1

    @property
    def max_label(self) -> int:
        return max(self.vertices)

    def relabel(self, mapping: Dict[int, int]) -> "SimplicialComplex":
        return SimplicialComplex.from_facets(
            self.rows, [[mapping.get(v, v) for v in F] for F in self.facets],
            [mapping.get(v, v) for v in self.universe],
        )

    def to_dict(self) -> dict:
        return {"rows": self.rows, "facets": [list(F) for F in self.facets]}


@dataclass(frozen=True)
class Clique:
    """Full k-skeleton on `vertices`; every (k+1)-subset is a facet of the parent"""

    vertices: Tuple[int, ...]
    dim: int

    @property
    def facet_size(self) -> int:
        return self.dim + 1

    def facets(self) -> List[Facet]:
        return list(combinations(self.vertices, self.dim + 1))

    def intersection_facets(self, other: "Clique") -> List[Facet]:
        shared = tuple(sorted(set(self.vertices) & set(other.vertices)))
        size = min(self.facet_size, other.facet_size, len(shared))
        return list(combinations(shared, size)) if size else []

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices), "dim": self.dim}


@dataclass(frozen=True)
class CliqueDecomposition:
    cliques: Tuple[Clique, ...]

    def __len__(self):
        return len(self.cliques)

    def __iter__(self):
        return iter(self.cliques)

    def to_dict(self) -> list:
        return [c.to_dict() for c in self.cliques]


@dataclass(frozen=True)
class ClosedWitness:
    first: Facet
    second: Facet
    k: int
    l: int

    def to_dict(self) -> dict:
        return {"B": list(self.first), "C": list(self.second), "k": self.k, "l": self.l,
                "vertex": self.first[self.k - 1]}


@dataclass(frozen=True)
class ClosednessResult:
    closed: bool
    witness: Optional[ClosedWitness] = None

    def to_dict(self) -> dict:
        return {"closed": self.closed, "witness": self.witness.to_dict() if self.witness else None}


@dataclass(frozen=True)
class BlockComponent:
    """A block adjacent complex; blocks are 1-based position intervals in `vertices`"""

    vertices: Tuple[int, ...]
    blocks: Tuple[Interval, ...]
    overlap: int = 0

    @property
    def size(self) -> int:
        return len(self.vertices)

    def label(self, position: int) -> int:
        return self.vertices[position - 1]

    def labels(self, interval: Interval) -> Tuple[int, ...]:
        start, end = interval
        return self.vertices[start - 1:end]

    def large_blocks(self, rows: int) -> List[Interval]:
        return [b for b in self.blocks if b[1] - b[0] + 1 > rows]

    def facets(self, rows: int) -> List[Facet]:
        return sorted({F for b in self.blocks for F in combinations(self.labels(b), rows)})

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "blocks": [{"positions": list(b), "labels": list(self.labels(b))} for b in self.blocks],
            "overlap_with_previous": self.overlap,
        }


@dataclass(frozen=True)
class BlockStructure:
    rows: int
    components: Tuple[BlockComponent, ...]

    def facets(self) -> List[Facet]:
        return sorted({F for c in self.components for F in c.facets(self.rows)})

    @property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(sorted({v for c in self.components for v in c.vertices}))

    def to_dict(self) -> dict:
        return {"rows": self.rows, "components": [c.to_dict() for c in self.components]}


@dataclass(frozen=True)
class IntersectionGraph:
    size: int
    edges: Tuple[Tuple[int, int], ...]
    shared: Dict[Tuple[int, int], Tuple[int, ...]] = field(default_factory=dict, compare=False, hash=False)
    is_forest: bool = True
    is_cactus: bool = True
    is_connected: bool = True

    def to_dict(self) -> dict:
        return {
            "vertices": list(range(1, self.size + 1)),
            "edges": [list(e) for e in self.edges],
            "shared_vertices": {f"{i}-{j}": list(v) for (i, j), v in self.shared.items()},
            "is_forest": self.is_forest,
            "is_tree": self.is_forest and self.is_connected,
            "is_cactus": self.is_cactus,
            "is_connected": self.is_connected,
        }


@dataclass(frozen=True)
class PairCheck:
    pair: Tuple[int, int]
    shared: Tuple[int, ...]
    cond_b: bool
    cond_c: bool
    satisfied_by: Tuple[dict, ...] = ()

    def to_dict(self) -> dict:
        return {"pair": list(self.pair), "shared": list(self.shared), "cond_b": self.cond_b,
                "cond_c": self.cond_c, "satisfied_by": list(self.satisfied_by)}


@dataclass(frozen=True)
class ForestReport:
    cond_a: bool
    cond_b: bool
    cond_c: bool
    pairs: Tuple[PairCheck, ...]
    failing_triples: Tuple[Tuple[int, int, int], ...] = ()

    @property
    def passed(self) -> bool:
        return self.cond_a and self.cond_b and self.cond_c

    def failing_pairs(self) -> List[PairCheck]:
        return [p for p in self.pairs if not (p.cond_b and p.cond_c)]

    def to_dict(self) -> dict:
        return {
            "cond_a": self.cond_a,
            "cond_b": self.cond_b,
            "cond_c": self.cond_c,
            "failing_triples": [list(t) for t in self.failing_triples],
            "pairs": [p.to_dict() for p in self.pairs],
        }


def positions_of(vertices: Sequence[int]) -> Dict[int, int]:
    return {v: pos for pos, v in enumerate(vertices, start=1)}
