# models/ideal.py
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

from models.errors import EmptyInputError
from models.ring import Polynomial, PolynomialRing


@dataclass(frozen=True)
class IdealPresentation:
    """Generators plus, once certified, the reduced Groebner basis under `ring.order`"""

    ring: PolynomialRing
    generators: Tuple[Polynomial, ...]
    basis: Optional[Tuple[Polynomial, ...]] = None

    @classmethod
    def of(cls, generators: Sequence[Polynomial], ring: Optional[PolynomialRing] = None) -> "IdealPresentation":
        gens = tuple(g for g in generators if not g.is_zero())
        if ring is None:
            if not gens:
                raise EmptyInputError("Cannot infer the ring of an empty generator list")
            ring = gens[0].ring
        for g in gens:
            if g.ring != ring:
                g._check(ring.zero())
        return cls(ring, gens)

    @property
    def certified(self) -> bool:
        return self.basis is not None

    def with_basis(self, basis: Sequence[Polynomial]) -> "IdealPresentation":
        return replace(self, basis=tuple(basis))

    def leading_monomials(self) -> list:
        if self.basis is None:
            raise EmptyInputError("Ideal has no certified basis yet")
        return [g.leading_monomial for g in self.basis]


@dataclass(frozen=True)
class SPairWitness:
    first: int
    second: int
    remainder: Polynomial

    def to_dict(self) -> dict:
        return {"pair": [self.first, self.second], "remainder": str(self.remainder)}


@dataclass(frozen=True)
class GBReport:
    is_gb: bool
    pairs_examined: int
    reduction_steps: int
    coprime_skipped: int = 0
    witness: Optional[SPairWitness] = None

    def __post_init__(self):
        if (self.witness is None) != self.is_gb:
            raise ValueError("A witness is present exactly when the set is not a Groebner basis")

    def to_dict(self) -> dict:
        return {
            "is_gb": self.is_gb,
            "pairs_examined": self.pairs_examined,
            "coprime_skipped": self.coprime_skipped,
            "reduction_steps": self.reduction_steps,
            "witness": self.witness.to_dict() if self.witness else None,
        }
