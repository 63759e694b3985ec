# models/documents.py
from pathlib import Path
from typing import List, Optional, Union

import orjson
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from models.complex import SimplicialComplex
from models.errors import ConfigurationError, DocumentError
from models.ring import TermOrder, VariableLayout

OrderSpec = Union[str, List[int]]


class DocumentOptions(BaseModel):
    model_config = ConfigDict(extra="forbid")

    field: Optional[str] = None
    order: Optional[OrderSpec] = None
    limit_steps: Optional[int] = Field(None, ge=1)
    limit_perm: Optional[int] = Field(None, ge=1)
    seed: Optional[int] = None
    trials: Optional[int] = Field(None, ge=0)
    taylor_cap: Optional[int] = Field(None, ge=1)


class ComplexDocument(BaseModel):
    """A simplicial complex with its ambient row count and run options"""

    model_config = ConfigDict(extra="forbid")

    rows: int = Field(..., ge=1)
    facets: List[List[int]] = Field(..., min_length=1)
    vertices: Optional[List[int]] = None
    name: Optional[str] = None
    options: DocumentOptions = Field(default_factory=DocumentOptions)

    @field_validator("facets")
    @classmethod
    def facets_are_labelled(cls, facets: List[List[int]]) -> List[List[int]]:
        for F in facets:
            if len(F) < 2:
                raise ValueError(f"facet {F} has fewer than two vertices")
            if len(set(F)) != len(F):
                raise ValueError(f"facet {F} repeats a vertex")
            if min(F) < 1:
                raise ValueError(f"facet {F} has a non-positive label")
        return facets

    @field_validator("vertices")
    @classmethod
    def vertices_are_positive(cls, vertices: Optional[List[int]]) -> Optional[List[int]]:
        if vertices is not None and any(v < 1 for v in vertices):
            raise ValueError("vertex labels must be positive")
        return vertices

    @model_validator(mode="after")
    def facets_fit_rows(self) -> "ComplexDocument":
        for F in self.facets:
            if len(F) > self.rows:
                raise ValueError(f"facet {F} has more than m={self.rows} vertices")
        return self

    @classmethod
    def parse(cls, text: Union[str, bytes]) -> "ComplexDocument":
        try:
            data = orjson.loads(text)
        except orjson.JSONDecodeError as e:
            raise DocumentError(f"Malformed JSON: {e.msg}", line=e.lineno, column=e.colno, position=e.pos)
        return cls.from_data(data)

    @classmethod
    def from_data(cls, data) -> "ComplexDocument":
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            problems = [{"loc": [str(p) for p in err["loc"]], "msg": err["msg"]} for err in e.errors()]
            raise DocumentError("Document does not match the ComplexDocument schema", problems=problems)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ComplexDocument":
        try:
            text = Path(path).read_bytes()
        except OSError as e:
            raise DocumentError(f"Cannot read document: {e.strerror}", path=str(path))
        return cls.parse(text)

    def dumps(self) -> bytes:
        return orjson.dumps(self.model_dump(exclude_none=True))

    def to_complex(self) -> SimplicialComplex:
        return SimplicialComplex.from_facets(self.rows, self.facets, self.vertices, min_size=2)

    def settings_overrides(self) -> dict:
        o = self.options
        return {"field": o.field, "step_limit": o.limit_steps, "perm_limit": o.limit_perm,
                "seed": o.seed, "trials": o.trials, "taylor_cap": o.taylor_cap}


def parse_order(spec: Optional[OrderSpec], layout: VariableLayout) -> Optional[TermOrder]:
    """Comma-separated 0-based variable ids (largest first), or "cols:" followed by a column permutation"""
    if spec is None:
        return None
    if isinstance(spec, str):
        text = spec.strip()
        try:
            if text.startswith("cols:"):
                cols = [int(c) for c in text[5:].split(",") if c.strip()]
                return TermOrder.from_column_permutation(layout, cols)
            spec = [int(v) for v in text.split(",") if v.strip()]
        except ValueError:
            raise ConfigurationError("Unreadable order", order=text)
    if len(spec) != layout.nvars:
        raise ConfigurationError(f"Order must list all {layout.nvars} variables", order=list(spec))
    return TermOrder(tuple(spec))
