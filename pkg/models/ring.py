# models/ring.py
"""Exact polynomial arithmetic over the entries x[i,j] of a generic m x n matrix."""
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from fractions import Fraction
from random import Random
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

from sympy import isprime
from sympy.polys.monomials import monomial_deg, monomial_mul

from models.errors import ConfigurationError, EmptyInputError, LayoutError

Monomial = Tuple[int, ...]
Coefficient = Union[int, Fraction]
Term = Tuple[Coefficient, Monomial]

DEFAULT_MODULUS = 32003


@dataclass(frozen=True)
class VariableLayout:
    """Row-major variable ids for an m x n matrix, plus `aux` trailing auxiliary variables"""

    rows: int
    cols: int
    aux: int = 0

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1 or self.aux < 0:
            raise LayoutError("Layout needs positive dimensions", rows=self.rows, cols=self.cols, aux=self.aux)

    @property
    def matrix_vars(self) -> int:
        return self.rows * self.cols

    @property
    def nvars(self) -> int:
        return self.rows * self.cols + self.aux

    def index(self, i: int, j: int) -> int:
        if not (1 <= i <= self.rows and 1 <= j <= self.cols):
            raise LayoutError("Matrix position out of bounds", row=i, col=j, rows=self.rows, cols=self.cols)
        return (i - 1) * self.cols + (j - 1)

    def aux_index(self, k: int = 0) -> int:
        if not 0 <= k < self.aux:
            raise LayoutError("Auxiliary variable out of bounds", aux=k, available=self.aux)
        return self.matrix_vars + k

    def position(self, var: int) -> Optional[Tuple[int, int]]:
        if var >= self.matrix_vars:
            return None
        return var // self.cols + 1, var % self.cols + 1

    def name(self, var: int) -> str:
        pos = self.position(var)
        if pos is None:
            k = var - self.matrix_vars
            return "t" if self.aux == 1 else f"t{k}"
        return f"x[{pos[0]},{pos[1]}]"

    def unit(self) -> Monomial:
        return (0,) * self.nvars

    def generator(self, var: int) -> Monomial:
        exps = [0] * self.nvars
        exps[var] = 1
        return tuple(exps)

    def with_aux(self, count: int = 1) -> "VariableLayout":
        return VariableLayout(self.rows, self.cols, self.aux + count)

    def base(self) -> "VariableLayout":
        return VariableLayout(self.rows, self.cols)


class FieldMode(str, Enum):
    RATIONAL = "rational"
    MODULAR = "modular"


@dataclass(frozen=True)
class CoefficientField:
    mode: FieldMode = FieldMode.MODULAR
    modulus: Optional[int] = DEFAULT_MODULUS

    def __post_init__(self):
        if self.mode is FieldMode.RATIONAL:
            object.__setattr__(self, "modulus", None)
            return
        if self.modulus is None or self.modulus <= 2 or not isprime(self.modulus):
            raise ConfigurationError("Modulus must be a prime greater than 2", modulus=self.modulus)

    @classmethod
    def parse(cls, spec: str) -> "CoefficientField":
        """Accepts "rational" or "prime:P" """
        text = spec.strip().lower()
        if text in ("rational", "qq"):
            return cls(FieldMode.RATIONAL)
        if text.startswith("prime:"):
            try:
                modulus = int(text.split(":", 1)[1])
            except ValueError:
                raise ConfigurationError("Unreadable modulus", field=spec)
            return cls(FieldMode.MODULAR, modulus)
        raise ConfigurationError("Field must be 'rational' or 'prime:P'", field=spec)

    @property
    def is_rational(self) -> bool:
        return self.mode is FieldMode.RATIONAL

    def __str__(self) -> str:
        return "rational" if self.is_rational else f"prime:{self.modulus}"

    def element(self, value: Coefficient) -> Coefficient:
        if self.is_rational:
            return Fraction(value)
        p = self.modulus
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise ConfigurationError("Denominator vanishes modulo p", value=str(value), modulus=p)
            return value.numerator * pow(value.denominator, -1, p) % p
        return int(value) % p

    def add(self, a: Coefficient, b: Coefficient) -> Coefficient:
        return a + b if self.is_rational else (a + b) % self.modulus

    def sub(self, a: Coefficient, b: Coefficient) -> Coefficient:
        return a - b if self.is_rational else (a - b) % self.modulus

    def mul(self, a: Coefficient, b: Coefficient) -> Coefficient:
        return a * b if self.is_rational else a * b % self.modulus

    def neg(self, a: Coefficient) -> Coefficient:
        return -a if self.is_rational else -a % self.modulus

    def sub_mul(self, a: Coefficient, b: Coefficient, c: Coefficient) -> Coefficient:
        return a - b * c if self.is_rational else (a - b * c) % self.modulus

    def inv(self, a: Coefficient) -> Coefficient:
        if a == 0:
            raise ZeroDivisionError("Zero has no inverse")
        return 1 / Fraction(a) if self.is_rational else pow(a, -1, self.modulus)

    def div(self, a: Coefficient, b: Coefficient) -> Coefficient:
        return self.mul(a, self.inv(b))

    def display(self, a: Coefficient) -> Union[int, str]:
        """Signed integer when possible, "p/q" for proper rationals"""
        if self.is_rational:
            return int(a) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        return a - self.modulus if a > self.modulus // 2 else a


class Ordering(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


@dataclass(frozen=True)
class TermOrder:
    """Lex on exponent vectors read in `perm` order; `perm[0]` is the largest variable.

    `elimination` counts leading entries of `perm` that are auxiliary variables
    ranked above every matrix variable. `graded` compares total degree first.
    """

    perm: Tuple[int, ...]
    graded: bool = False
    elimination: int = 0
    _identity: bool = field(default=False, init=False, repr=False, compare=False)

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ConfigurationError("Order permutation is not a bijection", perm=list(self.perm))
        object.__setattr__(self, "_identity", tuple(self.perm) == tuple(range(len(self.perm))))

    @property
    def nvars(self) -> int:
        return len(self.perm)

    def key(self, m: Monomial) -> tuple:
        base = m if self._identity else tuple(m[i] for i in self.perm)
        return (sum(m),) + tuple(base) if self.graded else base

    @classmethod
    def default(cls, layout: VariableLayout) -> "TermOrder":
        return cls(tuple(range(layout.nvars)))

    @classmethod
    def from_column_permutation(cls, layout: VariableLayout, cols: Sequence[int]) -> "TermOrder":
        """Row-major lex with the columns of every row ranked in the given order"""
        if sorted(cols) != list(range(1, layout.cols + 1)):
            raise ConfigurationError("Column order must permute 1..n", cols=list(cols), n=layout.cols)
        perm = [layout.index(i, j) for i in range(1, layout.rows + 1) for j in cols]
        perm.extend(range(layout.matrix_vars, layout.nvars))
        return cls(tuple(perm))

    @classmethod
    def elimination_order(cls, layout: VariableLayout, base: "TermOrder") -> "TermOrder":
        if base.graded:
            raise ConfigurationError("Elimination block needs a lex base order")
        if base.nvars != layout.matrix_vars:
            raise LayoutError("Base order does not match the matrix variables", base=base.nvars, expected=layout.matrix_vars)
        block = tuple(range(layout.matrix_vars, layout.nvars))
        return cls(block + tuple(base.perm), elimination=len(block))

    @classmethod
    def random(cls, layout: VariableLayout, rng: Random, graded: bool = False) -> "TermOrder":
        perm = list(range(layout.nvars))
        rng.shuffle(perm)
        return cls(tuple(perm), graded=graded)

    def restrict(self, layout: VariableLayout) -> "TermOrder":
        """Drop the elimination block, keeping the order on matrix variables"""
        return TermOrder(tuple(v for v in self.perm if v < layout.matrix_vars), graded=self.graded)

    def describe(self, layout: VariableLayout) -> list:
        return [layout.name(v) for v in self.perm]


def compare_monomials(a: Monomial, b: Monomial, o: TermOrder) -> Ordering:
    if len(a) != len(b) or len(a) != o.nvars:
        raise LayoutError("Monomials and order disagree on the variable count", left=len(a), right=len(b), order=o.nvars)
    ka, kb = o.key(a), o.key(b)
    if ka == kb:
        return Ordering.EQUAL
    return Ordering.GREATER if ka > kb else Ordering.LESS


@dataclass(frozen=True)
class PolynomialRing:
    layout: VariableLayout
    field: CoefficientField = CoefficientField()
    order: Optional[TermOrder] = None

    def __post_init__(self):
        if self.order is None:
            object.__setattr__(self, "order", TermOrder.default(self.layout))
        elif self.order.nvars != self.layout.nvars:
            raise LayoutError("Order covers a different variable count", order=self.order.nvars, layout=self.layout.nvars)

    @property
    def nvars(self) -> int:
        return self.layout.nvars

    def with_order(self, order: TermOrder) -> "PolynomialRing":
        return PolynomialRing(self.layout, self.field, order)

    def with_field(self, coefficient_field: CoefficientField) -> "PolynomialRing":
        return PolynomialRing(self.layout, coefficient_field, self.order)

    def eliminating(self, count: int = 1) -> "PolynomialRing":
        extended = self.layout.with_aux(count)
        return PolynomialRing(extended, self.field, TermOrder.elimination_order(extended, self.order))

    def zero(self) -> "Polynomial":
        return Polynomial(self, ())

    def constant(self, value: Coefficient) -> "Polynomial":
        return self.from_terms([(value, self.layout.unit())])

    def one(self) -> "Polynomial":
        return self.constant(1)

    def var(self, i: int, j: int) -> "Polynomial":
        return Polynomial(self, ((self.field.element(1), self.layout.generator(self.layout.index(i, j))),))

    def aux_var(self, k: int = 0) -> "Polynomial":
        return Polynomial(self, ((self.field.element(1), self.layout.generator(self.layout.aux_index(k))),))

    def monomial(self, m: Monomial, coefficient: Coefficient = 1) -> "Polynomial":
        return self.from_terms([(coefficient, m)])

    def from_terms(self, terms: Iterable[Term]) -> "Polynomial":
        acc: Dict[Monomial, Coefficient] = {}
        nvars = self.layout.nvars
        f = self.field
        for c, m in terms:
            if len(m) != nvars or min(m, default=0) < 0:
                raise LayoutError("Exponent vector does not fit the layout", exponents=list(m), nvars=nvars)
            c = f.element(c)
            acc[m] = f.add(acc[m], c) if m in acc else c
        return self.from_dict(acc, normalized=True)

    def from_dict(self, terms: Mapping[Monomial, Coefficient], normalized: bool = False) -> "Polynomial":
        f, key = self.field, self.order.key
        items = terms.items() if normalized else ((m, f.element(c)) for m, c in terms.items())
        ordered = sorted(((c, m) for m, c in items if c != 0), key=lambda t: key(t[1]), reverse=True)
        return Polynomial(self, tuple(ordered))


@dataclass(frozen=True)
class Polynomial:
    """Terms are (coefficient, monomial) pairs, strictly decreasing under `ring.order`"""

    ring: PolynomialRing
    terms: Tuple[Term, ...] = ()

    @property
    def layout(self) -> VariableLayout:
        return self.ring.layout

    @property
    def field(self) -> CoefficientField:
        return self.ring.field

    @property
    def order(self) -> TermOrder:
        return self.ring.order

    def is_zero(self) -> bool:
        return not self.terms

    def leading_term(self) -> Term:
        if not self.terms:
            raise EmptyInputError("The zero polynomial has no leading term")
        return self.terms[0]

    @property
    def leading_monomial(self) -> Monomial:
        return self.leading_term()[1]

    @property
    def leading_coefficient(self) -> Coefficient:
        return self.leading_term()[0]

    def degree(self) -> int:
        return max((monomial_deg(m) for _, m in self.terms), default=-1)

    def variables(self) -> set:
        return {v for _, m in self.terms for v, e in enumerate(m) if e}

    def as_dict(self) -> Dict[Monomial, Coefficient]:
        return {m: c for c, m in self.terms}

    def _check(self, other: "Polynomial") -> None:
        if self.ring.layout != other.ring.layout:
            raise LayoutError("Polynomials live on different layouts")
        if self.ring != other.ring:
            raise ConfigurationError("Polynomials disagree on field or term order",
                                     left=str(self.field), right=str(other.field))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return poly_add(self, other)

    def __neg__(self) -> "Polynomial":
        f = self.field
        return Polynomial(self.ring, tuple((f.neg(c), m) for c, m in self.terms))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return poly_add(self, -other)

    def __mul__(self, other: Union["Polynomial", int, Fraction]) -> "Polynomial":
        if isinstance(other, Polynomial):
            return poly_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, value: Coefficient) -> "Polynomial":
        f = self.field
        c0 = f.element(value)
        if c0 == 0:
            return self.ring.zero()
        return Polynomial(self.ring, tuple((f.mul(c, c0), m) for c, m in self.terms))

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(self.field.inv(self.leading_coefficient))

    def with_order(self, order: TermOrder) -> "Polynomial":
        if order == self.order:
            return self
        return self.ring.with_order(order).from_dict(self.as_dict(), normalized=True)

    def with_field(self, coefficient_field: CoefficientField) -> "Polynomial":
        if coefficient_field == self.field:
            return self
        if not coefficient_field.is_rational and not self.field.is_rational:
            raise ConfigurationError("Cannot move between different prime fields",
                                     source=str(self.field), target=str(coefficient_field))
        return self.ring.with_field(coefficient_field).from_terms(self.terms)

    def lift(self, ring: PolynomialRing) -> "Polynomial":
        """Embed into a ring with trailing auxiliary variables"""
        if ring.layout.base() != self.layout.base() or ring.layout.nvars < self.layout.nvars:
            raise LayoutError("Target ring does not extend this layout")
        pad = (0,) * (ring.layout.nvars - self.layout.nvars)
        return ring.from_dict({m + pad: c for c, m in self.terms}, normalized=True)

    def project(self, ring: PolynomialRing) -> "Polynomial":
        """Drop auxiliary variables; every term must be free of them"""
        n = ring.layout.nvars
        if any(any(m[n:]) for _, m in self.terms):
            raise LayoutError("Polynomial still involves auxiliary variables")
        return ring.from_dict({m[:n]: c for c, m in self.terms}, normalized=True)

    def format_monomial(self, m: Monomial) -> str:
        parts = []
        for v, e in enumerate(m):
            if e:
                name = self.layout.name(v)
                parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts) or "1"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for idx, (c, m) in enumerate(self.terms):
            value = self.field.display(c)
            negative = str(value).startswith("-")
            magnitude = str(value).lstrip("-")
            body = self.format_monomial(m)
            if body != "1":
                body = body if magnitude == "1" else f"{magnitude}*{body}"
            else:
                body = magnitude
            if idx == 0:
                out.append(f"-{body}" if negative else body)
            else:
                out.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(out)


def poly_add(f: Polynomial, g: Polynomial) -> Polynomial:
    f._check(g)
    field_ = f.field
    acc = f.as_dict()
    for c, m in g.terms:
        acc[m] = field_.add(acc[m], c) if m in acc else c
    return f.ring.from_dict(acc, normalized=True)


def poly_mul(f: Polynomial, g: Polynomial) -> Polynomial:
    f._check(g)
    field_ = f.field
    acc: Dict[Monomial, Coefficient] = {}
    for a, ma in f.terms:
        for b, mb in g.terms:
            m = monomial_mul(ma, mb)
            prod = field_.mul(a, b)
            acc[m] = field_.add(acc[m], prod) if m in acc else prod
    return f.ring.from_dict(acc, normalized=True)


def leading_term(f: Polynomial, o: Optional[TermOrder] = None) -> Term:
    if f.is_zero():
        raise EmptyInputError("The zero polynomial has no leading term")
    if o is None or o == f.order:
        return f.terms[0]
    if o.nvars != f.layout.nvars:
        raise LayoutError("Order covers a different variable count", order=o.nvars, layout=f.layout.nvars)
    return max(f.terms, key=lambda t: o.key(t[1]))
