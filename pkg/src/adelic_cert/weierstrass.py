"""Weierstrass models over Z[alpha]: invariants, reduction, point counts."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .cubic_field import (
    CubicField,
    OrderElement,
    PrimeIdeal,
    element_valuation,
    ideal_factorization,
    reduce_mod_prime,
)
from .errors import BadReduction, CapExceeded, MinimalityUnknown, RamifiedUnsupported, SingularModel
from .residue_arith import FqContext, FqElement

DEFAULT_MAX_Q = 10**6


class Invariants(NamedTuple):
    b2: object
    b4: object
    b6: object
    b8: object
    c4: object
    c6: object
    disc: object


def compute_invariants(a1, a2, a3, a4, a6) -> Invariants:
    """Standard b/c invariants and discriminant; works over any commutative ring."""
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2 * b2 * b2) + 36 * b2 * b4 - 216 * b6
    disc = -(b2 * b2 * b8) - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return Invariants(b2, b4, b6, b8, c4, c6, disc)


@dataclass(frozen=True)
class WeierstrassModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with coefficients in Z[alpha]."""

    field: CubicField
    a1: OrderElement
    a2: OrderElement
    a3: OrderElement
    a4: OrderElement
    a6: OrderElement

    def __post_init__(self):
        if self.invariants().disc.is_zero():
            raise SingularModel("discriminant is zero")

    @classmethod
    def from_coords(cls, K: CubicField, coeffs: Sequence[Sequence[int]]) -> WeierstrassModel:
        """Build from five coordinate triples over the basis 1, alpha, alpha^2."""
        if len(coeffs) != 5:
            raise ValueError("need five coefficients a1, a2, a3, a4, a6")
        return cls(K, *(K.element(*c) for c in coeffs))

    @property
    def coefficients(self) -> tuple[OrderElement, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def invariants(self) -> Invariants:
        inv = compute_invariants(*self.coefficients)
        if inv.c4 * inv.c4 * inv.c4 - inv.c6 * inv.c6 != 1728 * inv.disc:
            raise ArithmeticError("c4^3 - c6^2 != 1728 disc")
        return inv

    @property
    def discriminant(self) -> OrderElement:
        return self.invariants().disc

    @property
    def j_pair(self) -> tuple[OrderElement, OrderElement]:
        """j as the formal quotient (c4^3, disc)."""
        inv = self.invariants()
        return inv.c4 * inv.c4 * inv.c4, inv.disc


def invariants(E: WeierstrassModel) -> Invariants:
    return E.invariants()


class Reduction(enum.Enum):
    GOOD = "good"
    MULTIPLICATIVE = "multiplicative"
    ADDITIVE = "additive"


@dataclass(frozen=True)
class ReducedCurve:
    ctx: FqContext
    coeffs: tuple[FqElement, ...]
    kind: Reduction
    place: PrimeIdeal | None = None


def reduce_curve(E: WeierstrassModel, P: PrimeIdeal) -> ReducedCurve:
    if P.ramification > 1:
        raise RamifiedUnsupported(f"{P.name} is ramified")
    coeffs = tuple(reduce_mod_prime(a, P) for a in E.coefficients)
    inv = compute_invariants(*coeffs)
    if not inv.disc.is_zero():
        kind = Reduction.GOOD
    elif not inv.c4.is_zero():
        kind = Reduction.MULTIPLICATIVE
    else:
        kind = Reduction.ADDITIVE
    return ReducedCurve(P.residue_field(), coeffs, kind, P)


@dataclass(frozen=True)
class BadPlace:
    place: PrimeIdeal
    v_disc: int
    v_c4: int | None  # None when c4 = 0
    kind: Reduction

    @property
    def v_j(self) -> int | None:
        """3 v(c4) - v(disc); None when j = 0."""
        return None if self.v_c4 is None else 3 * self.v_c4 - self.v_disc


@dataclass(frozen=True)
class SemistabilityReport:
    semistable: bool
    bad_places: tuple[BadPlace, ...]


MINIMALITY_BOUND = 12


def is_semistable(E: WeierstrassModel) -> SemistabilityReport:
    """Classify every bad place of the model.

    A place with v(disc) < 12 cannot be non-minimal, so there the reduction
    type read off this model is the true one; v(disc) >= 12 is refused.
    """
    inv = E.invariants()
    bad = []
    for P, v in ideal_factorization(inv.disc).items():
        if v >= MINIMALITY_BOUND:
            raise MinimalityUnknown(f"v_{P.name}(disc) = {v} >= {MINIMALITY_BOUND}")
        v_c4 = None if inv.c4.is_zero() else element_valuation(inv.c4, P)
        kind = reduce_curve(E, P).kind
        bad.append(BadPlace(P, v, v_c4, kind))
    return SemistabilityReport(all(b.kind is Reduction.MULTIPLICATIVE for b in bad), tuple(bad))


def count_points(C: ReducedCurve, max_q: int = DEFAULT_MAX_Q) -> int:
    """#E(F_q) for a curve with good reduction, including the point at infinity.

    For fixed x the equation is y^2 + b y = c with b = a1 x + a3 and
    c = x^3 + a2 x^2 + a4 x + a6. If b = 0 we need #{y : y^2 = c}; otherwise
    y = b z turns it into z^2 + z = c / b^2. Both root counts are tabulated
    once by evaluating every element, so no characteristic is special.
    """
    if C.kind is not Reduction.GOOD:
        where = f" at {C.place.name}" if C.place is not None else ""
        raise BadReduction(f"reduction{where} is {C.kind.value}")
    ctx = C.ctx
    if ctx.order > max_q:
        raise CapExceeded(f"q = {ctx.order} exceeds the point-count cap {max_q}")
    a1, a2, a3, a4, a6 = (c.coeffs for c in C.coeffs)
    mul, add = ctx.mul, ctx.add
    squares: dict[tuple, int] = {}
    artin: dict[tuple, int] = {}
    elems = list(ctx.raw_elements())
    for z in elems:
        z2 = mul(z, z)
        squares[z2] = squares.get(z2, 0) + 1
        s = add(z2, z)
        artin[s] = artin.get(s, 0) + 1
    total = 1
    for x in elems:
        b = add(mul(a1, x), a3)
        c = add(mul(add(mul(add(x, a2), x), a4), x), a6)
        if any(b):
            b2inv = ctx.inv(mul(b, b))
            total += artin.get(mul(c, b2inv), 0)
        else:
            total += squares.get(c, 0)
    return total


@dataclass(frozen=True)
class FrobeniusDatum:
    place: PrimeIdeal
    norm: int
    count: int
    trace: int

    def as_dict(self) -> dict:
        return {
            "place": self.place.name,
            "residue_degree": self.place.residue_degree,
            "N": self.norm,
            "count": self.count,
            "trace": self.trace,
        }


def frobenius_datum(E: WeierstrassModel, P: PrimeIdeal, max_q: int = DEFAULT_MAX_Q) -> FrobeniusDatum:
    C = reduce_curve(E, P)
    count = count_points(C, max_q)
    q = P.norm
    t = q + 1 - count
    if t * t > 4 * q:
        raise ArithmeticError(f"Hasse bound violated at {P.name}: t = {t}, q = {q}")
    return FrobeniusDatum(P, q, count, t)


def hasse_ok(d: FrobeniusDatum) -> bool:
    return d.trace * d.trace <= 4 * d.norm
