"""The cubic field Q(alpha) = Q[x]/(f) and its order Z[alpha].

Only monogenic fields with squarefree polynomial discriminant are fully
supported: then Z[alpha] is the maximal order and Dedekind's criterion
gives the prime splitting at every p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from math import isqrt
from typing import Sequence

from .errors import (
    DuplicateDegreeOnePrime,
    NonSquarefreeDiscriminant,
    RamifiedUnsupported,
    Reducible,
    UnknownPlace,
    WrongSignature,
    ZeroElement,
)
from .residue_arith import (
    FqContext,
    FqElement,
    factor_int,
    factor_poly_mod_p,
    is_prime,
    poly_divmod,
    poly_eval,
    valuation_int,
)

LABELS = "PQR"
ROOT_INTERVAL_BITS = 64


def _balanced(c: int, p: int) -> int:
    c %= p
    return c - p if c > p // 2 else c


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def _is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factor_int(n).values())


def _det3(m) -> int:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


class CubicField:
    """K = Q(alpha) where alpha is a root of a monic irreducible integer cubic.

    ``poly`` is the coefficient list [a0, a1, a2, 1], lowest degree first.
    """

    def __init__(self, poly: Sequence[int]):
        poly = [int(c) for c in poly]
        if len(poly) != 4:
            raise Reducible("defining polynomial must have degree 3")
        if poly[3] != 1:
            raise ValueError("defining polynomial must be monic")
        self.poly = tuple(poly)
        # a monic integer cubic is reducible over Q iff it has an integer root dividing a0
        a0 = poly[0]
        divisors = {0} if a0 == 0 else {d for d in range(1, abs(a0) + 1) if a0 % d == 0}
        for r in sorted(divisors | {-d for d in divisors}):
            if sum(c * r**i for i, c in enumerate(poly)) == 0:
                raise Reducible(f"{self.poly_str()} has the rational root {r}")

    def poly_str(self) -> str:
        a0, a1, a2, _ = self.poly
        terms = ["x^3"]
        for c, mono in ((a2, "x^2"), (a1, "x"), (a0, "")):
            if c:
                mag = abs(c)
                body = mono if (mag == 1 and mono) else f"{mag}{mono}"
                terms.append(("+ " if c > 0 else "- ") + body)
        return " ".join(terms)

    def __repr__(self):
        return f"CubicField({self.poly_str()})"

    def __eq__(self, other):
        return isinstance(other, CubicField) and self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)

    @cached_property
    def discriminant(self) -> int:
        a0, a1, a2, _ = self.poly
        # disc of x^3 + b x^2 + c x + d
        b, c, d = a2, a1, a0
        return b * b * c * c - 4 * c**3 - 4 * b**3 * d - 27 * d * d + 18 * b * c * d

    @property
    def is_galois(self) -> bool:
        return _is_square(self.discriminant)

    @property
    def r1(self) -> int:
        return 1 if self.discriminant < 0 else 3

    @cached_property
    def is_maximal_order(self) -> bool:
        return _is_squarefree(self.discriminant)

    @cached_property
    def ramified_primes(self) -> tuple[int, ...]:
        return tuple(sorted(factor_int(self.discriminant)))

    def require_supported(self) -> None:
        if not self.is_maximal_order:
            raise NonSquarefreeDiscriminant(f"disc {self.discriminant} is not squarefree")

    # --- elements -----------------------------------------------------------

    def element(self, *coords) -> OrderElement:
        if len(coords) == 1 and not isinstance(coords[0], int):
            coords = tuple(coords[0])
        coords = tuple(int(c) for c in coords) + (0,) * (3 - len(coords))
        if len(coords) != 3:
            raise ValueError("order elements have three coordinates")
        return OrderElement(coords, self)

    @property
    def alpha(self) -> OrderElement:
        return self.element(0, 1, 0)

    @property
    def one(self) -> OrderElement:
        return self.element(1, 0, 0)

    # --- real embedding -----------------------------------------------------

    @cached_property
    def real_root_interval(self) -> tuple[Fraction, Fraction]:
        """Rational interval of width < 2^-64 around the unique real root."""
        if self.r1 != 1:
            raise WrongSignature("field has three real embeddings")
        bound = 1 + max(abs(c) for c in self.poly[:3])
        return _bisect_root(self.poly, Fraction(-bound), Fraction(bound), Fraction(1, 1 << ROOT_INTERVAL_BITS))

    # --- primes -------------------------------------------------------------

    def split_prime(self, p: int) -> list[PrimeIdeal]:
        return list(_split_prime(self, p))

    def prime(self, name: str) -> PrimeIdeal:
        """Resolve a place name such as ``"(7)"`` or ``"Q_11"``."""
        name = name.strip()
        try:
            if name.startswith("(") and name.endswith(")"):
                p = int(name[1:-1])
                primes = self.split_prime(p)
                if len(primes) != 1:
                    raise UnknownPlace(f"{p} is not inert; name one of {[P.name for P in primes]}")
                return primes[0]
            letter, _, num = name.partition("_")
            p = int(num)
        except ValueError as exc:
            raise UnknownPlace(f"cannot parse place name {name!r}") from exc
        if not is_prime(p):
            raise UnknownPlace(f"{p} is not prime")
        for P in self.split_prime(p):
            if P.name == name:
                return P
        raise UnknownPlace(f"no place named {name!r}")

    def degree_one_prime(self, p: int) -> PrimeIdeal:
        """The unique degree-one prime above p."""
        found = [P for P in self.split_prime(p) if P.residue_degree == 1]
        if len(found) != 1:
            raise DuplicateDegreeOnePrime(f"{len(found)} degree-one primes above {p}")
        return found[0]


def _bisect_root(poly, lo: Fraction, hi: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    def ev(x):
        return ((x + poly[2]) * x + poly[1]) * x + poly[0]

    flo = ev(lo)
    if flo == 0:
        return lo, lo
    while hi - lo >= width:
        mid = (lo + hi) / 2
        fm = ev(mid)
        if fm == 0:
            return mid, mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


@dataclass(frozen=True)
class PrimeIdeal:
    """The prime (p, g(alpha)) of Z[alpha], with g an irreducible factor of f mod p."""

    p: int
    g: tuple[int, ...]
    residue_degree: int
    ramification: int
    index: int
    count: int = field(compare=False)

    @property
    def norm(self) -> int:
        return self.p**self.residue_degree

    @property
    def name(self) -> str:
        if self.count == 1 and self.residue_degree == 3:
            return f"({self.p})"
        return f"{LABELS[self.index]}_{self.p}"

    def residue_field(self) -> FqContext:
        return _residue_field(self.p, self.g)

    def __repr__(self):
        return f"{self.name}[f={self.residue_degree},e={self.ramification}]"


@lru_cache(maxsize=None)
def _residue_field(p: int, g: tuple[int, ...]) -> FqContext:
    return FqContext(p, g)


@lru_cache(maxsize=4096)
def _split_prime(K: CubicField, p: int) -> tuple[PrimeIdeal, ...]:
    K.require_supported()
    factors = factor_poly_mod_p(K.poly, p)
    # labels: higher residue degree first, then balanced coefficients (constant term first)
    ordered = sorted(factors, key=lambda gm: (-(len(gm[0]) - 1), tuple(_balanced(c, p) for c in gm[0])))
    return tuple(
        PrimeIdeal(p=p, g=g, residue_degree=len(g) - 1, ramification=m, index=i, count=len(ordered))
        for i, (g, m) in enumerate(ordered)
    )


def split_prime(K: CubicField, p: int) -> list[PrimeIdeal]:
    return list(_split_prime(K, p))


@dataclass(frozen=True, eq=False)
class OrderElement:
    """c0 + c1*alpha + c2*alpha^2 in Z[alpha]."""

    coords: tuple[int, int, int]
    field: CubicField

    def _coerce(self, other):
        if isinstance(other, OrderElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.coords
        if isinstance(other, int):
            return (other, 0, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return OrderElement(tuple(a + b for a, b in zip(self.coords, o)), self.field)

    __radd__ = __add__

    def __neg__(self):
        return OrderElement(tuple(-a for a in self.coords), self.field)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return OrderElement(tuple(a - b for a, b in zip(self.coords, o)), self.field)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        prod = [0] * 5
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(o):
                    prod[i + j] += a * b
        a0, a1, a2, _ = self.field.poly
        # alpha^3 = -(a2 alpha^2 + a1 alpha + a0)
        for k in (4, 3):
            c = prod[k]
            if c:
                prod[k] = 0
                prod[k - 1] -= c * a2
                prod[k - 2] -= c * a1
                prod[k - 3] -= c * a0
        return OrderElement(tuple(prod[:3]), self.field)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not in the order")
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        return o is not None and self.coords == tuple(o)

    def __hash__(self):
        return hash((self.coords, self.field))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __repr__(self):
        c0, c1, c2 = self.coords
        parts = []
        for c, mono in ((c2, "a^2"), (c1, "a"), (c0, "")):
            if c:
                parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts).replace("+ -", "- ") or "0"

    def multiplication_matrix(self) -> list[list[int]]:
        """Columns are the coordinates of x, x*alpha, x*alpha^2."""
        cols = [self * self.field.element(*e) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
        return [[cols[j].coords[i] for j in range(3)] for i in range(3)]

    def norm(self) -> int:
        return _det3(self.multiplication_matrix())


def norm(x: OrderElement) -> int:
    return x.norm()


def is_unit(x: OrderElement) -> bool:
    return abs(x.norm()) == 1


# ---------------------------------------------------------------------------
# residue maps and valuations


def reduce_mod_prime(x: OrderElement, P: PrimeIdeal) -> FqElement:
    if P.ramification > 1:
        raise RamifiedUnsupported(f"{P.name} is ramified")
    ctx = P.residue_field()
    return ctx(list(x.coords))


def _lift_root(f: Sequence[int], r: int, p: int, k: int) -> int:
    """Newton-lift a simple root r of f mod p to a root mod p^k."""
    df = [i * c for i, c in enumerate(f)][1:]
    prec = 1
    while prec < k:
        prec = min(2 * prec, k)
        m = p**prec
        r = (r - poly_eval(f, r, m) * pow(poly_eval(df, r, m), -1, m)) % m
    return r


def _min_valuation(coeffs, p: int, cap: int) -> int:
    v = cap
    for c in coeffs:
        if c:
            v = min(v, valuation_int(c, p))
    return v


def element_valuation(x: OrderElement, P: PrimeIdeal) -> int:
    """v_P(x) for P unramified.

    Degree-one primes: lift the root of g to Z/p^k and read the valuation of
    x(root). Degree-two primes: lift the root of the linear cofactor, divide
    it out of f to get the lifted quadratic factor G, and take the minimal
    coefficient valuation of x mod G. Inert primes: minimal coordinate
    valuation. k doubles until the answer is below the precision.
    """
    if x.is_zero():
        raise ZeroElement("valuation of zero")
    if P.ramification > 1:
        raise RamifiedUnsupported(f"{P.name} is ramified")
    K, p = x.field, P.p
    f = list(K.poly)
    if P.residue_degree == 3:
        return _min_valuation(x.coords, p, 1 << 62)
    if P.residue_degree == 1:
        root = -P.g[0] % p
    else:
        (other,) = [Q for Q in K.split_prime(p) if Q != P]
        root = -other.g[0] % p
    k = 4
    while True:
        m = p**k
        r = _lift_root(f, root, p, k)
        if P.residue_degree == 1:
            vals = [poly_eval(x.coords, r, m)]
        else:
            G = poly_divmod(f, [-r % m, 1], m)[0]
            vals = poly_divmod(list(x.coords), G, m)[1]
        v = _min_valuation(vals, p, k)
        if v < k:
            return v
        k *= 2


def ideal_factorization(x: OrderElement) -> dict[PrimeIdeal, int]:
    """Prime ideal factorization of (x), primes in increasing order of p then label."""
    if x.is_zero():
        raise ZeroElement("cannot factor zero")
    K = x.field
    n = x.norm()
    out: dict[PrimeIdeal, int] = {}
    if abs(n) == 1:
        return out
    for p, e in sorted(factor_int(n).items()):
        if K.discriminant % p == 0:
            raise RamifiedUnsupported(f"{p} ramifies in K and divides N(x)")
        total = 0
        for P in K.split_prime(p):
            v = element_valuation(x, P)
            total += v * P.residue_degree
            if v:
                out[P] = v
        if total != e:
            raise ArithmeticError(f"valuations above {p} sum to {total}, expected {e}")
    return out


# ---------------------------------------------------------------------------
# real sign


def _interval_mul(a, b):
    cands = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
    return min(cands), max(cands)


def real_sign(x: OrderElement) -> int:
    """Sign of x under the real embedding, by interval arithmetic."""
    if x.is_zero():
        return 0
    K = x.field
    lo, hi = K.real_root_interval
    c0, c1, c2 = x.coords
    while True:
        a = (lo, hi)
        sq = _interval_mul(a, a)
        if lo <= 0 <= hi:
            sq = (Fraction(0), sq[1])
        t1 = (c1 * lo, c1 * hi) if c1 >= 0 else (c1 * hi, c1 * lo)
        t2 = (c2 * sq[0], c2 * sq[1]) if c2 >= 0 else (c2 * sq[1], c2 * sq[0])
        low = c0 + t1[0] + t2[0]
        high = c0 + t1[1] + t2[1]
        if low > 0:
            return 1
        if high < 0:
            return -1
        # x != 0 and alpha is irrational of degree 3, so refining terminates
        lo, hi = _bisect_root(K.poly, lo, hi, (hi - lo) / (1 << 32))


# ---------------------------------------------------------------------------
# preflight


@dataclass(frozen=True)
class FieldProfile:
    poly: tuple[int, ...]
    discriminant: int
    non_galois: bool
    squarefree_discriminant: bool | None = None
    r1: int | None = None
    ramified_primes: tuple[int, ...] = ()
    minkowski_bound: Fraction | None = None
    class_number_one: bool | None = None
    narrow_class_trivial: bool | None = None
    unit_witness: tuple[int, int, int] | None = None

    def as_dict(self) -> dict:
        return {
            "polynomial": list(self.poly),
            "discriminant": self.discriminant,
            "non_galois": self.non_galois,
            "squarefree_discriminant": self.squarefree_discriminant,
            "r1": self.r1,
            "ramified_primes": list(self.ramified_primes),
            "minkowski_bound_upper": None if self.minkowski_bound is None else str(self.minkowski_bound),
            "class_number_one": self.class_number_one,
            "narrow_class_trivial": self.narrow_class_trivial,
            "unit_witness": None if self.unit_witness is None else list(self.unit_witness),
        }


# pi > 333/106, so 4/pi < 424/333
_FOUR_OVER_PI_UPPER = Fraction(424, 333)


def minkowski_bound_upper(disc: int) -> Fraction:
    """Rational upper bound for (3!/3^3)(4/pi) sqrt|disc| (one complex place)."""
    scale = 10**12
    s = isqrt(abs(disc) * scale * scale)
    if s * s < abs(disc) * scale * scale:
        s += 1
    return Fraction(6, 27) * _FOUR_OVER_PI_UPPER * Fraction(s, scale)


def _box(bound: int):
    pts = [c for c in product(range(-bound, bound + 1), repeat=3) if any(c)]
    return sorted(pts, key=lambda c: (sum(map(abs, c)), max(i for i in range(3) if c[i]), c))


def find_unit_witness(K: CubicField, bound: int = 3) -> OrderElement | None:
    """A unit u with u + 1 a totally positive unit, searched in the box |c_i| <= bound."""
    for c in _box(bound):
        u = K.element(*c)
        if is_unit(u) and is_unit(u + 1) and real_sign(u + 1) > 0:
            return u
    return None


def field_preflight(K: CubicField, unit_bound: int = 3) -> FieldProfile:
    d = K.discriminant
    if _is_square(d):
        # cyclic cubic: nothing else is needed to decide the field condition
        return FieldProfile(poly=K.poly, discriminant=d, non_galois=False)
    if not K.is_maximal_order:
        raise NonSquarefreeDiscriminant(f"disc {d} is not squarefree")
    if K.r1 != 1:
        raise WrongSignature(f"disc {d} > 0: three real embeddings")
    mk = minkowski_bound_upper(d)
    h1 = True if mk < 2 else None
    u = find_unit_witness(K, unit_bound)
    return FieldProfile(
        poly=K.poly,
        discriminant=d,
        non_galois=True,
        squarefree_discriminant=True,
        r1=1,
        ramified_primes=K.ramified_primes,
        minkowski_bound=mk,
        class_number_one=h1,
        narrow_class_trivial=h1,
        unit_witness=None if u is None else u.coords,
    )
