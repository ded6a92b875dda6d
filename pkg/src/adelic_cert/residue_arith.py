"""Exact arithmetic in Z/nZ, prime fields and their extensions of degree <= 3.

Polynomials are plain lists of ints, lowest degree first.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import gcd, isqrt
from typing import Iterator, Sequence

from .errors import EvenModulus, ExtensionTooLarge, NotPrime, ReducibleModulus

MAX_EXTENSION_DEGREE = 3


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, flag in enumerate(sieve) if flag]


def factor_int(n: int) -> dict[int, int]:
    """Trial-division factorization of |n| (n != 0)."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def valuation_int(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class ZModN:
    """A residue class modulo ``modulus``."""

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other) -> int:
        if isinstance(other, ZModN):
            if other.modulus != self.modulus:
                raise ValueError("moduli differ")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ZModN(self.value + o, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ZModN(self.value - o, self.modulus)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ZModN(o - self.value, self.modulus)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ZModN(self.value * o, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return ZModN(-self.value, self.modulus)

    def __pow__(self, e: int):
        return ZModN(pow(self.value, e, self.modulus), self.modulus)

    def is_unit(self) -> bool:
        return gcd(self.value, self.modulus) == 1

    def inverse(self) -> ZModN:
        return ZModN(pow(self.value, -1, self.modulus), self.modulus)

    def multiplicative_order(self) -> int:
        if not self.is_unit():
            raise ValueError(f"{self.value} is not a unit mod {self.modulus}")
        k, x = 1, self.value % self.modulus
        while x != 1 % self.modulus:
            x = x * self.value % self.modulus
            k += 1
        return k

    def __int__(self):
        return self.value


# ---------------------------------------------------------------------------
# polynomials over F_p


def poly_trim(a: Sequence[int]) -> list[int]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: Sequence[int], p: int) -> list[int]:
    return poly_trim([c % p for c in a])


def poly_eval(a: Sequence[int], x: int, m: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % m
    return acc


def poly_mul(a: Sequence[int], b: Sequence[int], m: int | None = None) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    if m is not None:
        out = [c % m for c in out]
    return poly_trim(out)


def poly_divmod(a: Sequence[int], b: Sequence[int], m: int) -> tuple[list[int], list[int]]:
    """Division with remainder modulo m; the leading coefficient of b must be a unit mod m."""
    a = [c % m for c in a]
    b = poly_mod(b, m)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], -1, m)
    db = len(b) - 1
    q = [0] * max(len(a) - db, 0)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv % m
        if c:
            q[i - db] = c
            for j, bj in enumerate(b):
                a[i - db + j] = (a[i - db + j] - c * bj) % m
    return poly_trim(q), poly_trim(a[:db])


def poly_gcd_mod_p(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = poly_mod(a, p), poly_mod(b, p)
    while b:
        a, b = b, poly_divmod(a, b, p)[1]
    if not a:
        return []
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def poly_derivative(a: Sequence[int]) -> list[int]:
    return poly_trim([i * c for i, c in enumerate(a)][1:])


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")


def factor_poly_mod_p(f: Sequence[int], p: int) -> list[tuple[tuple[int, ...], int]]:
    """Factor a monic integer polynomial of degree <= 3 over F_p.

    Returns ``(factor, multiplicity)`` pairs, factors as monic coefficient
    tuples reduced into [0, p), ordered by degree and then lexicographically.
    Linear factors are found by scanning all residues; whatever is left has
    no root and degree <= 3, hence is irreducible.
    """
    _check_prime(p)
    f = poly_mod(f, p)
    if len(f) - 1 > 3:
        raise ValueError("degree must be <= 3")
    if not f or f[-1] != 1:
        raise ValueError("polynomial must be monic mod p")
    out: dict[tuple[int, ...], int] = {}
    rest = f
    for r in range(p):
        if len(rest) <= 1:
            break
        while len(rest) > 1 and poly_eval(rest, r, p) == 0:
            rest = poly_divmod(rest, [-r % p, 1], p)[0]
            key = ((-r) % p, 1)
            out[key] = out.get(key, 0) + 1
    if len(rest) > 1:
        out[tuple(rest)] = out.get(tuple(rest), 0) + 1
    return sorted(out.items(), key=lambda kv: (len(kv[0]), kv[0]))


def is_irreducible_mod_p(f: Sequence[int], p: int) -> bool:
    f = poly_mod(f, p)
    fac = factor_poly_mod_p(f, p)
    return len(fac) == 1 and fac[0][1] == 1


def legendre(a: int, ell: int) -> int:
    """Legendre symbol via Euler's criterion."""
    if ell % 2 == 0:
        raise EvenModulus(f"Legendre symbol needs an odd prime, got {ell}")
    _check_prime(ell)
    r = pow(a % ell, (ell - 1) // 2, ell)
    return -1 if r == ell - 1 else r


# ---------------------------------------------------------------------------
# F_q = F_p[x]/(g)


class FqContext:
    """The finite field F_p[x]/(modulus) for an irreducible monic modulus of degree <= 3.

    Elements are stored as coefficient tuples of length ``degree``.
    """

    def __init__(self, p: int, modulus: Sequence[int]):
        _check_prime(p)
        g = poly_mod(modulus, p)
        if len(g) < 2 or g[-1] != 1:
            raise ValueError("modulus must be monic of degree >= 1")
        if len(g) - 1 > MAX_EXTENSION_DEGREE:
            raise ExtensionTooLarge(f"extension degree {len(g) - 1} exceeds {MAX_EXTENSION_DEGREE}")
        if not is_irreducible_mod_p(g, p):
            raise ReducibleModulus(f"{g} is reducible mod {p}")
        self.p = p
        self.modulus = tuple(g)
        self.degree = len(g) - 1
        self.order = p**self.degree

    def __eq__(self, other):
        return isinstance(other, FqContext) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        return f"FqContext(p={self.p}, modulus={list(self.modulus)})"

    # raw tuple arithmetic, used directly by the hot loops in point counting
    def add(self, a: tuple, b: tuple) -> tuple:
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a: tuple, b: tuple) -> tuple:
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a: tuple) -> tuple:
        p = self.p
        return tuple(-x % p for x in a)

    def mul(self, a: tuple, b: tuple) -> tuple:
        p, d = self.p, self.degree
        if d == 1:
            return (a[0] * b[0] % p,)
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        g = self.modulus
        for i in range(2 * d - 2, d - 1, -1):
            c = prod[i]
            if c:
                for j in range(d):
                    prod[i - d + j] -= c * g[j]
        return tuple(c % p for c in prod[:d])

    def pow(self, a: tuple, e: int) -> tuple:
        result = self.one_raw
        base = a
        if e < 0:
            base, e = self.inv(a), -e
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: tuple) -> tuple:
        if not any(a):
            raise ZeroDivisionError("inverse of zero in F_q")
        return self.pow(a, self.order - 2)

    def raw(self, x) -> tuple:
        """Coerce an int, a coefficient sequence, or an FqElement to a raw tuple."""
        if isinstance(x, FqElement):
            if x.ctx != self:
                raise ValueError("element from a different field")
            return x.coeffs
        if isinstance(x, int):
            return (x % self.p,) + (0,) * (self.degree - 1)
        coeffs = list(x)
        if len(coeffs) > self.degree:
            coeffs = poly_divmod(coeffs, self.modulus, self.p)[1]
        coeffs = [c % self.p for c in coeffs]
        return tuple(coeffs + [0] * (self.degree - len(coeffs)))

    @cached_property
    def zero_raw(self) -> tuple:
        return (0,) * self.degree

    @cached_property
    def one_raw(self) -> tuple:
        return (1,) + (0,) * (self.degree - 1)

    def __call__(self, x) -> FqElement:
        return FqElement(self.raw(x), self)

    @property
    def zero(self) -> FqElement:
        return FqElement(self.zero_raw, self)

    @property
    def one(self) -> FqElement:
        return FqElement(self.one_raw, self)

    @property
    def gen(self) -> FqElement:
        """Class of x."""
        return self([0, 1])

    def raw_elements(self) -> Iterator[tuple]:
        for t in product(range(self.p), repeat=self.degree):
            yield tuple(reversed(t))

    def elements(self) -> Iterator[FqElement]:
        for t in self.raw_elements():
            yield FqElement(t, self)


@dataclass(frozen=True)
class FqElement:
    coeffs: tuple
    ctx: FqContext

    def _other(self, other):
        if isinstance(other, FqElement):
            if other.ctx != self.ctx:
                raise ValueError("elements from different fields")
            return other.coeffs
        if isinstance(other, int):
            return self.ctx.raw(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else FqElement(self.ctx.add(self.coeffs, o), self.ctx)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else FqElement(self.ctx.sub(self.coeffs, o), self.ctx)

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else FqElement(self.ctx.sub(o, self.coeffs), self.ctx)

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else FqElement(self.ctx.mul(self.coeffs, o), self.ctx)

    __rmul__ = __mul__

    def __neg__(self):
        return FqElement(self.ctx.neg(self.coeffs), self.ctx)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FqElement(self.ctx.mul(self.coeffs, self.ctx.inv(o)), self.ctx)

    def __pow__(self, e: int):
        return FqElement(self.ctx.pow(self.coeffs, e), self.ctx)

    def inverse(self) -> FqElement:
        return FqElement(self.ctx.inv(self.coeffs), self.ctx)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            return self.coeffs == self.ctx.raw(other)
        return isinstance(other, FqElement) and self.ctx == other.ctx and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.ctx))

    def __repr__(self):
        if self.ctx.degree == 1:
            return f"{self.coeffs[0]}"
        terms = [f"{c}*x^{i}" if i else str(c) for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) or "0"


def fq_context(p: int, modulus_poly: Sequence[int]) -> FqContext:
    return FqContext(p, modulus_poly)


def fq_roots(poly: Sequence, ctx: FqContext) -> list[FqElement]:
    """Roots with multiplicity of a polynomial of degree <= 3 over F_q.

    ``poly`` holds coefficients (ints or FqElements), lowest degree first.
    Every element of F_q is tried; multiplicities come from repeated
    synthetic division.
    """
    coeffs = [ctx.raw(c) for c in poly]
    while coeffs and not any(coeffs[-1]):
        coeffs.pop()
    if len(coeffs) - 1 > 3:
        raise ValueError("degree must be <= 3")
    if len(coeffs) <= 1:
        if not coeffs:
            raise ValueError("zero polynomial has every element as a root")
        return []

    def evaluate(cs, x):
        acc = ctx.zero_raw
        for c in reversed(cs):
            acc = ctx.add(ctx.mul(acc, x), c)
        return acc

    def divide_linear(cs, r):
        # synthetic division by (X - r); remainder is zero by assumption
        out = [None] * (len(cs) - 1)
        acc = ctx.zero_raw
        for i in range(len(cs) - 1, 0, -1):
            acc = ctx.add(ctx.mul(acc, r), cs[i])
            out[i - 1] = acc
        return out

    roots = []
    for x in ctx.raw_elements():
        while len(coeffs) > 1 and not any(evaluate(coeffs, x)):
            roots.append(FqElement(x, ctx))
            coeffs = divide_linear(coeffs, x)
    return roots
