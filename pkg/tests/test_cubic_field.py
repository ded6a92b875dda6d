import random
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from adelic_cert.cubic_field import (
    CubicField,
    element_valuation,
    field_preflight,
    find_unit_witness,
    ideal_factorization,
    is_unit,
    real_sign,
    reduce_mod_prime,
)
from adelic_cert.errors import (
    DuplicateDegreeOnePrime,
    RamifiedUnsupported,
    Reducible,
    UnknownPlace,
    WrongSignature,
    ZeroElement,
)
from adelic_cert.residue_arith import factor_int, primes_up_to

coords = st.tuples(*(st.integers(-30, 30) for _ in range(3)))


def test_discriminant_and_ramification(K):
    assert K.discriminant == -31
    assert K.ramified_primes == (31,)
    assert K.is_maximal_order and not K.is_galois and K.r1 == 1


def test_real_root_interval(K):
    lo, hi = K.real_root_interval
    assert hi - lo < Fraction(1, 2**64)
    f = lambda x: x**3 + x + 1
    assert f(lo) < 0 < f(hi)
    assert abs(float(lo) + 0.6823278038280193) < 1e-15


class TestPreflight:
    def test_example_field(self, K):
        prof = field_preflight(K)
        assert prof.discriminant == -31 and prof.non_galois
        assert prof.minkowski_bound < 2
        assert prof.class_number_one and prof.narrow_class_trivial
        assert prof.unit_witness == (0, 1, 0)

    def test_cyclic_cubic_flagged(self):
        prof = field_preflight(CubicField([-1, -3, 0, 1]))
        assert prof.discriminant == 81 and not prof.non_galois

    def test_reducible(self):
        with pytest.raises(Reducible):
            CubicField([0, -1, 0, 1])

    def test_totally_real_rejected(self):
        with pytest.raises(WrongSignature):
            field_preflight(CubicField([1, -4, 0, 1]))  # disc 229, three real roots

    def test_minkowski_is_upper_bound(self):
        import math

        from adelic_cert.cubic_field import minkowski_bound_upper

        for d in (-23, -31, -44, -59, -283):
            exact = 6 / 27 * 4 / math.pi * math.sqrt(abs(d))
            assert exact < float(minkowski_bound_upper(d)) < exact * 1.001


class TestSplitting:
    def test_131_splits_completely(self, K):
        primes = K.split_prime(131)
        assert [P.name for P in primes] == ["P_131", "Q_131", "R_131"]
        assert all(P.residue_degree == 1 for P in primes)

    def test_2207(self, K):
        primes = K.split_prime(2207)
        assert sorted(P.residue_degree for P in primes) == [1, 2]
        assert K.prime("P_2207").residue_degree == 2
        assert K.prime("Q_2207").residue_degree == 1

    def test_inert_7(self, K):
        (P,) = K.split_prime(7)
        assert P.name == "(7)" and P.norm == 343

    def test_ramified_31(self, K):
        assert sorted((P.ramification, P.residue_degree) for P in K.split_prime(31)) == [(1, 1), (2, 1)]

    def test_degree_one_primes(self, K):
        for p in (11, 23, 29):
            assert K.degree_one_prime(p).name == f"Q_{p}"
        with pytest.raises(DuplicateDegreeOnePrime):
            K.degree_one_prime(131)

    def test_unknown_place(self, K):
        with pytest.raises(UnknownPlace):
            K.prime("R_11")
        with pytest.raises(UnknownPlace):
            K.prime("(11)")

    def test_norm_equation_for_all_small_primes(self, K):
        for p in primes_up_to(500):
            primes = K.split_prime(p)
            assert sum(P.ramification * P.residue_degree for P in primes) == 3
            prod = 1
            for P in primes:
                prod *= P.norm**P.ramification
            assert prod == p**3


class TestElements:
    def test_units(self, K):
        a = K.alpha
        assert a * (a * a + 1) == K.element(-1)
        assert is_unit(a) and is_unit(a + 1)
        assert a + 1 == -(a**3)
        assert not is_unit(K.element(2))

    def test_unit_witness_is_alpha(self, K):
        assert find_unit_witness(K) == K.alpha

    def test_reduce_alpha_at_q11(self, K):
        assert reduce_mod_prime(K.alpha, K.prime("Q_11")) == 2
        P7 = K.prime("(7)")
        assert reduce_mod_prime(K.alpha, P7) == P7.residue_field().gen
        assert reduce_mod_prime(K.one, P7) == 1

    def test_reduce_at_ramified_prime(self, K):
        P = next(P for P in K.split_prime(31) if P.ramification == 2)
        with pytest.raises(RamifiedUnsupported):
            reduce_mod_prime(K.alpha, P)

    def test_real_sign(self, K, E):
        assert real_sign(E.discriminant) == 1
        assert real_sign(K.element(-1)) == -1
        assert real_sign(K.alpha + 1) == 1
        assert real_sign(K.alpha) == -1
        assert real_sign(K.element(0)) == 0


class TestFactorization:
    def test_discriminant(self, K, E):
        fac = ideal_factorization(E.discriminant)
        assert {P.name: v for P, v in fac.items()} == {"P_131": 1, "Q_2207": 1}
        assert element_valuation(E.discriminant, K.prime("Q_131")) == 0

    def test_unit_has_empty_factorization(self, K):
        assert ideal_factorization(K.alpha) == {}

    def test_c4(self, K, E):
        c4 = E.invariants().c4
        assert c4 == K.element(0, -48, 0)
        fac = {P.name: v for P, v in ideal_factorization(c4).items()}
        assert {int(name.strip("()PQR_")) for name in fac} == {2, 3}
        assert abs(c4.norm()) == 48**3

    def test_zero(self, K):
        with pytest.raises(ZeroElement):
            ideal_factorization(K.element(0))

    def test_ramified_support(self, K):
        with pytest.raises(RamifiedUnsupported):
            ideal_factorization(K.element(31))

    def test_valuation_of_prime_powers(self, K):
        assert element_valuation(K.element(7**5), K.prime("(7)")) == 5
        P = K.prime("P_2207")
        assert element_valuation(K.element(2207**3), P) == 3


def _unramified_support(x):
    n = x.norm()
    return n != 0 and n % 31 != 0 and all(p < 10**6 for p in factor_int(n))


@given(coords)
def test_factorization_accounts_for_norm(K, c):
    x = K.element(*c)
    assume(_unramified_support(x))
    fac = ideal_factorization(x)
    for p, e in factor_int(abs(x.norm())).items() if abs(x.norm()) > 1 else ():
        assert sum(v * P.residue_degree for P, v in fac.items() if P.p == p) == e


@given(coords, coords)
def test_valuation_additive(K, a, b):
    x, y = K.element(*a), K.element(*b)
    assume(_unramified_support(x) and _unramified_support(y))
    for p in set(factor_int(abs(x.norm() * y.norm()))) if abs(x.norm() * y.norm()) > 1 else ():
        for P in K.split_prime(p):
            assert element_valuation(x * y, P) == element_valuation(x, P) + element_valuation(y, P)


@given(coords, coords)
def test_real_sign_multiplicative(K, a, b):
    x, y = K.element(*a), K.element(*b)
    assume(not (x * y).is_zero())
    assert real_sign(x * y) == real_sign(x) * real_sign(y)


def test_reduction_is_ring_homomorphism(K):
    rng = random.Random(7)
    primes = [p for p in primes_up_to(400) if p != 31]
    for p in rng.sample(primes, 50):
        for P in K.split_prime(p):
            for _ in range(5):
                x = K.element(*(rng.randint(-50, 50) for _ in range(3)))
                y = K.element(*(rng.randint(-50, 50) for _ in range(3)))
                rx, ry = reduce_mod_prime(x, P), reduce_mod_prime(y, P)
                assert reduce_mod_prime(x + y, P) == rx + ry
                assert reduce_mod_prime(x * y, P) == rx * ry
