import random
from math import isqrt

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from adelic_cert.cubic_field import element_valuation
from adelic_cert.errors import BadReduction, CapExceeded, SingularModel
from adelic_cert.residue_arith import fq_context, legendre, primes_up_to
from adelic_cert.weierstrass import (
    Reduction,
    ReducedCurve,
    WeierstrassModel,
    compute_invariants,
    count_points,
    frobenius_datum,
    hasse_ok,
    is_semistable,
    reduce_curve,
)

small = st.integers(-9, 9)
triples = st.tuples(small, small, small)


def test_example_invariants(K, E):
    inv = E.invariants()
    assert inv.disc == K.element(64, 91, 27)
    assert inv.c4 == K.element(0, -48, 0)
    assert inv.disc.norm() == 131 * 2207


def test_integer_invariants():
    assert compute_invariants(0, 0, 0, 0, 1).disc == -432
    inv = compute_invariants(0, 0, 0, 1, 0)
    assert (inv.c4, inv.c6, inv.disc) == (-48, 0, -64)
    assert inv.c4**3 // inv.disc == 1728


def test_singular_model(K):
    with pytest.raises(SingularModel):
        WeierstrassModel.from_coords(K, [(0, 0, 0)] * 5)


@given(st.lists(triples, min_size=5, max_size=5))
def test_c4_c6_identity(K, coeffs):
    inv = compute_invariants(*(K.element(*c) for c in coeffs))
    assert inv.c4 * inv.c4 * inv.c4 - inv.c6 * inv.c6 == 1728 * inv.disc


class TestReduction:
    def test_kinds(self, K, E):
        assert reduce_curve(E, K.prime("(7)")).kind is Reduction.GOOD
        assert reduce_curve(E, K.prime("P_131")).kind is Reduction.MULTIPLICATIVE
        assert reduce_curve(E, K.prime("Q_131")).kind is Reduction.GOOD
        assert reduce_curve(E, K.prime("Q_2207")).kind is Reduction.MULTIPLICATIVE

    def test_semistable_example(self, E):
        rep = is_semistable(E)
        assert rep.semistable
        assert {b.place.name: b.v_j for b in rep.bad_places} == {"P_131": -1, "Q_2207": -1}

    def test_additive_not_semistable(self, K):
        E = WeierstrassModel.from_coords(K, [(0, 0, 0)] * 4 + [(49, 0, 0)])
        rep = is_semistable(E)
        assert not rep.semistable
        kinds = {b.place.p: b.kind for b in rep.bad_places}
        assert kinds[7] is Reduction.ADDITIVE

    def test_classification_matches_valuations(self, K, E):
        # kind read off the reduced curve agrees with the valuations of disc and c4
        inv = E.invariants()
        for p in (2, 3, 5, 7, 11, 131, 2207):
            for P in K.split_prime(p):
                kind = reduce_curve(E, P).kind
                v_disc = element_valuation(inv.disc, P)
                v_c4 = element_valuation(inv.c4, P)
                expect = Reduction.GOOD if v_disc == 0 else (Reduction.MULTIPLICATIVE if v_c4 == 0 else Reduction.ADDITIVE)
                assert kind is expect


class TestCounting:
    @pytest.mark.parametrize(
        "place,norm,count,trace",
        [("(7)", 343, 324, 20), ("Q_11", 11, 16, -4), ("Q_23", 23, 15, 9), ("Q_29", 29, 24, 6)],
    )
    def test_table(self, K, E, place, norm, count, trace):
        d = frobenius_datum(E, K.prime(place))
        assert (d.norm, d.count, d.trace) == (norm, count, trace)
        assert hasse_ok(d)

    def test_y2_x3_plus_1_over_f5(self):
        ctx = fq_context(5, [0, 1])
        C = ReducedCurve(ctx, tuple(ctx(c) for c in (0, 0, 0, 0, 1)), Reduction.GOOD)
        assert count_points(C) == 6

    def test_bad_reduction(self, K, E):
        with pytest.raises(BadReduction):
            frobenius_datum(E, K.prime("P_131"))

    def test_cap(self, K, E):
        with pytest.raises(CapExceeded):
            frobenius_datum(E, K.prime("(7)"), max_q=100)

    def test_characteristic_two_and_three(self, K, E):
        for P in K.split_prime(2) + K.split_prime(3):
            C = reduce_curve(E, P)
            if C.kind is Reduction.GOOD:
                assert count_points(C) == _brute_count(C)


def _brute_count(C):
    a1, a2, a3, a4, a6 = C.coeffs
    elems = list(C.ctx.elements())
    return 1 + sum(
        1 for x in elems for y in elems if y * y + a1 * x * y + a3 * y == x * x * x + a2 * x * x + a4 * x + a6
    )


def _character_count(C):
    # odd characteristic: complete the square and sum the quadratic character
    q = C.ctx.order
    a1, a2, a3, a4, a6 = C.coeffs
    total = 1
    for x in C.ctx.elements():
        b = a1 * x + a3
        rhs = x * x * x + a2 * x * x + a4 * x + a6
        disc = b * b + 4 * rhs
        if disc.is_zero():
            total += 1
        elif disc ** ((q - 1) // 2) == 1:
            total += 2
    return total


def test_counts_agree_with_character_sum(K, E):
    rng = random.Random(11)
    places = [P for p in primes_up_to(120) if p not in (2, 31) for P in K.split_prime(p)]
    checked = 0
    for P in rng.sample(places, len(places)):
        C = reduce_curve(E, P)
        if C.kind is not Reduction.GOOD or P.norm > 2000:
            continue
        assert count_points(C) == _character_count(C)
        checked += 1
        if checked == 20:
            break
    assert checked == 20


@given(st.lists(triples, min_size=5, max_size=5), st.sampled_from([5, 7, 11, 13, 17]))
def test_hasse_bound(K, coeffs, p):
    try:
        E = WeierstrassModel.from_coords(K, coeffs)
    except SingularModel:
        assume(False)
    for P in K.split_prime(p):
        C = reduce_curve(E, P)
        assume(C.kind is Reduction.GOOD)
        n = count_points(C)
        t = P.norm + 1 - n
        assert t * t <= 4 * P.norm
        assert abs(t) <= 2 * isqrt(P.norm) + 1


def test_legendre_consistency_with_count():
    # y^2 = x^3 + x over F_p, p = 3 mod 4 is supersingular: p + 1 points
    for p in (7, 11, 19, 23):
        ctx = fq_context(p, [0, 1])
        C = ReducedCurve(ctx, tuple(ctx(c) for c in (0, 0, 0, 1, 0)), Reduction.GOOD)
        assert count_points(C) == p + 1
        assert legendre(-1, p) == -1
