"""Acceptance checks on the worked example over Q(alpha), alpha^3 + alpha + 1 = 0.

Each test carries a ``criterion`` marker; the terminal summary prints one
PASS/FAIL line per criterion. Run with ``pytest tests/test_acceptance.py -v``.
"""

import json
import random
import time
from itertools import combinations
from pathlib import Path

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from adelic_cert.certifier import (
    CertifyConfig,
    Status,
    bound_exceptional_primes,
    certify,
    frobdisc_check,
    reverify,
    three_adic_witness,
)
from adelic_cert.cli import EXIT_OK, frobenius_rows, main, parse_config
from adelic_cert.cubic_field import (
    CubicField,
    element_valuation,
    field_preflight,
    ideal_factorization,
    real_sign,
    reduce_mod_prime,
)
from adelic_cert.gl2 import Mat2, conj_module_span, verify_group_facts
from adelic_cert.residue_arith import ZModN, factor_int, legendre, primes_up_to
from adelic_cert.weierstrass import (
    Reduction,
    WeierstrassModel,
    compute_invariants,
    count_points,
    frobenius_datum,
    is_semistable,
    reduce_curve,
)

from .conftest import EXAMPLE_CURVE, EXAMPLE_PLACES, EXAMPLE_POLY

CONFIG = str(Path(__file__).resolve().parent.parent / "configs" / "example.conf")
TABLE = {"(7)": (343, 324, 20), "Q_11": (11, 16, -4), "Q_23": (23, 15, 9), "Q_29": (29, 24, 6)}


@pytest.fixture(scope="module")
def data(K, E):
    return {name: frobenius_datum(E, K.prime(name)) for name in EXAMPLE_PLACES}


@pytest.fixture(scope="module")
def example_cert(K, E):
    return certify(K, E, CertifyConfig(places=EXAMPLE_PLACES, sample_budget=4))


@pytest.mark.criterion(1, "Frobenius table reproduces the four rows")
def test_c1_frobenius_table():
    start = time.perf_counter()
    cfg = parse_config(Path(CONFIG).read_text())
    K = CubicField(cfg.field)
    E = WeierstrassModel.from_coords(K, cfg.curve)
    rows = frobenius_rows(K, E, cfg.places, 31, cfg.max_q)
    elapsed = time.perf_counter() - start
    got = {r["place"]: (r["N"], r["count"], r["trace"]) for r in rows}
    assert got == TABLE
    assert elapsed < 5, elapsed


@pytest.mark.criterion(2, "discriminant factorization and v(j) at bad places")
def test_c2_discriminant():
    start = time.perf_counter()
    K = CubicField(EXAMPLE_POLY)
    E = WeierstrassModel.from_coords(K, EXAMPLE_CURVE)
    fac = {P.name: v for P, v in ideal_factorization(E.discriminant).items()}
    partner = [P for P in K.split_prime(2207) if P.name != "Q_2207"]
    above_131 = K.split_prime(131)
    rep = is_semistable(E)
    elapsed = time.perf_counter() - start
    assert fac == {"P_131": 1, "Q_2207": 1}
    assert [P.residue_degree for P in partner] == [2]
    assert len(above_131) == 3 and all(P.residue_degree == 1 for P in above_131)
    assert {b.place.name: b.v_j for b in rep.bad_places} == {"P_131": -1, "Q_2207": -1}
    assert elapsed < 1, elapsed


@pytest.mark.criterion(3, "field preflight")
def test_c3_preflight(K):
    prof = field_preflight(K)
    assert prof.discriminant == -31 and prof.non_galois
    assert prof.minkowski_bound < 2
    assert prof.class_number_one and prof.narrow_class_trivial
    assert K.element(*prof.unit_witness) == K.alpha
    # alpha + 1 = -alpha^3 is positive at the single real place
    assert real_sign(K.alpha + 1) == 1


@pytest.mark.criterion(4, "exceptional-prime bound from Q_11 and Q_23")
def test_c4_exceptional_bound(E, data):
    b = bound_exceptional_primes(E, [data["Q_11"], data["Q_23"]], field_preflight(E.field))
    assert b.count_gcd == 1
    assert b.candidates == {31: "ramified in K"}


@pytest.mark.criterion(5, "l = 31 Frobenius discriminant criterion with s1 = t = (7)")
def test_c5_ell_31(data):
    v = frobdisc_check(31, list(data.values()))
    assert v.status is Status.CERTIFIED
    w = v.steps[0].witness
    assert w["s1"] == {"place": "(7)", "disc_mod_ell": 20, "legendre": 1}
    assert legendre(20, 31) == 1 and legendre(3, 31) == -1
    assert w["s2"] == {"place": "Q_11", "disc_mod_ell": 3, "legendre": -1}
    assert w["t"] == {"place": "(7)", "u": 10}


@pytest.mark.criterion(6, "l = 3 lift through the conjugation module mod 9")
def test_c6_ell_3(data, example_cert):
    d = data["Q_29"]
    assert (d.trace, d.norm) == (6, 29)
    w = three_adic_witness(d)
    assert w["roots_mod_9"] == [7, 8]
    assert all((r * r - 6 * r + 29) % 9 == 0 for r in (7, 8))
    assert w["span_dimension"] == 4
    assert example_cert.per_prime["3"].status is Status.CERTIFIED


@pytest.mark.criterion(7, "l = 2 lift through the real sign and diag(0, 1)")
def test_c7_ell_2(E, example_cert):
    assert real_sign(E.discriminant) == 1
    assert conj_module_span(Mat2(0, 0, 0, 1, 2), 2).dimension == 4
    v = example_cert.per_prime["2"]
    assert v.status is Status.CERTIFIED
    assert v.steps[-1].rule == "MOD_4_WITH_SIGN_DET"


@pytest.mark.criterion(8, "end-to-end certify exits 0 with Certified")
def test_c8_end_to_end(tmp_path):
    out = tmp_path / "cert.json"
    start = time.perf_counter()
    code = main(["certify", "--config", CONFIG, "--json", str(out)])
    elapsed = time.perf_counter() - start
    assert code == EXIT_OK
    assert json.loads(out.read_text())["final"]["status"] == "Certified"
    assert elapsed < 30, elapsed


@pytest.mark.criterion(9, "group-facts suite")
def test_c9_group_facts():
    start = time.perf_counter()
    report = verify_group_facts(seed=0, samples=200)
    elapsed = time.perf_counter() - start
    assert report.passed, report.lines()
    by_name = {c.name.split(" ")[0]: c for c in report.checks}
    assert by_name["commutator"].detail == {"commutator_order": 192, "kernel_order": 192}
    index2 = next(c for c in report.checks if "exactly 7" in c.name)
    assert index2.detail["count"] == 7
    assert index2.detail["mod4_images"] == {"chi5": "SL2(Z/4)", "sgn": "ker(sgn)", "sgn*chi5": "ker(sgn*det)"}
    lemma = next(c for c in report.checks if "index <= 2" in c.name)
    shadow = next(c for c in report.checks if "modulus-24" in c.name)
    assert lemma.detail["samples"] == 200 and shadow.detail["samples"] == 200
    assert elapsed < 60, elapsed


# criterion 10: property suites with fixed seeds (hypothesis runs derandomized)

coords = st.tuples(*(st.integers(-30, 30) for _ in range(3)))


@pytest.mark.criterion(10, "property suites")
@given(st.integers(2, 500), st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_c10_residue_homomorphism(n, a, b):
    assert (ZModN(a, n) * ZModN(b, n)).value == a * b % n
    assert (ZModN(a, n) + ZModN(b, n)).value == (a + b) % n


@pytest.mark.criterion(10, "property suites")
def test_c10_reduction_homomorphism(K):
    rng = random.Random(10)
    for p in rng.sample([p for p in primes_up_to(300) if p != 31], 20):
        for P in K.split_prime(p):
            x = K.element(*(rng.randint(-99, 99) for _ in range(3)))
            y = K.element(*(rng.randint(-99, 99) for _ in range(3)))
            assert reduce_mod_prime(x * y, P) == reduce_mod_prime(x, P) * reduce_mod_prime(y, P)
            assert reduce_mod_prime(x + y, P) == reduce_mod_prime(x, P) + reduce_mod_prime(y, P)


def _tame(x):
    n = abs(x.norm())
    return n > 1 and n % 31 != 0 and max(factor_int(n)) < 10**5


@pytest.mark.criterion(10, "property suites")
@given(coords, coords)
def test_c10_valuation_additive(K, a, b):
    x, y = K.element(*a), K.element(*b)
    assume(_tame(x) and _tame(y))
    for p in factor_int(abs(x.norm() * y.norm())):
        for P in K.split_prime(p):
            assert element_valuation(x * y, P) == element_valuation(x, P) + element_valuation(y, P)


@pytest.mark.criterion(10, "property suites")
@given(st.lists(coords, min_size=5, max_size=5))
def test_c10_c4_c6_identity(K, coeffs):
    inv = compute_invariants(*(K.element(*c) for c in coeffs))
    assert inv.c4 * inv.c4 * inv.c4 - inv.c6 * inv.c6 == 1728 * inv.disc


@pytest.mark.criterion(10, "property suites")
@given(st.lists(st.tuples(*(st.integers(-5, 5) for _ in range(3))), min_size=5, max_size=5), st.sampled_from([5, 7, 11, 13]))
def test_c10_hasse(K, coeffs, p):
    inv = compute_invariants(*(K.element(*c) for c in coeffs))
    assume(not inv.disc.is_zero())
    E = WeierstrassModel.from_coords(K, coeffs)
    for P in K.split_prime(p):
        C = reduce_curve(E, P)
        if C.kind is Reduction.GOOD:
            t = P.norm + 1 - count_points(C)
            assert t * t <= 4 * P.norm


@pytest.mark.criterion(10, "property suites")
def test_c10_reverify(K, E, example_cert):
    assert reverify(example_cert, K, E) == []


@pytest.mark.criterion(10, "property suites")
def test_c10_ablation_monotone(K, E):
    status = {
        s: certify(K, E, CertifyConfig(places=s, sample_budget=len(s))).final.status
        for r in range(1, 5)
        for s in combinations(EXAMPLE_PLACES, r)
    }
    for s, st_ in status.items():
        if st_ is Status.CERTIFIED:
            for bigger in status:
                if set(s) < set(bigger):
                    assert status[bigger] is Status.CERTIFIED
    assert status[EXAMPLE_PLACES] is Status.CERTIFIED
