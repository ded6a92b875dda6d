"""End-to-end surjectivity certification for semistable curves over cubic fields."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

from .cubic_field import (
    CubicField,
    FieldProfile,
    OrderElement,
    PrimeIdeal,
    field_preflight,
    ideal_factorization,
    real_sign,
)
from .errors import (
    AdelicError,
    MissingFieldHypotheses,
    MissingPrerequisite,
    NotSemistable,
    PrimeTooSmall,
)
from .evidence import Status, Step, Verdict
from .gl2 import LiftEvidence, LiftRule, Mat2, conj_module_span, lift_predicate
from .residue_arith import ZModN, factor_int, is_prime, legendre
from .weierstrass import (
    DEFAULT_MAX_Q,
    FrobeniusDatum,
    Reduction,
    SemistabilityReport,
    WeierstrassModel,
    frobenius_datum,
    is_semistable,
    reduce_curve,
)

SCHEMA = "adelic-cert/1"
DEFAULT_SAMPLE_BUDGET = 8
SMALL_PRIMES = (2, 3, 5)


# ---------------------------------------------------------------------------
# field conditions


def check_condition_ii(profile: FieldProfile) -> Verdict:
    """K meets Q^cyc only in Q."""
    if profile.non_galois:
        return Verdict.certified(
            Step(
                claim="K is linearly disjoint from Q^cyc",
                rule="non-Galois cubic",
                witness={
                    "discriminant": profile.discriminant,
                    "argument": "a cubic has no subfields besides Q and K; K inside Q^cyc would make K abelian, hence Galois",
                },
            )
        )
    return Verdict.refuted(
        "abelian cubic lies in Q^cyc",
        Step(
            claim="K is contained in Q^cyc",
            rule="square discriminant",
            witness={"discriminant": profile.discriminant},
        ),
    )


def _parity_vectors(K: CubicField, delta: OrderElement) -> dict[int, list[tuple[PrimeIdeal, int]]]:
    fac = ideal_factorization(delta)
    out: dict[int, list[tuple[PrimeIdeal, int]]] = {}
    for p in sorted({P.p for P in fac}):
        out[p] = [(P, fac.get(P, 0)) for P in K.split_prime(p)]
    return out


def check_condition_iii(K: CubicField, delta: OrderElement, skip_primes: Iterable[int] = ()) -> Verdict:
    """sqrt(delta) is not in K^cyc, via a prime with mixed valuation parities above it.

    If delta * d were a square in K for a squarefree integer d, every prime
    above an unramified p would see v(delta) = v_p(d) mod 2. A mixed parity
    vector rules out every d at once.
    """
    skip = set(skip_primes)
    vectors = _parity_vectors(K, delta)
    for p, vec in vectors.items():
        if p in skip:
            continue
        parities = {v % 2 for _, v in vec}
        if len(parities) == 2:
            return Verdict.certified(
                Step(
                    claim="sqrt(disc) is not in K^cyc",
                    rule="mixed-parity prime",
                    witness={
                        "p": p,
                        "places": [P.name for P, _ in vec],
                        "residue_degrees": [P.residue_degree for P, _ in vec],
                        "valuations": [v for _, v in vec],
                    },
                )
            )
    return Verdict.inconclusive(
        "no prime with mixed valuation parities",
        Step(
            claim="parity vectors are all constant",
            rule="mixed-parity prime",
            witness={"checked": {str(p): [v for _, v in vec] for p, vec in vectors.items() if p not in skip}},
        ),
    )


# ---------------------------------------------------------------------------
# exceptional primes


@dataclass(frozen=True)
class ExceptionalBound:
    candidates: dict[int, str]
    counts: dict[str, int]
    count_gcd: int
    small_prime_eligible: dict[int, bool]

    def as_dict(self) -> dict:
        return {
            "candidates": {str(k): v for k, v in sorted(self.candidates.items())},
            "counts": self.counts,
            "gcd": self.count_gcd,
            "small_prime_eligible": {str(k): v for k, v in self.small_prime_eligible.items()},
        }


def _require_field_hypotheses(profile: FieldProfile) -> None:
    if not profile.narrow_class_trivial:
        raise MissingFieldHypotheses("narrow class group not shown trivial")
    if profile.unit_witness is None:
        raise MissingFieldHypotheses("no unit u with u + 1 a totally positive unit")


def bound_exceptional_primes(
    E: WeierstrassModel,
    samples: Sequence[FrobeniusDatum],
    profile: FieldProfile,
    semistability: SemistabilityReport | None = None,
) -> ExceptionalBound:
    """Primes l where the mod-l image might be small.

    Outside the returned set, a small mod-l image would force l to divide
    every sampled point count.
    """
    _require_field_hypotheses(profile)
    report = semistability or is_semistable(E)
    if not report.semistable:
        raise NotSemistable("some bad place has additive reduction")
    if not samples:
        raise ValueError("need at least one sample place")
    g = 0
    for d in samples:
        g = gcd(g, d.count)
    ramified = set(profile.ramified_primes)
    eligible = {}
    for ell in SMALL_PRIMES:
        eligible[ell] = any(b.v_j is not None and b.v_j % ell for b in report.bad_places)
    candidates: dict[int, str] = {}
    for ell in sorted(ramified):
        candidates[ell] = "ramified in K"
    for ell, ok in eligible.items():
        if not ok and ell not in candidates:
            candidates[ell] = "v(j) hypothesis fails"
    for ell in sorted(factor_int(g)) if g > 1 else ():
        candidates.setdefault(ell, "divides every sampled point count")
    return ExceptionalBound(
        dict(sorted(candidates.items())),
        {d.place.name: d.count for d in samples},
        g,
        eligible,
    )


# ---------------------------------------------------------------------------
# mod-l and l-adic checks


def _usable(data: Iterable[FrobeniusDatum], ell: int) -> list[FrobeniusDatum]:
    return [d for d in data if d.place.p != ell]


def frobdisc_check(ell: int, data: Sequence[FrobeniusDatum]) -> Verdict:
    """Find Frobenius witnesses forcing H(l) = GL2(F_l) for l >= 5."""
    if ell < 5:
        raise PrimeTooSmall(f"the Frobenius criterion needs l >= 5, got {ell}")
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    usable = _usable(data, ell)
    s1 = s2 = t = None
    for d in usable:
        tr, n = d.trace % ell, d.norm % ell
        disc_sym = legendre(tr * tr - 4 * n, ell)
        if tr:
            if disc_sym == 1 and s1 is None:
                s1 = (d, disc_sym)
            elif disc_sym == -1 and s2 is None:
                s2 = (d, disc_sym)
        if t is None:
            u = tr * tr * pow(n, -1, ell) % ell
            if u not in (0, 1, 2, 4) and (u * u - 3 * u + 1) % ell:
                t = (d, u)
    missing = [name for name, w in (("s1", s1), ("s2", s2), ("t", t)) if w is None]
    if missing:
        return Verdict.inconclusive(
            f"no witness for {', '.join(missing)} at l = {ell}; add more places",
            Step(
                claim=f"H({ell}) = GL2(F_{ell})",
                rule="Frobenius discriminant criterion",
                witness={"ell": ell, "places": [d.place.name for d in usable], "missing": missing},
            ),
        )
    return Verdict.certified(
        Step(
            claim=f"H({ell}) contains SL2(F_{ell})",
            rule="Frobenius discriminant criterion",
            witness={
                "ell": ell,
                "s1": {"place": s1[0].place.name, "disc_mod_ell": (s1[0].trace**2 - 4 * s1[0].norm) % ell, "legendre": 1},
                "s2": {"place": s2[0].place.name, "disc_mod_ell": (s2[0].trace**2 - 4 * s2[0].norm) % ell, "legendre": -1},
                "t": {"place": t[0].place.name, "u": t[1]},
            },
        ),
        Step(
            claim=f"H({ell}) = GL2(F_{ell})",
            rule="det surjective",
            witness={"ell": ell, "source": "condition (ii): det is the cyclotomic character"},
        ),
    )


def _hensel_root_mod9(t: int, n: int, r: int) -> int:
    f = (r * r - t * r + n) % 9
    df = (2 * r - t) % 3
    return (r - f * pow(df, -1, 3)) % 9


def three_adic_witness(d: FrobeniusDatum) -> dict | None:
    """Diagonal congruence element from one Frobenius, or None if the datum is unusable."""
    t, n = d.trace, d.norm
    if n % 3 == 0:
        return None
    roots = [r for r in range(3) if (r * r - t * r + n) % 3 == 0]
    if len(roots) != 2:
        return None
    a, b = (_hensel_root_mod9(t, n, r) for r in roots)
    e = max(ZModN(a, 3).multiplicative_order(), ZModN(b, 3).multiplicative_order())  # orders are 1 or 2, so max = lcm
    ca, cb = ((pow(x, e, 9) - 1) // 3 % 3 for x in (a, b))
    span = conj_module_span(Mat2(ca, 0, 0, cb, 3), 3)
    return {
        "place": d.place.name,
        "roots_mod_9": sorted([a, b]),
        "e": e,
        "C": [ca, 0, 0, cb],
        "span_dimension": span.dimension,
    }


def lift_3adic(data: Sequence[FrobeniusDatum], h3_full: Verdict) -> Verdict:
    if not h3_full.ok:
        raise MissingPrerequisite("H(3) = GL2(F_3) is not certified")
    tried = []
    for d in _usable(data, 3):
        w = three_adic_witness(d)
        if w is None:
            tried.append({"place": d.place.name, "skipped": "charpoly has no distinct roots mod 3"})
            continue
        if w["span_dimension"] < 4:
            tried.append({"place": d.place.name, "skipped": f"span dimension {w['span_dimension']}"})
            continue
        lift = lift_predicate(LiftEvidence(3, LiftRule.MOD_ELL_SQUARED, 9, support=(d.place.name,)))
        return Verdict.certified(
            Step(claim="H(9) contains (I+3M)/(I+9M)", rule="conjugation module", witness=w),
            lift,
        )
    return Verdict.inconclusive(
        "no Frobenius generates (I+3M)/(I+9M)",
        Step(claim="H(9) = GL2(Z/9)", rule="conjugation module", witness={"tried": tried}),
    )


def lift_2adic(E: WeierstrassModel, h2_full: Verdict, sign_det_full: Verdict) -> Verdict:
    if not h2_full.ok:
        raise MissingPrerequisite("H(2) = GL2(F_2) is not certified")
    if not sign_det_full.ok:
        raise MissingPrerequisite("(sgn, det) surjectivity is not certified")
    sign = real_sign(E.discriminant)
    if sign != 1:
        return Verdict.inconclusive(
            "complex-conjugation trick unavailable",
            Step(claim="disc > 0 in the real embedding", rule="real sign", witness={"sign": sign}),
        )
    span = conj_module_span(Mat2(0, 0, 0, 1, 2), 2)
    if not span.full:
        return Verdict.inconclusive(
            "diag(0, 1) does not generate (I+2M)/(I+4M)",
            Step(claim="H(4) = GL2(Z/4)", rule="conjugation module", witness={"span_dimension": span.dimension}),
        )
    return Verdict.certified(
        Step(claim="disc > 0 in the real embedding", rule="real sign", witness={"sign": sign}),
        Step(
            claim="H(4) contains (I+2M)/(I+4M)",
            rule="conjugation module",
            witness={"complex_conjugation": "trace 0, det -1, sgn +1", "C": [0, 0, 0, 1], "span_dimension": span.dimension},
        ),
        lift_predicate(LiftEvidence(2, LiftRule.MOD_4_WITH_SIGN_DET, 4, sign_det_surjective=True)),
    )


# ---------------------------------------------------------------------------
# pipeline


@dataclass
class CertifyConfig:
    places: tuple[str, ...] = ()
    sample_budget: int = DEFAULT_SAMPLE_BUDGET
    max_q: int = DEFAULT_MAX_Q
    skip_primes_iii: tuple[int, ...] = ()
    search_limit: int = 2000


@dataclass
class Certificate:
    profile: FieldProfile
    curve: dict
    condition_ii: Verdict
    condition_iii: Verdict | None = None
    frobenius: list[FrobeniusDatum] = field(default_factory=list)
    bound: ExceptionalBound | None = None
    per_prime: dict[str, Verdict] = field(default_factory=dict)
    final: Verdict = field(default_factory=lambda: Verdict.inconclusive("not run"))
    errors: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "field": self.profile.as_dict(),
            "curve": self.curve,
            "condition_ii": self.condition_ii.as_dict(),
            "condition_iii": None if self.condition_iii is None else self.condition_iii.as_dict(),
            "frobenius": [d.as_dict() for d in self.frobenius],
            "exceptional_bound": None if self.bound is None else self.bound.as_dict(),
            "per_prime": {k: v.as_dict() for k, v in self.per_prime.items()},
            "final": self.final.as_dict(),
            "errors": list(self.errors),
        }

    def to_json(self) -> str:
        return canonical_json(self.as_dict())

    def report(self) -> str:
        lines = [f"final: {self.final.status.value}"]
        if self.final.reason:
            lines.append(f"  reason: {self.final.reason}")
        lines.append(f"condition (ii): {self.condition_ii.status.value}")
        if self.condition_iii is not None:
            lines.append(f"condition (iii): {self.condition_iii.status.value}")
        if self.bound is not None:
            cands = ", ".join(f"{k} ({v})" for k, v in self.bound.candidates.items())
            lines.append(f"sample gcd {self.bound.count_gcd}; candidates: {cands or 'none'}")
        for key, v in self.per_prime.items():
            extra = f" - {v.reason}" if v.reason else ""
            lines.append(f"  l = {key}: {v.status.value}{extra}")
            for s in v.steps:
                lines.append(f"      {s.rule}: {s.claim}")
        for e in self.errors:
            lines.append(f"error: {e}")
        return "\n".join(lines) + "\n"


def _stringify(obj):
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_stringify(v) for v in obj]
    return obj


def canonical_json(obj) -> str:
    """Sorted keys, integers as decimal strings."""
    return json.dumps(_stringify(obj), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def auto_places(K: CubicField, E: WeierstrassModel, count: int, limit: int = 2000) -> list[PrimeIdeal]:
    """The first ``count`` good, unramified degree-1 places by norm."""
    out: list[PrimeIdeal] = []
    p = 2
    while len(out) < count and p <= limit:
        if is_prime(p) and K.discriminant % p:
            for P in K.split_prime(p):
                if P.residue_degree == 1 and reduce_curve(E, P).kind is Reduction.GOOD:
                    out.append(P)
                    if len(out) == count:
                        break
        p += 1
    return out


def sample_pool(K: CubicField, E: WeierstrassModel, config: CertifyConfig) -> list[PrimeIdeal]:
    explicit = [K.prime(name) for name in config.places]
    pool = list(explicit)
    if len(pool) < config.sample_budget:
        for P in auto_places(K, E, config.sample_budget, config.search_limit):
            if P not in pool:
                pool.append(P)
            if len(pool) == config.sample_budget:
                break
    return pool[: config.sample_budget]


def curve_summary(E: WeierstrassModel, semistability: SemistabilityReport | None) -> dict:
    inv = E.invariants()
    out = {
        "coefficients": [list(a.coords) for a in E.coefficients],
        "disc": list(inv.disc.coords),
        "c4": list(inv.c4.coords),
        "disc_norm": inv.disc.norm(),
    }
    if semistability is not None:
        out["semistable"] = semistability.semistable
        out["bad_places"] = [
            {"place": b.place.name, "v_disc": b.v_disc, "v_c4": b.v_c4, "v_j": b.v_j, "kind": b.kind.value}
            for b in semistability.bad_places
        ]
    return out


def _mod_ell_full(ell: int, bound: ExceptionalBound) -> Verdict:
    return Verdict.certified(
        Step(
            claim=f"H({ell}) = GL2(F_{ell})",
            rule="point-count bound",
            witness={"ell": ell, "gcd": bound.count_gcd, "counts": bound.counts},
        )
    )


def _assemble(cert: Certificate) -> Verdict:
    parts = [("condition (ii)", cert.condition_ii)]
    if cert.condition_iii is not None:
        parts.append(("condition (iii)", cert.condition_iii))
    parts += [(f"l = {k}", v) for k, v in cert.per_prime.items()]
    for name, v in parts:
        if v.status is Status.REFUTED:
            return Verdict.refuted(f"{name}: {v.reason}")
    for name, v in parts:
        if v.status is not Status.CERTIFIED:
            return Verdict.inconclusive(f"{name}: {v.reason}")
    return Verdict.certified(
        Step(
            claim="rho_E(G_K) = GL2(Z^)",
            rule="H_l full for every l and (sgn, det) surjective",
            witness={"primes": list(cert.per_prime)},
        )
    )


def certify(K: CubicField, E: WeierstrassModel, config: CertifyConfig | None = None) -> Certificate:
    config = config or CertifyConfig()
    profile = field_preflight(K)
    cond_ii = check_condition_ii(profile)
    cert = Certificate(profile, curve_summary(E, None), cond_ii)
    if cond_ii.status is Status.REFUTED:
        cert.final = _assemble(cert)
        return cert
    try:
        _run_pipeline(K, E, config, cert)
    except AdelicError as exc:
        cert.errors.append(f"{type(exc).__name__}: {exc}")
        cert.final = Verdict.inconclusive(f"{type(exc).__name__}: {exc}")
        return cert
    cert.final = _assemble(cert)
    return cert


def _run_pipeline(K: CubicField, E: WeierstrassModel, config: CertifyConfig, cert: Certificate) -> None:
    report = is_semistable(E)
    cert.curve = curve_summary(E, report)
    if not report.semistable:
        raise NotSemistable("some bad place has additive reduction")
    cert.condition_iii = check_condition_iii(K, E.discriminant, config.skip_primes_iii)
    pool = sample_pool(K, E, config)
    data = [frobenius_datum(E, P, config.max_q) for P in pool]
    cert.frobenius = data
    if not data:
        raise MissingPrerequisite("no sample places available")
    bound = bound_exceptional_primes(E, data, cert.profile, report)
    cert.bound = bound
    sign_det = Verdict(
        Status.CERTIFIED if cert.condition_ii.ok and cert.condition_iii.ok else Status.INCONCLUSIVE,
        (Step(claim="(sgn, det)(H) = {+-1} x Z^*", rule="conditions (ii) and (iii)"),),
        None if cert.condition_iii.ok else "condition (iii) not certified",
    )
    candidates = bound.candidates

    large = sorted(ell for ell in candidates if ell >= 5)
    cert.per_prime["others"] = Verdict.certified(
        Step(
            claim="H_l = GL2(Z_l) for every l >= 5 outside the candidate set",
            rule=LiftRule.MOD_ELL_WITH_DET.name,
            witness={"excluded": large, "gcd": bound.count_gcd},
        )
    )
    for ell in (2, 3):
        key = str(ell)
        if ell in candidates:
            cert.per_prime[key] = Verdict.inconclusive(
                f"{ell} is a candidate ({candidates[ell]}); no route to H({ell}) = GL2(F_{ell})"
            )
            continue
        h_full = _mod_ell_full(ell, bound)
        try:
            lifted = lift_2adic(E, h_full, sign_det) if ell == 2 else lift_3adic(data, h_full)
        except MissingPrerequisite as exc:
            lifted = Verdict.inconclusive(str(exc))
        cert.per_prime[key] = Verdict(lifted.status, h_full.steps + lifted.steps, lifted.reason)
    for ell in large:
        v = frobdisc_check(ell, data)
        if v.ok:
            v = Verdict.certified(*v.steps, lift_predicate(LiftEvidence(ell, LiftRule.MOD_ELL_WITH_DET, ell, det_surjective=True)))
        cert.per_prime[str(ell)] = v
    keys = sorted(cert.per_prime, key=lambda k: (k == "others", int(k) if k.isdigit() else 0))
    cert.per_prime = {k: cert.per_prime[k] for k in keys}


# ---------------------------------------------------------------------------
# independent re-verification


def _naive_count(E: WeierstrassModel, P: PrimeIdeal) -> int:
    C = reduce_curve(E, P)
    ctx = C.ctx
    a1, a2, a3, a4, a6 = C.coeffs
    elems = list(ctx.elements())
    total = 1
    for x in elems:
        rhs = x * x * x + a2 * x * x + a4 * x + a6
        lin = a1 * x + a3
        for y in elems:
            if y * y + lin * y == rhs:
                total += 1
    return total


def _naive_legendre(a: int, ell: int) -> int:
    a %= ell
    if a == 0:
        return 0
    return 1 if any(x * x % ell == a for x in range(1, ell)) else -1


def _naive_span_dim(C: Sequence[int], ell: int) -> int:
    # additive closure of the conjugates, then log_ell of its size
    conj = set()
    for a, b, c, d in ((a, b, c, d) for a in range(ell) for b in range(ell) for c in range(ell) for d in range(ell)):
        det = (a * d - b * c) % ell
        if det == 0:
            continue
        g = Mat2(a, b, c, d, ell)
        conj.add((g * Mat2(*C, ell) * g.inverse()).entries)
    span = {(0, 0, 0, 0)}
    frontier = set(span)
    while frontier:
        nxt = set()
        for v in frontier:
            for w in conj:
                s = tuple((x + y) % ell for x, y in zip(v, w))
                if s not in span:
                    span.add(s)
                    nxt.add(s)
        frontier = nxt
    dim, size = 0, 1
    while size < len(span):
        size *= ell
        dim += 1
    return dim


def reverify(cert: Certificate, K: CubicField, E: WeierstrassModel, naive_q: int = 5000) -> list[str]:
    """Recompute every certified witness by brute force; returns the list of disagreements."""
    problems: list[str] = []
    if cert.profile.non_galois and cert.profile.discriminant != K.discriminant:
        problems.append("discriminant")
    data = {d.place.name: d for d in cert.frobenius}
    for d in cert.frobenius:
        if d.norm <= naive_q:
            c = _naive_count(E, d.place)
            if c != d.count:
                problems.append(f"count at {d.place.name}: {c} != {d.count}")
    if cert.condition_iii is not None and cert.condition_iii.ok:
        w = cert.condition_iii.steps[0].witness
        fac = ideal_factorization(E.discriminant)
        vals = [fac.get(P, 0) for P in K.split_prime(w["p"])]
        if vals != w["valuations"] or len({v % 2 for v in vals}) != 2:
            problems.append("condition (iii) valuations")
    for key, v in cert.per_prime.items():
        if not v.ok:
            continue
        for s in v.steps:
            w = s.witness
            if s.rule == "Frobenius discriminant criterion":
                ell = w["ell"]
                for name, want in (("s1", 1), ("s2", -1)):
                    d = data[w[name]["place"]]
                    if _naive_legendre(d.trace**2 - 4 * d.norm, ell) != want or d.trace % ell == 0:
                        problems.append(f"{name} at l = {ell}")
                d = data[w["t"]["place"]]
                u = next(x for x in range(ell) if x * d.norm % ell == d.trace**2 % ell)
                if u != w["t"]["u"] or u in (0, 1, 2, 4) or (u * u - 3 * u + 1) % ell == 0:
                    problems.append(f"t at l = {ell}")
            elif s.rule == "conjugation module":
                ell = 3 if "roots_mod_9" in w else 2
                if ell == 3:
                    d = data[w["place"]]
                    roots = sorted(r for r in range(9) if (r * r - d.trace * r + d.norm) % 9 == 0)
                    if roots != w["roots_mod_9"]:
                        problems.append(f"roots mod 9 at {w['place']}")
                dim = _naive_span_dim(w["C"], ell)
                if dim != w["span_dimension"] or dim != 4:
                    problems.append(f"span at l = {ell}")
            elif s.rule == "real sign":
                if real_sign(E.discriminant) != w["sign"]:
                    problems.append("real sign")
    if cert.bound is not None:
        g = 0
        for d in cert.frobenius:
            g = gcd(g, d.count)
        if g != cert.bound.count_gcd:
            problems.append("gcd")
    return problems


__all__ = [
    "Certificate",
    "CertifyConfig",
    "ExceptionalBound",
    "Status",
    "Step",
    "Verdict",
    "bound_exceptional_primes",
    "canonical_json",
    "certify",
    "check_condition_ii",
    "check_condition_iii",
    "frobdisc_check",
    "lift_2adic",
    "lift_3adic",
    "reverify",
    "sample_pool",
    "three_adic_witness",
]
