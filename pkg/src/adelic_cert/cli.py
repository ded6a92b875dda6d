"""Command-line frontend.

Config files are flat ``key = value`` lines; lists go in brackets. Curve
coefficients are triples (c0, c1, c2) meaning c0 + c1*alpha + c2*alpha^2,
and the field polynomial is listed low degree first.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Sequence

from .certifier import CertifyConfig, canonical_json, certify
from .cubic_field import CubicField, field_preflight, ideal_factorization
from .errors import AdelicError, BadReduction, ScopeError, UnknownPlace
from .evidence import Status
from .gl2 import verify_group_facts
from .residue_arith import legendre
from .weierstrass import DEFAULT_MAX_Q, WeierstrassModel, frobenius_datum, is_semistable

EXIT_OK = 0
EXIT_SCOPE = 2
EXIT_BAD_REDUCTION = 3
EXIT_GROUP_FACTS = 4
EXIT_INCONCLUSIVE = 10
EXIT_REFUTED = 11
EXIT_USAGE = 64

CURVE_KEYS = ("a1", "a2", "a3", "a4", "a6")


class ConfigError(ValueError):
    pass


@dataclass
class JobConfig:
    field: tuple[int, ...]
    curve: tuple[tuple[int, int, int], ...] = ((0, 0, 0),) * 5
    places: tuple[str, ...] = ()
    sample_budget: int = 8
    max_q: int = DEFAULT_MAX_Q
    seed: int = 0
    skip_primes_iii: tuple[int, ...] = ()
    json_out: str | None = None
    text_out: str | None = None

    def certify_config(self) -> CertifyConfig:
        return CertifyConfig(
            places=self.places,
            sample_budget=self.sample_budget,
            max_q=self.max_q,
            skip_primes_iii=self.skip_primes_iii,
        )

    def emit(self) -> str:
        lines = [f"field = {_fmt_list(self.field)}"]
        for key, triple in zip(CURVE_KEYS, self.curve):
            lines.append(f"{key} = {_fmt_list(triple)}")
        lines.append(f"places = {_fmt_list(self.places)}")
        lines.append(f"sample_budget = {self.sample_budget}")
        lines.append(f"max_q = {self.max_q}")
        lines.append(f"seed = {self.seed}")
        lines.append(f"skip_primes_iii = {_fmt_list(self.skip_primes_iii)}")
        if self.json_out is not None:
            lines.append(f"json_out = {self.json_out}")
        if self.text_out is not None:
            lines.append(f"text_out = {self.text_out}")
        return "\n".join(lines) + "\n"


def _fmt_list(items) -> str:
    return "[" + ", ".join(str(x) for x in items) + "]"


def _parse_list(raw: str) -> list[str]:
    raw = raw.strip()
    if not (raw.startswith("[") and raw.endswith("]")):
        raise ConfigError(f"expected a bracketed list, got {raw!r}")
    body = raw[1:-1].strip()
    return [item.strip() for item in body.split(",")] if body else []


def _parse_int(raw: str, key: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {raw!r}") from None


def _int_list(raw: str, key: str) -> tuple[int, ...]:
    return tuple(_parse_int(x, key) for x in _parse_list(raw))


def parse_config(text: str) -> JobConfig:
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value
    known = {"field", *CURVE_KEYS} | {f.name for f in fields(JobConfig)} - {"curve"}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(f"unknown keys: {', '.join(unknown)}")
    if "field" not in raw:
        raise ConfigError("missing key: field")
    curve = []
    for key in CURVE_KEYS:
        triple = _int_list(raw[key], key) if key in raw else (0, 0, 0)
        if len(triple) != 3:
            raise ConfigError(f"{key}: expected three coordinates")
        curve.append(triple)
    cfg = JobConfig(field=_int_list(raw["field"], "field"), curve=tuple(curve))
    if "places" in raw:
        cfg.places = tuple(_parse_list(raw["places"]))
    for key in ("sample_budget", "max_q", "seed"):
        if key in raw:
            setattr(cfg, key, _parse_int(raw[key], key))
    if "skip_primes_iii" in raw:
        cfg.skip_primes_iii = _int_list(raw["skip_primes_iii"], "skip_primes_iii")
    for key in ("json_out", "text_out"):
        if key in raw:
            setattr(cfg, key, raw[key])
    return cfg


def load_config(path: str) -> JobConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text)


def parse_places(raw: str) -> tuple[str, ...]:
    raw = raw.strip()
    items = _parse_list(raw) if raw.startswith("[") else [x.strip() for x in raw.split(",") if x.strip()]
    return tuple(items)


# ---------------------------------------------------------------------------
# commands


def _build(cfg: JobConfig) -> tuple[CubicField, WeierstrassModel]:
    K = CubicField(cfg.field)
    return K, WeierstrassModel.from_coords(K, cfg.curve)


def _write_json(path: str | None, payload) -> None:
    if path:
        Path(path).write_text(canonical_json(payload))


def cmd_preflight(cfg: JobConfig, args) -> int:
    K = CubicField(cfg.field)
    profile = field_preflight(K)
    d = profile.as_dict()
    for key, value in d.items():
        print(f"{key}: {value}")
    _write_json(args.json, d)
    return EXIT_OK


def cmd_invariants(cfg: JobConfig, args) -> int:
    K, E = _build(cfg)
    inv = E.invariants()
    out = {name: list(getattr(inv, name).coords) for name in inv._fields}
    out["disc_norm"] = inv.disc.norm()
    out["disc_factorization"] = {P.name: v for P, v in ideal_factorization(inv.disc).items()}
    report = is_semistable(E)
    out["semistable"] = report.semistable
    out["bad_places"] = [
        {"place": b.place.name, "residue_degree": b.place.residue_degree, "v_disc": b.v_disc, "v_j": b.v_j, "kind": b.kind.value}
        for b in report.bad_places
    ]
    for key, value in out.items():
        print(f"{key}: {value}")
    _write_json(args.json, out)
    return EXIT_OK


def frobenius_rows(K: CubicField, E: WeierstrassModel, places: Sequence[str], ell: int, max_q: int) -> list[dict]:
    rows = []
    for name in places:
        d = frobenius_datum(E, K.prime(name), max_q)
        row = d.as_dict()
        if d.place.p != ell:
            disc = (d.trace * d.trace - 4 * d.norm) % ell
            row[f"disc_mod_{ell}"] = disc
            if ell % 2:
                row["legendre"] = legendre(disc, ell)
        rows.append(row)
    return rows


def cmd_frobenius_table(cfg: JobConfig, args) -> int:
    K, E = _build(cfg)
    places = parse_places(args.places) if args.places is not None else cfg.places
    rows = frobenius_rows(K, E, places, args.ell, cfg.max_q)
    for r in rows:
        disc = r.get(f"disc_mod_{args.ell}")
        tail = "" if disc is None else f"  t^2-4N = {disc} (mod {args.ell})"
        print(f"v={r['place']:<8} #E={r['count']:<6} N={r['N']:<6} t={r['trace']}{tail}")
    _write_json(args.json, rows)
    return EXIT_OK


def cmd_certify(cfg: JobConfig, args) -> int:
    K, E = _build(cfg)
    cert = certify(K, E, cfg.certify_config())
    text = cert.report()
    print(text, end="")
    json_path = args.json or cfg.json_out
    if json_path:
        Path(json_path).write_text(cert.to_json())
    if cfg.text_out:
        Path(cfg.text_out).write_text(text)
    return {
        Status.CERTIFIED: EXIT_OK,
        Status.INCONCLUSIVE: EXIT_INCONCLUSIVE,
        Status.REFUTED: EXIT_REFUTED,
    }[cert.final.status]


def cmd_group_facts(args) -> int:
    report = verify_group_facts(seed=args.seed)
    print("\n".join(report.lines()))
    if args.json:
        payload = [
            {"name": c.name, "passed": c.passed, "detail": c.detail, "counterexample": c.counterexample}
            for c in report.checks
        ]
        Path(args.json).write_text(json.dumps(payload, sort_keys=True, indent=2, default=str) + "\n")
    return EXIT_OK if report.passed else EXIT_GROUP_FACTS


# ---------------------------------------------------------------------------
# entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="adelic-cert",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="job config file (key = value lines)")
    common.add_argument("--seed", type=int, help="random seed (overrides config)")
    common.add_argument("--json", help="write machine-readable output here")
    common.add_argument("--max-q", type=int, dest="max_q", help="largest residue field to count points over")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("preflight", parents=[common], help="field profile")
    sub.add_parser("invariants", parents=[common], help="curve invariants and bad places")
    ft = sub.add_parser("frobenius-table", parents=[common], help="Frobenius data at chosen places")
    ft.add_argument("--places", help="comma-separated place names, e.g. '(7),Q_11'")
    ft.add_argument("--ell", type=int, default=31, help="prime for the t^2-4N column (default 31)")
    sub.add_parser("certify", parents=[common], help="run the full certification")
    sub.add_parser("group-facts", parents=[common], help="brute-force checks of the GL2 lemmas")
    return parser


COMMANDS = {
    "preflight": cmd_preflight,
    "invariants": cmd_invariants,
    "frobenius-table": cmd_frobenius_table,
    "certify": cmd_certify,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "group-facts":
            if args.seed is None:
                args.seed = 0
            return cmd_group_facts(args)
        if not args.config:
            parser.error(f"{args.command} needs --config")
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.max_q is not None:
            cfg.max_q = args.max_q
        return COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnknownPlace as exc:
        print(f"unknown place: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BadReduction as exc:
        print(f"bad reduction: {exc}", file=sys.stderr)
        return EXIT_BAD_REDUCTION
    except ScopeError as exc:
        print(f"out of scope: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SCOPE
    except AdelicError as exc:
        print(f"undecided: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())
