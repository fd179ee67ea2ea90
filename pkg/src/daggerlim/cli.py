"""Command-line front end.

Exit codes: 0 ok, 1 verification or verdict failure, 2 invalid input.
Rationals are given as ``a/b`` strings everywhere.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .annulus import AnnulusSpec, LaurentSeries, annulus_membership, annulus_rlim_check, fl_split
from .derived_limit import (
    Lim1Kind,
    ObstructionCertificate,
    SystemConfig,
    SystemKind,
    build_system,
    cocycle_from_json,
    criterion_failure_witness,
    default_grid,
    delta_solve,
    lim1_verdict,
    parse_eta_family,
    standard_corpus,
    verify_certificate,
)
from .errors import DaggerLimError, HorizonExceeded
from .membership import SpaceSpec, membership, sum_non_membership
from .series import DiagonalSeries, TruncatedSeries
from .valuation import as_fraction, fmt_rational

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2


class InputError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    prime: int = 2
    eta_family: str = "1/(n+1)"
    out: str | None = None
    fmt: str = "json"

    def system_config(self) -> SystemConfig:
        return SystemConfig(self.prime, parse_eta_family(self.eta_family))


def _rational(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, TypeError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational a/b, got {text!r}") from None


def _load_json(text: str) -> Any:
    """Inline JSON, or a path to a JSON file."""
    try:
        if not text.lstrip().startswith(("{", "[")) and Path(text).exists():
            text = Path(text).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {text[:60]!r}: {exc}") from None


def _dump(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        return
    target = Path(cfg.out)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _bidisk(cfg: RunConfig):
    return build_system(SystemKind.BIDISK_OPEN_DAGGER, cfg.system_config())


def _grid(name: str, cfg: RunConfig):
    config = cfg.system_config()
    if name == "default":
        return default_grid(config)
    if name == "single":
        return [(0, 1, Fraction(-1, 2), config.eta(0) / 2)]
    raise InputError(f"unknown grid {name!r}")


# ---------------------------------------------------------------------------
# commands


def cmd_counterexample(args, cfg: RunConfig) -> int:
    sys_ = _bidisk(cfg)
    if args.grid:
        points = _grid(args.grid, cfg)
    else:
        missing = [o for o in ("n", "m", "e_lambda", "e_eta") if getattr(args, o) is None]
        if missing:
            raise InputError("missing " + ", ".join("--" + m.replace("_", "-") for m in missing))
        points = [(args.n, args.m, args.e_lambda, args.e_eta)]
    certs = []
    for n, m, e_lambda, e_eta in points:
        cert = criterion_failure_witness(n, m, e_lambda, e_eta, sys_)
        result = verify_certificate(cert, sys_)
        if not result.ok:
            print(f"self-verification failed for (n={n}, m={m}): " + ", ".join(c.name for c in result.failures), file=sys.stderr)
            return EXIT_FAIL
        certs.append(cert.to_json(sys_))
    if cfg.fmt == "markdown":
        lines = ["| n | m | e_lambda | e_eta | d | e_rho | e_delta | e_eta' | verified |", "|---|---|---|---|---|---|---|---|---|"]
        for c in certs:
            i, d = c["inputs"], c["derived"]
            lines.append(f"| {i['n']} | {i['m']} | {i['e_lambda']} | {i['e_eta']} | {d['d']} | {d['e_rho']} | {d['e_delta']} | {d['e_eta_prime']} | yes |")
        _emit("\n".join(lines) + "\n", cfg)
    else:
        _emit(_dump(certs[0] if len(certs) == 1 and not args.grid else {"certificates": certs}), cfg)
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    try:
        obj = json.loads(Path(args.path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot parse {args.path}: {exc}") from None
    raw = obj["certificates"] if isinstance(obj, dict) and "certificates" in obj else [obj]
    try:
        certs = [ObstructionCertificate.from_json(c) for c in raw]
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed certificate: {exc}") from None
    status = EXIT_OK
    for k, cert in enumerate(certs):
        result = verify_certificate(cert)
        if result.ok:
            print(f"certificate {k}: OK ({len(result.checks)} checks)")
        else:
            status = EXIT_FAIL
            for c in result.failures:
                print(f"certificate {k}: FAILED {c.name}: {c.lhs} {c.rel} {c.rhs}")
    return status


def _series(obj: dict, prime: int):
    if "envelope" in obj:
        return DiagonalSeries.from_json(obj)
    return TruncatedSeries.from_json(obj, prime=prime)


def cmd_membership(args, cfg: RunConfig) -> int:
    try:
        f = _series(_load_json(args.series), cfg.prime)
        space = SpaceSpec.from_json(_load_json(args.space))
        other = SpaceSpec.from_json(_load_json(args.sum_with)) if args.sum_with else None
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed input: {exc}") from None
    cert = sum_non_membership(f, space, other) if other is not None else membership(f, space)
    _emit(_dump(cert.to_json()), cfg)
    return EXIT_OK


def cmd_delta_solve(args, cfg: RunConfig) -> int:
    sys_ = build_system(SystemKind(args.system), cfg.system_config())
    try:
        cocycle = cocycle_from_json(_load_json(args.cocycle), cfg.prime)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed cocycle: {exc}") from None
    try:
        out = delta_solve(cocycle, sys_, horizon=args.horizon)
    except HorizonExceeded as exc:
        print(f"horizon exceeded: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(_dump(out.to_json()), cfg)
    return EXIT_OK


def cmd_annulus_split(args, cfg: RunConfig) -> int:
    try:
        f = LaurentSeries.from_json(_load_json(args.series), cfg.prime)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed Laurent series: {exc}") from None
    F, L = fl_split(f)
    out: dict[str, Any] = {"F": F.to_json(), "L": L.to_json()}
    if args.e_r is not None and args.e_R is not None:
        out["membership"] = annulus_membership(f, AnnulusSpec(args.e_r, args.e_R)).to_json()
    _emit(_dump(out), cfg)
    return EXIT_OK


def _annulus_report(args, cfg: RunConfig):
    A = AnnulusSpec(args.e_r, args.e_R)
    exhaustion = parse_eta_family(args.exhaustion) if getattr(args, "exhaustion", None) else None
    return annulus_rlim_check(A, exhaustion, degree=args.degree, prime=cfg.prime)


def cmd_annulus_check(args, cfg: RunConfig) -> int:
    report = _annulus_report(args, cfg)
    _emit(_dump(report.to_json()), cfg)
    return EXIT_OK if report.kind is Lim1Kind.VANISHES_EVIDENCE else EXIT_FAIL


def build_report(args, cfg: RunConfig) -> tuple[dict, bool, list[str]]:
    config = cfg.system_config()
    warnings: list[str] = []
    grid = _grid(args.grid, cfg)
    grid_status = "ok" if len({p[0] for p in grid}) >= 2 else "inconclusive_grid"
    if grid_status != "ok":
        warnings.append("grid covers fewer than two levels n; the bidisk verdict is marked inconclusive_grid")

    bidisk = build_system(SystemKind.BIDISK_OPEN_DAGGER, config)
    v_bi = lim1_verdict(bidisk, grid)
    stein = build_system(SystemKind.OPEN_DISK_STEIN, config)
    v_st = lim1_verdict(stein, standard_corpus(stein))
    v_an = _annulus_report(args, cfg)

    ab_note = "evidence for lim = Rlim (not a proof); where that hypothesis holds, Theorems A and B apply to coherent sheaves"
    sections = [
        {
            "system": SystemKind.BIDISK_OPEN_DAGGER.value,
            "space": "open unit disk x dagger closed unit disk",
            "expected": Lim1Kind.NON_ZERO_CERTIFIED.value,
            "verdict": v_bi.kind.value,
            "claim_strength": v_bi.claim_strength,
            "grid_status": grid_status,
            "certificates": len(v_bi.certificates),
            "grid_points": len(grid),
            "conclusion": "lim^1 != 0, hence H^1(X, O_X) != 0; Theorem B fails" if v_bi.kind is Lim1Kind.NON_ZERO_CERTIFIED else "no conclusion",
            "diagnostics": list(v_bi.diagnostics),
        },
        {
            "system": SystemKind.OPEN_DISK_STEIN.value,
            "space": "open unit disk",
            "expected": Lim1Kind.VANISHES_EVIDENCE.value,
            "verdict": v_st.kind.value,
            "claim_strength": v_st.claim_strength,
            "corpus": len(v_st.lifts) + len(v_st.diagnostics),
            "conclusion": ab_note if v_st.kind is Lim1Kind.VANISHES_EVIDENCE else "no conclusion",
            "diagnostics": list(v_st.diagnostics),
        },
        {
            "system": SystemKind.ANNULUS_FRECHET_FACTOR.value,
            "space": f"half-open annulus e_r={fmt_rational(args.e_r)}, e_R={fmt_rational(args.e_R)}",
            "expected": Lim1Kind.VANISHES_EVIDENCE.value,
            "verdict": v_an.kind.value,
            "claim_strength": "evidence" if v_an.kind is Lim1Kind.VANISHES_EVIDENCE else "none",
            "lifts": v_an.lifts,
            "checks": [c.to_json() for c in v_an.checks],
            "conclusion": ab_note if v_an.kind is Lim1Kind.VANISHES_EVIDENCE else "no conclusion",
            "diagnostics": v_an.diagnostics,
        },
    ]
    ok = all(s["verdict"] == s["expected"] for s in sections)
    for s in sections:
        s["matches_expected"] = s["verdict"] == s["expected"]
    report = {"config": {**config.to_json(), "grid": args.grid, "degree": args.degree}, "grid_status": grid_status, "sections": sections}
    return report, ok, warnings


def _markdown_report(report: dict) -> str:
    lines = ["# lim^1 report", "", f"prime {report['config']['prime']}, exponents e_n = {report['config']['eta_family']}", ""]
    for s in report["sections"]:
        lines += [f"## {s['system']}", "", f"- space: {s['space']}", f"- verdict: **{s['verdict']}** ({s['claim_strength']})", f"- expected: {s['expected']}"]
        if "grid_status" in s:
            lines.append(f"- grid: {s['grid_points']} points, status {s['grid_status']}")
        lines.append(f"- conclusion: {s['conclusion']}")
        for d in s["diagnostics"]:
            lines.append(f"- diagnostic: {d}")
        lines.append("")
    return "\n".join(lines)


def cmd_report(args, cfg: RunConfig) -> int:
    report, ok, warnings = build_report(args, cfg)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    _emit(_markdown_report(report) if cfg.fmt == "markdown" else _dump(report), cfg)
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# argument parsing

_NEG_RATIONAL = re.compile(r"^-\d+(/\d+)?$")


def _join_negative_values(argv: Sequence[str]) -> list[str]:
    """Rewrite ``--opt -1/2`` as ``--opt=-1/2``; argparse would read ``-1/2`` as a flag."""
    out: list[str] = []
    for tok in argv:
        if out and _NEG_RATIONAL.match(tok) and out[-1].startswith("--") and "=" not in out[-1]:
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--prime", type=int, default=default(2), help="base prime p (default 2)")
    parser.add_argument("--eta-family", default=default("1/(n+1)"), help="exponents e_n of eta_n = p^(-e_n), e.g. '1/(n+1)', '1/(2n+2)', '1/2^(n+1)'")
    parser.add_argument("--out", default=default(None), help="write output here (atomically) instead of stdout")
    parser.add_argument("--format", dest="fmt", choices=("json", "markdown"), default=default("json"))


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="daggerlim", description="Certificates for lim^1 of dagger polydisk algebras.")
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("counterexample", parents=[common], help="build and self-verify obstruction certificates")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--e-lambda", type=_rational)
    p.add_argument("--e-eta", type=_rational)
    p.add_argument("--grid", choices=("default", "single"))
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("verify", parents=[common], help="re-verify a certificate file")
    p.add_argument("path")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("membership", parents=[common], help="membership (or sum non-membership) of a series")
    p.add_argument("--series", required=True, help="JSON (inline or file): diagonal {d, envelope} or truncated {support, tail}")
    p.add_argument("--space", required=True, help='SpaceSpec JSON {"vars": [{"e": "a/b", "mode": ...}]}')
    p.add_argument("--sum-with", help="second SpaceSpec: test non-membership in space + sum-with")
    p.set_defaults(func=cmd_membership)

    p = sub.add_parser("delta-solve", parents=[common], help="telescoping lift of a cocycle")
    p.add_argument("--system", choices=[k.value for k in SystemKind if k is not SystemKind.ANNULUS_FRECHET_FACTOR], default="open_disk_stein")
    p.add_argument("--cocycle", required=True, help="cocycle JSON (inline or file)")
    p.add_argument("--horizon", type=int, default=16)
    p.set_defaults(func=cmd_delta_solve)

    p = sub.add_parser("annulus-split", parents=[common], help="F + L split of a Laurent series")
    p.add_argument("--series", required=True)
    p.add_argument("--e-r", type=_rational)
    p.add_argument("--e-R", dest="e_R", type=_rational)
    p.set_defaults(func=cmd_annulus_split)

    for name, func in (("annulus-check", cmd_annulus_check), ("report", cmd_report)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--e-r", type=_rational, default=Fraction(1))
        p.add_argument("--e-R", dest="e_R", type=_rational, default=Fraction(1, 2))
        p.add_argument("--degree", type=int, default=200)
        p.add_argument("--exhaustion", help="inner-radius exponents e_(r,k), increasing to e_r")
        if name == "report":
            p.add_argument("--grid", choices=("default", "single"), default="default")
        p.set_defaults(func=func)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = _join_negative_values(sys.argv[1:] if argv is None else argv)
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    cfg = RunConfig(args.prime, args.eta_family, args.out, args.fmt)
    try:
        cfg.system_config()
        return args.func(args, cfg)
    except (InputError, DaggerLimError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
