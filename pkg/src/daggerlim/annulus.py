"""Half-open annuli ``r < |x| <= R`` with overconvergence at the outer circle.

Functions are Laurent series ``sum a_i x**i``.  The negative part is read in
``w = 1/x``: it must converge on every disk ``|w| <= 1/rho`` with ``rho > r``,
i.e. on the open disk of radius ``1/r`` (log exponent ``-e_r``, mode OPEN).
The nonnegative part must converge on some disk slightly larger than ``R``
(log exponent ``e_R``, mode DAGGER).  The two conditions never interact, which
is the direct sum ``F + L`` of a Frechet and an LB space.

An exhaustion by the Weierstrass subdomains ``rho_k <= |x| <= R`` moves only
the inner radius, so the L factor is a constant inverse system and only the
F factor contributes a limit.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from .derived_limit import (
    Cocycle,
    EtaRule,
    Explicit,
    FiniteCocycle,
    Lim1Kind,
    Lift,
    Negated,
    Reciprocal,
    SystemConfig,
    SystemKind,
    build_system,
    delta_solve,
    standard_corpus,
)
from .errors import EnvelopeViolation, HorizonExceeded, InvalidConfig, InvalidExhaustion, MissingEnvelope
from .membership import MembershipCertificate, SpaceSpec, Verdict, ray_membership
from .series import Envelope, Sublinear, TruncatedSeries
from .valuation import Mode, PolyRadius, as_fraction, fmt_rational


class ZeroTail:
    """Marker for a side of a Laurent series with no terms beyond the stored support."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ZERO_TAIL"

    def __reduce__(self):
        return (ZeroTail, ())


ZERO_TAIL = ZeroTail()
Tail = Union[Envelope, ZeroTail]


def _tail_to_json(t: Tail | None):
    if t is None:
        return None
    if t is ZERO_TAIL:
        return "zero"
    return t.to_json()


def _tail_from_json(obj) -> Tail | None:
    if obj is None:
        return None
    if obj == "zero":
        return ZERO_TAIL
    return Envelope.from_json(obj)


@dataclass(frozen=True)
class LaurentSeries:
    """Finite Laurent support plus valuation envelopes for both tails.

    ``neg_tail(i)`` is the valuation of ``a_{-i}`` and ``pos_tail(i)`` that of
    ``a_i`` beyond the stored support; ``None`` means the tail is unknown.
    """

    terms: Mapping[int, Fraction]
    neg_tail: Tail | None = ZERO_TAIL
    pos_tail: Tail | None = ZERO_TAIL
    prime: int = 2

    def __post_init__(self) -> None:
        clean = {int(i): as_fraction(c) for i, c in self.terms.items()}
        object.__setattr__(self, "terms", {i: c for i, c in sorted(clean.items()) if c != 0})

    def to_json(self) -> dict:
        return {
            "support": [{"i": i, "coeff": fmt_rational(c)} for i, c in self.terms.items()],
            "neg_tail": _tail_to_json(self.neg_tail),
            "pos_tail": _tail_to_json(self.pos_tail),
        }

    @classmethod
    def from_json(cls, obj: dict, prime: int = 2) -> "LaurentSeries":
        terms: dict[int, Fraction] = {}
        for e in obj.get("support", []):
            terms[int(e["i"])] = terms.get(int(e["i"]), Fraction(0)) + as_fraction(e["coeff"])
        return cls(terms, _tail_from_json(obj.get("neg_tail", "zero")), _tail_from_json(obj.get("pos_tail", "zero")), prime)

    def negative_part_in_w(self) -> TruncatedSeries:
        """Stored negative terms rewritten as a polynomial in ``w = 1/x``."""
        return TruncatedSeries({(-i,): c for i, c in self.terms.items() if i < 0}, 1, None, self.prime)


def fl_split(f: LaurentSeries) -> tuple[LaurentSeries, LaurentSeries]:
    """``(F, L)``: strictly negative powers and nonnegative powers."""
    neg = {i: c for i, c in f.terms.items() if i < 0}
    pos = {i: c for i, c in f.terms.items() if i >= 0}
    return (LaurentSeries(neg, f.neg_tail, ZERO_TAIL, f.prime), LaurentSeries(pos, ZERO_TAIL, f.pos_tail, f.prime))


def fl_merge(F: LaurentSeries, L: LaurentSeries) -> LaurentSeries:
    if any(i >= 0 for i in F.terms) or F.pos_tail is not ZERO_TAIL:
        raise ValueError("F part may only carry negative powers")
    if any(i < 0 for i in L.terms) or L.neg_tail is not ZERO_TAIL:
        raise ValueError("L part may only carry nonnegative powers")
    return LaurentSeries({**F.terms, **L.terms}, F.neg_tail, L.pos_tail, F.prime)


@dataclass(frozen=True)
class AnnulusSpec:
    """``p**(-e_r) < |x| <= p**(-e_R)`` with ``e_r > e_R``."""

    e_r: Fraction
    e_R: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "e_r", as_fraction(self.e_r))
        object.__setattr__(self, "e_R", as_fraction(self.e_R))
        if not self.e_r > self.e_R:
            raise InvalidConfig("need r < R, i.e. e_r > e_R")

    def f_space(self) -> SpaceSpec:
        return SpaceSpec.open(-self.e_r)

    def l_space(self) -> SpaceSpec:
        return SpaceSpec.dagger(self.e_R)

    def space(self) -> SpaceSpec:
        """Coordinates ``(w, x)``: open in ``w = 1/x`` at radius ``1/r``, dagger in ``x`` at ``R``."""
        return SpaceSpec(PolyRadius((-self.e_r, self.e_R), (Mode.OPEN, Mode.DAGGER)))

    def level_space(self, e_inner: Fraction) -> SpaceSpec:
        """The subdomain ``p**(-e_inner) <= |x| <= R``."""
        return SpaceSpec(PolyRadius((-as_fraction(e_inner), self.e_R), (Mode.CLOSED, Mode.DAGGER)))

    def default_exhaustion(self) -> Reciprocal:
        """Inner exponents ``e_r - (e_r - e_R)/(k + 2)``: radii strictly decreasing to ``r``."""
        return Reciprocal(-(self.e_r - self.e_R), 1, 2, self.e_r)


def _tail_membership(tail: Tail | None, space: SpaceSpec, part: str) -> MembershipCertificate:
    if tail is None:
        raise MissingEnvelope(f"{part} part has no tail envelope")
    if tail is ZERO_TAIL:
        exps = [e - 1 if m is Mode.DAGGER else e for e, m in zip(space.base.exps, space.base.modes)]
        modes = [Mode.CLOSED if m is Mode.DAGGER else m for m in space.base.modes]
        return MembershipCertificate(Verdict.MEMBER, witness=PolyRadius(tuple(exps), tuple(modes)), detail=f"{part}: finite")
    return ray_membership(tail, (1,), space)


def laurent_membership(f: LaurentSeries, space: SpaceSpec) -> MembershipCertificate:
    """Membership in a two-coordinate ``(w, x)`` space: F part in ``w``, L part in ``x``."""
    if space.nvars != 2:
        raise ValueError("annulus spaces have a w and an x coordinate")
    w_space = SpaceSpec(PolyRadius(space.base.exps[:1], space.base.modes[:1]))
    x_space = SpaceSpec(PolyRadius(space.base.exps[1:], space.base.modes[1:]))
    f_cert = _tail_membership(f.neg_tail, w_space, "F")
    l_cert = _tail_membership(f.pos_tail, x_space, "L")
    for cert, part in ((f_cert, "F"), (l_cert, "L")):
        if not cert.is_member:
            return MembershipCertificate(
                Verdict.NON_MEMBER, witness_slope=cert.witness_slope, verdict_at_slope=cert.verdict_at_slope, detail=f"{part} part: {cert.detail}"
            )
    witness = PolyRadius(f_cert.witness.exps + l_cert.witness.exps, f_cert.witness.modes + l_cert.witness.modes)
    return MembershipCertificate(Verdict.MEMBER, witness=witness, detail="F and L parts converge")


def annulus_membership(f: LaurentSeries, A: AnnulusSpec) -> MembershipCertificate:
    return laurent_membership(f, A.space())


# ---------------------------------------------------------------------------
# the exhausting system


@dataclass(frozen=True)
class AnnulusCorpus:
    cocycles: tuple[Cocycle, ...] = ()
    series: tuple[LaurentSeries, ...] = ()


@dataclass(frozen=True)
class AnnulusCheck:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "pass": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class AnnulusReport:
    kind: Lim1Kind
    checks: tuple[AnnulusCheck, ...]
    lifts: int = 0

    @property
    def diagnostics(self) -> list[str]:
        return [f"{c.name}: {c.detail}" for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {"verdict": self.kind.value, "lifts": self.lifts, "checks": [c.to_json() for c in self.checks]}


def validate_exhaustion(A: AnnulusSpec, exhaustion: EtaRule, levels: int = 64) -> list[Fraction]:
    """Inner exponents must increase strictly towards ``e_r`` from inside ``(e_R, e_r)``."""
    if isinstance(exhaustion, Explicit):
        levels = min(levels, len(exhaustion.values))
    try:
        es = [exhaustion(k) for k in range(levels)]
    except InvalidConfig as exc:
        raise InvalidExhaustion(str(exc)) from None
    for k in range(len(es) - 1):
        if not es[k] < es[k + 1]:
            raise InvalidExhaustion(f"inner radii not strictly shrinking at level {k}: exponents {es[k]}, {es[k + 1]}")
    if any(not A.e_R < e < A.e_r for e in es):
        raise InvalidExhaustion("inner radii must lie strictly between r and R")
    if exhaustion.limit != A.e_r:
        raise InvalidExhaustion("inner radii must tend to r")
    return es


def frechet_system(A: AnnulusSpec, exhaustion: EtaRule | None = None, prime: int = 2):
    """The F factor as an inverse system of closed disks in ``w = 1/x``."""
    exhaustion = exhaustion or A.default_exhaustion()
    validate_exhaustion(A, exhaustion)
    return build_system(SystemKind.ANNULUS_FRECHET_FACTOR, SystemConfig(prime, Negated(exhaustion)))


def default_annulus_corpus(A: AnnulusSpec, prime: int = 2, size: int = 40) -> AnnulusCorpus:
    sys = frechet_system(A, prime=prime)
    cocycles = tuple(standard_corpus(sys, size=size))
    series = (
        LaurentSeries({-1: 1, 0: 1, 1: 1}),
        LaurentSeries({-3: Fraction(1, 2), 2: 4}, Envelope(2 * A.e_r, Sublinear.ZERO, 0), Envelope(-A.e_R, Sublinear.CEIL_SQRT, 0)),
        LaurentSeries({}, Envelope(A.e_r, Sublinear.CEIL_LOG2, 1), Envelope(-A.e_R + 1, Sublinear.ZERO, 0)),
        LaurentSeries({5: 3}, Envelope(A.e_r - 1, Sublinear.ZERO, 0), ZERO_TAIL),
        LaurentSeries({-2: 7}, ZERO_TAIL, Envelope(-A.e_R, Sublinear.ZERO, 0)),
    )
    return AnnulusCorpus(cocycles, series)


def annulus_rlim_check(
    A: AnnulusSpec,
    exhaustion: EtaRule | None = None,
    degree: int = 200,
    corpus: AnnulusCorpus | None = None,
    prime: int = 2,
    levels: int = 8,
    positions: int = 3,
) -> AnnulusReport:
    """Evidence that lim = Rlim for the exhaustion of the half-open annulus ``A``.

    (a) the dagger datum of every level is syntactically the same (constant L
    system); (b) every finite cocycle of degree <= ``degree`` in the F factor,
    and every cocycle of the corpus, has a certified telescoping lift;
    (c) the F/L split commutes with the transition inclusions and with
    membership on the corpus series.
    """
    exhaustion = exhaustion or A.default_exhaustion()
    es = validate_exhaustion(A, exhaustion)
    corpus = corpus if corpus is not None else default_annulus_corpus(A, prime)
    sys = build_system(SystemKind.ANNULUS_FRECHET_FACTOR, SystemConfig(prime, Negated(exhaustion)))
    checks: list[AnnulusCheck] = []
    n_levels = min(levels, len(es))
    level_specs = [A.level_space(es[k]) for k in range(n_levels)]

    # (a) constant dagger direction
    dagger_data = {(s.base.exps[1], s.base.modes[1]) for s in level_specs}
    checks.append(AnnulusCheck("structural.constant_dagger", len(dagger_data) == 1, f"{len(dagger_data)} distinct dagger data over {n_levels} levels"))
    nested = all(level_specs[k + 1].base.exps[0] < level_specs[k].base.exps[0] for k in range(n_levels - 1))
    checks.append(AnnulusCheck("structural.nested", nested, "w-radii grow with the level"))

    # (b) Frechet direction
    lifts = 0
    failures: list[str] = []
    for a in range(1, degree + 1):
        for pos in range(positions):
            terms = tuple(TruncatedSeries.zero(1, prime) for _ in range(pos)) + (TruncatedSeries.monomial((a,), 1, prime),)
            out = delta_solve(FiniteCocycle(terms, name=f"w^{a}@{pos}"), sys)
            if isinstance(out, Lift):
                lifts += 1
            else:
                failures.append(f"w^{a}@{pos}")
    checks.append(AnnulusCheck("frechet.finite_cocycles", not failures, f"{lifts} basis cocycles of degree <= {degree} lifted" if not failures else ", ".join(failures[:5])))
    corpus_fail: list[str] = []
    for c in corpus.cocycles:
        name = getattr(c, "name", "") or "cocycle"
        try:
            out = delta_solve(c, sys)
        except (EnvelopeViolation, HorizonExceeded, ValueError) as exc:
            corpus_fail.append(f"{name}: {exc}")
            continue
        if isinstance(out, Lift):
            lifts += 1
        else:
            corpus_fail.append(f"{name}: telescoping fails at level {out.level}")
    checks.append(AnnulusCheck("frechet.corpus", not corpus_fail, "; ".join(corpus_fail) if corpus_fail else f"{len(corpus.cocycles)} corpus cocycles lifted"))

    # (c) naturality of the split
    nat_fail: list[str] = []
    for idx, f in enumerate(corpus.series):
        try:
            F, L = fl_split(f)
            if fl_merge(F, L) != f:
                nat_fail.append(f"series {idx}: merge(split(f)) != f")
            for k in range(n_levels - 1):
                # transitions are identity on coefficients
                if fl_split(LaurentSeries(dict(f.terms), f.neg_tail, f.pos_tail, f.prime)) != (F, L):
                    nat_fail.append(f"series {idx}: split does not commute with restriction {k + 1}->{k}")
                whole = laurent_membership(f, level_specs[k + 1]).is_member
                parts = laurent_membership(F, level_specs[k + 1]).is_member and laurent_membership(L, level_specs[k + 1]).is_member
                if whole != parts:
                    nat_fail.append(f"series {idx}: membership not additive at level {k + 1}")
                if whole and not laurent_membership(f, level_specs[k]).is_member:
                    nat_fail.append(f"series {idx}: restriction {k + 1}->{k} leaves the space")
        except MissingEnvelope as exc:
            nat_fail.append(f"series {idx}: {exc}")
    checks.append(AnnulusCheck("split.natural", not nat_fail, "; ".join(nat_fail[:5]) if nat_fail else f"{len(corpus.series)} series"))

    ok = all(c.passed for c in checks)
    return AnnulusReport(Lim1Kind.VANISHES_EVIDENCE if ok else Lim1Kind.INCONCLUSIVE, tuple(checks), lifts)
