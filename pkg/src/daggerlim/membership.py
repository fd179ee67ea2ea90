"""Membership of diagonal and truncated series in closed, dagger and open polydisk algebras.

A diagonal series ``sum a_i x**i y**(d*i)`` has term log-norm
``env(i) + i*(e_x + d*e_y)`` at a closed polyradius, so membership only depends
on the *combined slope* ``sigma = sum_k w_k * e_k`` with weights ``w = (1, d)``.
The set of good slopes is an up-set ``{sigma >= -alpha}`` (unbounded
sublinear term) or ``{sigma > -alpha}`` (zero sublinear term), which turns the
dagger (exists a smaller exponent) and open (for every larger exponent)
quantifiers into exact rational comparisons.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .series import DiagonalSeries, Envelope, Limit, TruncatedSeries, envelope_limit
from .valuation import Mode, PolyRadius, as_fraction, fmt_rational


@dataclass(frozen=True)
class SpaceSpec:
    """A function space given by a base polyradius with per-variable modes."""

    base: PolyRadius

    @classmethod
    def tate(cls, *exps) -> "SpaceSpec":
        return cls(PolyRadius.closed(*exps))

    @classmethod
    def dagger(cls, *exps) -> "SpaceSpec":
        return cls(PolyRadius.uniform(Mode.DAGGER, *exps))

    @classmethod
    def open(cls, *exps) -> "SpaceSpec":
        return cls(PolyRadius.uniform(Mode.OPEN, *exps))

    @property
    def nvars(self) -> int:
        return self.base.nvars

    def closed_hull(self) -> "SpaceSpec":
        return SpaceSpec(self.base.closed_hull())

    def to_json(self) -> dict:
        return self.base.to_json()

    @classmethod
    def from_json(cls, obj: dict) -> "SpaceSpec":
        return cls(PolyRadius.from_json(obj))

    def describe(self) -> str:
        parts = [f"{fmt_rational(e)}:{m.value}" for e, m in zip(self.base.exps, self.base.modes)]
        return "Space(" + ", ".join(parts) + ")"


class Verdict(enum.Enum):
    MEMBER = "member"
    NON_MEMBER = "non_member"
    CANNOT_CERTIFY = "cannot_certify"


@dataclass(frozen=True)
class MembershipCertificate:
    """Outcome of a membership query with the data needed to re-check it.

    * MEMBER: ``witness`` is a polyradius at which the series converges; dagger
      coordinates are replaced by a strictly smaller exponent (mode CLOSED),
      open coordinates keep their base exponent and mode OPEN.
    * NON_MEMBER: ``witness_slope`` is an admissible combined slope at which
      the term norms do not tend to zero (``verdict_at_slope``).
    """

    verdict: Verdict
    witness: PolyRadius | None = None
    witness_slope: Fraction | None = None
    verdict_at_slope: Limit | None = None
    detail: str = ""

    @property
    def is_member(self) -> bool:
        return self.verdict is Verdict.MEMBER

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "witness": self.witness.to_json() if self.witness is not None else None,
            "witness_slope": fmt_rational(self.witness_slope) if self.witness_slope is not None else None,
            "verdict_at_slope": self.verdict_at_slope.value if self.verdict_at_slope is not None else None,
            "detail": self.detail,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MembershipCertificate":
        return cls(
            Verdict(obj["verdict"]),
            PolyRadius.from_json(obj["witness"]) if obj.get("witness") else None,
            as_fraction(obj["witness_slope"]) if obj.get("witness_slope") is not None else None,
            Limit(obj["verdict_at_slope"]) if obj.get("verdict_at_slope") else None,
            obj.get("detail", ""),
        )


def combined_slope(weights: Sequence[int], exps: Sequence[Fraction]) -> Fraction:
    return sum((w * e for w, e in zip(weights, exps)), Fraction(0))


def ray_membership(env: Envelope, weights: Sequence[int], space: SpaceSpec) -> MembershipCertificate:
    """Membership of a series whose i-th term has valuation ``env(i)`` and exponent ``i*weights + const``.

    Diagonal series are the case ``weights = (1, d)``.  Weights must be
    nonnegative; zero-weight variables do not affect convergence.
    """
    base = space.base
    if len(weights) != base.nvars:
        raise ValueError(f"{len(weights)} weights for a {base.nvars}-variable space")
    if any(w < 0 for w in weights):
        raise ValueError("ray weights must be nonnegative")
    sigma0 = combined_slope(weights, base.exps)
    threshold = -env.alpha
    margin = sigma0 - threshold
    active = [k for k, w in enumerate(weights) if w != 0]
    daggers = [k for k in active if base.modes[k] is Mode.DAGGER]
    opens = [k for k in active if base.modes[k] is Mode.OPEN]

    if daggers:
        ok = margin > 0
    elif opens:
        ok = margin >= 0
    else:
        ok = margin > 0 or (margin == 0 and env.sublinear.unbounded)

    if ok:
        return MembershipCertificate(Verdict.MEMBER, witness=_member_witness(env, weights, base, daggers, margin))

    if daggers:
        # every admissible slope lies below sigma0 <= threshold
        slope = sigma0 - 1
        detail = "dagger: every slope below the base slope diverges to -inf"
    elif opens:
        slope = (sigma0 + threshold) / 2
        detail = "open: an admissible larger slope diverges to -inf"
    else:
        slope = sigma0
        detail = "closed: term norms do not tend to zero at the base slope"
    return MembershipCertificate(Verdict.NON_MEMBER, witness_slope=slope, verdict_at_slope=envelope_limit(env, slope), detail=detail)


def _member_witness(env: Envelope, weights: Sequence[int], base: PolyRadius, daggers: list[int], margin: Fraction) -> PolyRadius:
    exps = list(base.exps)
    modes = list(base.modes)
    if daggers:
        # land on the threshold when it is itself convergent, else halfway to it
        reduction = margin if env.sublinear.unbounded else margin / 2
        share = reduction / len(daggers)
        for k in daggers:
            exps[k] -= share / weights[k]
    for k, m in enumerate(modes):
        if m is Mode.DAGGER:
            if weights[k] == 0:
                exps[k] -= 1
            modes[k] = Mode.CLOSED
    return PolyRadius(tuple(exps), tuple(modes))


def _finite_witness(base: PolyRadius) -> PolyRadius:
    exps = [e - 1 if m is Mode.DAGGER else e for e, m in zip(base.exps, base.modes)]
    modes = [Mode.CLOSED if m is Mode.DAGGER else m for m in base.modes]
    return PolyRadius(tuple(exps), tuple(modes))


def _truncated_membership(f: TruncatedSeries, space: SpaceSpec) -> MembershipCertificate:
    if f.nvars != space.nvars:
        raise ValueError("series and space have different numbers of variables")
    if f.tail is None:
        return MembershipCertificate(Verdict.MEMBER, witness=_finite_witness(space.base), detail="polynomial")
    # omitted terms have log norm >= (a+e_x)*i + (b+e_y)*j + c; sufficient test only
    base = space.base
    exps = list(base.exps)
    modes = list(base.modes)
    for k, coef in enumerate(f.tail.coeffs()):
        net = coef + exps[k]
        mode = modes[k]
        if mode is Mode.DAGGER and net > 0:
            exps[k] -= net / 2
            modes[k] = Mode.CLOSED
        elif (mode is Mode.CLOSED and net > 0) or (mode is Mode.OPEN and net >= 0):
            pass
        else:
            return MembershipCertificate(Verdict.CANNOT_CERTIFY, detail=f"tail bound too weak in variable {k}")
    return MembershipCertificate(Verdict.MEMBER, witness=PolyRadius(tuple(exps), tuple(modes)), detail="affine tail bound")


SeriesLike = Union[DiagonalSeries, TruncatedSeries]


def membership(f: SeriesLike, space: SpaceSpec) -> MembershipCertificate:
    """Decide whether ``f`` lies in ``space``.

    Exact for diagonal series.  For truncated series the answer is exact when
    the series is finite and one-sided (MEMBER or CANNOT_CERTIFY) otherwise.
    """
    if isinstance(f, TruncatedSeries):
        return _truncated_membership(f, space)
    if space.nvars != 2:
        raise ValueError("diagonal series live in two variables")
    return ray_membership(f.env, f.weights(), space)


def sum_non_membership(f: SeriesLike, a: SpaceSpec, b: SpaceSpec) -> MembershipCertificate:
    """One-sided test that ``f`` is not in ``A + B``.

    Dagger coordinates are first relaxed to their closed hull.  If ``f = g + h``
    with ``g`` in A and ``h`` in B then, coefficient by coefficient,
    ``v(a_i) >= min(v(g_i), v(h_i))``, so ``a_i`` would converge at the larger
    of the two combined slopes.  A divergence to ``-inf`` there refutes the split.
    """
    for s in (a, b):
        if any(m is Mode.OPEN for m in s.base.modes):
            raise ValueError("sum_non_membership expects closed or dagger spaces")
    if isinstance(f, TruncatedSeries):
        return MembershipCertificate(Verdict.CANNOT_CERTIFY, detail="truncated series carry no divergence to certify")
    w = f.weights()
    slope = max(combined_slope(w, a.base.exps), combined_slope(w, b.base.exps))
    lim = envelope_limit(f.env, slope)
    if lim is Limit.MINUS_INF:
        return MembershipCertificate(
            Verdict.NON_MEMBER, witness_slope=slope, verdict_at_slope=lim, detail="coefficients diverge at the larger hull slope"
        )
    return MembershipCertificate(Verdict.CANNOT_CERTIFY, witness_slope=slope, verdict_at_slope=lim, detail="criterion inapplicable")


def check_membership_certificate(f: DiagonalSeries, space: SpaceSpec, cert: MembershipCertificate) -> list[str]:
    """Independently re-check a certificate returned by :func:`membership`; returns failure reasons."""
    problems: list[str] = []
    base = space.base
    w = f.weights()
    if cert.verdict is Verdict.MEMBER:
        wit = cert.witness
        if wit is None or wit.nvars != base.nvars:
            return ["missing or malformed witness"]
        has_open = False
        for k, (e0, m0, e1, m1) in enumerate(zip(base.exps, base.modes, wit.exps, wit.modes)):
            if m0 is Mode.DAGGER and not (e1 < e0 and m1 is Mode.CLOSED):
                problems.append(f"dagger coordinate {k} needs a strictly smaller closed exponent")
            if m0 is Mode.CLOSED and not (e1 == e0 and m1 is Mode.CLOSED):
                problems.append(f"closed coordinate {k} must be kept")
            if m0 is Mode.OPEN:
                if not (e1 == e0 and m1 is Mode.OPEN):
                    problems.append(f"open coordinate {k} must be kept")
                has_open = has_open or w[k] != 0
        slope = combined_slope(w, wit.exps)
        lim = envelope_limit(f.env, slope)
        if lim is not Limit.PLUS_INF and not (has_open and f.env.alpha + slope >= 0):
            problems.append(f"witness slope {fmt_rational(slope)} gives {lim.value}")
    elif cert.verdict is Verdict.NON_MEMBER:
        if cert.witness_slope is None:
            return ["missing witness slope"]
        lim = envelope_limit(f.env, cert.witness_slope)
        if lim is Limit.PLUS_INF:
            problems.append("witness slope converges")
        sigma0 = combined_slope(w, base.exps)
        active = [k for k in range(base.nvars) if w[k] != 0]
        if any(base.modes[k] is Mode.DAGGER for k in active):
            if f.env.alpha + sigma0 > 0:
                problems.append("a dagger witness slope below the base converges")
        elif any(base.modes[k] is Mode.OPEN for k in active):
            if not cert.witness_slope > sigma0:
                problems.append("open witness slope must exceed the base slope")
        elif cert.witness_slope != sigma0:
            problems.append("closed witness slope must equal the base slope")
    return problems
