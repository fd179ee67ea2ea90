"""Truncated multivariate series, valuation envelopes and diagonal series.

Two coefficient models live side by side:

* :class:`TruncatedSeries` stores genuine rational coefficients, so sums can
  cancel and Gauss norms are computed from exact p-adic valuations;
* :class:`Envelope` / :class:`DiagonalSeries` only know the valuation of each
  coefficient as a closed-form rule, which is all the asymptotic decisions need.

``DiagonalSeries.truncate`` bridges the two through ``a_i = p**env(i)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import IncompatibleTails, TailDominates, TailUnsupported
from .valuation import (
    LogValue,
    PolyRadius,
    Rational,
    as_fraction,
    fmt_rational,
    logval_min,
    monomial_log_norm,
    p_power,
    padic_valuation,
)

Exponent = tuple[int, ...]


@dataclass(frozen=True)
class AffineTail:
    """Lower bound ``a*i + b*j + c`` on the valuation of every omitted coefficient.

    The omitted region is every exponent of total degree ``> degree``.
    """

    a: Fraction
    b: Fraction
    c: Fraction
    degree: int

    def __post_init__(self) -> None:
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.degree < 0:
            raise ValueError("tail degree must be nonnegative")

    def coeffs(self) -> tuple[Fraction, Fraction]:
        return (self.a, self.b)

    def combine(self, other: "AffineTail") -> "AffineTail":
        # componentwise min is below the pointwise min on the region i, j >= 0
        if self.degree != other.degree:
            raise IncompatibleTails(f"tail regions differ: degree {self.degree} vs {other.degree}")
        return AffineTail(min(self.a, other.a), min(self.b, other.b), min(self.c, other.c), self.degree)

    def to_json(self) -> dict:
        return {"a": fmt_rational(self.a), "b": fmt_rational(self.b), "c": fmt_rational(self.c), "degree": self.degree}

    @classmethod
    def from_json(cls, obj: dict, default_degree: int = 0) -> "AffineTail":
        return cls(as_fraction(obj["a"]), as_fraction(obj["b"]), as_fraction(obj["c"]), int(obj.get("degree", default_degree)))


@dataclass(frozen=True)
class TruncatedSeries:
    """Finite-support series with exact rational coefficients and an optional affine tail bound."""

    terms: Mapping[Exponent, Fraction]
    nvars: int = 2
    tail: AffineTail | None = None
    prime: int = 2

    def __post_init__(self) -> None:
        clean: dict[Exponent, Fraction] = {}
        for k, c in self.terms.items():
            k = tuple(int(x) for x in k)
            if len(k) != self.nvars:
                raise ValueError(f"exponent {k} does not have {self.nvars} entries")
            c = as_fraction(c)
            if c != 0:
                clean[k] = clean.get(k, Fraction(0)) + c
        clean = {k: c for k, c in sorted(clean.items()) if c != 0}
        object.__setattr__(self, "terms", clean)
        if self.tail is not None:
            if self.nvars != 2:
                raise ValueError("affine tails are defined for two-variable series only")
            if any(sum(k) > self.tail.degree for k in clean):
                raise ValueError("stored support overlaps the tail region")

    # construction helpers -------------------------------------------------
    @classmethod
    def zero(cls, nvars: int = 2, prime: int = 2) -> "TruncatedSeries":
        return cls({}, nvars=nvars, prime=prime)

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: Rational = 1, prime: int = 2) -> "TruncatedSeries":
        return cls({tuple(exps): as_fraction(coeff)}, nvars=len(exps), prime=prime)

    @property
    def is_finite(self) -> bool:
        return self.tail is None

    def __bool__(self) -> bool:
        return bool(self.terms) or self.tail is not None

    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=-1)

    def valuations(self) -> dict[Exponent, LogValue]:
        return {k: padic_valuation(c, self.prime) for k, c in self.terms.items()}

    def scale(self, c: Rational) -> "TruncatedSeries":
        c = as_fraction(c)
        tail = self.tail
        if tail is not None:
            if c == 0:
                tail = None
            else:
                vc = padic_valuation(c, self.prime).v
                tail = AffineTail(tail.a, tail.b, tail.c + vc, tail.degree)
        return TruncatedSeries({k: c * v for k, v in self.terms.items()}, self.nvars, tail, self.prime)

    def __neg__(self) -> "TruncatedSeries":
        return self.scale(-1)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return series_add(self, other)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return series_add(self, -other)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return series_mul(self, other)

    # serialization --------------------------------------------------------
    def to_json(self) -> dict:
        names = "ij" if self.nvars <= 2 else None
        support = []
        for k, c in self.terms.items():
            entry: dict = {}
            if names:
                for name, x in zip(names, k):
                    entry[name] = x
            else:
                entry["exps"] = list(k)
            entry["coeff"] = fmt_rational(c)
            support.append(entry)
        return {"support": support, "tail": self.tail.to_json() if self.tail else None}

    @classmethod
    def from_json(cls, obj: dict, nvars: int | None = None, prime: int = 2) -> "TruncatedSeries":
        support = obj.get("support", [])
        if nvars is None:
            if any("exps" in e for e in support):
                nvars = len(support[0]["exps"])
            elif support and all("j" not in e for e in support):
                nvars = 1
            else:
                nvars = 2
        terms: dict[Exponent, Fraction] = {}
        for e in support:
            k = tuple(e["exps"]) if "exps" in e else tuple(e[n] for n in "ij"[:nvars])
            terms[k] = terms.get(k, Fraction(0)) + as_fraction(e["coeff"])
        tail = None
        if obj.get("tail") is not None:
            deg = max((sum(k) for k in terms), default=0)
            tail = AffineTail.from_json(obj["tail"], default_degree=deg)
        return cls(terms, nvars=nvars, tail=tail, prime=prime)


def _tail_infimum(tail: AffineTail, exps: Sequence[Fraction]) -> LogValue | None:
    """Infimum of the tail bound plus radius weights over the tail region, or None if unbounded."""
    sa = tail.a + exps[0]
    sb = tail.b + exps[1]
    if sa < 0 or sb < 0:
        return None
    return LogValue(min(sa, sb) * (tail.degree + 1) + tail.c)


def gauss_norm(f: TruncatedSeries, r: PolyRadius | Sequence[Rational]) -> LogValue:
    """Gauss norm ``max |a_k| r**k`` in log coordinates, i.e. the minimum monomial log norm.

    Raises TailDominates when the affine tail bound cannot guarantee the omitted
    terms stay at or above the truncated minimum.
    """
    if isinstance(r, PolyRadius):
        if not r.is_closed():
            raise ValueError("gauss_norm needs a closed polyradius")
        exps = r.exps
    else:
        exps = tuple(as_fraction(e) for e in r)
    vals = f.valuations()
    best = logval_min(monomial_log_norm(v, k, exps) for k, v in vals.items())
    if f.tail is not None:
        tail_min = _tail_infimum(f.tail, exps)
        if tail_min is None:
            raise TailDominates("tail bound is unbounded below at this radius")
        if tail_min < best:
            raise TailDominates(f"tail may reach {tail_min.to_json()} below truncated minimum {best.to_json()}")
    return best


def series_add(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    if f.nvars != g.nvars:
        raise ValueError("series have different numbers of variables")
    if f.prime != g.prime:
        raise ValueError("series use different primes")
    if f.tail is not None and g.tail is not None:
        tail = f.tail.combine(g.tail)
    else:
        tail = f.tail or g.tail
    terms = dict(f.terms)
    for k, c in g.terms.items():
        terms[k] = terms.get(k, Fraction(0)) + c
    if tail is not None and any(sum(k) > tail.degree for k, c in terms.items() if c != 0):
        raise IncompatibleTails("finite summand reaches into the other summand's tail region")
    return TruncatedSeries(terms, f.nvars, tail, f.prime)


def series_mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    if f.tail is not None or g.tail is not None:
        raise TailUnsupported("multiplication is only defined for finite series")
    if f.nvars != g.nvars:
        raise ValueError("series have different numbers of variables")
    terms: dict[Exponent, Fraction] = {}
    for k1, c1 in f.terms.items():
        for k2, c2 in g.terms.items():
            k = tuple(a + b for a, b in zip(k1, k2))
            terms[k] = terms.get(k, Fraction(0)) + c1 * c2
    return TruncatedSeries(terms, f.nvars, None, f.prime)


# ---------------------------------------------------------------------------
# envelopes


class Sublinear(enum.Enum):
    ZERO = "zero"
    CEIL_SQRT = "ceil_sqrt"
    CEIL_LOG2 = "ceil_log2"

    def __call__(self, i: int) -> int:
        if i < 0:
            raise ValueError("sublinear terms are defined for i >= 0")
        if self is Sublinear.ZERO or i == 0:
            return 0
        if self is Sublinear.CEIL_SQRT:
            return math.isqrt(i - 1) + 1
        return (i - 1).bit_length()

    @property
    def unbounded(self) -> bool:
        return self is not Sublinear.ZERO


class Limit(enum.Enum):
    """Eventual behaviour of ``env(i) + e*i`` as ``i -> oo``."""

    PLUS_INF = "diverges_to_plus_inf"
    BOUNDED = "bounded"
    MINUS_INF = "diverges_to_minus_inf"


@dataclass(frozen=True)
class Envelope:
    """Valuation rule ``i -> ceil(alpha*i) + s(i) + offset``."""

    alpha: Fraction
    sublinear: Sublinear = Sublinear.ZERO
    offset: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", as_fraction(self.alpha))
        object.__setattr__(self, "offset", as_fraction(self.offset))
        object.__setattr__(self, "sublinear", Sublinear(self.sublinear))

    def __call__(self, i: int) -> Fraction:
        return Fraction(math.ceil(self.alpha * i) + self.sublinear(i)) + self.offset

    def lower_affine(self) -> tuple[Fraction, Fraction]:
        """``(alpha, offset)`` with ``env(i) >= alpha*i + offset`` for all ``i >= 0``."""
        return self.alpha, self.offset

    def to_json(self) -> dict:
        return {"alpha": fmt_rational(self.alpha), "sublinear": self.sublinear.value, "offset": fmt_rational(self.offset)}

    @classmethod
    def from_json(cls, obj: dict) -> "Envelope":
        return cls(as_fraction(obj["alpha"]), Sublinear(obj.get("sublinear", "zero")), as_fraction(obj.get("offset", "0")))


def envelope_limit(env: Envelope, e: Rational) -> Limit:
    """Decide the limit of ``env(i) + e*i`` exactly.

    The ceiling moves each value by less than 1, so only the net slope
    ``alpha + e`` and, on a zero net slope, whether the sublinear term is
    unbounded matter.
    """
    net = env.alpha + as_fraction(e)
    if net > 0:
        return Limit.PLUS_INF
    if net < 0:
        return Limit.MINUS_INF
    return Limit.PLUS_INF if env.sublinear.unbounded else Limit.BOUNDED


@dataclass(frozen=True)
class DiagonalSeries:
    """``sum_i a_i x**i y**(d*i)`` with ``v(a_i) = env(i)`` for every ``i >= 0``."""

    d: int
    env: Envelope

    def __post_init__(self) -> None:
        if self.d < 0:
            raise ValueError("diagonal slope d must be nonnegative")

    def weights(self) -> tuple[int, int]:
        """Exponent of (x, y) per unit step in i."""
        return (1, self.d)

    def exponent(self, i: int) -> Exponent:
        return (i, self.d * i)

    def valuation(self, i: int) -> LogValue:
        return LogValue(self.env(i))

    def coefficient(self, i: int, prime: int = 2) -> Fraction:
        return p_power(self.env(i), prime)

    def truncate(self, n_terms: int, prime: int = 2, with_tail: bool = True) -> TruncatedSeries:
        """Realize ``a_0 .. a_{n_terms-1}`` as ``p**env(i)``; the rest becomes an affine tail bound."""
        if n_terms < 1:
            raise ValueError("keep at least one term")
        terms = {self.exponent(i): self.coefficient(i, prime) for i in range(n_terms)}
        tail = None
        if with_tail:
            alpha, offset = self.env.lower_affine()
            tail = AffineTail(alpha, 0, offset, max(0, (n_terms - 1) * (1 + self.d)))
        return TruncatedSeries(terms, 2, tail, prime)

    def to_json(self) -> dict:
        return {"d": self.d, "envelope": self.env.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "DiagonalSeries":
        return cls(int(obj["d"]), Envelope.from_json(obj["envelope"]))
