"""Log-coordinate arithmetic for non-Archimedean absolute values.

An absolute value ``|a| = p**(-v)`` is stored only through its exponent ``v``
(an exact :class:`~fractions.Fraction`, or ``+inf`` for ``a = 0``).  A radius
``r = p**(-e)`` is stored through ``e``.  Products of scalars become sums of
exponents and every norm comparison becomes a comparison of rationals, with the
order reversed: a *larger* ``v`` means a *smaller* absolute value.
"""
from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Union[int, Fraction]

INF_TOKEN = "inf"


def as_fraction(x: Rational | str) -> Fraction:
    """Coerce ints, Fractions and ``"a/b"`` strings to a Fraction.  Floats are refused."""
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s or any(c in s for c in ".eE"):
            raise ValueError(f"not an exact rational: {x!r}")
        return Fraction(s)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def fmt_rational(q: Rational) -> str:
    """Canonical ``"a/b"`` form: lowest terms, positive denominator (``b = 1`` included)."""
    q = as_fraction(q)
    return f"{q.numerator}/{q.denominator}"


@functools.total_ordering
@dataclass(frozen=True)
class LogValue:
    """Exponent ``v`` of ``|a| = p**(-v)``; ``v is None`` encodes ``+inf`` (``a = 0``).

    Ordering is on ``v``, so ``LogValue(1) > LogValue(0)`` means ``|a| < |b|``.
    """

    v: Fraction | None

    def __post_init__(self) -> None:
        if self.v is not None:
            object.__setattr__(self, "v", as_fraction(self.v))

    @classmethod
    def inf(cls) -> "LogValue":
        return cls(None)

    @property
    def is_inf(self) -> bool:
        return self.v is None

    def __add__(self, other: "LogValue | Rational") -> "LogValue":
        if not isinstance(other, LogValue):
            other = LogValue(as_fraction(other))
        if self.v is None or other.v is None:
            return LogValue(None)
        return LogValue(self.v + other.v)

    __radd__ = __add__

    def __lt__(self, other: "LogValue") -> bool:
        if not isinstance(other, LogValue):
            return NotImplemented
        if self.v is None:
            return False
        if other.v is None:
            return True
        return self.v < other.v

    def abs_less(self, other: "LogValue") -> bool:
        """``|a| < |b|`` for the absolute values these exponents encode."""
        return other < self

    def to_json(self) -> str:
        return INF_TOKEN if self.v is None else fmt_rational(self.v)

    @classmethod
    def from_json(cls, s: str) -> "LogValue":
        if s == INF_TOKEN:
            return cls(None)
        return cls(as_fraction(s))

    def __repr__(self) -> str:
        return f"LogValue({self.to_json()})"


def logval_mul(a: LogValue, b: LogValue) -> LogValue:
    """Log value of a product of scalars: exponents add, ``+inf`` absorbs."""
    return a + b


def logval_min(values: Iterable[LogValue]) -> LogValue:
    out = LogValue.inf()
    for v in values:
        if v < out:
            out = v
    return out


def int_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def padic_valuation(q: Rational, p: int) -> LogValue:
    """Exact p-adic valuation of a rational number (``+inf`` for zero)."""
    q = as_fraction(q)
    if q == 0:
        return LogValue.inf()
    return LogValue(Fraction(int_valuation(q.numerator, p) - int_valuation(q.denominator, p)))


def p_power(v: Rational, p: int) -> Fraction:
    """The rational ``p**v``; only integral ``v`` is realizable in Q."""
    v = as_fraction(v)
    if v.denominator != 1:
        raise ValueError(f"p**{v} is not rational")
    return Fraction(p) ** int(v)


class Mode(enum.Enum):
    """How a polyradius coordinate is quantified.

    CLOSED: exactly this radius.  DAGGER: some strictly larger radius
    (strictly smaller exponent).  OPEN: every strictly smaller radius
    (every strictly larger exponent).
    """

    CLOSED = "closed"
    DAGGER = "dagger"
    OPEN = "open"


@dataclass(frozen=True)
class LogRadius:
    """Exponent ``e`` of the radius ``r = p**(-e)``."""

    e: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "e", as_fraction(self.e))

    def inverse(self) -> "LogRadius":
        return LogRadius(-self.e)

    def exceeds_one(self) -> bool:
        return self.e < 0


@dataclass(frozen=True)
class PolyRadius:
    """Per-variable log-radius exponents with a convergence mode for each variable."""

    exps: tuple[Fraction, ...]
    modes: tuple[Mode, ...]

    def __post_init__(self) -> None:
        exps = tuple(as_fraction(e) for e in self.exps)
        modes = tuple(Mode(m) for m in self.modes)
        if len(exps) != len(modes):
            raise ValueError("one mode per variable is required")
        object.__setattr__(self, "exps", exps)
        object.__setattr__(self, "modes", modes)

    @classmethod
    def closed(cls, *exps: Rational | str) -> "PolyRadius":
        return cls(tuple(as_fraction(e) for e in exps), (Mode.CLOSED,) * len(exps))

    @classmethod
    def uniform(cls, mode: Mode, *exps: Rational | str) -> "PolyRadius":
        return cls(tuple(as_fraction(e) for e in exps), (mode,) * len(exps))

    @property
    def nvars(self) -> int:
        return len(self.exps)

    def radii(self) -> tuple[LogRadius, ...]:
        return tuple(LogRadius(e) for e in self.exps)

    def closed_hull(self) -> "PolyRadius":
        """Same base radii with every coordinate taken as Closed."""
        return PolyRadius(self.exps, (Mode.CLOSED,) * self.nvars)

    def is_closed(self) -> bool:
        return all(m is Mode.CLOSED for m in self.modes)

    def to_json(self) -> dict:
        return {"vars": [{"e": fmt_rational(e), "mode": m.value} for e, m in zip(self.exps, self.modes)]}

    @classmethod
    def from_json(cls, obj: dict) -> "PolyRadius":
        vs = obj["vars"]
        return cls(tuple(as_fraction(v["e"]) for v in vs), tuple(Mode(v["mode"]) for v in vs))


def monomial_log_norm(v: LogValue, exponents: Sequence[int], r: PolyRadius | Sequence[Rational]) -> LogValue:
    """Log of ``|a| * r_1**i_1 * ... * r_k**i_k``, i.e. ``v + sum(i_k * e_k)``.

    Negative exponents are accepted (Laurent setting).  ``r`` may be a PolyRadius
    or a bare sequence of exponents; modes are ignored here.
    """
    exps = r.exps if isinstance(r, PolyRadius) else tuple(as_fraction(e) for e in r)
    if len(exponents) != len(exps):
        raise ValueError(f"monomial has {len(exponents)} exponents, radius has {len(exps)}")
    if v.is_inf:
        return v
    return LogValue(v.v + sum((i * e for i, e in zip(exponents, exps)), Fraction(0)))
