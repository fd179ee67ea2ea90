"""Inverse systems of polydisk algebras and certificates for a nonvanishing lim^1.

The bidisk system has level ``n`` equal to the dagger algebra at polyradius
``(eta_n, 1)``, i.e. log exponents ``(e_n, 0)`` with ``e_n`` strictly
decreasing to 0.  If lim^1 of that system vanished, then for every ``n`` there
would be ``m >= n``, ``lambda > 1`` and ``eta > eta_n`` with::

    level(m)  subset of  level(l) + Tate(eta, lambda)     for all l >= m.

An :class:`ObstructionCertificate` refutes this at ``l = m + 1`` with a single
diagonal series, using nothing but exact rational inequalities and envelope
verdicts.  The implication from the failure of that inclusion to
``lim^1 != 0`` is a theorem of functional analysis and is taken as given.
"""
from __future__ import annotations

import enum
import math
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import EnvelopeViolation, HorizonExceeded, InvalidConfig, PreconditionViolated
from .membership import (
    MembershipCertificate,
    SpaceSpec,
    Verdict,
    check_membership_certificate,
    membership,
    ray_membership,
    sum_non_membership,
)
from .series import DiagonalSeries, Envelope, Limit, Sublinear, TruncatedSeries, envelope_limit
from .valuation import Mode, PolyRadius, Rational, as_fraction, fmt_rational, p_power, padic_valuation

# ---------------------------------------------------------------------------
# exponent families


def _short(q: Fraction) -> str:
    return str(q)


@dataclass(frozen=True)
class Reciprocal:
    """``e_n = offset + scale / (a*n + b)``."""

    scale: Fraction = Fraction(1)
    a: int = 1
    b: int = 1
    offset: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "scale", as_fraction(self.scale))
        object.__setattr__(self, "offset", as_fraction(self.offset))
        if self.a <= 0 or self.b <= 0:
            raise InvalidConfig("reciprocal family needs a, b > 0")

    def __call__(self, n: int) -> Fraction:
        return self.offset + self.scale / (self.a * n + self.b)

    @property
    def limit(self) -> Fraction:
        return self.offset

    def describe(self) -> str:
        head = f"{_short(self.offset)}+" if self.offset else ""
        a = "" if self.a == 1 else str(self.a)
        return f"{head}{_short(self.scale)}/({a}n+{self.b})"


@dataclass(frozen=True)
class Geometric:
    """``e_n = offset + scale / base**(n + shift)``."""

    scale: Fraction = Fraction(1)
    base: int = 2
    shift: int = 1
    offset: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "scale", as_fraction(self.scale))
        object.__setattr__(self, "offset", as_fraction(self.offset))
        if self.base < 2:
            raise InvalidConfig("geometric family needs base >= 2")

    def __call__(self, n: int) -> Fraction:
        return self.offset + self.scale / Fraction(self.base) ** (n + self.shift)

    @property
    def limit(self) -> Fraction:
        return self.offset

    def describe(self) -> str:
        head = f"{_short(self.offset)}+" if self.offset else ""
        return f"{head}{_short(self.scale)}/{self.base}^(n+{self.shift})"


@dataclass(frozen=True)
class Explicit:
    """A finite prefix of exponents; levels past the end are undefined and no limit is known."""

    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(as_fraction(v) for v in self.values))

    def __call__(self, n: int) -> Fraction:
        if not 0 <= n < len(self.values):
            raise InvalidConfig(f"explicit exponent family has no level {n}")
        return self.values[n]

    @property
    def limit(self) -> None:
        return None

    def describe(self) -> str:
        return "explicit:" + ",".join(_short(v) for v in self.values)


@dataclass(frozen=True)
class Negated:
    """``n -> -inner(n)``; used to turn inner-radius exponents into exponents in ``w = 1/x``."""

    inner: "EtaRule"

    def __call__(self, n: int) -> Fraction:
        return -self.inner(n)

    @property
    def limit(self) -> Fraction | None:
        lim = self.inner.limit
        return None if lim is None else -lim

    def describe(self) -> str:
        return f"neg:{self.inner.describe()}"


EtaRule = Union[Reciprocal, Geometric, Explicit, Negated]

_RAT = r"-?\d+(?:/\d+)?"
_RECIP = re.compile(rf"^(?:(?P<off>{_RAT})\+)?(?P<scale>{_RAT})/\((?P<a>\d*)n\+(?P<b>\d+)\)$")
_GEOM = re.compile(rf"^(?:(?P<off>{_RAT})\+)?(?P<scale>{_RAT})/(?P<base>\d+)\^\(n\+(?P<shift>\d+)\)$")


def parse_eta_family(text: str) -> EtaRule:
    """Parse ``"1/(n+1)"``, ``"1/(2n+2)"``, ``"1/2^(n+1)"``, ``"explicit:1/2,1/3"`` and ``"neg:<family>"``."""
    s = text.replace(" ", "").replace("*", "")
    if s.startswith("neg:"):
        return Negated(parse_eta_family(s[4:]))
    if s.startswith("explicit:"):
        body = s[len("explicit:") :]
        if not body:
            raise InvalidConfig("empty explicit family")
        try:
            return Explicit(tuple(as_fraction(v) for v in body.split(",")))
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidConfig(f"bad explicit family {text!r}: {exc}") from None
    m = _RECIP.match(s)
    if m:
        return Reciprocal(as_fraction(m["scale"]), int(m["a"] or 1), int(m["b"]), as_fraction(m["off"] or "0"))
    m = _GEOM.match(s)
    if m:
        return Geometric(as_fraction(m["scale"]), int(m["base"]), int(m["shift"]), as_fraction(m["off"] or "0"))
    raise InvalidConfig(f"unrecognized eta family {text!r}")


# ---------------------------------------------------------------------------
# systems


class SystemKind(enum.Enum):
    BIDISK_OPEN_DAGGER = "bidisk_open_dagger"
    OPEN_DISK_STEIN = "open_disk_stein"
    ANNULUS_FRECHET_FACTOR = "annulus_frechet_factor"


@dataclass(frozen=True)
class SystemConfig:
    prime: int = 2
    eta: EtaRule = field(default_factory=Reciprocal)

    def to_json(self) -> dict:
        return {"prime": self.prime, "eta_family": self.eta.describe()}

    @classmethod
    def from_json(cls, obj: dict) -> "SystemConfig":
        return cls(int(obj.get("prime", 2)), parse_eta_family(obj.get("eta_family", "1/(n+1)")))


CHECK_LEVELS = 64


@dataclass(frozen=True)
class InverseSystem:
    """N-indexed nested spaces with inclusion transitions (identity on coefficients)."""

    kind: SystemKind
    config: SystemConfig

    @property
    def nvars(self) -> int:
        return 2 if self.kind is SystemKind.BIDISK_OPEN_DAGGER else 1

    def e(self, n: int) -> Fraction:
        return self.config.eta(n)

    def level(self, n: int) -> SpaceSpec:
        if n < 0:
            raise ValueError("levels are indexed by n >= 0")
        e = self.e(n)
        if self.kind is SystemKind.BIDISK_OPEN_DAGGER:
            return SpaceSpec.dagger(e, 0)
        return SpaceSpec.tate(e)

    def limit_space(self) -> SpaceSpec | None:
        """Intersection of all levels: the varying coordinate at the limit exponent, in Open mode."""
        lim = self.config.eta.limit
        if lim is None:
            return None
        if self.kind is SystemKind.BIDISK_OPEN_DAGGER:
            return SpaceSpec(PolyRadius((lim, Fraction(0)), (Mode.OPEN, Mode.DAGGER)))
        return SpaceSpec.open(lim)

    def defined_levels(self) -> int:
        eta = self.config.eta
        if isinstance(eta, Explicit):
            return len(eta.values)
        if isinstance(eta, Negated) and isinstance(eta.inner, Explicit):
            return len(eta.inner.values)
        return CHECK_LEVELS


def build_system(kind: SystemKind | str, config: SystemConfig | None = None) -> InverseSystem:
    """Build and validate a system: exponents strictly decreasing (levels nested), positive and tending to 0
    for the disk systems."""
    kind = SystemKind(kind)
    config = config or SystemConfig()
    if config.prime < 2 or any(config.prime % q == 0 for q in range(2, math.isqrt(config.prime) + 1)):
        raise InvalidConfig(f"{config.prime} is not a prime")
    sys = InverseSystem(kind, config)
    count = sys.defined_levels()
    es = [config.eta(n) for n in range(count)]
    for n in range(count - 1):
        if not es[n] > es[n + 1]:
            raise InvalidConfig(f"exponents not strictly decreasing at level {n}: {es[n]} then {es[n + 1]}")
    lim = config.eta.limit
    if kind is not SystemKind.ANNULUS_FRECHET_FACTOR:
        if any(e <= 0 for e in es):
            raise InvalidConfig("disk exponents must be positive (radii below 1)")
        if lim is not None and lim != 0:
            raise InvalidConfig("disk exponents must tend to 0 (radii tending to 1)")
    elif lim is not None and es and es[-1] <= lim:
        raise InvalidConfig("exponents must stay above their limit")
    return sys


# ---------------------------------------------------------------------------
# the two-term complex


def delta_apply(w: Sequence[TruncatedSeries], sys: InverseSystem | None = None) -> list[TruncatedSeries]:
    """``v_n = w_n - w_{n+1}`` (restriction is the identity on coefficients); the last entry is kept."""
    if len(w) < 2:
        raise ValueError("delta_apply needs at least two entries")
    if sys is not None and any(f.nvars != sys.nvars for f in w):
        raise ValueError("entries do not match the system's number of variables")
    return [w[n] - w[n + 1] for n in range(len(w) - 1)] + [w[-1]]


@dataclass(frozen=True)
class MonomialCocycle:
    """Closed-form cocycle ``v_n = c_n * prod x_k**(a_k*n + b_k)`` with ``v(c_n) = val_slope*n + val_offset``.

    ``length=None`` means infinitely many nonzero terms.  ``explicit`` lists
    realized coefficients ``(n, c_n)`` that must agree with the declared valuation.
    """

    val_slope: Fraction
    val_offset: Fraction
    exps: tuple[tuple[int, int], ...]
    length: int | None = None
    explicit: tuple[tuple[int, Fraction], ...] = ()
    name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "val_slope", as_fraction(self.val_slope))
        object.__setattr__(self, "val_offset", as_fraction(self.val_offset))
        object.__setattr__(self, "exps", tuple((int(a), int(b)) for a, b in self.exps))
        object.__setattr__(self, "explicit", tuple((int(n), as_fraction(c)) for n, c in self.explicit))
        if any(a < 0 or b < 0 for a, b in self.exps):
            raise ValueError("monomial exponents must be nonnegative")
        if self.length is not None and self.length < 0:
            raise ValueError("length must be nonnegative")

    @property
    def nvars(self) -> int:
        return len(self.exps)

    def valuation(self, n: int) -> Fraction:
        return self.val_slope * n + self.val_offset

    def monomial(self, n: int) -> tuple[int, ...]:
        return tuple(a * n + b for a, b in self.exps)

    def weights(self) -> tuple[int, ...]:
        return tuple(a for a, _ in self.exps)

    def envelope(self) -> Envelope:
        return Envelope(self.val_slope, Sublinear.ZERO, self.val_offset)

    def coefficient(self, n: int, prime: int) -> Fraction:
        for k, c in self.explicit:
            if k == n:
                return c
        return p_power(self.valuation(n), prime)

    def check_consistency(self, prime: int) -> None:
        for n, c in self.explicit:
            if self.length is not None and n >= self.length:
                raise EnvelopeViolation(f"{self.name or 'cocycle'}: explicit term {n} beyond length {self.length}")
            got = padic_valuation(c, prime)
            if got.is_inf or got.v != self.valuation(n):
                raise EnvelopeViolation(
                    f"{self.name or 'cocycle'}: coefficient {fmt_rational(c)} at n={n} has valuation "
                    f"{got.to_json()}, declared {fmt_rational(self.valuation(n))}"
                )

    def realizable(self) -> bool:
        if self.length is None:
            return False
        return all(self.valuation(n).denominator == 1 for n in range(self.length))

    def terms(self, prime: int) -> list[TruncatedSeries]:
        if self.length is None:
            raise ValueError("infinite cocycle")
        return [TruncatedSeries.monomial(self.monomial(n), self.coefficient(n, prime), prime) for n in range(self.length)]

    def to_json(self) -> dict:
        return {
            "kind": "monomial",
            "name": self.name,
            "val_slope": fmt_rational(self.val_slope),
            "val_offset": fmt_rational(self.val_offset),
            "exps": [list(e) for e in self.exps],
            "length": self.length,
            "explicit": [[n, fmt_rational(c)] for n, c in self.explicit],
        }


@dataclass(frozen=True)
class FiniteCocycle:
    """Explicit cocycle ``(v_0, ..., v_{k-1}, 0, 0, ...)`` of finite series."""

    terms: tuple[TruncatedSeries, ...]
    name: str = ""

    @property
    def nvars(self) -> int:
        return self.terms[0].nvars if self.terms else 0

    def to_json(self) -> dict:
        return {"kind": "finite", "name": self.name, "terms": [t.to_json() for t in self.terms]}


Cocycle = Union[MonomialCocycle, FiniteCocycle]


def cocycle_from_json(obj: dict, prime: int = 2) -> Cocycle:
    if obj.get("kind", "monomial") == "finite":
        return FiniteCocycle(tuple(TruncatedSeries.from_json(t, prime=prime) for t in obj["terms"]), obj.get("name", ""))
    return MonomialCocycle(
        as_fraction(obj["val_slope"]),
        as_fraction(obj.get("val_offset", "0")),
        tuple(tuple(e) for e in obj["exps"]),
        obj.get("length"),
        tuple((n, as_fraction(c)) for n, c in obj.get("explicit", [])),
        obj.get("name", ""),
    )


@dataclass(frozen=True)
class Lift:
    """A preimage ``w`` under delta, with membership evidence for each ``w_n``."""

    method: str
    lifts: tuple[TruncatedSeries, ...] | None = None
    level_certificates: tuple[MembershipCertificate, ...] = ()
    uniform_certificate: MembershipCertificate | None = None
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "result": "lift",
            "method": self.method,
            "lifts": [w.to_json() for w in self.lifts] if self.lifts is not None else None,
            "level_certificates": [c.to_json() for c in self.level_certificates],
            "uniform_certificate": self.uniform_certificate.to_json() if self.uniform_certificate else None,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class ObstructionReport:
    """The telescoping lift fails: ``sum_{j >= level} v_j`` is not in the level's space."""

    level: int
    slope: Fraction | None
    certificate: MembershipCertificate | None = None
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "result": "obstruction",
            "level": self.level,
            "slope": fmt_rational(self.slope) if self.slope is not None else None,
            "certificate": self.certificate.to_json() if self.certificate else None,
            "detail": self.detail,
        }


def _finite_lift(terms: Sequence[TruncatedSeries], sys: InverseSystem) -> Lift:
    if not terms:
        return Lift("finite", lifts=(), detail="zero cocycle")
    nvars = sys.nvars
    if any(t.nvars != nvars or not t.is_finite for t in terms):
        raise ValueError("cocycle terms must be finite series in the system's variables")
    prime = terms[0].prime
    acc = TruncatedSeries.zero(nvars, prime)
    w: list[TruncatedSeries] = []
    for t in reversed(terms):
        acc = acc + t
        w.append(acc)
    w.reverse()
    padded = w + [TruncatedSeries.zero(nvars, prime)]
    back = delta_apply(padded, sys)
    if any(b.terms != t.terms for b, t in zip(back, terms)):
        raise AssertionError("telescoping sum does not reproduce the cocycle")
    certs = tuple(membership(wn, sys.level(n)) for n, wn in enumerate(w))
    return Lift("finite", lifts=tuple(w), level_certificates=certs, detail="finite telescoping sums are polynomials")


def delta_solve(cocycle: Cocycle, sys: InverseSystem, horizon: int = 16) -> Lift | ObstructionReport:
    """Try the telescoping preimage ``w_n = sum_{j >= n} v_j`` of ``cocycle`` under delta.

    Finite cocycles always lift (the sums are polynomials).  For an infinite
    monomial cocycle, ``w_n`` is a ray series with valuation slope
    ``val_slope`` and exponent weights ``a_k``; it is checked against every
    level below ``horizon`` and, through the system's limit space, against all
    levels at once.  Raises HorizonExceeded when the per-level checks pass but
    no uniform certificate is available.
    """
    if isinstance(cocycle, FiniteCocycle):
        return _finite_lift(cocycle.terms, sys)
    if cocycle.nvars != sys.nvars:
        raise ValueError(f"cocycle has {cocycle.nvars} variables, system has {sys.nvars}")
    prime = sys.config.prime
    cocycle.check_consistency(prime)
    if cocycle.length is not None:
        if cocycle.realizable():
            return _finite_lift(cocycle.terms(prime), sys)
        return Lift("finite", detail="finite telescoping sums of monomials (coefficients in an extension of Q)")

    weights = cocycle.weights()
    env = cocycle.envelope()
    if not any(weights):
        if cocycle.val_slope > 0:
            return Lift("telescoping", detail="each w_n is one monomial with a convergent scalar coefficient")
        return ObstructionReport(0, cocycle.val_slope, detail="scalar coefficients do not tend to zero")

    certs = []
    for n in range(min(horizon, sys.defined_levels())):
        cert = ray_membership(env, weights, sys.level(n))
        if not cert.is_member:
            return ObstructionReport(n, cert.witness_slope, cert, detail=f"telescoping tail leaves level {n}")
        certs.append(cert)
    limit = sys.limit_space()
    if limit is None:
        raise HorizonExceeded(f"levels 0..{len(certs) - 1} pass but the exponent family has no known limit")
    uniform = ray_membership(env, weights, limit)
    if not uniform.is_member:
        raise HorizonExceeded(f"telescoping tail leaves some level beyond {len(certs) - 1}")
    return Lift("telescoping", level_certificates=tuple(certs), uniform_certificate=uniform, detail="envelope-certified tails")


def standard_corpus(sys: InverseSystem, size: int = 100, seed: int = 0, max_degree: int = 12) -> list[Cocycle]:
    """Deterministic mix of infinite monomial cocycles (including ``v_n = x**n``) and finite ones.

    Infinite cocycles are chosen on or above the convergence boundary of the
    system's limit space, so each should lift.
    """
    lim = sys.config.eta.limit
    if lim is None:
        raise InvalidConfig("standard corpus needs an exponent family with a known limit")
    nv = sys.nvars
    out: list[Cocycle] = []
    for a in (1, 2, 3, 4):
        for b in (0, 1, 2):
            for extra in (0, 1, 2, 3):
                exps = ((a, b),) + ((0, 0),) * (nv - 1)
                out.append(MonomialCocycle(-a * lim + extra, 0, exps, name=f"x^({a}n+{b}) slope+{extra}"))
    rng = random.Random(seed)
    out.append(MonomialCocycle(0, 0, ((0, 0),) * nv, length=0, name="zero"))
    while len(out) < size:
        if len(out) % 2:
            length = rng.randint(1, 6)
            exps = tuple((rng.randint(0, 3), rng.randint(0, 3)) for _ in range(nv))
            out.append(MonomialCocycle(rng.randint(0, 2), rng.randint(-2, 2), exps, length=length, name=f"finite-monomial-{len(out)}"))
        else:
            terms = tuple(_random_poly(rng, nv, max_degree, sys.config.prime) for _ in range(rng.randint(1, 5)))
            out.append(FiniteCocycle(terms, name=f"finite-{len(out)}"))
    return out[:size]


def _random_poly(rng: random.Random, nvars: int, max_degree: int, prime: int) -> TruncatedSeries:
    terms = {}
    for _ in range(rng.randint(0, 5)):
        k = [rng.randint(0, max_degree) for _ in range(nvars)]
        while sum(k) > max_degree:
            i = rng.randrange(nvars)
            k[i] = max(0, k[i] - 1)
        terms[tuple(k)] = Fraction(rng.randint(-20, 20), rng.randint(1, 20))
    return TruncatedSeries(terms, nvars, None, prime)


# ---------------------------------------------------------------------------
# obstruction certificates


@dataclass(frozen=True)
class ObstructionCertificate:
    """Data refuting ``level(m) <= level(m+1) + Tate(e_eta, e_lambda)``.

    The refuting function is the diagonal series with slope ``d`` and
    valuation rule ``envelope``; ``(e_eta_prime, e_delta)`` is a closed
    polyradius at which it converges.
    """

    n: int
    m: int
    e_lambda: Fraction
    e_eta: Fraction
    d: int
    e_rho: Fraction
    e_delta: Fraction
    e_eta_prime: Fraction
    envelope: Envelope
    config: SystemConfig = field(default_factory=SystemConfig)
    target_l: int | None = None

    def __post_init__(self) -> None:
        for name in ("e_lambda", "e_eta", "e_rho", "e_delta", "e_eta_prime"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.target_l is None:
            object.__setattr__(self, "target_l", self.m + 1)

    def series(self) -> DiagonalSeries:
        return DiagonalSeries(self.d, self.envelope)

    def system(self) -> InverseSystem:
        return InverseSystem(SystemKind.BIDISK_OPEN_DAGGER, self.config)

    def to_json(self, sys: InverseSystem | None = None) -> dict:
        sys = sys or self.system()
        result = verify_certificate(self, sys)
        l = self.target_l
        return {
            "system": {"kind": sys.kind.value, **self.config.to_json()},
            "inputs": {"n": self.n, "m": self.m, "e_lambda": fmt_rational(self.e_lambda), "e_eta": fmt_rational(self.e_eta)},
            "derived": {
                "d": self.d,
                "e_rho": fmt_rational(self.e_rho),
                "e_delta": fmt_rational(self.e_delta),
                "e_eta_prime": fmt_rational(self.e_eta_prime),
                "envelope": self.envelope.to_json(),
            },
            "target": {
                "l": l,
                "lhs": sys.level(self.m).to_json(),
                "rhs": [sys.level(l).to_json(), SpaceSpec.tate(self.e_eta, self.e_lambda).to_json()],
            },
            "checks": [c.to_json() for c in result.checks],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ObstructionCertificate":
        system = obj.get("system", {})
        kind = system.get("kind", SystemKind.BIDISK_OPEN_DAGGER.value)
        if kind != SystemKind.BIDISK_OPEN_DAGGER.value:
            raise ValueError(f"obstruction certificates concern the bidisk system, not {kind}")
        inputs, derived = obj["inputs"], obj["derived"]
        d = derived["d"]
        if isinstance(d, bool) or not isinstance(d, int):
            raise ValueError("d must be an integer")
        target = obj.get("target") or {}
        return cls(
            int(inputs["n"]),
            int(inputs["m"]),
            as_fraction(inputs["e_lambda"]),
            as_fraction(inputs["e_eta"]),
            d,
            as_fraction(derived["e_rho"]),
            as_fraction(derived["e_delta"]),
            as_fraction(derived["e_eta_prime"]),
            Envelope.from_json(derived["envelope"]),
            SystemConfig.from_json(system),
            int(target["l"]) if "l" in target else None,
        )


@dataclass(frozen=True)
class Check:
    name: str
    lhs: str
    rel: str
    rhs: str
    passed: bool

    @property
    def group(self) -> str:
        return self.name.split(".")[0]

    def to_json(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rel": self.rel, "rhs": self.rhs, "pass": self.passed}


@dataclass(frozen=True)
class VerificationResult:
    checks: tuple[Check, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self) -> bool:
        return self.ok

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    @property
    def failed_groups(self) -> set[str]:
        return {c.group for c in self.failures}


def _check_inputs(n: int, m: int, e_lambda: Fraction, e_eta: Fraction, e_n: Fraction) -> list[Check]:
    return [
        Check("inputs.n", str(n), ">=", "0", n >= 0),
        Check("inputs.m", str(m), ">=", str(n), m >= n),
        Check("inputs.e_lambda", fmt_rational(e_lambda), "<", "0", e_lambda < 0),
        Check("inputs.e_eta_upper", fmt_rational(e_eta), "<", fmt_rational(e_n), e_eta < e_n),
        Check("inputs.e_eta_lower", fmt_rational(e_eta), ">", "0", e_eta > 0),
    ]


def criterion_failure_witness(n: int, m: int, e_lambda: Rational | str, e_eta: Rational | str, sys: InverseSystem) -> ObstructionCertificate:
    """Build the obstruction certificate for ``(n, m, lambda, eta)`` with fixed tie-breaking.

    ``d`` is the least positive integer with ``e_eta + d*e_lambda < e_m``;
    ``e_rho`` is the midpoint of the admissible interval; ``e_delta`` and
    ``e_eta_prime`` split the gap ``e_m - e_rho`` evenly between the two
    variables; the envelope has slope ``-e_rho`` plus a ceil-sqrt term, so it
    converges exactly at slope ``e_rho`` and diverges below it.
    """
    if sys.kind is not SystemKind.BIDISK_OPEN_DAGGER:
        raise PreconditionViolated("obstruction certificates are built for the bidisk system")
    e_lambda, e_eta = as_fraction(e_lambda), as_fraction(e_eta)
    if n < 0 or m < 0:
        raise PreconditionViolated("levels are nonnegative")
    checks = _check_inputs(n, m, e_lambda, e_eta, sys.e(n))
    bad = [c.name for c in checks if not c.passed]
    if bad:
        raise PreconditionViolated("violated: " + ", ".join(bad))
    e_m, e_next = sys.e(m), sys.e(m + 1)
    gap = e_eta - e_m
    d = 1 if gap < 0 else math.floor(gap / -e_lambda) + 1
    low = max(e_next, e_eta + d * e_lambda)
    e_rho = (low + e_m) / 2
    e_delta = -(e_m - e_rho) / (2 * d)
    e_eta_prime = e_rho - d * e_delta
    env = Envelope(-e_rho, Sublinear.CEIL_SQRT, 0)
    cert = ObstructionCertificate(n, m, e_lambda, e_eta, d, e_rho, e_delta, e_eta_prime, env, sys.config)
    return cert


def verify_certificate(cert: ObstructionCertificate, sys: InverseSystem | None = None) -> VerificationResult:
    """Re-check every inequality of the certificate by exact arithmetic.

    Group names: ``inputs``, ``target``, ``I1`` .. ``I4`` and the two
    cross-checks through the membership module, ``LHS`` and ``RHS``.
    """
    sys = sys or cert.system()
    checks: list[Check] = []
    q = fmt_rational
    if sys.kind is not SystemKind.BIDISK_OPEN_DAGGER:
        return VerificationResult((Check("target.system", sys.kind.value, "==", SystemKind.BIDISK_OPEN_DAGGER.value, False),))
    if cert.n < 0 or cert.m < 0:
        return VerificationResult((Check("inputs.n", f"{cert.n},{cert.m}", ">=", "0", False),))
    e_n, e_m, e_next = sys.e(cert.n), sys.e(cert.m), sys.e(cert.m + 1)
    checks += _check_inputs(cert.n, cert.m, cert.e_lambda, cert.e_eta, e_n)
    checks.append(Check("target.l", str(cert.target_l), "==", str(cert.m + 1), cert.target_l == cert.m + 1))

    d = cert.d
    lam_term = cert.e_eta + d * cert.e_lambda
    low = max(e_next, lam_term)
    checks.append(Check("I1.d_positive", str(d), ">=", "1", d >= 1))
    checks.append(Check("I1", q(lam_term), "<", q(e_m), lam_term < e_m))
    checks.append(Check("I2.lower", q(low), "<", q(cert.e_rho), low < cert.e_rho))
    checks.append(Check("I2.upper", q(cert.e_rho), "<", q(e_m), cert.e_rho < e_m))
    prod = cert.e_eta_prime + d * cert.e_delta
    checks.append(Check("I3.product", q(prod), "==", q(cert.e_rho), prod == cert.e_rho))
    checks.append(Check("I3.delta", q(cert.e_delta), "<", "0", cert.e_delta < 0))
    checks.append(Check("I3.eta_prime", q(cert.e_eta_prime), "<", q(e_m), cert.e_eta_prime < e_m))
    at_rho = envelope_limit(cert.envelope, cert.e_rho)
    at_low = envelope_limit(cert.envelope, low)
    checks.append(Check("I4.converges", f"limit@{q(cert.e_rho)}", "==", Limit.PLUS_INF.value, at_rho is Limit.PLUS_INF))
    checks.append(Check("I4.diverges", f"limit@{q(low)}", "==", Limit.MINUS_INF.value, at_low is Limit.MINUS_INF))

    if d >= 0:
        f = cert.series()
        lhs_space = sys.level(cert.m)
        witness = MembershipCertificate(Verdict.MEMBER, witness=PolyRadius.closed(cert.e_eta_prime, cert.e_delta))
        problems = check_membership_certificate(f, lhs_space, witness)
        checks.append(Check("LHS.member", f"witness({q(cert.e_eta_prime)},{q(cert.e_delta)})", "in", lhs_space.describe(), not problems))
        rhs = sum_non_membership(f, sys.level(cert.target_l), SpaceSpec.tate(cert.e_eta, cert.e_lambda))
        checks.append(Check("RHS.non_member", "series", "not in", f"level({cert.target_l}) + Tate", rhs.verdict is Verdict.NON_MEMBER))
    else:
        checks.append(Check("LHS.member", "series", "in", "level(m)", False))
        checks.append(Check("RHS.non_member", "series", "not in", "level(l) + Tate", False))
    return VerificationResult(tuple(checks))


# ---------------------------------------------------------------------------
# verdicts


class Lim1Kind(enum.Enum):
    NON_ZERO_CERTIFIED = "nonzero_certified"
    VANISHES_EVIDENCE = "vanishes_evidence"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Lim1Verdict:
    kind: Lim1Kind
    certificates: tuple[ObstructionCertificate, ...] = ()
    lifts: tuple[Lift, ...] = ()
    diagnostics: tuple[str, ...] = ()

    @property
    def claim_strength(self) -> str:
        return {
            Lim1Kind.NON_ZERO_CERTIFIED: "certified",
            Lim1Kind.VANISHES_EVIDENCE: "evidence",
            Lim1Kind.INCONCLUSIVE: "none",
        }[self.kind]


GridPoint = tuple[int, int, Fraction, Fraction]


def default_grid(config: SystemConfig | None = None, levels: int = 3, m_span: int = 3) -> list[GridPoint]:
    """``n < levels``, ``n <= m < n + m_span``, ``e_lambda in {-1/4, -1/2}``, ``e_eta in {e_n/2, 9 e_n/10}``."""
    config = config or SystemConfig()
    grid: list[GridPoint] = []
    for n in range(levels):
        e_n = config.eta(n)
        for m in range(n, n + m_span):
            for e_lambda in (Fraction(-1, 4), Fraction(-1, 2)):
                for e_eta in (e_n / 2, 9 * e_n / 10):
                    grid.append((n, m, e_lambda, e_eta))
    return grid


def lim1_verdict(sys: InverseSystem, grid: Iterable) -> Lim1Verdict:
    """Certify ``lim^1 != 0`` on the bidisk system over a parameter grid, or gather
    lifting evidence over a cocycle corpus for the other systems."""
    points = list(grid)
    if not points:
        return Lim1Verdict(Lim1Kind.INCONCLUSIVE, diagnostics=("empty grid",))
    diagnostics: list[str] = []
    if sys.kind is SystemKind.BIDISK_OPEN_DAGGER:
        certs = []
        for n, m, e_lambda, e_eta in points:
            try:
                cert = criterion_failure_witness(n, m, e_lambda, e_eta, sys)
            except PreconditionViolated as exc:
                diagnostics.append(f"({n},{m},{fmt_rational(e_lambda)},{fmt_rational(e_eta)}): {exc}")
                continue
            result = verify_certificate(cert, sys)
            if not result.ok:
                diagnostics.append(f"({n},{m}): failed " + ", ".join(c.name for c in result.failures))
                continue
            certs.append(cert)
        if diagnostics:
            return Lim1Verdict(Lim1Kind.INCONCLUSIVE, tuple(certs), diagnostics=tuple(diagnostics))
        return Lim1Verdict(Lim1Kind.NON_ZERO_CERTIFIED, tuple(certs))

    lifts = []
    for cocycle in points:
        name = getattr(cocycle, "name", "") or "cocycle"
        try:
            out = delta_solve(cocycle, sys)
        except (HorizonExceeded, EnvelopeViolation, ValueError) as exc:
            diagnostics.append(f"{name}: {exc}")
            continue
        if isinstance(out, ObstructionReport):
            diagnostics.append(f"{name}: telescoping fails at level {out.level}")
            continue
        lifts.append(out)
    if diagnostics:
        return Lim1Verdict(Lim1Kind.INCONCLUSIVE, lifts=tuple(lifts), diagnostics=tuple(diagnostics))
    return Lim1Verdict(Lim1Kind.VANISHES_EVIDENCE, lifts=tuple(lifts))
