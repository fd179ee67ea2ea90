"""Brute-force scan oracle for envelope limits.

Independent of :func:`daggerlim.series.envelope_limit`: it evaluates
``env(i) + e*i`` on ``1 <= i <= max_index`` in scaled integer arithmetic and
classifies the trend by comparing an early window with the second half of the
scan.  It is a finite experiment, so it can be fooled when the net slope is so
small that the sublinear term still dominates at ``max_index`` (see
:func:`scan_resolves`).
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .series import Envelope, Limit, Sublinear
from .valuation import Rational, as_fraction


def _sublinear_values(kind: Sublinear, i: np.ndarray) -> np.ndarray:
    if kind is Sublinear.ZERO:
        return np.zeros_like(i)
    if kind is Sublinear.CEIL_SQRT:
        r = np.floor(np.sqrt(i.astype(np.float64))).astype(np.int64)
        # repair float rounding so that r = isqrt(i)
        r = np.where(r * r > i, r - 1, r)
        r = np.where((r + 1) * (r + 1) <= i, r + 1, r)
        return np.where(r * r == i, r, r + 1)
    # ceil(log2(i)) = bit_length(i - 1)
    out = np.zeros_like(i)
    m = i - 1
    while np.any(m > 0):
        out += (m > 0).astype(np.int64)
        m >>= 1
    return out


def scan_values(env: Envelope, e: Rational, max_index: int = 10**5) -> tuple[np.ndarray, int]:
    """Return ``(L * (env(i) + e*i) for i = 1..max_index, L)`` as exact int64 values."""
    e = as_fraction(e)
    L = math.lcm(env.alpha.denominator, e.denominator, env.offset.denominator)
    i = np.arange(1, max_index + 1, dtype=np.int64)
    a_num, a_den = env.alpha.numerator, env.alpha.denominator
    ceil_alpha_i = -((-a_num * i) // a_den)
    vals = L * ceil_alpha_i + L * _sublinear_values(env.sublinear, i)
    vals += (L // e.denominator) * e.numerator * i
    vals += (L // env.offset.denominator) * env.offset.numerator
    return vals, L


def scan_envelope_limit(env: Envelope, e: Rational, max_index: int = 10**5, threshold: Rational = 2) -> Limit:
    """Classify ``env(i) + e*i`` from a finite scan.

    ``up``: how far the second half sits above the early window (``i <= sqrt(N)``);
    ``down``: how far it sits below.  A move beyond ``threshold`` in either
    direction counts as divergence, otherwise the sequence is reported bounded.
    """
    vals, L = scan_values(env, e, max_index)
    k = max(1, math.isqrt(max_index))
    early = vals[:k]
    late = vals[max_index // 2 :]
    up = Fraction(int(late.min()) - int(early.max()), L)
    down = Fraction(int(late.max()) - int(early.min()), L)
    t = as_fraction(threshold)
    if up > t:
        return Limit.PLUS_INF
    if down < -t:
        return Limit.MINUS_INF
    return Limit.BOUNDED


def scan_resolves(env: Envelope, e: Rational, max_index: int = 10**5, threshold: Rational = 2) -> bool:
    """Whether a scan to ``max_index`` is expected to see the asymptotic regime.

    The late-minus-early gap is roughly ``|net|*N/2 - growth(s)`` with ``net``
    the net slope; the scan is trusted when it clears the sublinear growth plus
    the threshold with room to spare.  On a zero net slope only the sublinear
    growth between the windows matters (``ceil_log2`` grows by ~log2(N)/2).
    """
    net = env.alpha + as_fraction(e)
    n = max_index
    growth = {
        Sublinear.ZERO: 0,
        Sublinear.CEIL_SQRT: math.isqrt(n) + 1,
        Sublinear.CEIL_LOG2: n.bit_length(),
    }[env.sublinear]
    t = as_fraction(threshold)
    if net == 0:
        gain = {
            Sublinear.ZERO: None,
            Sublinear.CEIL_SQRT: math.isqrt(n // 2) - math.isqrt(math.isqrt(n)) - 2,
            Sublinear.CEIL_LOG2: (n // 2).bit_length() - math.isqrt(n).bit_length() - 2,
        }[env.sublinear]
        return gain is None or gain > t
    # late window starts at N/2, early window ends at sqrt(N)
    span = Fraction(n // 2 - math.isqrt(n))
    return abs(net) * span > 2 * (growth + t + 2)
