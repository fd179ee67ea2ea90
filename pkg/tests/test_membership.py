from fractions import Fraction as F

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from daggerlim.membership import (
    MembershipCertificate,
    SpaceSpec,
    Verdict,
    check_membership_certificate,
    membership,
    sum_non_membership,
)
from daggerlim.oracles import scan_envelope_limit
from daggerlim.series import AffineTail, DiagonalSeries, Envelope, Limit, Sublinear, TruncatedSeries, envelope_limit
from daggerlim.valuation import Mode, PolyRadius

from .conftest import envelopes, rationals

CE = DiagonalSeries(1, Envelope(F(-5, 12), Sublinear.CEIL_SQRT, 0))
modes = st.sampled_from(list(Mode))


@st.composite
def spaces(draw):
    return SpaceSpec(PolyRadius((draw(rationals()), draw(rationals())), (draw(modes), draw(modes))))


diagonals = st.builds(DiagonalSeries, st.integers(0, 4), envelopes)


def test_counterexample_in_dagger_level():
    cert = membership(CE, SpaceSpec.dagger(F(1, 2), 0))
    assert cert.verdict is Verdict.MEMBER
    assert cert.witness == PolyRadius.closed(F(11, 24), F(-1, 24))
    # oracle: net slope 11/24 - 1/24 = 5/12 cancels alpha, sqrt term wins
    assert scan_envelope_limit(CE.env, F(5, 12)) is Limit.PLUS_INF
    assert check_membership_certificate(CE, SpaceSpec.dagger(F(1, 2), 0), cert) == []


def test_polynomial_is_member_of_unit_tate():
    assert membership(TruncatedSeries.monomial((1, 0)), SpaceSpec.tate(0, 0)).is_member


def test_counterexample_not_in_closed_space_at_slope_one_third():
    cert = membership(CE, SpaceSpec.tate(F(1, 3), 0))
    assert cert.verdict is Verdict.NON_MEMBER
    assert cert.witness_slope == F(1, 3)
    assert cert.verdict_at_slope is Limit.MINUS_INF
    assert scan_envelope_limit(CE.env, F(1, 3)) is Limit.MINUS_INF


def test_sum_non_membership_refutes_split():
    cert = sum_non_membership(CE, SpaceSpec.dagger(F(1, 3), 0), SpaceSpec.tate(F(1, 2), F(-1, 2)))
    assert cert.verdict is Verdict.NON_MEMBER
    assert cert.witness_slope == F(1, 3)
    assert cert.verdict_at_slope is Limit.MINUS_INF


def test_sum_non_membership_is_one_sided():
    x = TruncatedSeries.monomial((1, 0))
    assert sum_non_membership(x, SpaceSpec.tate(0, 0), SpaceSpec.tate(1, 1)).verdict is Verdict.CANNOT_CERTIFY
    flat = DiagonalSeries(1, Envelope(0, Sublinear.ZERO, 0))
    cert = sum_non_membership(flat, SpaceSpec.tate(F(1, 3), 0), SpaceSpec.tate(0, 0))
    assert cert.verdict is Verdict.CANNOT_CERTIFY
    assert cert.verdict_at_slope is Limit.PLUS_INF


def test_sum_non_membership_rejects_open_inputs():
    with pytest.raises(ValueError):
        sum_non_membership(CE, SpaceSpec.open(0, 0), SpaceSpec.tate(0, 0))


@pytest.mark.parametrize(
    "env, space, member",
    [
        # open coordinate: boundary slope counts even with zero sublinear term
        (Envelope(F(-1, 2), Sublinear.ZERO, 0), SpaceSpec.open(F(1, 2), 0), True),
        (Envelope(F(-1, 2), Sublinear.ZERO, 0), SpaceSpec.tate(F(1, 2), 0), False),
        (Envelope(F(-1, 2), Sublinear.CEIL_LOG2, 0), SpaceSpec.tate(F(1, 2), 0), True),
        (Envelope(F(-1, 2), Sublinear.CEIL_LOG2, 0), SpaceSpec.dagger(F(1, 2), 0), False),
        (Envelope(F(-1, 2), Sublinear.ZERO, 0), SpaceSpec.open(F(1, 3), 0), False),
    ],
)
def test_mode_boundaries(env, space, member):
    f = DiagonalSeries(0, env)
    cert = membership(f, space)
    assert cert.is_member is member
    assert check_membership_certificate(f, space, cert) == []


def test_truncated_tail_membership_is_sufficient_only():
    f = TruncatedSeries({(0, 0): 1}, tail=AffineTail(F(-1, 2), 0, 0, 0))
    assert membership(f, SpaceSpec.dagger(1, 1)).is_member
    assert membership(f, SpaceSpec.tate(F(1, 2), 1)).verdict is Verdict.CANNOT_CERTIFY


def test_certificate_json_round_trip():
    cert = membership(CE, SpaceSpec.dagger(F(1, 2), 0))
    assert MembershipCertificate.from_json(cert.to_json()) == cert
    s = SpaceSpec(PolyRadius((F(1, 3), F(-2)), (Mode.OPEN, Mode.DAGGER)))
    assert SpaceSpec.from_json(s.to_json()) == s


@given(diagonals, rationals(), rationals(), rationals().map(abs), rationals().map(abs))
def test_radius_monotonicity(f, ex, ey, bx, by):
    if membership(f, SpaceSpec.tate(ex, ey)).is_member:
        assert membership(f, SpaceSpec.tate(ex + bx, ey + by)).is_member


@given(diagonals, rationals(), rationals())
def test_closed_membership_matches_envelope_limit(f, ex, ey):
    expected = envelope_limit(f.env, ex + f.d * ey) is Limit.PLUS_INF
    assert membership(f, SpaceSpec.tate(ex, ey)).is_member is expected


@given(diagonals, spaces())
def test_every_certificate_passes_independent_validator(f, space):
    cert = membership(f, space)
    assert cert.verdict is not Verdict.CANNOT_CERTIFY
    assert check_membership_certificate(f, space, cert) == []


@given(diagonals, spaces())
def test_dagger_witness_is_strictly_inside_and_open_reading_is_quantified(f, space):
    cert = membership(f, space)
    w = f.weights()
    if cert.is_member:
        for k, m in enumerate(space.base.modes):
            if m is Mode.DAGGER:
                assert cert.witness.exps[k] < space.base.exps[k]
    else:
        # sampled check of the quantifier: for an open/dagger coordinate the
        # witness slope must be reachable by an admissible radius
        active = [k for k in range(2) if w[k]]
        if any(space.base.modes[k] is Mode.OPEN for k in active) and not any(space.base.modes[k] is Mode.DAGGER for k in active):
            assert cert.witness_slope > sum(wk * e for wk, e in zip(w, space.base.exps))


@given(diagonals, rationals(), rationals(), rationals(), rationals(), st.sampled_from([Mode.CLOSED, Mode.DAGGER]))
def test_sum_non_membership_soundness(f, ax, ay, bx, by, mode):
    A = SpaceSpec(PolyRadius((ax, ay), (mode, mode)))
    B = SpaceSpec.tate(bx, by)
    cert = sum_non_membership(f, A, B)
    if cert.verdict is Verdict.NON_MEMBER:
        assert cert.verdict_at_slope is Limit.MINUS_INF
        assert not membership(f, A.closed_hull()).is_member
        assert not membership(f, B.closed_hull()).is_member


@given(diagonals, spaces())
def test_non_member_always_has_non_convergent_slope(f, space):
    cert = membership(f, space)
    if cert.verdict is Verdict.NON_MEMBER:
        assert cert.witness_slope is not None
        assert cert.verdict_at_slope is not Limit.PLUS_INF
        assert envelope_limit(f.env, cert.witness_slope) is cert.verdict_at_slope


@given(diagonals, rationals(), rationals())
def test_non_member_minus_inf_outside_bounded_boundary(f, ex, ey):
    cert = membership(f, SpaceSpec.dagger(ex, ey))
    assume(cert.verdict is Verdict.NON_MEMBER)
    assert cert.verdict_at_slope is Limit.MINUS_INF
