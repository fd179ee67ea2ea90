import dataclasses
import json
import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from daggerlim.derived_limit import (
    Explicit,
    FiniteCocycle,
    Geometric,
    Lift,
    Lim1Kind,
    MonomialCocycle,
    ObstructionCertificate,
    ObstructionReport,
    Reciprocal,
    SystemConfig,
    SystemKind,
    build_system,
    cocycle_from_json,
    criterion_failure_witness,
    default_grid,
    delta_apply,
    delta_solve,
    lim1_verdict,
    parse_eta_family,
    standard_corpus,
    verify_certificate,
)
from daggerlim.errors import EnvelopeViolation, HorizonExceeded, InvalidConfig, PreconditionViolated
from daggerlim.membership import SpaceSpec
from daggerlim.series import Envelope, Sublinear, TruncatedSeries

from .conftest import polys
from .mutations import random_certificates, single_violation_mutants, violated_groups

x = TruncatedSeries.monomial((1, 0))
ONE = TruncatedSeries.monomial((0, 0))


# -- systems ------------------------------------------------------------------


def test_bidisk_levels(bidisk):
    assert bidisk.level(0) == SpaceSpec.dagger(1, 0)
    assert bidisk.level(3) == SpaceSpec.dagger(F(1, 4), 0)
    assert bidisk.e(1) == F(1, 2)


def test_stein_levels_are_one_variable_tate(stein):
    assert stein.level(2) == SpaceSpec.tate(F(1, 3))
    assert stein.nvars == 1


def test_permuted_exponents_rejected():
    vals = [F(1, n + 1) for n in range(6)]
    vals[2], vals[3] = vals[3], vals[2]
    with pytest.raises(InvalidConfig):
        build_system(SystemKind.BIDISK_OPEN_DAGGER, SystemConfig(eta=Explicit(tuple(vals))))


@pytest.mark.parametrize("eta", [Reciprocal(offset=F(1, 10)), Reciprocal(scale=-1), Explicit((F(1), F(0)))])
def test_disk_exponents_must_be_positive_and_tend_to_zero(eta):
    with pytest.raises(InvalidConfig):
        build_system(SystemKind.OPEN_DISK_STEIN, SystemConfig(eta=eta))


def test_non_prime_rejected():
    with pytest.raises(InvalidConfig):
        build_system(SystemKind.BIDISK_OPEN_DAGGER, SystemConfig(prime=6))


@pytest.mark.parametrize("text", ["1/(n+1)", "1/(2n+2)", "1/2^(n+1)", "explicit:1/2,1/3", "neg:1/(n+1)", "1/2+1/(3n+4)"])
def test_eta_family_text_round_trip(text):
    rule = parse_eta_family(text)
    assert parse_eta_family(rule.describe()) == rule


def test_eta_family_rejects_garbage():
    with pytest.raises(InvalidConfig):
        parse_eta_family("n^2")


def test_nesting(bidisk):
    # smaller exponent means larger radius means smaller algebra
    for n in range(10):
        assert bidisk.e(n + 1) < bidisk.e(n)
        assert bidisk.level(n + 1).base.exps[1] == bidisk.level(n).base.exps[1]


# -- delta_apply --------------------------------------------------------------


def test_delta_of_constant_thread():
    f = x + ONE
    out = delta_apply([f, f, f])
    assert [o.terms for o in out] == [{}, {}, f.terms]


def test_delta_of_powers():
    w = [TruncatedSeries.monomial((n, 0)) for n in range(3)]
    out = delta_apply(w)
    assert out[0] == ONE - x
    assert out[1] == x - x * x
    assert out[2] == x * x


def test_delta_needs_two_entries():
    with pytest.raises(ValueError):
        delta_apply([x])


@given(st.lists(polys(), min_size=2, max_size=6))
def test_delta_then_telescope_recovers_sequence(w):
    v = delta_apply(w)
    acc = TruncatedSeries.zero()
    rebuilt = []
    for t in reversed(v):
        acc = acc + t
        rebuilt.append(acc)
    assert rebuilt[::-1] == [TruncatedSeries(f.terms) for f in w]


@given(polys(), st.integers(2, 6))
def test_delta_of_coherent_thread_vanishes(f, k):
    out = delta_apply([f] * k)
    assert all(not o.terms for o in out[:-1])
    assert out[-1] == f


# -- delta_solve --------------------------------------------------------------


def test_zero_cocycle_lifts_to_zero(bidisk):
    out = delta_solve(FiniteCocycle(()), bidisk)
    assert isinstance(out, Lift) and out.lifts == ()


def test_stein_powers_of_x_lift(stein):
    out = delta_solve(MonomialCocycle(0, 0, ((1, 0),), name="x^n"), stein)
    assert isinstance(out, Lift)
    assert out.method == "telescoping"
    assert out.uniform_certificate.is_member
    assert all(c.is_member for c in out.level_certificates)


def test_single_term_cocycle_lifts(bidisk):
    out = delta_solve(FiniteCocycle((x + ONE,)), bidisk)
    assert isinstance(out, Lift)
    assert out.lifts[0] == x + ONE


def test_telescoping_obstruction_names_level(stein):
    # v(c_n) = -n/2: the tail converges at level 0 (e=1) but not at level 1 (e=1/2)
    out = delta_solve(MonomialCocycle(F(-1, 2), 0, ((1, 0),)), stein)
    assert isinstance(out, ObstructionReport)
    assert out.level == 1


def test_horizon_exceeded_without_known_limit():
    sys = build_system(SystemKind.OPEN_DISK_STEIN, SystemConfig(eta=Explicit((F(1), F(1, 2), F(1, 3)))))
    with pytest.raises(HorizonExceeded):
        delta_solve(MonomialCocycle(0, 0, ((1, 0),)), sys)


def test_inconsistent_cocycle_is_rejected(stein):
    bad = MonomialCocycle(1, 0, ((1, 0),), length=3, explicit=((1, F(3)),))
    with pytest.raises(EnvelopeViolation):
        delta_solve(bad, stein)


def test_cocycle_json_round_trip(stein):
    for c in standard_corpus(stein, size=30):
        assert cocycle_from_json(json.loads(json.dumps(c.to_json()))) == c


@pytest.mark.parametrize("degree", [0, 1, 7, 20, 50])
def test_finite_truncations_always_lift(bidisk, degree):
    rng = random.Random(degree)
    for _ in range(5):
        terms = []
        for _ in range(rng.randint(1, 4)):
            i = rng.randint(0, degree)
            terms.append(TruncatedSeries({(i, rng.randint(0, degree - i)): F(rng.randint(1, 9), 2 ** rng.randint(0, 40))}))
        out = delta_solve(FiniteCocycle(tuple(terms)), bidisk)
        assert isinstance(out, Lift)
        assert all(c.is_member for c in out.level_certificates)


# -- certificates -------------------------------------------------------------


@pytest.mark.parametrize(
    "n, m, lam, eta, d, rho, delta, eta_p, low",
    [
        (0, 1, F(-1, 2), F(1, 2), 1, F(5, 12), F(-1, 24), F(11, 24), F(1, 3)),
        (1, 2, F(-1, 4), F(1, 3), 1, F(7, 24), F(-1, 48), F(5, 16), F(1, 4)),
    ],
)
def test_criterion_failure_witness_examples(bidisk, n, m, lam, eta, d, rho, delta, eta_p, low):
    cert = criterion_failure_witness(n, m, lam, eta, bidisk)
    assert (cert.d, cert.e_rho, cert.e_delta, cert.e_eta_prime) == (d, rho, delta, eta_p)
    assert cert.envelope == Envelope(-rho, Sublinear.CEIL_SQRT, 0)
    result = verify_certificate(cert, bidisk)
    assert result.ok
    assert {c.name: c.lhs for c in result.checks}["I4.diverges"] == f"limit@{low.numerator}/{low.denominator}"


def test_minimal_d_when_eta_exceeds_e_m(bidisk):
    # e_eta = 9/10 > e_2 = 1/3 needs d with 9/10 - d/4 < 1/3, i.e. d = 3
    cert = criterion_failure_witness(0, 2, F(-1, 4), F(9, 10), bidisk)
    assert cert.d == 3
    assert verify_certificate(cert, bidisk).ok


@pytest.mark.parametrize(
    "args",
    [(0, 1, F(1, 2), F(1, 2)), (0, 1, F(0), F(1, 2)), (2, 1, F(-1, 2), F(1, 10)), (0, 1, F(-1, 2), F(1)), (0, 1, F(-1, 2), F(0))],
)
def test_preconditions(bidisk, args):
    with pytest.raises(PreconditionViolated):
        criterion_failure_witness(*args, bidisk)


def test_witness_needs_bidisk(stein):
    with pytest.raises(PreconditionViolated):
        criterion_failure_witness(0, 1, F(-1, 2), F(1, 2), stein)


def test_tampered_e_rho_fails_i2(bidisk):
    cert = criterion_failure_witness(0, 1, F(-1, 2), F(1, 2), bidisk)
    bad = dataclasses.replace(cert, e_rho=bidisk.e(1))
    result = verify_certificate(bad, bidisk)
    assert not result.ok
    assert "I2" in result.failed_groups


def test_killing_divergence_fails_i4(bidisk):
    cert = criterion_failure_witness(0, 1, F(-1, 2), F(1, 2), bidisk)
    bad = dataclasses.replace(cert, envelope=Envelope(-F(1, 3), Sublinear.CEIL_SQRT, 0))
    result = verify_certificate(bad, bidisk)
    assert not result.ok
    assert result.failed_groups & {"I4"} == {"I4"}


def test_wrong_target_level_rejected(bidisk):
    cert = criterion_failure_witness(0, 1, F(-1, 2), F(1, 2), bidisk)
    assert "target" in verify_certificate(dataclasses.replace(cert, target_l=5), bidisk).failed_groups


def test_mutation_suite(bidisk):
    seen = set()
    for cert in random_certificates(bidisk, 20, seed=3):
        assert violated_groups(cert, bidisk) == set()
        for field, mutant, group in single_violation_mutants(cert, bidisk):
            result = verify_certificate(mutant, bidisk)
            assert not result.ok, (field, mutant)
            assert group in result.failed_groups
            assert result.failed_groups & {"I1", "I2", "I3", "I4"} == {group}
            seen.add(group)
    # I1 implies I2's lower bound, and e_rho and d both enter I3, so a single
    # field cannot break I1 or I2 alone
    assert seen == {"I3", "I4"}


def test_certificate_json_round_trip(bidisk):
    for cert in random_certificates(bidisk, 50, seed=11):
        text = json.dumps(cert.to_json())
        back = ObstructionCertificate.from_json(json.loads(text))
        assert back == cert
        assert json.dumps(back.to_json()) == text


def test_certificate_json_field_order(bidisk):
    obj = criterion_failure_witness(0, 1, F(-1, 2), F(1, 2), bidisk).to_json()
    assert list(obj) == ["system", "inputs", "derived", "target", "checks"]
    assert obj["derived"]["e_rho"] == "5/12"
    assert obj["target"]["l"] == 2
    assert all(c["pass"] for c in obj["checks"])


@given(
    st.integers(0, 5),
    st.integers(0, 5),
    st.fractions(min_value=F(-2), max_value=0, max_denominator=500),
    st.fractions(min_value=0, max_value=1, max_denominator=500),
)
def test_round_trip_soundness(n, dm, lam, t):
    sys = build_system(SystemKind.BIDISK_OPEN_DAGGER)
    if lam == 0 or lam == -2 or t in (0, 1):
        return
    cert = criterion_failure_witness(n, n + dm, lam, t * sys.e(n), sys)
    assert verify_certificate(cert, sys).ok


# -- lim1 verdicts ------------------------------------------------------------


def test_default_grid_has_36_points():
    assert len(default_grid()) == 36
    assert len({p[0] for p in default_grid()}) == 3


def test_bidisk_verdict_certified(bidisk):
    v = lim1_verdict(bidisk, default_grid())
    assert v.kind is Lim1Kind.NON_ZERO_CERTIFIED
    assert len(v.certificates) == 36
    assert v.claim_strength == "certified"


def test_stein_verdict_evidence(stein):
    v = lim1_verdict(stein, standard_corpus(stein))
    assert v.kind is Lim1Kind.VANISHES_EVIDENCE
    assert len(v.lifts) == 100
    assert v.claim_strength == "evidence"


def test_empty_grid_inconclusive(bidisk, stein):
    assert lim1_verdict(bidisk, []).kind is Lim1Kind.INCONCLUSIVE
    assert lim1_verdict(stein, []).kind is Lim1Kind.INCONCLUSIVE


def test_bad_grid_point_is_inconclusive(bidisk):
    v = lim1_verdict(bidisk, [(0, 1, F(1, 2), F(1, 2))])
    assert v.kind is Lim1Kind.INCONCLUSIVE
    assert v.diagnostics


def test_stein_corpus_with_divergent_cocycle_is_inconclusive(stein):
    v = lim1_verdict(stein, [MonomialCocycle(-1, 0, ((1, 0),), name="bad")])
    assert v.kind is Lim1Kind.INCONCLUSIVE
    assert "bad" in v.diagnostics[0]


FAMILIES = [Reciprocal(), Reciprocal(a=2, b=2), Geometric()]


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("eta", FAMILIES, ids=lambda e: e.describe())
def test_verdict_stability(p, eta):
    config = SystemConfig(p, eta)
    sys = build_system(SystemKind.BIDISK_OPEN_DAGGER, config)
    assert lim1_verdict(sys, default_grid(config)).kind is Lim1Kind.NON_ZERO_CERTIFIED
    stein = build_system(SystemKind.OPEN_DISK_STEIN, config)
    assert lim1_verdict(stein, standard_corpus(stein)).kind is Lim1Kind.VANISHES_EVIDENCE
