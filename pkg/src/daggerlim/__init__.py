"""Exact certificates for derived inverse limits of overconvergent polydisk algebras."""
from .derived_limit import (
    InverseSystem,
    ObstructionCertificate,
    SystemConfig,
    SystemKind,
    build_system,
    criterion_failure_witness,
    default_grid,
    delta_apply,
    delta_solve,
    lim1_verdict,
    verify_certificate,
)
from .membership import SpaceSpec, membership, sum_non_membership
from .series import DiagonalSeries, Envelope, Limit, Sublinear, TruncatedSeries, envelope_limit, gauss_norm
from .valuation import LogValue, Mode, PolyRadius

__version__ = "0.1.0"
