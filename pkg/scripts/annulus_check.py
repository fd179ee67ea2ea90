"""Run the lim = Rlim evidence check on a half-open annulus and print each check.

    python scripts/annulus_check.py --e-r 2 --e-R 1/3 --degree 100
"""
import argparse

from daggerlim.annulus import AnnulusSpec, annulus_rlim_check
from daggerlim.derived_limit import parse_eta_family
from daggerlim.valuation import as_fraction


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--e-r", default="1")
    ap.add_argument("--e-R", dest="e_R", default="1/2")
    ap.add_argument("--degree", type=int, default=200)
    ap.add_argument("--exhaustion", help="inner exponents increasing to e_r, e.g. '1+-1/(2n+4)'")
    ap.add_argument("--prime", type=int, default=2)
    args = ap.parse_args()

    A = AnnulusSpec(as_fraction(args.e_r), as_fraction(args.e_R))
    exhaustion = parse_eta_family(args.exhaustion) if args.exhaustion else None
    report = annulus_rlim_check(A, exhaustion, degree=args.degree, prime=args.prime)
    for c in report.checks:
        print(f"{'ok  ' if c.passed else 'FAIL'} {c.name:<28} {c.detail}")
    print(f"\nverdict: {report.kind.value}, {report.lifts} certified lifts")


if __name__ == "__main__":
    main()
