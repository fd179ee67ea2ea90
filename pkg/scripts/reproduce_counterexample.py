"""Build and verify obstruction certificates for the open-dagger bidisk over a parameter grid.

    python scripts/reproduce_counterexample.py --prime 3 --eta-family "1/(2n+2)" --levels 4
"""
import argparse
import time

from daggerlim.derived_limit import SystemConfig, SystemKind, build_system, default_grid, lim1_verdict, parse_eta_family
from daggerlim.valuation import fmt_rational


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--prime", type=int, default=2)
    ap.add_argument("--eta-family", default="1/(n+1)")
    ap.add_argument("--levels", type=int, default=3, help="levels n in the grid")
    ap.add_argument("--m-span", type=int, default=3, help="values of m per level")
    args = ap.parse_args()

    config = SystemConfig(args.prime, parse_eta_family(args.eta_family))
    sys = build_system(SystemKind.BIDISK_OPEN_DAGGER, config)
    grid = default_grid(config, args.levels, args.m_span)
    t0 = time.perf_counter()
    verdict = lim1_verdict(sys, grid)
    elapsed = time.perf_counter() - t0

    print(f"{'n':>2} {'m':>2} {'e_lambda':>9} {'e_eta':>9} {'d':>3} {'e_rho':>10} {'e_delta':>11} {'e_eta_prime':>11}")
    for c in verdict.certificates:
        print(
            f"{c.n:>2} {c.m:>2} {fmt_rational(c.e_lambda):>9} {fmt_rational(c.e_eta):>9} {c.d:>3} "
            f"{fmt_rational(c.e_rho):>10} {fmt_rational(c.e_delta):>11} {fmt_rational(c.e_eta_prime):>11}"
        )
    print(f"\n{verdict.kind.value} ({verdict.claim_strength}): {len(verdict.certificates)}/{len(grid)} grid points in {elapsed:.3f}s")
    for d in verdict.diagnostics:
        print("  ", d)


if __name__ == "__main__":
    main()
