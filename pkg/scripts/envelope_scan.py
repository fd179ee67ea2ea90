"""Compare the symbolic envelope verdict with the brute-force scan as the net slope shrinks.

Shows where a finite scan stops seeing the asymptotic regime: for a net slope
-1/k with a ceil-sqrt term the scan reports growth until k*sqrt(N) ~ N.
"""
import argparse
from fractions import Fraction

from daggerlim.oracles import scan_envelope_limit, scan_resolves
from daggerlim.series import Envelope, Sublinear, envelope_limit


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-index", type=int, default=10**5)
    args = ap.parse_args()

    print(f"{'sublinear':>10} {'net slope':>12} {'symbolic':>22} {'scan':>22} resolves")
    for s in Sublinear:
        for k in (1, 10, 100, 1000, 10**4, 10**6):
            for sign in (1, -1):
                net = Fraction(sign, k)
                env = Envelope(Fraction(-1, 3), s, 0)
                e = Fraction(1, 3) + net
                sym = envelope_limit(env, e)
                scan = scan_envelope_limit(env, e, args.max_index)
                flag = "yes" if scan_resolves(env, e, args.max_index) else "no"
                mark = "" if sym is scan else "  <- differs"
                print(f"{s.value:>10} {str(net):>12} {sym.value:>22} {scan.value:>22} {flag}{mark}")


if __name__ == "__main__":
    main()
