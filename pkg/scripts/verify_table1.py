"""Residual verdicts for the four closed-form profiles, both component
assignments, plus the rejected row-1 argument reading."""

import argparse

from nldirac import oracles


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-probes", type=int, default=7)
    args = ap.parse_args()
    print(f"{'row':>4} {'model':>6} {'as-printed':>12} {'swapped':>12} {'used':>11}  verdict")
    for row in (1, 2, 3, 4):
        rep = oracles.verify_row(row, probes=oracles.default_probes(row, args.n_probes))
        by = rep.residual_by_assignment
        print(f"{row:>4} {rep.equation:>6} {by['as-printed']:>12.3e} {by['swapped']:>12.3e} "
              f"{rep.assignment_used:>11}  {'pass' if rep.passed else 'FAIL'}")
    bad = oracles.verify_row(1, reading="linear-r")
    print(f"row 1 with the linear-r argument: residual {bad.max_residual:.3e} -> "
          f"{'pass' if bad.passed else 'fail (expected)'}")


if __name__ == "__main__":
    main()
