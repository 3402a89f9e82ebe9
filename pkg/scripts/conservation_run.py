"""Norm drift over t in [0, 1] for every model, and the eq8a rate check."""

import argparse
import time

from nldirac import studies
from nldirac.models import HERMITIAN


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t-final", type=float, default=1.0)
    ap.add_argument("--cfl", type=float, default=0.25)
    args = ap.parse_args()
    print(f"{'model':>6} {'hermitian':>9} {'rel drift':>11} {'seconds':>8}")
    for eq in studies.HERMITIAN_MODELS + ("eq8a",):
        t = time.perf_counter()
        drift = studies.conservation_run(eq, args.t_final, args.cfl)
        print(f"{eq:>6} {str(HERMITIAN[eq]):>9} {drift:>11.3e} {time.perf_counter() - t:>8.2f}")
    predicted, slope, delta = studies.eq8a_control()
    print(f"eq8a initial norm rate: predicted {predicted:.5f}, fitted {slope:.5f} "
          f"({abs(slope - predicted) / abs(predicted):.2%} off); |norm(1) - norm(0)| = {delta:.4f}")


if __name__ == "__main__":
    main()
