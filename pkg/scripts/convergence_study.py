"""Observed convergence orders: reduction/lift consistency, gauge
elimination, and the rk4 + 4th-order stencil evolution."""

import numpy as np

from nldirac import studies


def show(label, errs, orders):
    print(f"{label:<28} errors {' '.join(f'{e:.2e}' for e in errs)}  orders {np.round(orders, 2).tolist()}")


def main():
    for eq in sorted(studies.LIFT_CASES):
        show(f"lift consistency {eq}", *studies.lift_study(eq))
    for order in (2, 4):
        show(f"gauge elimination, order {order}", *studies.gauge_study(order=order))
    show("evolution eq12 (rk4, 4th)", *studies.evolution_convergence())
    eps, drift, phase = studies.plane_wave_run()
    print(f"free plane wave, one period at 128 points: eps={eps:.10f} amplitude drift {drift:.2e} "
          f"phase error {phase:.2e}")
    print(f"time reversal error {studies.time_reversal_error():.2e}; "
          f"flow scaling mismatch (lam=2) {studies.flow_scaling_mismatch():.2e}")


if __name__ == "__main__":
    main()
