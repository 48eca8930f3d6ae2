"""Discrete tangent-point energies converge to the continuous energy at an
almost linear rate in the number of biarcs.

On the circle everything is exact: the error is 4 pi^2 / n on the nose, so
the fitted slope is -1. The ellipse shows the same behaviour numerically.
"""

import math

import numpy as np

from biarcs import (
    arclength_reparametrize,
    build_biarc_curve,
    continuous_tp_energy,
    discrete_tp_energy,
    make_partition,
    preset_curve,
)

Q = 3.0
SWEEP = [16, 32, 64, 128, 256, 512]

for name, params, ref_grid in (("circle", [1.0], 512), ("ellipse", [2.0, 1.0], 2048)):
    curve = arclength_reparametrize(preset_curve(name, params))
    reference = continuous_tp_energy(curve, Q, ref_grid)
    print(f"--- {name}{tuple(params)}: TP_{Q:g} = {reference:.8f} (grid {ref_grid}) ---")
    errs = []
    for n in SWEEP:
        beta = build_biarc_curve(curve, make_partition(curve.length, n))
        energy = discrete_tp_energy(beta, Q, gated=False, L=curve.length)
        errs.append(abs(reference - energy))
        print(f"  n={n:>4}  discrete={energy:.8f}  error={errs[-1]:.3e}")
    slope = np.polyfit(np.log(SWEEP), np.log(errs), 1)[0]
    print(f"  fitted log-log slope: {slope:.4f}")
    if name == "circle":
        print(f"  closed form check: 4 pi^2 / n at n=64 is {4 * math.pi**2 / 64:.3e}")
    print()
