"""Pure-Python (numpy) sweep kernel: the fallback backend.

One call performs a single sequential heat-bath sweep over all atoms in
scan order 0..N-1.  Each visited atom resamples its internal label from
the conditional single-atom steady-state populations given its current
interaction shift; a change of Rydberg status updates the shifts of all
neighbours through the precomputed interaction matrix row.

The arithmetic here is kept expression-for-expression identical to the
compiled kernel so both backends follow bit-identical trajectories from
the same uniform stream.
"""

from __future__ import annotations

import numpy as np


def run_sweep(labels: np.ndarray, shifts: np.ndarray, w: np.ndarray,
              uniforms: np.ndarray, omega_p: float, omega: float,
              delta: float, gamma: float) -> None:
    """In-place heat-bath sweep. ``uniforms`` holds one sample per atom."""
    n = labels.shape[0]
    om2 = omega * omega
    op2 = omega_p * omega_p
    two_op2 = 2.0 * op2
    g2_2op2 = gamma * gamma + two_op2
    pr_num = op2 * (om2 + op2)
    for i in range(n):
        d2 = shifts[i]
        a = delta * d2 - om2
        den = a * a + two_op2 * om2 + op2 * op2 + d2 * d2 * g2_2op2
        pe = op2 * d2 * d2 / den
        pr = pr_num / den
        pg = 1.0 - pe - pr
        u = uniforms[i]
        if u < pg:
            new = 0
        elif u < pg + pe:
            new = 1
        else:
            new = 2
        old = labels[i]
        if (old == 2) != (new == 2):
            if new == 2:
                shifts += w[i]
            else:
                shifts -= w[i]
        labels[i] = new
