# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled sweep kernel: drop-in replacement for _sweep_py.run_sweep.

Same update rule and the same floating-point expression order as the
pure-Python fallback, so both backends reproduce identical trajectories
from one uniform stream (the build disables FP contraction for this).
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def run_sweep(cnp.int8_t[::1] labels, double[::1] shifts, double[:, ::1] w,
              double[::1] uniforms, double omega_p, double omega,
              double delta, double gamma):
    cdef Py_ssize_t n = labels.shape[0]
    cdef Py_ssize_t i, j
    cdef double om2 = omega * omega
    cdef double op2 = omega_p * omega_p
    cdef double two_op2 = 2.0 * op2
    cdef double g2_2op2 = gamma * gamma + two_op2
    cdef double pr_num = op2 * (om2 + op2)
    cdef double d2, a, den, pe, pr, pg, u
    cdef int new, old
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
                for j in range(n):
                    shifts[j] = shifts[j] + w[i, j]
            else:
                for j in range(n):
                    shifts[j] = shifts[j] - w[i, j]
        labels[i] = <cnp.int8_t> new
