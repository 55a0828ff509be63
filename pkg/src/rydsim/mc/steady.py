"""Steady states of the driven three-level ladder and the two-level reference.

The ladder is g <-> e <-> r with probe half-Rabi ``omega_p`` on g-e,
control half-Rabi ``omega`` on e-r, one-photon detuning ``delta`` on e,
a two-photon shift ``delta2`` on r (interaction-induced level shift),
and decay from e only: the g-e coherence decays at ``gamma``, so the
population decay rate of e is ``2*gamma``.

``single_atom_steady_state`` solves the full Lindblad problem as a dense
linear system in the nine density-matrix components.  The closed forms
below are algebraically identical (cross-checked in the test suite) and
power the Monte Carlo hot loop, where millions of conditional steady
states are evaluated per run.
"""

from __future__ import annotations

import numpy as np

from rydsim.errors import NumericError

_KET = np.eye(3)


def _liouvillian(omega_p: float, omega: float, delta: float, gamma: float,
                 delta2: float) -> np.ndarray:
    """Vectorized Lindblad generator (9x9, column-major rho ordering)."""
    h = np.zeros((3, 3), dtype=complex)
    h[1, 1] = -delta
    h[2, 2] = -delta2
    h[0, 1] = h[1, 0] = omega_p
    h[1, 2] = h[2, 1] = omega
    jump = np.sqrt(2.0 * gamma) * np.outer(_KET[0], _KET[1])  # |g><e|
    eye = np.eye(3)
    lv = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    lv += np.kron(jump, jump.conj())
    jj = jump.conj().T @ jump
    lv -= 0.5 * (np.kron(jj, eye) + np.kron(eye, jj.T))
    return lv


def single_atom_steady_state(omega_p: float, p, delta2: float = 0.0):
    """Steady state of one ladder atom under probe drive ``omega_p``.

    Parameters
    ----------
    omega_p : probe half-Rabi frequency [rad/us], >= 0.
    p : MediumParams supplying omega, delta, gamma.
    delta2 : two-photon shift of the Rydberg level [rad/us].

    Returns
    -------
    (populations, rho_ge) where populations = (Pg, Pe, Pr) and rho_ge is
    the g-e coherence <|g><e|> with Im(rho_ge) >= 0 (absorptive sign).
    On two-photon resonance (delta2 = 0) the result is the dark state:
    Pr = omega_p^2/(omega_p^2 + omega^2) and rho_ge = 0.
    """
    if omega_p < 0:
        raise ValueError("omega_p must be >= 0")
    lv = _liouvillian(omega_p, p.omega, p.delta, p.gamma, delta2)
    m = lv.copy()
    m[0, :] = 0.0
    m[0, [0, 4, 8]] = 1.0  # trace constraint replaces one redundant row
    b = np.zeros(9, dtype=complex)
    b[0] = 1.0
    try:
        rho = np.linalg.solve(m, b).reshape(3, 3)
    except np.linalg.LinAlgError as exc:  # cannot occur for gamma > 0
        raise NumericError(f"singular steady-state system: {exc}") from exc
    pops = (rho[0, 0].real, rho[1, 1].real, rho[2, 2].real)
    return pops, complex(rho[0, 1])


def ladder_populations(omega_p, omega, delta, gamma, delta2):
    """Closed-form ladder steady state, vectorized over ``delta2``.

    Returns ``(pg, pe, pr, rho_ge)``.  With
    D = (delta*delta2 - omega^2)^2 + 2 omega^2 omega_p^2 + omega_p^4
        + delta2^2 (gamma^2 + 2 omega_p^2):

        pe     = omega_p^2 delta2^2 / D
        pr     = omega_p^2 (omega^2 + omega_p^2) / D
        rho_ge = omega_p delta2 (delta*delta2 - omega^2 + i delta2 gamma) / D
    """
    d2 = np.asarray(delta2, dtype=float)
    a = delta * d2 - omega**2
    den = a * a + 2.0 * omega**2 * omega_p**2 + omega_p**4 + d2 * d2 * (
        gamma**2 + 2.0 * omega_p**2)
    pe = omega_p**2 * d2 * d2 / den
    pr = omega_p**2 * (omega**2 + omega_p**2) / den
    pg = 1.0 - pe - pr
    rho_ge = omega_p * d2 * (a + 1j * d2 * gamma) / den
    return pg, pe, pr, rho_ge


def two_level_populations(omega_p, delta, gamma):
    """Excited-state population of the resonantly driven two-level atom."""
    return omega_p**2 / (delta**2 + gamma**2 + 2.0 * omega_p**2)


def two_level_coherence(omega_p, delta, gamma):
    """g-e coherence rho_ge of the two-level steady state."""
    return omega_p * (delta + 1j * gamma) / (delta**2 + gamma**2 + 2.0 * omega_p**2)
