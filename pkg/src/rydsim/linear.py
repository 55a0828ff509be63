"""Linear (non-interacting) EIT optics of the three-level ladder.

The susceptibility here multiplies the amplitude equation
``d E/dz = i chi(omega) E``, so the *intensity* transmission through a
medium of length L is ``exp(-2 Im(chi) L)``.  This fixes the usual
factor-of-two ambiguity: on a bare two-level resonance the amplitude
attenuates as exp(-OD) and the intensity as exp(-2 OD).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from rydsim.errors import ConfigError
from rydsim.params import MediumParams


@dataclass(frozen=True)
class SusceptibilitySpectrum:
    """Susceptibility and transmission sampled on a detuning grid."""

    detunings: np.ndarray
    chi: np.ndarray
    transmission: np.ndarray


def chi_eit(omega, p: MediumParams, shift=0.0):
    """Probe susceptibility of the ladder system per unit length [um^-1].

    Parameters
    ----------
    omega : two-photon detuning of the probe [rad/us]; scalar or array.
    p : medium parameters (one-photon detuning ``p.delta`` included).
    shift : local level shift V of the Rydberg state [rad/us], e.g. from
        a nearby excitation.  Scalar or array broadcastable with omega.

    Returns
    -------
    complex chi with Im(chi) >= 0 (passive medium).  The pole structure
    is regularized by gamma > 0.  With ``omega = shift = delta = 0`` the
    medium is perfectly transparent (chi = 0).
    """
    w = np.asarray(omega, dtype=float)
    v = np.asarray(shift, dtype=float)
    num = w - v
    den = p.omega**2 - (w + p.delta + 1j * p.gamma) * (w - v)
    chi = (p.collective_coupling_sq / p.c) * num / den
    if np.isscalar(omega) and np.isscalar(shift):
        return complex(chi)
    return chi


def two_level_chi(omega, p: MediumParams):
    """Reference susceptibility with the control field off.

    chi_2l(omega) = -(g^2 rho/c) / (omega + delta + i gamma): the bare
    g-e response, i.e. the omega -> 0 limit of a fully blockaded ladder.
    On resonance the amplitude attenuates as exp(-OD) over the medium.
    """
    w = np.asarray(omega, dtype=float)
    chi = -(p.collective_coupling_sq / p.c) / (w + p.delta + 1j * p.gamma)
    return complex(chi) if np.ndim(chi) == 0 else chi


def two_level_transmission(omega, p: MediumParams):
    """Intensity transmission of the control-off medium."""
    chi = np.asarray(two_level_chi(omega, p))
    return np.exp(-2.0 * chi.imag * p.length)


def transmission_spectrum(p: MediumParams, omegas, shift=0.0) -> SusceptibilitySpectrum:
    """Intensity transmission |exp(i integral chi dz)|^2 over the medium.

    ``omegas`` must be non-empty; the spectrum is computed on exactly the
    grid supplied (no automatic refinement).
    """
    w = np.atleast_1d(np.asarray(omegas, dtype=float))
    if w.size == 0:
        raise ConfigError("detuning grid must be non-empty")
    chi = np.asarray(chi_eit(w, p, shift))
    transmission = np.exp(-2.0 * chi.imag * p.length)
    return SusceptibilitySpectrum(detunings=w, chi=chi, transmission=transmission)


def transparency_halfwidth(p: MediumParams, bracket_factor: float = 0.95) -> float:
    """Detuning at which the intensity transmission first drops to 1/2.

    Scans outward from omega = 0 and bisects the first crossing; used to
    verify that the transparency-window width scales with the EIT
    linewidth (omega^2 at fixed gamma).
    """
    from scipy.optimize import brentq

    def resid(w):
        return np.exp(-2.0 * chi_eit(w, p).imag * p.length) - 0.5

    lo = 0.0
    hi = p.omega * bracket_factor
    n = 4096
    grid = np.linspace(1e-12, hi, n)
    vals = np.array([resid(w) for w in grid])
    idx = np.nonzero(vals < 0)[0]
    if idx.size == 0:
        raise ValueError("transmission never drops below 1/2 inside the window")
    i = idx[0]
    lo = grid[i - 1] if i > 0 else 1e-12
    return brentq(resid, lo, grid[i])
