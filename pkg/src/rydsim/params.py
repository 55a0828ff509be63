"""Physical parameters of the medium and the derived optical scales.

Every other module consumes :class:`MediumParams` (raw inputs) and
:class:`DerivedScales` (blockade radius, optical depths, EIT width, ...)
and nothing else.  Units: um, us, rad/us; ``c6`` in rad/us * um^6, signed.
``omega`` is the control *half*-Rabi frequency (the full Rabi frequency
of the control field is ``2 * omega``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from rydsim.errors import ConfigError

#: speed of light in um/us
C_LIGHT = 2.998e8


@dataclass(frozen=True)
class MediumParams:
    """Raw physical inputs describing the atomic medium and the probe.

    Attributes
    ----------
    rho : atomic number density [um^-3]
    g : single-atom coupling [rad/us]; the collective coupling is g*sqrt(rho)
    omega : control half-Rabi frequency [rad/us]
    delta : one-photon (intermediate state) detuning [rad/us]
    gamma : polarization decay rate of the intermediate state [rad/us]
    c6 : van der Waals coefficient [rad/us * um^6], signed
    length : medium length along propagation [um]
    wavenumber : probe wave number [um^-1]
    c : speed of light [um/us]; a field (not a constant) so that
        dimensionless desk-scale setups may use c = 1
    """

    rho: float
    g: float
    omega: float
    delta: float
    gamma: float
    c6: float
    length: float
    wavenumber: float
    c: float = C_LIGHT

    def __post_init__(self):
        bad = []
        for name in ("rho", "gamma", "omega", "c", "length", "wavenumber"):
            if not getattr(self, name) > 0:
                bad.append(f"{name} must be > 0, got {getattr(self, name)}")
        for name in ("g", "delta", "c6"):
            if not np.isfinite(getattr(self, name)):
                bad.append(f"{name} must be finite, got {getattr(self, name)}")
        if bad:
            raise ConfigError(bad)

    @property
    def collective_coupling_sq(self) -> float:
        """g^2 * rho, the collective coupling squared [rad^2/us^2]."""
        return self.g**2 * self.rho


@dataclass(frozen=True)
class DerivedScales:
    """Optical scales derived from :class:`MediumParams`.

    ``od_b_bar`` is the off-resonant blockaded depth (gamma/|delta|)*od_b;
    it is ``None`` on one-photon resonance (delta = 0), where the notion
    does not apply.
    """

    gamma_eit: float
    z_b: float
    od: float
    od_b: float
    od_b_bar: float | None
    v_g: float
    l_abs: float


def derive_scales(p: MediumParams) -> DerivedScales:
    """Compute the derived optical scales for a parameter set.

    gamma_eit = omega^2 / sqrt(delta^2 + gamma^2)
    z_b       = (|c6| / gamma_eit)^(1/6)     (requires c6 != 0)
    od        = g^2 L rho / (c gamma)
    od_b      = g^2 rho z_b / (c gamma)
    v_g       = c omega^2 / (omega^2 + g^2 rho)
    l_abs     = c gamma / (g^2 rho)

    l_abs is the resonant two-level *amplitude* attenuation length, so
    od * l_abs = length and od_b * l_abs = z_b hold identically.
    """
    if p.c6 == 0.0:
        raise ConfigError("c6 must be nonzero to define a blockade radius")
    gamma_eit = p.omega**2 / np.hypot(p.delta, p.gamma)
    z_b = (abs(p.c6) / gamma_eit) ** (1.0 / 6.0)
    g2rho = p.collective_coupling_sq
    od = g2rho * p.length / (p.c * p.gamma)
    od_b = g2rho * z_b / (p.c * p.gamma)
    od_b_bar = (p.gamma / abs(p.delta)) * od_b if p.delta != 0.0 else None
    v_g = p.c * p.omega**2 / (p.omega**2 + g2rho)
    l_abs = p.c * p.gamma / g2rho
    return DerivedScales(
        gamma_eit=gamma_eit,
        z_b=z_b,
        od=od,
        od_b=od_b,
        od_b_bar=od_b_bar,
        v_g=v_g,
        l_abs=l_abs,
    )


def polariton_mixing(p: MediumParams) -> tuple[float, float]:
    """Photon and spin-wave fractions of the dark-state polariton.

    Returns ``(photon_fraction, spinwave_fraction)`` with
    photon_fraction = omega^2/(omega^2 + g^2 rho); the fractions sum to
    one and the group velocity is c * photon_fraction.
    """
    g2rho = p.collective_coupling_sq
    denom = p.omega**2 + g2rho
    return p.omega**2 / denom, g2rho / denom
