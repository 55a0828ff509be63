"""Nonlocal nonlinear beam propagation and plane-wave stability.

Propagation integrates

    i dE/dz = -(1/2k) Laplacian_perp E - (V_k * |E|^2) E

with a Strang-split spectral scheme: half kinetic step in Fourier
space, full nonlinear step with the convolution evaluated at the
substep midpoint (so the scheme stays second order even for absorbing
kernels), half kinetic step.  Im(V_k) >= 0 corresponds to loss; real
kernels conserve power to round-off.

Bogoliubov stability of a uniform state of intensity I under the same
equation gives

    w(q)^2 = eps(q) * (eps(q) - 2 Vhat(q) I),  eps = q^2/(2k),

so modes with Vhat(q) > eps(q)/(2 I) grow at rate Im(w).  Defocusing
kernels have Vhat(0) < 0 and are long-wave stable; a finite-q sign
change of Vhat produces the modulational (roton-type) instability that
seeds filament patterns.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from rydsim.errors import NumericError
from rydsim.kernel import NonlocalKernel, TransverseGrid
from rydsim.params import MediumParams


@dataclass
class ComplexField2D:
    """Transverse probe envelope on a uniform grid, evolved along z."""

    grid: TransverseGrid
    values: np.ndarray = field(repr=False)  # (n, n) complex
    z: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.grid.n, self.grid.n):
            raise ValueError("field shape does not match grid")
        if not np.all(np.isfinite(self.values)):
            raise NumericError("field contains non-finite entries")

    @property
    def power(self) -> float:
        """int |E|^2 dA."""
        return float(np.sum(np.abs(self.values) ** 2) * self.grid.dx**2)

    @property
    def peak_intensity(self) -> float:
        return float(np.abs(self.values).max() ** 2)

    def rms_width(self) -> float:
        """Intensity-weighted rms radius about the beam centroid."""
        x, y = self.grid.axes()
        inten = np.abs(self.values) ** 2
        tot = inten.sum()
        if tot == 0:
            return 0.0
        xm = (inten.sum(axis=0) @ x) / tot
        ym = (inten.sum(axis=1) @ y) / tot
        xx = (inten.sum(axis=0) @ (x - xm) ** 2) / tot
        yy = (inten.sum(axis=1) @ (y - ym) ** 2) / tot
        return float(np.sqrt(xx + yy))


def gaussian_beam(grid: TransverseGrid, waist: float, power: float = 1.0,
                  order: int = 1) -> ComplexField2D:
    """Gaussian (order 1) or super-Gaussian (order m) input beam.

    Amplitude profile exp(-(r^2/w^2)^m), normalized to the requested
    power.
    """
    if order < 1:
        raise ValueError("super-Gaussian order must be >= 1")
    x, y = grid.axes()
    r2 = (x[None, :] ** 2 + y[:, None] ** 2) / waist**2
    amp = np.exp(-(r2**order))
    cur = np.sum(np.abs(amp) ** 2) * grid.dx**2
    amp *= np.sqrt(power / cur)
    return ComplexField2D(grid=grid, values=amp.astype(complex))


def plane_wave(grid: TransverseGrid, intensity: float) -> ComplexField2D:
    return ComplexField2D(grid=grid,
                          values=np.full((grid.n, grid.n),
                                         np.sqrt(intensity), dtype=complex))


def _absorber_mask(grid: TransverseGrid, width: float, strength: float = 8.0):
    """Super-Gaussian rim attenuation factor (per step), or None."""
    if width <= 0:
        return None
    x, y = grid.axes()
    half = grid.extent / 2.0
    dx = np.maximum(0.0, np.abs(x) - (half - width)) / width
    dy = np.maximum(0.0, np.abs(y) - (half - width)) / width
    prof = dx[None, :] ** 4 + dy[:, None] ** 4
    return np.exp(-strength * prof)


def propagate(fld: ComplexField2D, kernel: NonlocalKernel, p: MediumParams,
              dz: float, nsteps: int, absorber_width: float = 0.0,
              callback=None) -> ComplexField2D:
    """Advance the field by ``nsteps`` Strang steps of size ``dz``.

    A spectral CFL-like bound is enforced as a hard error:
    dz <= min(k dx^2, 0.1 / (|V_k(0)| max|E|^2)).  Non-finite values
    abort with a diagnostic.  ``callback(step, field)`` is invoked after
    every step when given.
    """
    if nsteps < 1:
        raise ValueError("nsteps must be >= 1")
    k = p.wavenumber
    grid = fld.grid
    e = fld.values.copy()
    imax = np.abs(e).max() ** 2
    nl_scale = abs(kernel.plateau) * imax
    dz_max = k * grid.dx**2
    if nl_scale > 0:
        dz_max = min(dz_max, 0.1 / nl_scale)
    if dz > dz_max:
        raise NumericError(
            f"step size {dz:.4g} exceeds the stability bound {dz_max:.4g} "
            "(refine dz or the grid)")

    kx, ky = grid.wavenumbers()
    k2 = kx[None, :] ** 2 + ky[:, None] ** 2
    half_kinetic = np.exp(-1j * k2 * dz / (4.0 * k))
    mask = _absorber_mask(grid, absorber_width)

    out = ComplexField2D(grid=grid, values=e, z=fld.z)
    for step in range(nsteps):
        e = np.fft.ifft2(np.fft.fft2(e) * half_kinetic)
        # midpoint evaluation of the nonlocal phase keeps second order
        # when the kernel has an absorptive part
        u0 = kernel.convolve(np.abs(e) ** 2)
        e_mid = np.exp(1j * (0.5 * dz) * u0) * e
        u_mid = kernel.convolve(np.abs(e_mid) ** 2)
        e = np.exp(1j * dz * u_mid) * e
        e = np.fft.ifft2(np.fft.fft2(e) * half_kinetic)
        if mask is not None:
            e *= mask
        if not np.all(np.isfinite(e)):
            raise NumericError(f"non-finite field after step {step + 1}")
        out.values = e
        out.z = fld.z + (step + 1) * dz
        if callback is not None:
            callback(step + 1, out)
    return out


def absorption_law(intensity_in, z, chi3_im):
    """Closed-form local nonlinear attenuation 1/I(z) = 1/I(0) + 2 Im(chi3) z."""
    i0 = np.asarray(intensity_in, dtype=float)
    return i0 / (1.0 + 2.0 * chi3_im * np.asarray(z) * i0)


@dataclass(frozen=True)
class StabilityResult:
    """Growth-rate curve of a uniform state: lam(q) = Im w(q) where w^2 < 0."""

    q: np.ndarray
    growth: np.ndarray
    q_star: float
    rate_star: float


def plane_wave_stability(kernel: NonlocalKernel, intensity: float,
                         p: MediumParams) -> StabilityResult:
    """Bogoliubov growth rates for a uniform state under a real kernel.

    Complex (absorptive) kernels are rejected; convert with
    ``build_kernel(..., dispersive_limit=True)`` first.
    """
    if not kernel.is_real(tol=1e-9):
        raise ValueError("stability analysis is defined for real "
                         "(dispersive) kernels only")
    if intensity < 0:
        raise ValueError("intensity must be >= 0")
    n = kernel.grid.n
    kx, _ = kernel.grid.wavenumbers()
    qs = kx[: n // 2]
    vhat = kernel.spectrum[0, : n // 2].real * kernel.grid.dx**2
    eps = qs**2 / (2.0 * p.wavenumber)
    w2 = eps * (eps - 2.0 * vhat * intensity)
    growth = np.sqrt(np.maximum(0.0, -w2))
    i_star = int(np.argmax(growth))
    return StabilityResult(q=qs, growth=growth, q_star=float(qs[i_star]),
                           rate_star=float(growth[i_star]))
