"""The blockade-saturated nonlocal interaction kernel.

The photon-photon kernel is

    V_k(r) = A * 2 V(r) / (B0 - i V(r)),   V(r) = c6 / r^6,

with complex prefactor A = g^4 rho^2 / (c Gamma omega^2), pair linewidth
B0 = 2 omega^2 / Gamma and Gamma = gamma - i delta.  It saturates to the
finite plateau V_k(0) = 2i A inside the blockade radius and falls off as
(g^4 rho^2 / (c omega^4)) V(r) far outside.  The same Lorentzian-in-V
structure appears in the pair spin-wave correlator, exposed here as
:func:`spinwave_correlator`.

For beam propagation the three-dimensional kernel is reduced to the
transverse plane by integrating along the propagation direction (a
thin-slab approximation valid when the field varies slowly in z over a
blockade radius); the reduced kernel and its FFT are tabulated once per
(grid, parameter) pair and cached on the kernel object.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from rydsim.errors import GridError, ResonanceError
from rydsim.params import MediumParams, derive_scales


@dataclass(frozen=True)
class TransverseGrid:
    """Uniform square transverse grid with periodic boundaries."""

    n: int          # points per side, power of two
    extent: float   # physical side length [um]

    def __post_init__(self):
        if self.n < 2 or (self.n & (self.n - 1)) != 0:
            raise GridError(f"grid size must be a power of two, got {self.n}")
        if not self.extent > 0:
            raise GridError("grid extent must be positive")

    @property
    def dx(self) -> float:
        return self.extent / self.n

    def axes(self):
        x = (np.arange(self.n) - self.n // 2) * self.dx
        return x, x

    def wavenumbers(self):
        k = 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)
        return k, k


@dataclass
class NonlocalKernel:
    """Tabulated nonlocal kernel plus cached transverse-plane transform."""

    prefactor: complex          # A = g^4 rho^2/(c Gamma omega^2)
    pair_linewidth: complex     # B0 = 2 omega^2/Gamma
    z_b: float                  # blockade radius [um]
    c6: float
    far_coeff: float            # g^4 rho^2/(c omega^4), real
    grid: TransverseGrid
    radii: np.ndarray = field(repr=False)
    values_3d: np.ndarray = field(repr=False)       # V_k on `radii`
    reduced_2d: np.ndarray = field(repr=False)      # z-integrated kernel on `radii`
    grid_kernel: np.ndarray = field(repr=False)     # reduced kernel on the 2D grid
    spectrum: np.ndarray = field(repr=False)        # FFT2(grid_kernel) * dA

    @property
    def plateau(self) -> complex:
        """Saturated value V_k(0) = 2i * prefactor."""
        return 2j * self.prefactor

    def evaluate_3d(self, r):
        """Exact kernel at separation r (not interpolated)."""
        r = np.asarray(r, dtype=float)
        v = self.c6 / r**6
        return self.prefactor * 2.0 * v / (self.pair_linewidth - 1j * v)

    def integral_3d(self) -> complex:
        """4 pi * int r^2 V_k dr from the tabulated radial profile.

        Adds the analytic plateau piece below the first tabulated radius
        and the analytic 1/r^6 tail beyond the last one.
        """
        r = self.radii
        vals = self.values_3d
        core = np.trapezoid(4.0 * np.pi * r * r * vals, r)
        head = (4.0 / 3.0) * np.pi * r[0] ** 3 * self.plateau
        tail = 4.0 * np.pi * self.far_coeff * self.c6 / (3.0 * r[-1] ** 3)
        return complex(core + head + tail)

    def convolve(self, intensity: np.ndarray) -> np.ndarray:
        """Transverse-plane convolution (V_k * I)(x, y)."""
        dA = self.grid.dx**2
        return np.fft.ifft2(np.fft.fft2(intensity) * self.spectrum) * dA

    def is_real(self, tol: float = 1e-9) -> bool:
        scale = np.abs(self.grid_kernel.real).max()
        return np.abs(self.grid_kernel.imag).max() <= tol * max(scale, 1e-300)


def spinwave_correlator(r, p: MediumParams):
    """Pair blockade factor B0 / (B0 - i V(r)) of the spin-wave correlator.

    Approaches 1 for well-separated polaritons (V -> 0) and rolls off
    once |V(r)| exceeds the pair EIT linewidth |B0| = 2 omega^2/|Gamma|.
    Its magnitude is <= 1 on one-photon resonance.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("separation must be positive")
    gam = p.gamma - 1j * p.delta
    b0 = 2.0 * p.omega**2 / gam
    v = p.c6 / r**6
    out = b0 / (b0 - 1j * v)
    return complex(out) if np.ndim(out) == 0 else np.asarray(out)


def kernel_prefactors(p: MediumParams) -> tuple[complex, complex, float]:
    """(A, B0, far_coeff) for the kernel formula above."""
    gam = p.gamma - 1j * p.delta
    g2rho = p.collective_coupling_sq
    pref = g2rho**2 / (p.c * gam * p.omega**2)
    b0 = 2.0 * p.omega**2 / gam
    far = g2rho**2 / (p.c * p.omega**4)
    return pref, b0, far


def _check_resonance(c6: float, b0: complex, radii: np.ndarray,
                     rel_threshold: float) -> float:
    v = c6 / radii**6
    rel = np.abs(b0 - 1j * v) / abs(b0)
    return float(rel.min())


def build_kernel(p: MediumParams, grid: TransverseGrid,
                 allow_resonance: bool = False,
                 dispersive_limit: bool = False,
                 resonance_threshold: float = 0.05) -> NonlocalKernel:
    """Tabulate the nonlocal kernel and its transverse-plane transform.

    Preconditions: the grid must resolve the blockade radius with at
    least 8 points and span at least 8 blockade radii.  Parameter sets
    for which |B0 - i V(r)| passes within ``resonance_threshold * |B0|``
    of zero anywhere on the grid are refused unless ``allow_resonance``
    is set; such near-zeros occur only when the detuning sign is chosen
    against the interaction sign.

    ``dispersive_limit`` drops gamma from the prefactors (far-detuned
    limit), making the kernel exactly real; requires delta != 0.
    """
    scales = derive_scales(p)
    z_b = scales.z_b
    if grid.dx > z_b / 8.0:
        raise GridError(
            f"grid spacing {grid.dx:.4g} um does not resolve the blockade "
            f"radius {z_b:.4g} um with >= 8 points")
    if grid.extent < 8.0 * z_b:
        raise GridError(
            f"grid extent {grid.extent:.4g} um is below 8 blockade radii "
            f"({8 * z_b:.4g} um)")

    if dispersive_limit:
        if p.delta == 0.0:
            raise ResonanceError("dispersive limit requires delta != 0")
        gam = -1j * p.delta
        g2rho = p.collective_coupling_sq
        pref = g2rho**2 / (p.c * gam * p.omega**2)
        b0 = 2.0 * p.omega**2 / gam
        far = g2rho**2 / (p.c * p.omega**4)
    else:
        pref, b0, far = kernel_prefactors(p)

    r_min = z_b / 256.0
    r_max = max(1.5 * grid.extent, 20.0 * z_b)
    radii = np.geomspace(r_min, r_max, 4096)
    v = p.c6 / radii**6
    values_3d = pref * 2.0 * v / (b0 - 1j * v)

    closest = _check_resonance(p.c6, b0, radii, resonance_threshold)
    if closest < resonance_threshold and not allow_resonance:
        raise ResonanceError(
            "kernel denominator passes within "
            f"{closest:.3f} |B0| of zero inside the grid; the blockade "
            "formula is resonant for this c6/detuning sign combination "
            "(pass allow_resonance=True to override)")

    reduced = _reduce_along_z(pref, b0, p.c6, far, z_b, radii)
    grid_kernel = _sample_on_grid(grid, radii, reduced, pref, b0, p.c6, z_b)
    spectrum = np.fft.fft2(np.fft.ifftshift(grid_kernel))
    return NonlocalKernel(
        prefactor=pref, pair_linewidth=b0, z_b=z_b, c6=p.c6, far_coeff=far,
        grid=grid, radii=radii, values_3d=values_3d, reduced_2d=reduced,
        grid_kernel=grid_kernel, spectrum=spectrum)


def _kernel_3d(pref, b0, c6, r):
    v = c6 / r**6
    return pref * 2.0 * v / (b0 - 1j * v)


def _reduce_along_z(pref, b0, c6, far, z_b, radii) -> np.ndarray:
    """2 * int_0^inf V_k(sqrt(rho^2 + z^2)) dz per tabulated radius.

    Fixed-order Gauss-Legendre on [0, 4 z_b] and [4 z_b, 40 z_b] (the
    integrand is smooth on the blockade scale), plus the analytic
    1/r^6 far tail; vectorized over all radii at once.
    """
    x1, w1 = np.polynomial.legendre.leggauss(96)
    x2, w2 = np.polynomial.legendre.leggauss(48)
    cut = 40.0 * z_b
    mid = 4.0 * z_b
    z1 = 0.5 * mid * (x1 + 1.0)
    w1s = 0.5 * mid * w1
    z2 = mid + 0.5 * (cut - mid) * (x2 + 1.0)
    w2s = 0.5 * (cut - mid) * w2
    z = np.concatenate([z1, z2])
    w = np.concatenate([w1s, w2s])
    rr = np.sqrt(radii[:, None] ** 2 + z[None, :] ** 2)
    vals = _kernel_3d(pref, b0, c6, rr)
    core = vals @ w
    tail = far * c6 * np.array([_tail_integral(rho, cut) for rho in radii])
    return 2.0 * (core + tail)


def _tail_integral(rho, z0) -> float:
    """int_z0^inf dz / (rho^2 + z^2)^3 in closed form."""
    a2 = rho * rho
    t = z0 / np.sqrt(a2)
    # antiderivative of (a^2+z^2)^-3: z(3a^2+... use reduction formula
    # I = z/(4 a^2 (a^2+z^2)^2) * (... ) ; evaluate numerically stable form
    f = (np.pi / 2 - np.arctan(t)) * 3.0 / (8.0 * a2**2.5)
    f -= t * (3.0 * t * t + 5.0) / (8.0 * a2**2.5 * (1.0 + t * t) ** 2)
    return float(f)


def _sample_on_grid(grid, radii, reduced, pref, b0, c6, z_b) -> np.ndarray:
    """Reduced kernel evaluated on the centred 2D grid (radial interp)."""
    x, y = grid.axes()
    rr = np.hypot(x[None, :], y[:, None])
    out = np.empty(rr.shape, dtype=complex)
    flat = rr.ravel()
    re = np.interp(flat, radii, reduced.real,
                   left=reduced.real[0], right=0.0)
    im = np.interp(flat, radii, reduced.imag,
                   left=reduced.imag[0], right=0.0)
    out = (re + 1j * im).reshape(rr.shape)
    return out
