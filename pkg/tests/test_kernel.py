import numpy as np
import pytest

from oracles import kernel_integral_quad
from rydsim.errors import GridError, ResonanceError
from rydsim.kernel import (TransverseGrid, build_kernel, kernel_prefactors,
                           spinwave_correlator)
from rydsim.params import MediumParams, derive_scales


def make(**kw):
    base = dict(rho=0.05, g=20.0, omega=2.0, delta=0.0, gamma=6.0, c6=486.0,
                length=30.0, wavenumber=8.0, c=1.0)
    base.update(kw)
    return MediumParams(**base)


@pytest.fixture(scope="module")
def resonant_kernel():
    p = make()
    return p, build_kernel(p, TransverseGrid(n=128, extent=32.0))


def test_plateau_exact(resonant_kernel):
    p, k = resonant_kernel
    a = p.collective_coupling_sq**2 / (p.c * p.gamma * p.omega**2)
    assert k.plateau == pytest.approx(2j * a, rel=1e-14)


def test_kernel_magnitude_monotone(resonant_kernel):
    _, k = resonant_kernel
    mags = np.abs(k.values_3d)
    assert np.all(np.diff(mags) <= 1e-12 * mags[:-1] + 1e-300)


def test_far_field_asymptote(resonant_kernel):
    p, k = resonant_kernel
    z_b = derive_scales(p).z_b
    r = 3.0 * z_b
    far = k.far_coeff * p.c6 / r**6
    assert abs(k.evaluate_3d(r) - far) / abs(far) < 0.01


def test_c6_rescaling_doubles_range(resonant_kernel):
    p, k = resonant_kernel
    p2 = make(c6=64 * 486.0)
    k2 = build_kernel(p2, TransverseGrid(n=256, extent=64.0))
    assert k2.z_b == pytest.approx(2 * k.z_b, rel=1e-12)
    assert k2.plateau == pytest.approx(k.plateau, rel=1e-12)
    for r in (2.0, 4.0, 7.0):
        assert k2.evaluate_3d(2 * r) == pytest.approx(k.evaluate_3d(r),
                                                      rel=1e-12)


def test_integral_against_adaptive_quadrature(resonant_kernel):
    p, k = resonant_kernel
    mine = k.integral_3d()
    oracle = kernel_integral_quad(p.collective_coupling_sq, p.omega, p.gamma,
                                  p.delta, p.c6, p.c)
    assert abs(mine - oracle) / abs(oracle) < 5e-3
    # van der Waals speciality: equal refractive and absorptive weights
    assert mine.real / mine.imag == pytest.approx(1.0, abs=1e-3)


def test_integral_frozen_value(resonant_kernel):
    # value frozen from the adaptive-quadrature oracle:
    # (2 pi^2/3) z_b^3 * prefactor * (1 + i) on resonance
    p, k = resonant_kernel
    z_b = derive_scales(p).z_b
    frozen = (2.0 * np.pi**2 / 3.0) * z_b**3 * k.prefactor * (1 + 1j)
    assert k.integral_3d() == pytest.approx(frozen, rel=5e-3)


def test_detuned_integral_matches_oracle():
    p = make(delta=3.0, c6=-486.0)
    k = build_kernel(p, TransverseGrid(n=128, extent=32.0))
    oracle = kernel_integral_quad(p.collective_coupling_sq, p.omega, p.gamma,
                                  p.delta, p.c6, p.c)
    assert abs(k.integral_3d() - oracle) / abs(oracle) < 5e-3


def test_reduced_kernel_consistent_with_3d(resonant_kernel):
    # integrating the z-reduced kernel over the transverse plane recovers
    # the full 3d integral (thin-slab bookkeeping check)
    _, k = resonant_kernel
    i2 = np.sum(k.grid_kernel) * k.grid.dx**2
    i3 = k.integral_3d()
    assert abs(i2 - i3) / abs(i3) < 0.02


def test_spectrum_real_and_isotropic_for_real_kernel():
    p = make(delta=12.0, c6=-3000.0)
    k = build_kernel(p, TransverseGrid(n=128, extent=48.0),
                     dispersive_limit=True)
    assert k.is_real()
    vhat = k.spectrum
    assert np.abs(vhat.imag).max() < 1e-9 * np.abs(vhat.real).max()
    assert np.allclose(vhat.real, vhat.real.T, atol=1e-9)


def test_grid_preconditions():
    p = make()  # z_b = 3
    with pytest.raises(GridError):
        build_kernel(p, TransverseGrid(n=32, extent=32.0))  # dx = 1 > 3/8
    with pytest.raises(GridError):
        build_kernel(p, TransverseGrid(n=128, extent=16.0))  # < 8 z_b
    with pytest.raises(GridError):
        TransverseGrid(n=100, extent=32.0)  # not a power of two


def test_resonance_guard():
    # same-sign c6 and delta put the blockade denominator near zero once
    # gamma << |delta|; in the gamma -> 0 limit it crosses zero exactly
    p = make(delta=12.0, c6=3000.0)
    grid = TransverseGrid(n=128, extent=48.0)
    with pytest.raises(ResonanceError):
        build_kernel(p, grid, dispersive_limit=True)
    p2 = make(delta=200.0, c6=932.0)  # z_b ~ 6, gamma/|delta| = 0.03
    grid2 = TransverseGrid(n=128, extent=60.0)
    with pytest.raises(ResonanceError):
        build_kernel(p2, grid2)
    k = build_kernel(p2, grid2, allow_resonance=True)
    assert np.isfinite(k.grid_kernel).all()
    # opposite signs are safe even without damping
    build_kernel(make(delta=12.0, c6=-3000.0), grid, dispersive_limit=True)


def test_dispersive_limit_requires_detuning():
    with pytest.raises(ResonanceError):
        build_kernel(make(), TransverseGrid(n=128, extent=32.0),
                     dispersive_limit=True)


def test_correlator_limits(desk_params):
    z_b = derive_scales(desk_params).z_b
    assert spinwave_correlator(1e9, desk_params) == pytest.approx(1.0,
                                                                  abs=1e-12)
    # oracle value at the blockade radius: V(z_b) = gamma_eit, so the
    # factor is 2/(2 - i) with magnitude 2/sqrt(5)
    assert abs(spinwave_correlator(z_b, desk_params)) == pytest.approx(
        2.0 / np.sqrt(5.0), rel=1e-12)
    # magnitude 1/sqrt(2) occurs where V equals the pair linewidth
    r_pair = z_b / 2.0 ** (1.0 / 6.0)
    assert abs(spinwave_correlator(r_pair, desk_params)) == pytest.approx(
        1.0 / np.sqrt(2.0), rel=1e-12)


def test_correlator_magnitude_bounded_on_resonance(desk_params):
    r = np.geomspace(0.1, 100, 200)
    f = spinwave_correlator(r, desk_params)
    assert np.all(np.abs(f) <= 1.0 + 1e-12)


def test_correlator_consistent_with_kernel(resonant_kernel):
    # the kernel is the far-field interaction dressed by the same
    # blockade factor
    p, k = resonant_kernel
    r = np.geomspace(1.0, 20.0, 50)
    far = k.far_coeff * p.c6 / r**6
    assert np.allclose(k.evaluate_3d(r), far * spinwave_correlator(r, p),
                       rtol=1e-12)
