"""Ensemble Monte Carlo: heat-bath sampling of the interacting steady state.

A chain state is the vector of atomic labels {g, e, r}.  Sequential
heat-bath sweeps resample each atom from its conditional steady state
given the van der Waals shift exerted by the currently Rydberg-labelled
atoms.  After thermalization, the absorption coefficient is estimated
from the conditioned coherences (re-solved from the current shifts, not
from label frequencies, because the coherence is not a classical
population), while the Rydberg density is estimated from label counts.
A paired interaction-free run with the same uniform stream provides the
unblockaded reference density.

Periodic boundary conditions with the minimum-image convention remove
box-surface bias; the interaction is cut off at 4 blockade radii, where
|V| has dropped below gamma_eit/4096.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from rydsim.errors import ConfigError
from rydsim.mc._backend import get_sweep
from rydsim.mc.steady import ladder_populations, two_level_coherence
from rydsim.params import MediumParams, derive_scales

_LABELS = {"g": 0, "e": 1, "r": 2}


@dataclass
class EnsembleState:
    """Atom positions, internal-state labels, and accumulated shifts.

    ``shifts[i]`` is the total van der Waals shift sum_j C6/|ri-rj|^6
    over Rydberg-labelled atoms j != i (minimum image, cutoff applied).
    """

    positions: np.ndarray   # (N, 3) [um]
    labels: np.ndarray      # (N,) int8, 0=g 1=e 2=r
    shifts: np.ndarray      # (N,) [rad/us]
    box: float              # cubic box side [um]
    cutoff: float           # interaction cutoff [um]

    @property
    def n_atoms(self) -> int:
        return self.positions.shape[0]

    def recomputed_shifts(self, w: np.ndarray) -> np.ndarray:
        """Shift vector recomputed from scratch (consistency oracle)."""
        return w @ (self.labels == 2).astype(float)


@dataclass(frozen=True)
class McResult:
    """Estimates from one sampled density point.

    ``chi_ratio`` is Im(chi)/Im(chi_2l); ``f_bl`` the blockaded fraction
    rho_r0/rho_r - 1 from the paired interaction-free run.  ``converged``
    is False when the two chain halves disagree beyond 3 sigma.
    """

    chi_ratio: float
    f_bl: float
    rydberg_density: float
    stderr_chi: float
    stderr_f: float
    stderr_rydberg: float
    f_bl_conditioned: float
    stderr_f_conditioned: float
    density: float
    n_atoms: int
    sweeps: int
    seed: int
    converged: bool
    box_flagged: bool


def interaction_matrix(positions: np.ndarray, box: float, c6: float,
                       cutoff: float) -> np.ndarray:
    """Pairwise shift matrix W[i,j] = C6/d_ij^6, minimum image, cut off."""
    d = positions[:, None, :] - positions[None, :, :]
    d -= box * np.round(d / box)
    r2 = np.einsum("ijk,ijk->ij", d, d)
    np.fill_diagonal(r2, np.inf)
    w = c6 / r2**3
    w[r2 > cutoff * cutoff] = 0.0
    return w


def build_ensemble(n_atoms: int, box: float, p: MediumParams, rng) -> EnsembleState:
    """Uniformly random atom positions in a cubic box, all atoms in g."""
    if n_atoms < 1:
        raise ConfigError("n_atoms must be >= 1")
    scales = derive_scales(p)
    cutoff = min(4.0 * scales.z_b, 0.5 * box * (1.0 - 1e-9))
    positions = rng.random((n_atoms, 3)) * box
    labels = np.zeros(n_atoms, dtype=np.int8)
    shifts = np.zeros(n_atoms, dtype=float)
    return EnsembleState(positions=positions, labels=labels, shifts=shifts,
                         box=box, cutoff=cutoff)


def _block_stats(series: np.ndarray, n_blocks: int) -> tuple[float, float]:
    """Mean and blocked standard error of a measurement series."""
    m = len(series)
    nb = max(2, min(n_blocks, m))
    usable = (m // nb) * nb
    blocks = series[m - usable:].reshape(nb, -1).mean(axis=1)
    return float(series.mean()), float(blocks.std(ddof=1) / np.sqrt(nb))


def _split_ok(series: np.ndarray) -> bool:
    half = len(series) // 2
    if half < 4:
        return True
    a, b = series[:half], series[half:]
    sa = a.std(ddof=1) / np.sqrt(len(a))
    sb = b.std(ddof=1) / np.sqrt(len(b))
    scale = np.sqrt(sa * sa + sb * sb)
    if scale == 0.0:
        return abs(a.mean() - b.mean()) == 0.0
    return abs(a.mean() - b.mean()) <= 3.0 * scale


def _run_chain(state: EnsembleState, w: np.ndarray, uniforms: np.ndarray,
               omega_p: float, p: MediumParams, therm: int, run_sweep):
    """Drive sweeps and collect per-sweep measurements after thermalization.

    Returns (imcoh, frac_r) series; measurement happens at sweep
    boundaries with the conditioned closed-form coherence, identically
    for every backend.
    """
    labels = state.labels.copy()
    shifts = state.shifts.copy()
    total = uniforms.shape[0]
    imcoh = np.empty(total - therm)
    frac_r = np.empty(total - therm)
    pr_cond = np.empty(total - therm)
    for s in range(total):
        run_sweep(labels, shifts, w, uniforms[s], omega_p, p.omega, p.delta,
                  p.gamma)
        if s >= therm:
            _, _, pr, rho_ge = ladder_populations(omega_p, p.omega, p.delta,
                                                  p.gamma, shifts)
            imcoh[s - therm] = rho_ge.imag.mean()
            frac_r[s - therm] = (labels == 2).mean()
            pr_cond[s - therm] = pr.mean()
    return imcoh, frac_r, pr_cond


def sample_steady_state(state: EnsembleState, omega_p: float, p: MediumParams,
                        sweeps: int, seed: int,
                        thermalization_fraction: float = 0.25,
                        n_blocks: int = 20,
                        backend: str | None = None) -> McResult:
    """Sample the interacting steady state and the paired free reference.

    ``sweeps`` counts measurement sweeps; an additional
    ``ceil(thermalization_fraction * sweeps)`` thermalization sweeps are
    prepended.  Both the interacting and the interaction-free chain use
    the same uniform stream derived from ``seed``, so results are
    bit-reproducible for a fixed backend.
    """
    if sweeps < 1:
        raise ConfigError("sweeps must be >= 1")
    if omega_p < 0:
        raise ConfigError("omega_p must be >= 0")
    _, run_sweep = get_sweep(backend)
    therm = int(np.ceil(thermalization_fraction * sweeps))
    total = therm + sweeps
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    uniforms = rng.random((total, state.n_atoms))

    w = interaction_matrix(state.positions, state.box, p.c6, state.cutoff)
    imcoh, frac_r, pr_cond = _run_chain(state, w, uniforms, omega_p, p, therm,
                                        run_sweep)
    w0 = np.zeros_like(w)
    _, frac_r0, _ = _run_chain(state, w0, uniforms, omega_p, p, therm,
                               run_sweep)

    im2l = two_level_coherence(omega_p, p.delta, p.gamma).imag
    chi_series = imcoh / im2l
    chi_mean, chi_se = _block_stats(chi_series, n_blocks)
    fr_mean, fr_se = _block_stats(frac_r, n_blocks)
    fr0_mean, fr0_se = _block_stats(frac_r0, n_blocks)

    f_bl = fr0_mean / fr_mean - 1.0
    # first-order error propagation for the ratio
    f_se = abs(fr0_mean / fr_mean) * np.sqrt((fr0_se / fr0_mean) ** 2 +
                                             (fr_se / fr_mean) ** 2)
    # low-variance variant: conditioned populations against the exact
    # dark-state reference (the interaction-free conditioned estimator
    # is that constant with zero variance)
    pr0_exact = omega_p**2 / (omega_p**2 + p.omega**2)
    prc_mean, prc_se = _block_stats(pr_cond, n_blocks)
    f_cond = pr0_exact / prc_mean - 1.0
    f_cond_se = pr0_exact * prc_se / prc_mean**2
    scales = derive_scales(p)
    converged = bool(_split_ok(chi_series) and _split_ok(frac_r))
    return McResult(
        chi_ratio=chi_mean,
        f_bl=float(f_bl),
        rydberg_density=fr_mean * p.rho,
        stderr_chi=chi_se,
        stderr_f=float(f_se),
        stderr_rydberg=fr_se * p.rho,
        f_bl_conditioned=float(f_cond),
        stderr_f_conditioned=float(f_cond_se),
        density=p.rho,
        n_atoms=state.n_atoms,
        sweeps=sweeps,
        seed=seed,
        converged=converged,
        box_flagged=bool(state.box < 8.0 * scales.z_b),
    )


def scaling_curve(densities, omega_p: float, p: MediumParams, sweeps: int,
                  seed: int, n_atoms: int = 2000,
                  backend: str | None = None,
                  max_workers: int = 1) -> list[McResult]:
    """Run one McResult per density (fixed atom number, box from density).

    Child seeds are spawned from ``seed`` in density order, and results
    are merged in that same order, so the curve is reproducible
    regardless of ``max_workers``.
    """
    densities = list(densities)
    if len(densities) < 1:
        raise ConfigError("need at least one density")
    children = np.random.SeedSequence(seed).spawn(len(densities))
    jobs = []
    for d, child in zip(densities, children):
        pd = replace(p, rho=float(d))
        box = (n_atoms / float(d)) ** (1.0 / 3.0)
        child_seed = int(child.generate_state(1, dtype=np.uint64)[0]) % 2**63
        jobs.append((pd, box, child_seed))

    def _one(job):
        pd, box, child_seed = job
        rng = np.random.default_rng(child_seed)
        state = build_ensemble(n_atoms, box, pd, rng)
        return sample_steady_state(state, omega_p, pd, sweeps, child_seed,
                                   backend=backend)

    if max_workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=max_workers) as ex:
            return list(ex.map(_one, jobs))
    return [_one(j) for j in jobs]
