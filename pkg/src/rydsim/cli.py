"""Command-line interface: run orchestration and structured output.

Subcommands: spectrum, mc, propagate, two-photon, source, switch, gate,
verify.  Each takes a plain-text config (-c) and an output directory
(-o); outputs are CSV for curves and flat binary + JSON sidecar for
fields, always accompanied by a checksummed manifest.  Exit codes:
0 success, 2 config error, 3 numeric failure.  RYDSIM_THREADS caps
parallelism across independent jobs.
"""

from __future__ import annotations

import argparse
import filecmp
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

import rydsim
from rydsim.config import RunConfig, parse_config
from rydsim.errors import ConfigError, GridError, NumericError, ResonanceError
from rydsim.manifest import (RunManifest, atomic_write_text, write_csv,
                             write_field_snapshot)
from rydsim.params import derive_scales


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("RYDSIM_THREADS", "1")))
    except ValueError:
        return 1


class _Recorder:
    """Tracks files created by a run so failures can clean up."""

    def __init__(self, outdir: Path):
        self.outdir = outdir
        self.paths: list[Path] = []

    def path(self, name: str) -> Path:
        p = self.outdir / name
        self.paths.append(p)
        return p

    def cleanup(self):
        for p in self.paths:
            for q in (p, Path(str(p) + ".json")):
                if q.exists():
                    q.unlink()


def run_spectrum(cfg: RunConfig, rec: _Recorder) -> None:
    from rydsim.linear import transmission_spectrum

    s = cfg.solver
    omegas = np.linspace(s["omega_min"], s["omega_max"], s["omega_points"])
    spec = transmission_spectrum(cfg.medium, omegas, shift=s["shift"])
    write_csv(rec.path("spectrum.csv"),
              ["omega", "re_chi", "im_chi", "transmission"],
              zip(spec.detunings, spec.chi.real, spec.chi.imag,
                  spec.transmission))


def run_mc(cfg: RunConfig, rec: _Recorder) -> None:
    from rydsim.mc import scaling_curve

    s = cfg.solver
    results = scaling_curve(s["densities"], s["omega_p"], cfg.medium,
                            s["sweeps"], s["seed"], n_atoms=s["n_atoms"],
                            max_workers=_threads())
    write_csv(rec.path("mc.csv"),
              ["density", "f_bl", "chi_ratio", "stderr_f", "stderr_chi"],
              [(r.density, r.f_bl, r.chi_ratio, r.stderr_f, r.stderr_chi)
               for r in results])
    meta = [{"density": r.density, "rydberg_density": r.rydberg_density,
             "stderr_rydberg": r.stderr_rydberg, "converged": r.converged,
             "box_flagged": r.box_flagged, "seed": r.seed}
            for r in results]
    atomic_write_text(rec.path("mc_meta.json"),
                      json.dumps(meta, indent=2, sort_keys=True) + "\n")


def run_propagate(cfg: RunConfig, rec: _Recorder) -> None:
    from rydsim.kernel import TransverseGrid, build_kernel
    from rydsim.nlse import gaussian_beam, plane_wave, propagate

    s = cfg.solver
    grid = TransverseGrid(n=s["grid_points"], extent=s["extent"])
    kernel = build_kernel(cfg.medium, grid,
                          allow_resonance=s["allow_resonance"],
                          dispersive_limit=s["dispersive_limit"])
    if s["beam"] == "plane":
        fld = plane_wave(grid, s["intensity"])
    else:
        order = 1 if s["beam"] == "gaussian" else s["order"]
        fld = gaussian_beam(grid, s["waist"], power=s["power"], order=order)

    rows = [(fld.z, fld.power, fld.peak_intensity, fld.rms_width())]
    every = s["snapshot_every"]
    if every > 0:
        write_field_snapshot(rec.path("field_000000.bin"), fld.values,
                             grid.dx, grid.dx, fld.z)

    def cb(step, f):
        rows.append((f.z, f.power, f.peak_intensity, f.rms_width()))
        if every > 0 and step % every == 0:
            write_field_snapshot(rec.path(f"field_{step:06d}.bin"),
                                 f.values, grid.dx, grid.dx, f.z)

    fld = propagate(fld, kernel, cfg.medium, s["dz"], s["nsteps"],
                    absorber_width=s["absorber_width"], callback=cb)
    if every > 0 and s["nsteps"] % every != 0:
        write_field_snapshot(rec.path(f"field_{s['nsteps']:06d}.bin"),
                             fld.values, grid.dx, grid.dx, fld.z)
    write_csv(rec.path("propagate.csv"),
              ["z", "power", "peak_intensity", "rms_width"], rows)


def run_two_photon(cfg: RunConfig, rec: _Recorder) -> None:
    from rydsim.twophoton import (RelativeGrid, evolve_dissipative,
                                  evolve_dispersive)

    s = cfg.solver
    scales = derive_scales(cfg.medium)
    grid = RelativeGrid(r_max=s["r_max"], points_per_unit=s["points_per_unit"])
    l_tilde = cfg.medium.length / scales.z_b
    if s["mode"] == "dissipative":
        res = evolve_dissipative(scales.od_b,
                                 cfg.medium.omega / cfg.medium.gamma,
                                 l_tilde, grid,
                                 steps_per_unit=s["steps_per_unit"])
    else:
        res = evolve_dispersive(scales.od_b_bar,
                                cfg.medium.omega / abs(cfg.medium.delta),
                                l_tilde, grid,
                                steps_per_unit=s["steps_per_unit"])
    write_csv(rec.path("two_photon.csv"),
              ["r", "re_ee", "im_ee", "g2"],
              zip(res.r, res.ee.real, res.ee.imag, res.g2))
    if s["sweep_od_b"]:
        rows = []
        for odb in s["sweep_od_b"]:
            if s["mode"] == "dissipative":
                rr = evolve_dissipative(odb,
                                        cfg.medium.omega / cfg.medium.gamma,
                                        l_tilde, grid,
                                        steps_per_unit=s["steps_per_unit"])
            else:
                rr = evolve_dispersive(odb,
                                       cfg.medium.omega / abs(cfg.medium.delta),
                                       l_tilde, grid,
                                       steps_per_unit=s["steps_per_unit"])
            rows.append((odb, rr.g2_zero))
        write_csv(rec.path("two_photon_sweep.csv"), ["od_b", "g2_0"], rows)


def run_source(cfg: RunConfig, rec: _Recorder) -> None:
    from rydsim.source import GaussianPulse, source_density_matrix

    s = cfg.solver
    pulse = GaussianPulse(center=s["pulse_center"], width=s["pulse_width"])
    summary = []
    for n in s["n_values"]:
        res = source_density_matrix(n, pulse, n_grid=s["grid_points"])
        write_csv(rec.path(f"source_n{n}.csv"),
                  ["z", "intensity", "purity"],
                  [(t, i, res.purity) for t, i in zip(res.times,
                                                      res.intensity)])
        summary.append((n, res.trace, res.purity, res.mean_arrival))
    write_csv(rec.path("source_summary.csv"),
              ["n", "trace", "purity", "mean_arrival"], summary)


def run_switch(cfg: RunConfig, rec: _Recorder) -> None:
    from rydsim.devices import switch_transmission

    s = cfg.solver
    rows = []
    for odb in s["od_b_values"]:
        r = switch_transmission(s["n_in"], odb, mode=s["mode"],
                                length_over_zb=s["length_over_zb"])
        rows.append((odb, r.eta, r.n_out, r.gain))
    write_csv(rec.path("switch.csv"), ["od_b", "eta", "n_out", "gain"], rows)


def run_gate(cfg: RunConfig, rec: _Recorder) -> None:
    from rydsim.devices import gate_metrics, pi_phase_feasibility

    s = cfg.solver
    z_b = 1.0
    if cfg.medium is not None:
        z_b = derive_scales(cfg.medium).z_b
    feas = None
    if s["feasibility"]:
        feas = pi_phase_feasibility(s["od_b_values"], bound=s["validity_bound"],
                                    length_over_zb=s["length_over_zb"])
    rows = []
    for i, odb in enumerate(sorted(s["od_b_values"])):
        r = gate_metrics(odb, s["gamma_over_delta"], s["omega_over_delta"],
                         mode=s["mode"], length_over_zb=s["length_over_zb"],
                         z_b=z_b)
        max_phase = feas.points[i].max_phase if feas else ""
        rows.append((odb, r.phi, r.eta, r.fidelity, max_phase))
    write_csv(rec.path("gate.csv"),
              ["od_b", "phi", "eta", "fidelity", "max_phase"], rows)
    if feas:
        meta = {
            "threshold_od_b": feas.threshold,
            "validity_bound": feas.bound,
            "threshold_sensitivity": {f"{k:g}": v
                                      for k, v in feas.sensitivity.items()},
        }
        atomic_write_text(rec.path("gate_meta.json"),
                          json.dumps(meta, indent=2, sort_keys=True) + "\n")


_RUNNERS = {
    "spectrum": run_spectrum,
    "mc": run_mc,
    "propagate": run_propagate,
    "two-photon": run_two_photon,
    "source": run_source,
    "switch": run_switch,
    "gate": run_gate,
}


def execute(cfg: RunConfig, outdir: str | Path) -> RunManifest:
    """Dispatch a validated config, write outputs and the manifest.

    Partial outputs are removed if the solver fails.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    seed = cfg.solver.get("seed")
    man = RunManifest.start(cfg.config_hash(), rydsim.__version__, seed)
    rec = _Recorder(outdir)
    try:
        _RUNNERS[cfg.subcommand](cfg, rec)
    except BaseException:
        rec.cleanup()
        raise
    for p in sorted(set(rec.paths)):
        man.add_output(outdir, p)
        side = Path(str(p) + ".json")
        if side.exists():
            man.add_output(outdir, side)
    man.finalize(outdir)
    return man


# ---------------------------------------------------------------- verify

_VERIFY_MEDIUM = """
rho = 0.05
g = 20.0
omega = 2.0
delta = 0.0
gamma = 6.0
c6 = 486.0
length = 30.0
wavenumber = 8.0
c = 1.0
"""

_VERIFY_CONFIGS = {
    "spectrum": _VERIFY_MEDIUM + """
omega_min = -8
omega_max = 8
omega_points = 201
""",
    "mc": _VERIFY_MEDIUM + """
omega_p = 1.0
densities = 0.02, 0.08
n_atoms = 80
sweeps = 60
seed = {seed}
""",
    "two-photon": _VERIFY_MEDIUM + """
mode = dissipative
r_max = 6
points_per_unit = 32
steps_per_unit = 48
""",
    "source": """
n_values = 1, 2, 5
grid_points = 401
""",
    "switch": """
n_in = 100
od_b_values = 0.5, 1, 2
mode = integrate
""",
    "gate": """
od_b_values = 10, 20
gamma_over_delta = 0.05
mode = integrate
feasibility = false
""",
    "propagate": """
rho = 0.05
g = 20.0
omega = 2.0
delta = 12.0
gamma = 6.0
c6 = -3000.0
length = 30.0
wavenumber = 8.0
c = 1.0
grid_points = 128
extent = 40.0
dz = 0.02
nsteps = 25
beam = gaussian
waist = 6.0
power = 1.0
dispersive_limit = true
snapshot_every = 25
""",
}


def _closed_form_checks() -> list[tuple[str, bool, str]]:
    """Fast oracle checks of the analytic constants and identities."""
    from scipy.integrate import quad

    from rydsim.devices import (LOSS_INTEGRAL, PHASE_INTEGRAL,
                                SWITCH_INTEGRAL)
    from rydsim.mc.steady import ladder_populations

    checks = []
    q6 = quad(lambda z: 1 / (1 + z**6), -np.inf, np.inf)[0]
    checks.append(("gate phase integral = 2pi/3",
                   abs(q6 - PHASE_INTEGRAL) < 1e-9, f"{q6:.12f}"))
    q6s = quad(lambda z: 1 / (1 + z**6) ** 2, -np.inf, np.inf)[0]
    checks.append(("gate loss integral = 5pi/9",
                   abs(q6s - LOSS_INTEGRAL) < 1e-9, f"{q6s:.12f}"))
    q12 = quad(lambda z: 1 / (1 + z**12), -np.inf, np.inf)[0]
    checks.append(("switch integral = pi/(6 sin(pi/12))",
                   abs(q12 - SWITCH_INTEGRAL) < 1e-9, f"{q12:.12f}"))
    pg, pe, pr, coh = ladder_populations(1.0, 1.0, 0.0, 3.0, 0.0)
    ok = abs(pr - 0.5) < 1e-12 and abs(pe) < 1e-12 and abs(coh) < 1e-12
    checks.append(("dark state at zero two-photon shift", ok,
                   f"pr={pr:.12f}"))
    return checks


def run_verify(outdir: Path, seed: int, passes: int = 2) -> int:
    """Run the deterministic mini-suite ``passes`` times and compare.

    Returns a process exit code: 0 when all closed-form checks pass and
    every pass produced bit-identical lock manifests and outputs.
    """
    outdir.mkdir(parents=True, exist_ok=True)
    failures = 0
    for name, ok, detail in _closed_form_checks():
        print(f"[verify] {'PASS' if ok else 'FAIL'} {name} ({detail})")
        failures += 0 if ok else 1

    pass_dirs = []
    for k in range(passes):
        pdir = outdir / f"pass{k}"
        for sub, text in _VERIFY_CONFIGS.items():
            cfg_text = text.format(seed=seed) if "{seed}" in text else text
            cfg_path = pdir / f"{sub}.cfg"
            cfg_path.parent.mkdir(parents=True, exist_ok=True)
            atomic_write_text(cfg_path, cfg_text)
            cfg = parse_config(cfg_path, sub)
            execute(cfg, pdir / sub)
        pass_dirs.append(pdir)
        print(f"[verify] pass {k} complete")

    identical = True
    if passes >= 2:
        ref = pass_dirs[0]
        for other in pass_dirs[1:]:
            for sub in _VERIFY_CONFIGS:
                a = ref / sub / "manifest.lock.json"
                b = other / sub / "manifest.lock.json"
                same = a.is_file() and b.is_file() and filecmp.cmp(
                    a, b, shallow=False)
                if not same:
                    identical = False
                    print(f"[verify] FAIL manifests differ for {sub}")
        print(f"[verify] {'PASS' if identical else 'FAIL'} "
              f"bit-identical manifests across {passes} passes")
    if failures or not identical:
        return 3
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="rydsim",
        description="Nonlinear and quantum optics in Rydberg-EIT media")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in _RUNNERS:
        sp = sub.add_parser(name)
        sp.add_argument("-c", "--config", required=True)
        sp.add_argument("-o", "--outdir", required=True)
    vp = sub.add_parser("verify")
    vp.add_argument("-o", "--outdir", required=True)
    vp.add_argument("--seed", type=int, default=1)
    vp.add_argument("--once", action="store_true",
                    help="single pass (skip the determinism comparison)")
    args = parser.parse_args(argv)

    try:
        if args.subcommand == "verify":
            return run_verify(Path(args.outdir), args.seed,
                              passes=1 if args.once else 2)
        cfg = parse_config(args.config, args.subcommand)
        execute(cfg, args.outdir)
        return 0
    except ConfigError as exc:
        for v in exc.violations:
            print(f"config error: {v}", file=sys.stderr)
        return 2
    except (GridError, NumericError, ResonanceError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
