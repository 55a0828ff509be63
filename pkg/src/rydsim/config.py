"""Plain-text key=value run configuration with full up-front validation.

Syntax: one ``key = value`` pair per line, ``#`` starts a comment,
blank lines ignored.  Lists are comma-separated.  Every key is checked
against the subcommand's schema before any computation starts; unknown
keys are hard errors (with a did-you-mean suggestion), and all
violations are reported together, each with its file and line.
"""

from __future__ import annotations

import difflib
import hashlib
from dataclasses import dataclass, field
from pathlib import Path

from rydsim.errors import ConfigError
from rydsim.params import C_LIGHT, MediumParams


def _to_float(s: str) -> float:
    return float(s)


def _to_int(s: str) -> int:
    v = float(s)
    if v != int(v):
        raise ValueError(f"expected an integer, got {s}")
    return int(v)


def _to_bool(s: str) -> bool:
    t = s.strip().lower()
    if t in ("true", "yes", "1", "on"):
        return True
    if t in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected a boolean, got {s}")


def _to_float_list(s: str) -> list[float]:
    return [float(x) for x in s.split(",") if x.strip()]


def _to_int_list(s: str) -> list[int]:
    return [_to_int(x) for x in s.split(",") if x.strip()]


def _to_str(s: str) -> str:
    return s.strip()


@dataclass(frozen=True)
class Key:
    convert: callable
    required: bool = False
    default: object = None
    choices: tuple | None = None


MEDIUM_KEYS = {
    "rho": Key(_to_float, required=True),
    "g": Key(_to_float, required=True),
    "omega": Key(_to_float, required=True),
    "delta": Key(_to_float, required=True),
    "gamma": Key(_to_float, required=True),
    "c6": Key(_to_float, required=True),
    "length": Key(_to_float, required=True),
    "wavenumber": Key(_to_float, required=True),
    "c": Key(_to_float, default=C_LIGHT),
}

SOLVER_KEYS = {
    "spectrum": {
        "omega_min": Key(_to_float, required=True),
        "omega_max": Key(_to_float, required=True),
        "omega_points": Key(_to_int, required=True),
        "shift": Key(_to_float, default=0.0),
    },
    "mc": {
        "omega_p": Key(_to_float, required=True),
        "densities": Key(_to_float_list, required=True),
        "n_atoms": Key(_to_int, default=2000),
        "sweeps": Key(_to_int, default=300),
        "seed": Key(_to_int, default=1),
    },
    "propagate": {
        "grid_points": Key(_to_int, required=True),
        "extent": Key(_to_float, required=True),
        "dz": Key(_to_float, required=True),
        "nsteps": Key(_to_int, required=True),
        "beam": Key(_to_str, default="gaussian",
                    choices=("gaussian", "super_gaussian", "plane")),
        "waist": Key(_to_float, default=0.0),
        "power": Key(_to_float, default=1.0),
        "order": Key(_to_int, default=2),
        "intensity": Key(_to_float, default=1.0),
        "snapshot_every": Key(_to_int, default=0),
        "absorber_width": Key(_to_float, default=0.0),
        "allow_resonance": Key(_to_bool, default=False),
        "dispersive_limit": Key(_to_bool, default=False),
    },
    "two-photon": {
        "mode": Key(_to_str, required=True,
                    choices=("dissipative", "dispersive")),
        "r_max": Key(_to_float, default=8.0),
        "points_per_unit": Key(_to_int, default=32),
        "steps_per_unit": Key(_to_int, default=64),
        "sweep_od_b": Key(_to_float_list, default=None),
    },
    "source": {
        "n_values": Key(_to_int_list, required=True),
        "pulse_width": Key(_to_float, default=1.0),
        "pulse_center": Key(_to_float, default=0.0),
        "grid_points": Key(_to_int, default=801),
    },
    "switch": {
        "n_in": Key(_to_float, required=True),
        "od_b_values": Key(_to_float_list, required=True),
        "mode": Key(_to_str, default="closed_form",
                    choices=("closed_form", "integrate")),
        "length_over_zb": Key(_to_float, default=16.0),
    },
    "gate": {
        "od_b_values": Key(_to_float_list, required=True),
        "gamma_over_delta": Key(_to_float, required=True),
        "omega_over_delta": Key(_to_float, default=0.0),
        "mode": Key(_to_str, default="closed_form",
                    choices=("closed_form", "integrate")),
        "length_over_zb": Key(_to_float, default=40.0),
        "feasibility": Key(_to_bool, default=True),
        "validity_bound": Key(_to_float, default=0.25),
    },
    "verify": {
        "seed": Key(_to_int, default=1),
    },
}

#: subcommands whose schema includes the medium block
NEEDS_MEDIUM = {"spectrum", "mc", "propagate", "two-photon"}
#: subcommands where a medium block is accepted and used for scaling
OPTIONAL_MEDIUM = {"switch", "gate"}


@dataclass
class RunConfig:
    """Validated run description: subcommand, medium, solver options."""

    subcommand: str
    medium: MediumParams | None
    solver: dict
    raw_text: str = field(repr=False, default="")

    def config_hash(self) -> str:
        """Hash of the canonicalized key=value content plus subcommand."""
        lines = []
        for ln in self.raw_text.splitlines():
            body = ln.split("#", 1)[0].strip()
            if body:
                k, _, v = body.partition("=")
                lines.append(f"{k.strip()}={v.strip()}")
        canon = self.subcommand + "\n" + "\n".join(sorted(lines))
        return hashlib.sha256(canon.encode()).hexdigest()


def _parse_pairs(text: str, path: str) -> tuple[dict, dict, list[str]]:
    pairs, lineno, errors = {}, {}, []
    for i, ln in enumerate(text.splitlines(), start=1):
        body = ln.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            errors.append(f"{path}:{i}: not a key=value line: {body!r}")
            continue
        k, _, v = body.partition("=")
        k = k.strip()
        if k in pairs:
            errors.append(f"{path}:{i}: duplicate key {k!r}")
            continue
        pairs[k] = v.strip()
        lineno[k] = i
    return pairs, lineno, errors


def parse_config(path: str | Path, subcommand: str) -> RunConfig:
    """Read and fully validate a config file for ``subcommand``.

    Raises ConfigError carrying every violation found (file:line each).
    """
    if subcommand not in SOLVER_KEYS:
        raise ConfigError(f"unknown subcommand {subcommand!r}")
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    text = path.read_text(encoding="utf-8")
    pairs, lineno, errors = _parse_pairs(text, str(path))

    schema = dict(SOLVER_KEYS[subcommand])
    medium_allowed = subcommand in NEEDS_MEDIUM or subcommand in OPTIONAL_MEDIUM
    if medium_allowed:
        schema.update(MEDIUM_KEYS)

    known = set(schema)
    values = {}
    for k, v in pairs.items():
        if k not in known:
            hint = difflib.get_close_matches(k, known, n=1)
            sugg = f" (did you mean {hint[0]!r}?)" if hint else ""
            errors.append(f"{path}:{lineno[k]}: unknown key {k!r}{sugg}")
            continue
        try:
            val = schema[k].convert(v)
        except ValueError as exc:
            errors.append(f"{path}:{lineno[k]}: bad value for {k!r}: {exc}")
            continue
        if schema[k].choices and val not in schema[k].choices:
            errors.append(
                f"{path}:{lineno[k]}: {k!r} must be one of "
                f"{schema[k].choices}, got {val!r}")
            continue
        values[k] = val

    medium_present = any(k in pairs for k in MEDIUM_KEYS)
    need_medium = subcommand in NEEDS_MEDIUM or (
        subcommand in OPTIONAL_MEDIUM and medium_present)
    for k, spec in schema.items():
        if k in values:
            continue
        is_medium = k in MEDIUM_KEYS
        if spec.required and (not is_medium or need_medium):
            errors.append(f"{path}: missing required key {k!r}")
        elif spec.default is not None or not spec.required:
            values.setdefault(k, spec.default)

    medium = None
    if need_medium and not errors:
        kwargs = {k: values.pop(k) for k in MEDIUM_KEYS if k in values}
        try:
            medium = MediumParams(**kwargs)
        except ConfigError as exc:
            errors.extend(f"{path}: {v}" for v in exc.violations)
    elif medium_allowed:
        for k in MEDIUM_KEYS:
            values.pop(k, None)

    if not errors:
        errors.extend(_static_checks(subcommand, values, medium, str(path)))
    if errors:
        raise ConfigError(errors)
    solver = {k: v for k, v in values.items() if k in SOLVER_KEYS[subcommand]}
    return RunConfig(subcommand=subcommand, medium=medium, solver=solver,
                     raw_text=text)


def _static_checks(subcommand: str, v: dict, medium, path: str) -> list[str]:
    """Grid and precondition violations checkable before running."""
    errs = []
    if subcommand == "spectrum":
        if v["omega_points"] < 1:
            errs.append(f"{path}: omega_points must be >= 1")
        if not v["omega_max"] > v["omega_min"]:
            errs.append(f"{path}: omega_max must exceed omega_min")
    elif subcommand == "mc":
        if v["omega_p"] < 0:
            errs.append(f"{path}: omega_p must be >= 0")
        if not v["densities"]:
            errs.append(f"{path}: densities must be non-empty")
        if any(d <= 0 for d in v["densities"]):
            errs.append(f"{path}: densities must be positive")
        if v["sweeps"] < 1:
            errs.append(f"{path}: sweeps must be >= 1")
    elif subcommand == "propagate":
        n = v["grid_points"]
        if n < 2 or (n & (n - 1)) != 0:
            errs.append(f"{path}: grid_points must be a power of two")
        if v["extent"] <= 0 or v["dz"] <= 0 or v["nsteps"] < 1:
            errs.append(f"{path}: extent, dz and nsteps must be positive")
        if v["beam"] in ("gaussian", "super_gaussian") and v["waist"] <= 0:
            errs.append(f"{path}: waist must be > 0 for shaped beams")
        if medium is not None and n >= 2 and (n & (n - 1)) == 0:
            from rydsim.params import derive_scales
            zb = derive_scales(medium).z_b
            if v["extent"] / n > zb / 8.0:
                errs.append(f"{path}: grid does not resolve the blockade "
                            f"radius ({zb:.4g} um) with >= 8 points")
            if v["extent"] < 8.0 * zb:
                errs.append(f"{path}: grid must span >= 8 blockade radii")
    elif subcommand == "two-photon":
        if v["r_max"] < 6.0:
            errs.append(f"{path}: r_max must be >= 6")
        if v["points_per_unit"] < 32:
            errs.append(f"{path}: points_per_unit must be >= 32")
        if v["mode"] == "dispersive" and medium is not None:
            if medium.delta == 0.0:
                errs.append(f"{path}: dispersive mode requires delta != 0")
            elif medium.omega >= abs(medium.delta):
                errs.append(f"{path}: dispersive mode requires "
                            "omega < |delta|")
    elif subcommand == "source":
        if any(n < 1 for n in v["n_values"]):
            errs.append(f"{path}: photon numbers must be >= 1")
        if v["pulse_width"] <= 0:
            errs.append(f"{path}: pulse_width must be > 0")
    elif subcommand == "switch":
        if v["mode"] == "integrate" and v["length_over_zb"] < 4.0:
            errs.append(f"{path}: integrate mode requires "
                        "length_over_zb >= 4")
    elif subcommand == "gate":
        if v["gamma_over_delta"] <= 0:
            errs.append(f"{path}: gamma_over_delta must be > 0")
        if not 0.0 <= v["omega_over_delta"] < 1.0:
            errs.append(f"{path}: omega_over_delta must lie in [0, 1)")
    return errs
