"""Run manifests, checksums, and atomic output writing.

Every run emits two files into its output directory:

``manifest.json``
    config hash, code version, seed, wall-clock start/end timestamps,
    and the checksummed output list.

``manifest.lock.json``
    the deterministic core of the same manifest (everything except the
    timestamps), byte-identical across re-runs of a deterministic
    solver under the same config and seed.  ``rydsim verify`` compares
    these.

No output file is ever half-written: writers go through a temp file in
the same directory followed by an atomic rename.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import struct
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np


def atomic_write_bytes(path: str | Path, data: bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path: str | Path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def write_csv(path: str | Path, header: list[str], rows) -> None:
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x) for x in row])
    atomic_write_text(path, buf.getvalue())


def _fmt(x):
    if isinstance(x, float):
        return format(x, ".17g")
    if isinstance(x, (np.floating,)):
        return format(float(x), ".17g")
    return x


def write_field_snapshot(path: str | Path, values: np.ndarray, dx: float,
                         dy: float, z: float) -> None:
    """Flat little-endian f64 re/im pairs, row-major, plus JSON sidecar."""
    path = Path(path)
    v = np.ascontiguousarray(values, dtype=complex)
    inter = np.empty(v.size * 2, dtype="<f8")
    inter[0::2] = v.real.ravel()
    inter[1::2] = v.imag.ravel()
    atomic_write_bytes(path, inter.tobytes())
    sidecar = {
        "format": "interleaved-re-im-f64-le",
        "shape": [int(v.shape[0]), int(v.shape[1])],
        "order": "row-major",
        "dx": dx,
        "dy": dy,
        "z": z,
    }
    atomic_write_text(path.with_suffix(path.suffix + ".json"),
                      json.dumps(sidecar, indent=2, sort_keys=True) + "\n")


def read_field_snapshot(path: str | Path):
    """Round-trip reader for the snapshot format; returns (values, meta)."""
    path = Path(path)
    meta = json.loads(path.with_suffix(path.suffix + ".json").read_text())
    raw = np.frombuffer(path.read_bytes(), dtype="<f8")
    re = raw[0::2]
    im = raw[1::2]
    values = (re + 1j * im).reshape(meta["shape"])
    return values, meta


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    """Checksummed record of one run."""

    config_hash: str
    version: str
    seed: int | None
    started: str = ""
    finished: str = ""
    outputs: list[dict] = field(default_factory=list)

    @classmethod
    def start(cls, config_hash: str, version: str, seed: int | None):
        return cls(config_hash=config_hash, version=version, seed=seed,
                   started=datetime.now(timezone.utc).isoformat())

    def add_output(self, root: Path, path: Path) -> None:
        self.outputs.append({
            "path": str(path.relative_to(root)),
            "sha256": sha256_file(path),
            "bytes": path.stat().st_size,
        })

    def finalize(self, outdir: str | Path) -> None:
        """Checksum outputs and write manifest.json + manifest.lock.json."""
        outdir = Path(outdir)
        self.finished = datetime.now(timezone.utc).isoformat()
        self.outputs.sort(key=lambda d: d["path"])
        full = {
            "config_hash": self.config_hash,
            "version": self.version,
            "seed": self.seed,
            "started": self.started,
            "finished": self.finished,
            "outputs": self.outputs,
        }
        lock = {k: full[k] for k in ("config_hash", "version", "seed",
                                     "outputs")}
        atomic_write_text(outdir / "manifest.json",
                          json.dumps(full, indent=2, sort_keys=True) + "\n")
        atomic_write_text(outdir / "manifest.lock.json",
                          json.dumps(lock, indent=2, sort_keys=True) + "\n")
