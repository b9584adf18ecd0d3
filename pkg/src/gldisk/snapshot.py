"""State snapshot files: JSON with lattice parameters and flat field arrays.

Schema (gldisk.state/v1):

    {
      "schema": "gldisk.state/v1",
      "lattice": {"R_dom": <float>, "delta": <float>},
      "psi_re": [...], "psi_im": [...], "a": [...],
      "provenance": {...}          # optional
    }

Floats are written with full round-trip precision so a resumed sweep starts
from bit-identical values.
"""

from __future__ import annotations

import json

import numpy as np

from .energy import State
from .lattice import Lattice, build_lattice

SNAPSHOT_SCHEMA = "gldisk.state/v1"


class SnapshotError(ValueError):
    """Malformed snapshot or mismatch with the requested lattice."""


def save_state(path, lat: Lattice, state: State,
               provenance: dict | None = None) -> None:
    if state.psi.shape != (lat.n_sites,) or state.a.shape != (lat.n_links,):
        raise SnapshotError("state shapes do not match the lattice")
    doc = {
        "schema": SNAPSHOT_SCHEMA,
        "lattice": {"R_dom": lat.R_dom, "delta": lat.spacing},
        "psi_re": state.psi.real.tolist(),
        "psi_im": state.psi.imag.tolist(),
        "a": np.asarray(state.a, dtype=float).tolist(),
    }
    if provenance:
        doc["provenance"] = provenance
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_state(path) -> tuple[Lattice, State]:
    """Rebuild the lattice from the stored parameters and return the state."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (json.JSONDecodeError, OSError) as exc:
        raise SnapshotError(f"cannot read snapshot {path}: {exc}") from exc
    if doc.get("schema") != SNAPSHOT_SCHEMA:
        raise SnapshotError(f"unexpected snapshot schema {doc.get('schema')!r}")
    try:
        latpar = doc["lattice"]
        lat = build_lattice(float(latpar["R_dom"]), float(latpar["delta"]))
        psi = np.asarray(doc["psi_re"], dtype=float) \
            + 1j * np.asarray(doc["psi_im"], dtype=float)
        a = np.asarray(doc["a"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise SnapshotError(f"malformed snapshot {path}: {exc}") from exc
    if psi.shape != (lat.n_sites,) or a.shape != (lat.n_links,):
        raise SnapshotError(
            f"snapshot arrays ({psi.shape[0]} sites, {a.shape[0]} links) do "
            f"not match the lattice ({lat.n_sites} sites, {lat.n_links} links)")
    if not (np.all(np.isfinite(psi)) and np.all(np.isfinite(a))):
        raise SnapshotError("snapshot contains non-finite values")
    return lat, State(psi=psi, a=a)
