"""Batch front door: JSON config, subcommand dispatch, machine-readable output.

Subcommands (all take --config PATH):

    solve        minimize at a single radius, write snapshot + energy JSON
    sweep        minimize over a radii list, write CSV + verdict JSON
    certify      evaluate the certificate chain on a stored snapshot
    field-check  L2 classification, reverse-Holder verdicts, tail parameters

Exit codes: 0 success, 1 error (config/snapshot problems), 2 solve did not
converge, 3 certificate step failed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

from . import __version__
from ._backend import backend
from .certificate import certificate_chain
from .energy import initial_state
from .fields import (CONSTANT, POWER_LAW, TABULATED, FieldSpec,
                     UnsupportedFieldError, classify_L2_plane,
                     reverse_holder_check)
from .lattice import build_lattice
from .minimize import MinimizeOptions, minimize
from .scaling import divergence_verdict, sweep, write_sweep_csv
from .snapshot import SnapshotError, load_state, save_state


class ConfigError(ValueError):
    pass


def _load_config(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: JSON parse error at line {exc.lineno}, column "
            f"{exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def _require(cfg: dict, key: str, where: str):
    if key not in cfg:
        raise ConfigError(f"missing config field {where}.{key}")
    return cfg[key]


def _field_spec(cfg: dict, delta: float | None) -> FieldSpec:
    fc = dict(_require(cfg, "field", "config"))
    if fc.get("kind") == POWER_LAW and "r_cut" not in fc and delta is not None:
        fc["r_cut"] = 0.5 * delta  # default core radius: half a spacing
    try:
        return FieldSpec.from_json_dict(fc)
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"config.field: {exc}") from exc


def _minimize_options(cfg: dict) -> tuple[MinimizeOptions, dict]:
    mc = dict(cfg.get("minimize", {}))
    extras = {
        "init": mc.pop("init", "uniform"),
        "seed": mc.pop("seed", 1),
        "progress_every": mc.pop("progress_every", 0),
    }
    known = {"grad_tol", "max_iters", "ls_shrink", "ls_slope", "restart_period"}
    unknown = set(mc) - known
    if unknown:
        raise ConfigError(f"config.minimize: unknown keys {sorted(unknown)}")
    try:
        return MinimizeOptions(**mc), extras
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"config.minimize: {exc}") from exc


def _provenance(cfg: dict, seed=None) -> dict:
    canon = json.dumps(cfg, sort_keys=True).encode()
    return {
        "config_sha256": hashlib.sha256(canon).hexdigest(),
        "seed": seed,
        "version": __version__,
        "kernel_backend": backend(),
    }


def _write_json(path, doc: dict) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def cmd_solve(cfg: dict) -> int:
    lc = _require(cfg, "lattice", "config")
    R_dom = float(_require(lc, "R_dom", "config.lattice"))
    delta = float(_require(lc, "delta", "config.lattice"))
    spec = _field_spec(cfg, delta)
    opts, extras = _minimize_options(cfg)
    out = cfg.get("output", {})

    lat = build_lattice(R_dom, delta)
    init = initial_state(lat, extras["init"], extras["seed"])
    res = minimize(lat, spec, init, opts,
                   progress_every=extras["progress_every"])

    prov = _provenance(cfg, seed=extras["seed"])
    doc = {
        "command": "solve",
        "R_dom": R_dom, "delta": delta,
        "field": spec.to_json_dict(),
        "energy": res.breakdown.to_dict(),
        "iterations": res.iterations,
        "converged": res.converged,
        "provenance": prov,
    }
    if out.get("state_path"):
        save_state(out["state_path"], lat, res.state, provenance=prov)
    if out.get("json_path"):
        _write_json(out["json_path"], doc)
    print(json.dumps({"converged": res.converged,
                      "energy_total": res.breakdown.total,
                      "iterations": res.iterations}))
    return 0 if res.converged else 2


def cmd_sweep(cfg: dict) -> int:
    lc = _require(cfg, "lattice", "config")
    radii = _require(lc, "radii", "config.lattice")
    if not radii:
        raise ConfigError("config.lattice.radii is empty")
    delta = float(_require(lc, "delta", "config.lattice"))
    spec = _field_spec(cfg, delta)
    opts, extras = _minimize_options(cfg)
    cc = cfg.get("certificate", {})
    R0 = float(cc.get("R0", 1.0))
    jobs = int(cfg.get("jobs", 1))
    out = cfg.get("output", {})

    result = sweep(spec, radii, {"delta": delta}, opts, R0=R0, jobs=jobs)
    verdict = divergence_verdict(result)

    prov = _provenance(cfg, seed=extras["seed"])
    if out.get("csv_path"):
        write_sweep_csv(result, out["csv_path"], provenance=prov)
    if out.get("json_path"):
        doc = verdict.to_json_dict()
        doc["field"] = spec.to_json_dict()
        doc["provenance"] = prov
        _write_json(out["json_path"], doc)
    print(json.dumps({"verdict": verdict.verdict, "beta": verdict.beta}))
    return 0  # the verdict (even inconclusive) is data, not a failure


def cmd_certify(cfg: dict, state_path: str | None) -> int:
    out = cfg.get("output", {})
    path = state_path or out.get("state_path")
    if not path:
        raise ConfigError("no snapshot path (pass --state or set "
                          "config.output.state_path)")
    lat, state = load_state(path)
    lc = cfg.get("lattice", {})
    if "R_dom" in lc and float(lc["R_dom"]) != lat.R_dom:
        raise SnapshotError(
            f"snapshot R_dom={lat.R_dom} does not match config "
            f"R_dom={lc['R_dom']}")
    if "delta" in lc and float(lc["delta"]) != lat.spacing:
        raise SnapshotError(
            f"snapshot delta={lat.spacing} does not match config "
            f"delta={lc['delta']}")
    spec = _field_spec(cfg, lat.spacing)
    cc = cfg.get("certificate", {})
    R = float(cc.get("R", lat.R_dom))
    R0 = float(cc.get("R0", 1.0))
    report = certificate_chain(
        lat, state, spec, R=R, R0=R0,
        tol_factor=float(cc.get("tol_factor", 1e-2)),
        tol_mm=float(cc.get("tol_mm", 1e-3)))

    doc = report.to_json_dict()
    doc["provenance"] = _provenance(cfg)
    if out.get("json_path"):
        _write_json(out["json_path"], doc)
    print(json.dumps({"all_passed": report.all_passed,
                      "total": report.total, "eq7_rhs": report.eq7_rhs}))
    return 0 if report.all_passed else 3


def cmd_field_check(cfg: dict) -> int:
    spec = _field_spec(cfg, None)
    fc = cfg.get("field_check", {})
    radii = fc.get("radii") or cfg.get("lattice", {}).get("radii")
    if not radii:
        R_dom = cfg.get("lattice", {}).get("R_dom")
        if R_dom is None:
            raise ConfigError("field-check needs config.field_check.radii "
                              "or a lattice radius")
        radii = [R_dom]

    classification = classify_L2_plane(spec)  # UnsupportedFieldError -> exit 1
    print(f"classification: {classification}")
    rh = []
    for R in radii:
        rep = reverse_holder_check(spec, float(R))
        rh.append({"R": float(R), "lhs": rep.lhs, "rhs": rep.rhs,
                   "holds": rep.holds})
        print(f"reverse_holder R={R}: lhs={rep.lhs:.12g} rhs={rep.rhs:.12g} "
              f"holds={rep.holds}")
    if spec.kind in (CONSTANT, POWER_LAW):
        alpha = spec.alpha if spec.kind == POWER_LAW else 0.0
        print(f"tail: H(x) >= {spec.h}/|x|^{alpha} beyond the core")
    out = cfg.get("output", {})
    if out.get("json_path"):
        _write_json(out["json_path"], {
            "classification": classification,
            "reverse_holder": rh,
            "field": spec.to_json_dict(),
            "provenance": _provenance(cfg),
        })
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="gldisk",
        description="GL energy minimization on disks with lower-bound "
                    "certificates")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("solve", "sweep", "certify", "field-check"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON config path")
        if name == "certify":
            p.add_argument("--state", default=None, help="snapshot path "
                           "(default: config.output.state_path)")
    args = parser.parse_args(argv)

    try:
        cfg = _load_config(args.config)
        if args.command == "solve":
            return cmd_solve(cfg)
        if args.command == "sweep":
            return cmd_sweep(cfg)
        if args.command == "certify":
            return cmd_certify(cfg, args.state)
        return cmd_field_check(cfg)
    except (ConfigError, SnapshotError, UnsupportedFieldError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
