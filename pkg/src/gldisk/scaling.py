"""Radius sweeps of the minimal energy and the divergence/saturation verdict.

For each domain radius the energy is minimized from a fixed set of starts
(uniform, normal, and two seeded random states) and the best result is kept;
slowly decaying applied fields make the best energy grow like a power of the
radius, square-integrable ones make it level off.  The fitted log-log slope
plus the last relative increment decide the verdict.  Finite-domain minima
only probe the infinite-plane dichotomy, so the verdict is a scaling trend,
not a proof; reports label it as such.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .certificate import CertificateReport, certificate_chain
from .energy import EnergyBreakdown, State, initial_state
from .fields import CONSTANT, POWER_LAW, FieldSpec
from .lattice import build_lattice
from .minimize import MinimizeOptions, minimize

CSV_HEADER = "R,delta,energy_total,energy_kinetic,energy_well,energy_field,converged,eq7_rhs"

INIT_SET = (("uniform", 0), ("normal", 0), ("random", 1), ("random", 2))

VERDICT_NOTE = ("finite-domain scaling trend of best-found minima; "
                "not a statement about exact infinite-plane solutions")


@dataclass
class SweepEntry:
    R_dom: float
    delta: float
    best_energy: EnergyBreakdown
    best_init: str
    converged: bool
    iterations: int
    state: State
    certificate: CertificateReport | None


@dataclass
class SweepResult:
    spec: FieldSpec
    entries: list

    def radii(self) -> list:
        return [e.R_dom for e in self.entries]


def resolve_delta(delta_policy) -> float:
    """Spacing from a policy dict: fixed {"delta": x} or
    {"sites_per_unit_length": n} meaning delta = 1/n."""
    if "delta" in delta_policy:
        return float(delta_policy["delta"])
    if "sites_per_unit_length" in delta_policy:
        n = float(delta_policy["sites_per_unit_length"])
        if not n > 0:
            raise ValueError("sites_per_unit_length must be > 0")
        return 1.0 / n
    raise ValueError("delta_policy needs 'delta' or 'sites_per_unit_length'")


def _chain_applicable(spec: FieldSpec, R: float, R0: float) -> bool:
    if spec.kind == CONSTANT:
        return R > 2 * R0
    if spec.kind == POWER_LAW:
        return spec.alpha < 1 and spec.r_cut <= R0 and R > 2 * R0
    return False


def _sweep_one(spec: FieldSpec, R: float, delta: float,
               opts: MinimizeOptions, R0: float) -> SweepEntry:
    lat = build_lattice(R, delta)
    best = None
    best_init = ""
    for kind, seed in INIT_SET:
        res = minimize(lat, spec, initial_state(lat, kind, seed), opts)
        if best is None or res.breakdown.total < best.breakdown.total:
            best = res
            best_init = kind if kind != "random" else f"random{seed}"
    cert = None
    if _chain_applicable(spec, R, R0):
        cert = certificate_chain(lat, best.state, spec, R=R, R0=R0)
    return SweepEntry(
        R_dom=R, delta=delta, best_energy=best.breakdown, best_init=best_init,
        converged=best.converged, iterations=best.iterations,
        state=best.state, certificate=cert)


def sweep(spec: FieldSpec, radii, delta_policy, opts: MinimizeOptions | None = None,
          *, R0: float = 1.0, jobs: int = 1) -> SweepResult:
    """Minimize at each radius (best of the fixed init set) and attach the
    lower-bound certificate where the field is in its regime.

    Non-converged entries are flagged, not fatal.  Entries are ordered by
    radius regardless of worker scheduling.
    """
    radii = [float(r) for r in radii]
    if not radii:
        raise ValueError("radii list is empty")
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly increasing")
    delta = resolve_delta(delta_policy)
    opts = opts or MinimizeOptions()

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(_sweep_one, [spec] * len(radii), radii,
                                    [delta] * len(radii), [opts] * len(radii),
                                    [R0] * len(radii)))
    else:
        entries = [_sweep_one(spec, R, delta, opts, R0) for R in radii]
    return SweepResult(spec=spec, entries=entries)


# -- power-law fit ------------------------------------------------------------


@dataclass(frozen=True)
class PowerLawFit:
    c: float
    beta: float
    r_squared: float


def fit_power_law(pairs) -> PowerLawFit:
    """Least-squares fit of log E = log c + beta log R.

    Needs >= 3 pairs with distinct positive R and positive E (offset any
    floor before calling if E can touch zero).
    """
    pts = [(float(r), float(e)) for r, e in pairs]
    if len(pts) < 3:
        raise ValueError(f"need at least 3 pairs, got {len(pts)}")
    rs = np.array([p[0] for p in pts])
    es = np.array([p[1] for p in pts])
    if np.any(es <= 0):
        raise ValueError("all energies must be > 0 for a log-log fit")
    if np.any(rs <= 0) or len(set(rs.tolist())) != len(pts):
        raise ValueError("radii must be positive and distinct")
    x = np.log(rs)
    y = np.log(es)
    beta, logc = np.polyfit(x, y, 1)
    yhat = logc + beta * x
    ss_res = float(np.sum((y - yhat) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    if ss_tot <= 1e-30:
        r2 = 1.0 if ss_res <= 1e-30 else 0.0
    else:
        r2 = 1.0 - ss_res / ss_tot
    return PowerLawFit(c=float(math.exp(logc)), beta=float(beta), r_squared=r2)


# -- verdict ------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    verdict: str  # "diverging" | "saturating" | "inconclusive"
    beta: float
    details: dict

    def to_json_dict(self) -> dict:
        return {"verdict": self.verdict, "beta": self.beta,
                "details": self.details, "note": VERDICT_NOTE}


def _tail_alpha(spec: FieldSpec) -> float:
    if spec.kind == POWER_LAW:
        return spec.alpha
    return 0.0  # constants and tables: no assumed decay


def divergence_verdict(result: SweepResult, *, beta_factor: float = 0.5,
                       increment_ratio: float = 0.1) -> Verdict:
    """Classify the sweep as diverging / saturating / inconclusive.

    diverging : fitted beta >= beta_factor * (2 - alpha) and the last energy
                increment is at least increment_ratio of the previous energy
    saturating: last increment at most increment_ratio of the previous
                energy and beta <= 0.5
    Anything else (including < 3 converged entries) is inconclusive.
    """
    conv = [e for e in result.entries if e.converged]
    details: dict = {
        "n_entries": len(result.entries),
        "n_converged": len(conv),
        "beta_factor": beta_factor,
        "increment_ratio": increment_ratio,
    }
    if len(conv) < 3:
        details["reason"] = "fewer than 3 converged entries"
        return Verdict("inconclusive", float("nan"), details)

    rs = [e.R_dom for e in conv]
    es = [e.best_energy.total for e in conv]
    details["radii"] = rs
    details["energies"] = es

    floor = 1e-9 * (1.0 + max(abs(e) for e in es))
    if max(es) <= floor:
        details["reason"] = "energies at the zero floor"
        return Verdict("saturating", 0.0, details)

    alpha = _tail_alpha(result.spec)
    details["alpha_spec"] = alpha
    fit = fit_power_law(list(zip(rs, es)))
    details["c"] = fit.c
    details["r_squared"] = fit.r_squared
    last_inc = abs(es[-1] - es[-2])
    prev = abs(es[-2])
    details["last_increment"] = last_inc
    details["last_increment_ratio"] = last_inc / prev if prev > 0 else float("inf")

    growing = fit.beta >= beta_factor * (2.0 - alpha)
    big_inc = prev > 0 and last_inc >= increment_ratio * prev
    small_inc = prev == 0 or last_inc <= increment_ratio * prev
    if growing and big_inc:
        return Verdict("diverging", fit.beta, details)
    if small_inc and fit.beta <= 0.5:
        return Verdict("saturating", fit.beta, details)
    return Verdict("inconclusive", fit.beta, details)


# -- CSV output ---------------------------------------------------------------


def write_sweep_csv(result: SweepResult, path, provenance: dict | None = None) -> None:
    """Fixed-header CSV, one row per entry; reproducibility stanza appended
    as '#' comment lines so the header row stays exact."""
    lines = [CSV_HEADER]
    for e in result.entries:
        b = e.best_energy
        eq7 = e.certificate.eq7_rhs if e.certificate is not None else float("nan")
        lines.append(
            f"{e.R_dom:.17g},{e.delta:.17g},{b.total:.17g},{b.kinetic:.17g},"
            f"{b.well:.17g},{b.field:.17g},{str(e.converged).lower()},{eq7:.17g}")
    if provenance:
        for k in sorted(provenance):
            lines.append(f"# {k}={provenance[k]}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
