"""Numeric certificate for the energy lower-bound chain.

Evaluates, on a computed lattice state, every inequality of the chain that
bounds the total energy from below by a power of the certificate radius:
the magnetic kinetic-energy inequality (with an explicit cutoff), the
split of the induced-field integral, Cauchy-Schwarz steps, the closed-form
annulus integral of the field tail, and the final polynomial-in-R bound.
Every recorded step stores both sides so a report can be re-checked from
its numbers alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from .energy import State, curl_plaquette, energy
from .fields import CONSTANT, POWER_LAW, FieldSpec, UnsupportedFieldError, \
    annulus_integral, eval_H
from .lattice import Lattice

REPORT_SCHEMA = "gldisk.certificate_report/v1"


class OutOfRegimeError(ValueError):
    """Exponent outside the alpha < 1 regime of the lower-bound chain."""


# -- cutoff -----------------------------------------------------------------


@dataclass(frozen=True)
class Cutoff:
    """Radial cutoff profile: 1 on [0, 1/2], 0 on [1, inf), C1 in between.

    deriv_sup_sq is the analytic sup of |chi'|^2, the constant entering the
    gradient-term penalty of the kinetic-energy inequality.
    """

    profile: Callable[[np.ndarray], np.ndarray]
    deriv_sup_sq: float


def _cosine_profile(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    mid = np.cos(np.pi * (t - 0.5)) ** 2
    return np.where(t <= 0.5, 1.0, np.where(t >= 1.0, 0.0, mid))


def cosine_cutoff() -> Cutoff:
    """Default profile: cos^2(pi(t - 1/2)) on [1/2, 1]; sup|chi'|^2 = pi^2."""
    return Cutoff(profile=_cosine_profile, deriv_sup_sq=math.pi**2)


def chi_R(cutoff: Cutoff, point, R: float):
    """Cutoff scaled to radius R: chi(|x| / R)."""
    if not R > 0:
        raise ValueError(f"need R > 0, got {R}")
    xy = np.asarray(point, dtype=float)
    r = np.hypot(xy[..., 0], xy[..., 1])
    out = cutoff.profile(r / R)
    return float(out) if np.ndim(out) == 0 else out


# -- individual checks -------------------------------------------------------


@dataclass(frozen=True)
class ShopReport:
    lhs: float
    rhs: float
    holds: bool
    slack: float
    tol: float


def _plaq_corners(lat: Lattice) -> np.ndarray:
    # corner site indices per plaquette, via the bottom and top x-links
    bl = lat.plaq_links[:, 0]
    tl = lat.plaq_links[:, 2]
    return np.stack([lat.link_src[bl], lat.link_dst[bl],
                     lat.link_src[tl], lat.link_dst[tl]], axis=1)


def _corner_average(values: np.ndarray, corners: np.ndarray) -> np.ndarray:
    return 0.25 * (values[corners[:, 0]] + values[corners[:, 1]]
                   + values[corners[:, 2]] + values[corners[:, 3]])


def default_tol(lhs: float, tol_factor: float = 1e-2) -> float:
    return tol_factor * (1.0 + abs(lhs))


def shop_inequality(lat: Lattice, state: State, R: float, cutoff: Cutoff,
                    tol: float | None = None) -> ShopReport:
    """Discrete magnetic kinetic-energy inequality on the ball of radius R.

    lhs: covariant kinetic energy over links with midpoint inside R.
    rhs: half the induced-field integral weighted by the cutoff-squared
         order parameter, minus the cutoff-gradient penalty
         (C/R^2) * integral of |psi|^2 over the outer half-annulus.
    """
    if R > lat.R_dom:
        raise ValueError(f"certificate radius {R} exceeds domain {lat.R_dom}")
    if R < 8 * lat.spacing:
        raise ValueError(f"R={R} too small; need R >= 8 spacings")

    dx2 = lat.cell_area
    mid_r = np.hypot(lat.link_mid[:, 0], lat.link_mid[:, 1])
    d = np.exp(-1j * state.a) * state.psi[lat.link_dst] - state.psi[lat.link_src]
    lhs = float(np.sum((d.real**2 + d.imag**2)[mid_r <= R]))

    b = curl_plaquette(lat, state)
    corners = _plaq_corners(lat)
    chi_site = chi_R(cutoff, lat.sites, R)
    m2 = np.abs(state.psi) ** 2
    w_chi = _corner_average(chi_site**2 * m2, corners)
    c_r = np.hypot(lat.plaq_center[:, 0], lat.plaq_center[:, 1])
    in_ball = c_r < R
    half_field = 0.5 * dx2 * float(np.sum(b[in_ball] * w_chi[in_ball]))

    site_r = lat.site_radii()
    ann = (site_r > R / 2) & (site_r < R)
    grad_chi_term = cutoff.deriv_sup_sq / (R * R) * dx2 * float(np.sum(m2[ann]))

    rhs = half_field - grad_chi_term
    tol = default_tol(lhs) if tol is None else tol
    return ShopReport(lhs=lhs, rhs=rhs, holds=bool(lhs >= rhs - tol),
                      slack=lhs - rhs, tol=tol)


@dataclass(frozen=True)
class MaxModulusReport:
    max_abs_psi: float
    passes: bool
    tol: float


def max_modulus_check(state: State, tol: float = 1e-3) -> MaxModulusReport:
    """Numerical check of the |psi| <= 1 maximum-modulus bound."""
    m = float(np.max(np.abs(state.psi))) if state.psi.size else 0.0
    return MaxModulusReport(max_abs_psi=m, passes=bool(m <= 1.0 + tol), tol=tol)


def eq7_lower_bound(h: float, alpha: float, R: float, R0: float,
                    C0: float, C_lin: float, C_const: float) -> float:
    """Final polynomial lower bound on the energy at certificate radius R:

        2^(alpha-1) * pi * h / (2 - alpha) * R^(2-alpha)
        - C_lin * R^(1-alpha) - C_lin * R - C_const - C0
    """
    if alpha >= 1:
        raise OutOfRegimeError(f"bound requires alpha < 1, got {alpha}")
    if not (R > 2 * R0 > 0):
        raise ValueError(f"need R > 2*R0 > 0, got R={R}, R0={R0}")
    lead = 2.0 ** (alpha - 1.0) * math.pi * h / (2.0 - alpha) * R ** (2.0 - alpha)
    return lead - C_lin * R ** (1.0 - alpha) - C_lin * R - C_const - C0


# -- the full chain -----------------------------------------------------------


@dataclass(frozen=True)
class ChainStep:
    name: str
    kind: str  # "geq" or "eq"
    lhs: float
    rhs: float
    tol: float

    @property
    def holds(self) -> bool:
        if self.kind == "eq":
            return abs(self.lhs - self.rhs) <= self.tol
        return self.lhs >= self.rhs - self.tol

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs

    def to_dict(self) -> dict:
        return {"name": self.name, "kind": self.kind, "lhs": self.lhs,
                "rhs": self.rhs, "tol": self.tol, "holds": self.holds,
                "slack": self.slack}


@dataclass(frozen=True)
class CertificateReport:
    R: float
    R0: float
    h_tail: float
    alpha_tail: float
    total: float
    kinetic_lhs: float
    shop_rhs: float
    grad_chi_term: float
    C0: float
    omega_measure: float
    cs_bound: float
    annulus_term: float
    well_cs_term: float
    C_lin: float
    C_const: float
    eq7_rhs: float
    steps: tuple
    max_modulus: MaxModulusReport
    terms: dict = dc_field(default_factory=dict)

    @property
    def step_flags(self) -> dict:
        return {s.name: s.holds for s in self.steps}

    @property
    def all_passed(self) -> bool:
        return all(s.holds for s in self.steps) and self.max_modulus.passes

    def to_json_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "R": self.R, "R0": self.R0,
            "h_tail": self.h_tail, "alpha_tail": self.alpha_tail,
            "total": self.total,
            "kinetic_lhs": self.kinetic_lhs,
            "shop_rhs": self.shop_rhs,
            "grad_chi_term": self.grad_chi_term,
            "C0": self.C0,
            "omega_measure": self.omega_measure,
            "cs_bound": self.cs_bound,
            "annulus_term": self.annulus_term,
            "well_cs_term": self.well_cs_term,
            "C_lin": self.C_lin, "C_const": self.C_const,
            "eq7_rhs": self.eq7_rhs,
            "terms": self.terms,
            "steps": [s.to_dict() for s in self.steps],
            "max_modulus": {"max_abs_psi": self.max_modulus.max_abs_psi,
                            "passes": self.max_modulus.passes,
                            "tol": self.max_modulus.tol},
            "all_passed": self.all_passed,
        }


def tail_parameters(spec: FieldSpec) -> tuple[float, float]:
    """(h, alpha) such that H(x) >= h / |x|^alpha beyond the core radius."""
    if spec.kind == CONSTANT:
        return spec.h, 0.0
    if spec.kind == POWER_LAW:
        return spec.h, spec.alpha
    raise UnsupportedFieldError(
        "tail parameters need a constant or power-law profile")


def certificate_chain(lat: Lattice, state: State, spec: FieldSpec,
                      R: float, R0: float, cutoff: Cutoff | None = None,
                      tol_factor: float = 1e-2,
                      tol_mm: float = 1e-3) -> CertificateReport:
    """Evaluate the full lower-bound chain on a discrete state.

    Every inequality is recorded with both sides and a discretization
    tolerance tol_factor * (1 + |lhs|); identities use a rounding-level
    tolerance.  The final bound reuses the closed-form leading term with
    constants computed from the state, so "total >= eq7_rhs" is implied by
    the recorded steps.
    """
    cutoff = cutoff or cosine_cutoff()
    h_t, alpha_t = tail_parameters(spec)
    if alpha_t >= 1:
        raise OutOfRegimeError(f"chain requires tail alpha < 1, got {alpha_t}")
    if not (0 < 2 * R0 < R <= lat.R_dom):
        raise ValueError(f"need 0 < 2*R0 < R <= R_dom, got R0={R0}, R={R}, "
                         f"R_dom={lat.R_dom}")
    if spec.kind == POWER_LAW and spec.r_cut > R0:
        raise ValueError(
            f"power-law core radius {spec.r_cut} exceeds R0={R0}; the decay "
            f"hypothesis would fail on part of the annulus")

    dx2 = lat.cell_area
    bd = energy(lat, state, spec)
    total = bd.total

    def tol_of(lhs):
        return default_tol(lhs, tol_factor)

    def tiny(lhs):
        return 1e-9 * (1.0 + abs(lhs))

    # kinetic energy inside the certificate ball
    mid_r = np.hypot(lat.link_mid[:, 0], lat.link_mid[:, 1])
    d = np.exp(-1j * state.a) * state.psi[lat.link_dst] - state.psi[lat.link_src]
    kinetic_lhs = float(np.sum((d.real**2 + d.imag**2)[mid_r <= R]))

    # plaquette-level integrands
    b = curl_plaquette(lat, state)
    corners = _plaq_corners(lat)
    m2 = np.abs(state.psi) ** 2
    chi_site = chi_R(cutoff, lat.sites, R)
    w_chi = _corner_average(chi_site**2 * m2, corners)
    w_psi = _corner_average(m2, corners)
    c_r = np.hypot(lat.plaq_center[:, 0], lat.plaq_center[:, 1])
    hp = np.asarray(eval_H(spec, lat.plaq_center), dtype=float)

    inner = c_r <= R0
    omega = (c_r > R0) & (c_r < R)
    corner_r = lat.site_radii()[corners]
    half = (c_r > R0) & (np.max(corner_r, axis=1) <= R / 2)

    I_B0 = dx2 * float(np.sum(b[inner] * w_chi[inner]))
    C0 = 0.5 * abs(I_B0)
    I_omega = dx2 * float(np.sum(b[omega] * w_chi[omega]))
    I_H = dx2 * float(np.sum(hp[omega] * w_chi[omega]))
    I_BH = dx2 * float(np.sum((b[omega] - hp[omega]) * w_chi[omega]))
    omega_measure = dx2 * float(np.count_nonzero(omega))

    site_r = lat.site_radii()
    ann = (site_r > R / 2) & (site_r < R)
    grad_chi_term = cutoff.deriv_sup_sq / (R * R) * dx2 * float(np.sum(m2[ann]))
    shop_rhs = 0.5 * dx2 * float(np.sum(b[c_r < R] * w_chi[c_r < R])) - grad_chi_term

    # tail power profile on the annuli (centers are > R0 > 0, no singularity)
    pow_omega = h_t / c_r[omega] ** alpha_t
    I_pow = dx2 * float(np.sum(pow_omega * w_chi[omega]))
    pow_half = h_t / c_r[half] ** alpha_t
    I_pow_half = dx2 * float(np.sum(pow_half * w_psi[half]))

    # exact Cauchy-Schwarz partners on the plaquette sums
    F_omega = dx2 * float(np.sum((b[omega] - hp[omega]) ** 2))
    M4_omega = dx2 * float(np.sum(w_chi[omega] ** 2))
    cs_exact = math.sqrt(F_omega * M4_omega)
    cs_bound = math.sqrt(max(total, 0.0)) * math.sqrt(omega_measure)

    # closed forms of the field tail over the half annulus
    A_ann = annulus_integral(h_t, alpha_t, R0, R / 2)
    p2 = 2.0 - 2.0 * alpha_t
    tail_sq = h_t * h_t * 2.0 * math.pi / p2 * ((R / 2) ** p2 - R0 ** p2)
    well_cs = math.sqrt(2.0 * max(total, 0.0)) * math.sqrt(tail_sq)
    Q_disc = dx2 * float(np.sum(pow_half))
    I_def = I_pow_half - Q_disc

    mm = max_modulus_check(state, tol=tol_mm)
    mpow4 = (1.0 + mm.tol) ** 4

    steps = (
        ChainStep("kinetic_within_total", "geq", total, kinetic_lhs,
                  tiny(total)),
        ChainStep("shop_inequality", "geq", kinetic_lhs, shop_rhs,
                  tol_of(kinetic_lhs)),
        ChainStep("split_identity", "eq", I_omega, I_H + I_BH, tiny(I_omega)),
        ChainStep("cauchy_schwarz_exact", "geq", cs_exact, abs(I_BH),
                  tiny(cs_exact)),
        ChainStep("field_term_within_total", "geq", total, F_omega,
                  tiny(total)),
        ChainStep("modulus_measure_bound", "geq", omega_measure * mpow4,
                  M4_omega, tiny(omega_measure)),
        ChainStep("cauchy_schwarz_bound", "geq", cs_bound, abs(I_BH),
                  tol_of(cs_bound)),
        ChainStep("field_hypothesis", "geq", I_H, I_pow, tiny(I_H)),
        ChainStep("cutoff_restriction", "geq", I_pow, I_pow_half,
                  tiny(I_pow)),
        ChainStep("well_cauchy_schwarz", "geq", I_def, -well_cs,
                  tol_of(I_def)),
        ChainStep("annulus_closed_form", "geq", I_pow_half, A_ann - well_cs,
                  tol_of(I_pow_half)),
        ChainStep("field_tail_substitution", "geq", I_omega, I_pow - cs_bound,
                  tol_of(I_omega)),
        ChainStep("localized_lower_bound", "geq", total,
                  0.5 * I_omega - C0 - grad_chi_term, tol_of(total)),
    )

    # fold the chain into the polynomial template with state-computed
    # constants; eq7_rhs <= assembled chain bound by construction
    lead = 2.0 ** (alpha_t - 1.0) * math.pi * h_t / (2.0 - alpha_t) \
        * R ** (2.0 - alpha_t)
    half_ann = 0.5 * A_ann
    C_lin = max(0.5 * well_cs / R ** (1.0 - alpha_t), 0.5 * cs_bound / R)
    C_const = lead - half_ann + grad_chi_term
    eq7_rhs = eq7_lower_bound(h_t, alpha_t, R, R0, C0, C_lin, C_const)

    steps = steps + (
        ChainStep("final_bound", "geq", total, eq7_rhs, tol_of(total)),
    )

    terms = {
        "I_B0": I_B0, "I_omega": I_omega, "I_H": I_H, "I_BH": I_BH,
        "F_omega": F_omega, "M4_omega": M4_omega, "cs_exact": cs_exact,
        "I_pow": I_pow, "I_pow_half": I_pow_half, "Q_disc": Q_disc,
        "I_def": I_def, "tail_sq_closed": tail_sq, "lead_term": lead,
        "half_annulus_closed": half_ann,
        "breakdown": bd.to_dict(),
    }

    return CertificateReport(
        R=float(R), R0=float(R0), h_tail=h_t, alpha_tail=alpha_t,
        total=total, kinetic_lhs=kinetic_lhs, shop_rhs=shop_rhs,
        grad_chi_term=grad_chi_term, C0=C0, omega_measure=omega_measure,
        cs_bound=cs_bound, annulus_term=A_ann, well_cs_term=well_cs,
        C_lin=C_lin, C_const=C_const, eq7_rhs=eq7_rhs,
        steps=steps, max_modulus=mm, terms=terms,
    )
