"""Applied magnetic field profiles and their exact integral properties.

A field profile is radial: constant, a regularized power law h/|x|^alpha,
or a tabulated radius->value curve with linear interpolation.  Closed-form
disk/annulus integrals of these profiles are the reference values that the
lattice quadrature and the certificate chain are checked against.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

CONSTANT = "constant"
POWER_LAW = "power_law"
TABULATED = "tabulated"

IN_L2 = "in_L2"
NOT_IN_L2 = "not_in_L2"


class FieldRangeError(ValueError):
    """Query outside the radial range covered by a tabulated profile."""


class UnsupportedFieldError(ValueError):
    """Operation not defined for this field kind (or exponent)."""


@dataclass(frozen=True)
class FieldSpec:
    """Radial applied-field profile H.

    kind   : "constant" | "power_law" | "tabulated"
    h      : amplitude (constant value, or power-law prefactor)
    alpha  : power-law decay exponent (any real; h/|x|^alpha)
    r_cut  : power-law regularization radius; |x| is clamped below at r_cut
             so the profile stays bounded near the origin
    table  : (n, 2) array of (radius, value) samples, radii strictly
             increasing; evaluated by linear interpolation
    """

    kind: str
    h: float = 0.0
    alpha: float = 0.0
    r_cut: float = 0.0
    table: np.ndarray | None = field(default=None)

    def __post_init__(self):
        if self.kind not in (CONSTANT, POWER_LAW, TABULATED):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.kind in (CONSTANT, POWER_LAW) and not self.h > 0:
            raise ValueError(f"field amplitude h must be > 0, got {self.h}")
        if self.kind == POWER_LAW and not self.r_cut > 0:
            raise ValueError(f"power-law r_cut must be > 0, got {self.r_cut}")
        if self.kind == TABULATED:
            if self.table is None:
                raise ValueError("tabulated field needs a table")
            tab = np.asarray(self.table, dtype=float)
            if tab.ndim != 2 or tab.shape[1] != 2 or tab.shape[0] < 2:
                raise ValueError("table must have shape (n>=2, 2)")
            if not np.all(np.isfinite(tab)):
                raise ValueError("table entries must be finite")
            if not np.all(np.diff(tab[:, 0]) > 0):
                raise ValueError("table radii must be strictly increasing")
            object.__setattr__(self, "table", tab)

    # -- JSON wire format -------------------------------------------------

    def to_json_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == CONSTANT:
            out["h"] = self.h
        elif self.kind == POWER_LAW:
            out.update(h=self.h, alpha=self.alpha, r_cut=self.r_cut)
        else:
            out["table"] = [[float(r), float(v)] for r, v in self.table]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @staticmethod
    def from_json_dict(d: dict) -> "FieldSpec":
        kind = d.get("kind")
        if kind == CONSTANT:
            return FieldSpec(CONSTANT, h=float(d["h"]))
        if kind == POWER_LAW:
            return FieldSpec(POWER_LAW, h=float(d["h"]), alpha=float(d["alpha"]),
                             r_cut=float(d["r_cut"]))
        if kind == TABULATED:
            return FieldSpec(TABULATED, table=np.asarray(d["table"], dtype=float))
        raise ValueError(f"unknown field kind {kind!r}")

    @staticmethod
    def from_json(s: str) -> "FieldSpec":
        return FieldSpec.from_json_dict(json.loads(s))


def constant_field(h: float) -> FieldSpec:
    return FieldSpec(CONSTANT, h=h)


def power_law_field(h: float, alpha: float, r_cut: float) -> FieldSpec:
    return FieldSpec(POWER_LAW, h=h, alpha=alpha, r_cut=r_cut)


def tabulated_field(table) -> FieldSpec:
    return FieldSpec(TABULATED, table=np.asarray(table, dtype=float))


def zero_field(r_max: float = 1e6) -> FieldSpec:
    """H identically zero, as a two-point table covering radii up to r_max."""
    return tabulated_field([[0.0, 0.0], [r_max, 0.0]])


# -- evaluation ------------------------------------------------------------


def eval_H(spec: FieldSpec, point) -> float | np.ndarray:
    """Field value at one 2D point or an (n, 2) array of points."""
    xy = np.asarray(point, dtype=float)
    scalar = xy.ndim == 1
    r = np.hypot(xy[..., 0], xy[..., 1])
    return _eval_radial(spec, np.atleast_1d(r))[0] if scalar else _eval_radial(spec, r)


def eval_H_radial(spec: FieldSpec, r) -> np.ndarray:
    """Field value at radii r (profiles are radial)."""
    return _eval_radial(spec, np.asarray(r, dtype=float))


def _eval_radial(spec: FieldSpec, r: np.ndarray) -> np.ndarray:
    if spec.kind == CONSTANT:
        return np.full_like(r, spec.h)
    if spec.kind == POWER_LAW:
        return spec.h / np.maximum(r, spec.r_cut) ** spec.alpha
    tab = spec.table
    if np.any(r < tab[0, 0]) or np.any(r > tab[-1, 0]):
        raise FieldRangeError(
            f"radius outside table range [{tab[0, 0]}, {tab[-1, 0]}]")
    return np.interp(r, tab[:, 0], tab[:, 1])


# -- closed-form integrals --------------------------------------------------


def annulus_integral(h: float, alpha: float, R0: float, R: float) -> float:
    """Exact integral of h/|x|^alpha over the annulus R0 < |x| < R.

    Equals 2*pi*h/(2-alpha) * (R^(2-alpha) - R0^(2-alpha)); alpha = 2 is
    outside the supported range (the closed form degenerates there).
    """
    if not 0 < R0 < R:
        raise ValueError(f"need 0 < R0 < R, got R0={R0}, R={R}")
    if alpha == 2:
        raise UnsupportedFieldError("alpha = 2 not supported by the closed form")
    p = 2.0 - alpha
    return 2.0 * math.pi * h / p * (R**p - R0**p)


def _power_sq_integral(h: float, alpha: float, r0: float, r1: float) -> float:
    # integral of (h/r^alpha)^2 over the annulus r0 < |x| < r1
    if r1 <= r0:
        return 0.0
    if alpha == 1.0:
        return 2.0 * math.pi * h * h * math.log(r1 / r0)
    p = 2.0 - 2.0 * alpha
    return 2.0 * math.pi * h * h / p * (r1**p - r0**p)


def _table_moments(spec: FieldSpec, R: float) -> tuple[float, float]:
    # (integral of H, integral of H^2) over the disk B(0, R), exact for the
    # piecewise-linear profile: per segment H(r) = A + B r, so r*H and r*H^2
    # are polynomials integrated in closed form
    tab = spec.table
    if tab[0, 0] > 0 or tab[-1, 0] < R:
        raise FieldRangeError(
            f"table must cover [0, {R}], covers [{tab[0, 0]}, {tab[-1, 0]}]")
    m1 = 0.0
    m2 = 0.0
    for i in range(tab.shape[0] - 1):
        r0, v0 = tab[i]
        r1, v1 = tab[i + 1]
        lo, hi = r0, min(r1, R)
        if hi <= lo:
            break
        B = (v1 - v0) / (r1 - r0)
        A = v0 - B * r0
        # int r (A + B r) dr and int r (A + B r)^2 dr
        def F1(r):
            return A * r**2 / 2 + B * r**3 / 3
        def F2(r):
            return A * A * r**2 / 2 + 2 * A * B * r**3 / 3 + B * B * r**4 / 4
        m1 += F1(hi) - F1(lo)
        m2 += F2(hi) - F2(lo)
    return 2.0 * math.pi * m1, 2.0 * math.pi * m2


def l1_mass_on_disk(spec: FieldSpec, R: float) -> float:
    """Integral of H over the disk B(0, R), closed form."""
    if not R > 0:
        raise ValueError(f"need R > 0, got {R}")
    if spec.kind == CONSTANT:
        return math.pi * R * R * spec.h
    if spec.kind == POWER_LAW:
        rc = min(spec.r_cut, R)
        core = math.pi * rc * rc * (spec.h / spec.r_cut**spec.alpha)
        tail = annulus_integral(spec.h, spec.alpha, rc, R) if R > rc else 0.0
        return core + tail
    return _table_moments(spec, R)[0]


def l2_mass_on_disk(spec: FieldSpec, R: float) -> float:
    """Integral of H^2 over the disk B(0, R), closed form."""
    if not R > 0:
        raise ValueError(f"need R > 0, got {R}")
    if spec.kind == CONSTANT:
        return math.pi * R * R * spec.h * spec.h
    if spec.kind == POWER_LAW:
        rc = min(spec.r_cut, R)
        core = math.pi * rc * rc * (spec.h / spec.r_cut**spec.alpha) ** 2
        return core + _power_sq_integral(spec.h, spec.alpha, rc, R)
    return _table_moments(spec, R)[1]


def classify_L2_plane(spec: FieldSpec) -> str:
    """Whether H is square-integrable over the whole plane.

    A regularized power law h/|x|^alpha lies in L2(R^2) exactly when
    alpha > 1; constants never do.  Finite tables cannot decide tail
    behavior, so tabulated profiles are rejected.
    """
    if spec.kind == CONSTANT:
        return NOT_IN_L2
    if spec.kind == POWER_LAW:
        return IN_L2 if spec.alpha > 1 else NOT_IN_L2
    raise UnsupportedFieldError("cannot classify a finite tabulated profile")


@dataclass(frozen=True)
class ReverseHolderReport:
    lhs: float
    rhs: float
    holds: bool


def reverse_holder_check(spec: FieldSpec, R: float) -> ReverseHolderReport:
    """Check int_B H >= |B|^(1/2) * (int_B H^2)^(1/2) on the disk B(0, R).

    Constants give equality (Cauchy-Schwarz is tight for constants); decaying
    power laws fail it.
    """
    if not R > 0:
        raise ValueError(f"need R > 0, got {R}")
    lhs = l1_mass_on_disk(spec, R)
    rhs = math.sqrt(math.pi * R * R) * math.sqrt(l2_mass_on_disk(spec, R))
    # rounding-level slack so the constant-profile equality case cannot flip
    holds = bool(lhs >= rhs * (1.0 - 1e-12))
    return ReverseHolderReport(lhs=lhs, rhs=rhs, holds=holds)
