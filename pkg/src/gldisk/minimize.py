"""Nonlinear conjugate-gradient minimization of the discrete GL energy.

Polak-Ribiere+ directions with Armijo backtracking over the real unknowns
(Re psi, Im psi, a).  No |psi| <= 1 constraint is imposed; the maximum
modulus bound is checked downstream, not enforced.

The normal state psi = 0 is an exact critical point (every energy term and
gradient component vanishes algebraically), so plain descent started there
would stop on a saddle.  Whenever the gradient test passes, a deterministic
set of trial perturbations (uniform, centered Gaussians, white noise) is
probed and accepted only on strict energy decrease; minima reject all probes
and report converged, saddles are escaped and descent continues.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

import numpy as np

from . import _backend
from .energy import EnergyBreakdown, State, energy, field_on_plaquettes
from .fields import FieldSpec
from .lattice import Lattice


class NumericalFailure(RuntimeError):
    """Non-finite energy or gradient at the current iterate."""


@dataclass
class MinimizeOptions:
    grad_tol: float = 1e-6
    max_iters: int = 200_000
    ls_shrink: float = 0.5
    ls_slope: float = 1e-4
    restart_period: int | None = None  # None: number of unknowns

    def __post_init__(self):
        if not self.grad_tol > 0:
            raise ValueError("grad_tol must be > 0")
        if not 0 < self.ls_shrink < 1:
            raise ValueError("ls_shrink must be in (0, 1)")
        if not 0 < self.ls_slope < 0.5:
            raise ValueError("ls_slope must be in (0, 0.5)")
        if self.restart_period is not None and self.restart_period < 1:
            raise ValueError("restart_period must be >= 1")


@dataclass
class MinimizeResult:
    state: State
    breakdown: EnergyBreakdown
    iterations: int
    converged: bool
    history: list | None = None  # (E_before, E_after, step, slope) per accepted step


_MAX_BACKTRACKS = 60


def _probe_directions(lat: Lattice, n: int, nl: int):
    """Deterministic saddle-escape trial directions in packed coordinates."""
    r2 = lat.sites[:, 0] ** 2 + lat.sites[:, 1] ** 2
    dirs = []
    ones = np.ones(n)
    zeros_a = np.zeros(nl)
    dirs.append(np.concatenate([ones, np.zeros(n), zeros_a]))
    dirs.append(np.concatenate([np.zeros(n), ones, zeros_a]))
    for w in (1.0, 2.0, max(4.0, lat.R_dom / 4.0)):
        g = np.exp(-r2 / (2.0 * w * w))
        dirs.append(np.concatenate([g, np.zeros(n), zeros_a]))
    rng = np.random.default_rng(987654321)
    noise = rng.standard_normal(2 * n + nl)
    dirs.append(noise / np.max(np.abs(noise)))
    return dirs


def minimize(lat: Lattice, spec: FieldSpec, init: State,
             opts: MinimizeOptions | None = None, *,
             progress_every: int = 0, progress_stream=None,
             record_history: bool = False) -> MinimizeResult:
    """Minimize the energy from init; stops when the gradient infinity norm
    drops below opts.grad_tol (and no probe direction still descends).

    Accepted steps decrease the energy monotonically.  Hitting max_iters
    returns converged=False with the best state found, not an exception;
    a non-finite energy at the current iterate raises NumericalFailure.
    """
    opts = opts or MinimizeOptions()
    hp = field_on_plaquettes(lat, spec)
    n, nl = lat.n_sites, lat.n_links
    nvars = 2 * n + nl
    restart = opts.restart_period or nvars
    stream = progress_stream if progress_stream is not None else sys.stderr

    src, dst, pl, dx2 = lat.link_src, lat.link_dst, lat.plaq_links, lat.cell_area

    def unpack(x):
        return x[:n] + 1j * x[n:2 * n], x[2 * n:]

    def f(x):
        psi, a = unpack(x)
        k, w, fl = _backend.energy_terms(psi, a, src, dst, pl, hp, dx2)
        return k + w + fl

    def grad(x):
        psi, a = unpack(x)
        gpsi, ga = _backend.gradient_kernel(psi, a, src, dst, pl, hp, dx2)
        return np.concatenate([gpsi.real, gpsi.imag, ga])

    x = np.concatenate([init.psi.real.astype(float), init.psi.imag.astype(float),
                        np.asarray(init.a, dtype=float)])
    if x.shape[0] != nvars:
        raise ValueError("initial state does not match the lattice")

    E = f(x)
    if not np.isfinite(E):
        raise NumericalFailure(f"non-finite initial energy {E}")
    g = grad(x)
    gnorm = float(np.max(np.abs(g))) if nvars else 0.0
    d = -g
    t_try = 1.0 / (1.0 + gnorm)
    iterations = 0
    converged = False
    history = [] if record_history else None
    probes = None

    while True:
        if gnorm <= opts.grad_tol:
            if probes is None:
                probes = _probe_directions(lat, n, nl)
            margin = 1e-12 * (1.0 + abs(E))
            escaped = False
            for dirv in probes:
                for eps in (1e-2, 1e-4):
                    En = f(x + eps * dirv)
                    if np.isfinite(En) and En < E - margin:
                        x = x + eps * dirv
                        E = En
                        g = grad(x)
                        gnorm = float(np.max(np.abs(g)))
                        d = -g
                        t_try = 1.0 / (1.0 + gnorm)
                        iterations += 1
                        escaped = True
                        break
                if escaped:
                    break
            if not escaped:
                converged = True
                break
            if iterations >= opts.max_iters:
                break
            continue

        if iterations >= opts.max_iters:
            break

        gTd = float(np.dot(g, d))
        if gTd >= 0.0:  # not a descent direction: steepest restart
            d = -g
            gTd = -float(np.dot(g, g))

        accepted = False
        for _ in range(2):
            t = t_try
            for _ in range(_MAX_BACKTRACKS):
                xn = x + t * d
                En = f(xn)
                # strict decrease required: with a subnormal t*gTd the Armijo
                # right side rounds to E and a null step must not be accepted
                if np.isfinite(En) and En <= E + opts.ls_slope * t * gTd \
                        and En < E:
                    accepted = True
                    break
                t *= opts.ls_shrink
            if accepted:
                break
            # retry once from steepest descent with a fresh step scale
            d = -g
            gTd = -float(np.dot(g, g))
            t_try = 1.0 / (1.0 + gnorm)
        if not accepted:
            # stalled at rounding level: stop with the best point found
            break

        iterations += 1
        if history is not None:
            history.append((E, En, t, gTd))
        g_new = grad(xn)
        if not np.all(np.isfinite(g_new)):
            raise NumericalFailure("non-finite gradient encountered")
        y = g_new - g
        denom = float(np.dot(g, g))
        beta = max(0.0, float(np.dot(g_new, y)) / denom) if denom > 0 else 0.0
        if iterations % restart == 0:
            beta = 0.0
        d = beta * d - g_new
        x, E, g = xn, En, g_new
        gnorm = float(np.max(np.abs(g)))
        t_try = min(t * 2.0, 1e6)

        if progress_every and iterations % progress_every == 0:
            stream.write(f"{iterations}\t{E:.12g}\t{gnorm:.6g}\n")

    psi, a = unpack(x)
    state = State(psi=psi.copy(), a=a.copy())
    breakdown = energy(lat, state, spec, field_values=hp)
    return MinimizeResult(state=state, breakdown=breakdown,
                          iterations=iterations, converged=converged,
                          history=history)
