"""Shared fixtures; the expensive minimization/sweep fixtures are session
scoped so the acceptance criteria reuse one set of converged states."""

import numpy as np
import pytest

from gldisk.energy import State, initial_state
from gldisk.fields import constant_field, power_law_field
from gldisk.lattice import build_lattice
from gldisk.minimize import MinimizeOptions, minimize
from gldisk.scaling import sweep

H_ACC = 0.5  # applied-field amplitude used by the acceptance runs


@pytest.fixture(scope="session")
def lat32():
    # 32^2-scale disk: R_dom / delta = 32
    return build_lattice(8.0, 0.25)


@pytest.fixture(scope="session")
def lat16():
    # 16^2-scale disk: R_dom / delta = 16
    return build_lattice(4.0, 0.25)


@pytest.fixture(scope="session")
def converged_h05_r8(lat32):
    res = minimize(lat32, constant_field(H_ACC), initial_state(lat32, "uniform"))
    assert res.converged
    return res


SWEEP_RADII = [8.0, 12.0, 16.0, 24.0]
SWEEP_OPTS = MinimizeOptions(max_iters=6000)


@pytest.fixture(scope="session")
def acceptance_timings():
    return {}


@pytest.fixture(scope="session")
def sweep_constant(acceptance_timings):
    import time
    t0 = time.time()
    res = sweep(constant_field(H_ACC), SWEEP_RADII, {"delta": 0.25},
                SWEEP_OPTS, R0=1.0)
    acceptance_timings["sweep_constant"] = time.time() - t0
    return res


@pytest.fixture(scope="session")
def sweep_powerlaw(acceptance_timings):
    import time
    t0 = time.time()
    res = sweep(power_law_field(H_ACC, 1.5, 0.125), SWEEP_RADII,
                {"delta": 0.25}, SWEEP_OPTS, R0=1.0)
    acceptance_timings["sweep_powerlaw"] = time.time() - t0
    return res


def smooth_random_state(lat, seed, psi_amp=0.9, a_amp=0.05) -> State:
    """Band-limited random configuration: a few low Fourier modes for psi and
    a smooth vector potential sampled on link midpoints."""
    rng = np.random.default_rng(seed)
    x, y = lat.sites[:, 0], lat.sites[:, 1]
    psi = np.zeros(lat.n_sites, dtype=complex)
    L = 2.0 * lat.R_dom
    for _ in range(4):
        kx, ky = rng.integers(-2, 3, size=2)
        amp = rng.uniform(0.1, 1.0) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        psi += amp * np.exp(2j * np.pi * (kx * x + ky * y) / L)
    psi *= psi_amp / max(1.0, np.max(np.abs(psi)))

    mx, my = lat.link_mid[:, 0], lat.link_mid[:, 1]
    ax = np.zeros(lat.n_links)
    ay = np.zeros(lat.n_links)
    for _ in range(3):
        kx, ky = rng.integers(-2, 3, size=2)
        c1, c2 = rng.uniform(-1, 1, size=2)
        ph = rng.uniform(0, 2 * np.pi)
        ax += c1 * np.cos(2 * np.pi * (kx * mx + ky * my) / L + ph)
        ay += c2 * np.cos(2 * np.pi * (kx * mx + ky * my) / L + ph)
    along = np.where(lat.link_axis == 0, ax, ay)
    return State(psi=psi, a=a_amp * lat.spacing * along)


def lll_state(lat, b, r_flat=3.5, r_zero=5.0) -> State:
    """Lowest-Landau-level profile exp(-b r^2 / 4) times a C1 radial bump
    vanishing beyond r_zero, with exact symmetric-gauge line integrals.

    Saturates the continuum diamagnetic inequality up to the bump cost, so
    discretization error of inequality slacks is measurable against it.
    """
    r = lat.site_radii()
    s = np.where(r <= r_flat, 1.0,
                 np.where(r >= r_zero, 0.0,
                          np.cos(np.pi * (r - r_flat) / (2 * (r_zero - r_flat))) ** 2))
    psi = np.exp(-b * r * r / 4.0) * s + 0j
    src = lat.link_src
    is_x = lat.link_axis == 0
    a = np.empty(lat.n_links)
    # exact line integrals of A = (-b y / 2, b x / 2) along axis links
    a[is_x] = -0.5 * b * lat.sites[src[is_x], 1] * lat.spacing
    a[~is_x] = 0.5 * b * lat.sites[src[~is_x], 0] * lat.spacing
    return State(psi=psi, a=a)
