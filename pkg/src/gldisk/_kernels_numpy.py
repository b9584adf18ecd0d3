"""Pure-numpy reference kernels for the discrete energy and its gradient.

Same call signatures as the numba kernels; selected when numba is missing
or disabled via the GLDISK_NO_NUMBA environment variable.
"""

import numpy as np


def curl_kernel(a, plinks, inv_dx2):
    """Per-plaquette field: oriented link circulation divided by cell area."""
    circ = a[plinks[:, 0]] + a[plinks[:, 1]] - a[plinks[:, 2]] - a[plinks[:, 3]]
    return circ * inv_dx2


def energy_terms(psi, a, src, dst, plinks, hp, dx2):
    """(kinetic, well, field) contributions of the discrete energy."""
    d = np.exp(-1j * a) * psi[dst] - psi[src]
    kinetic = float(np.sum(d.real**2 + d.imag**2))
    m2 = psi.real**2 + psi.imag**2
    well = float(dx2 * 0.5 * np.sum((1.0 - m2) ** 2))
    b = curl_kernel(a, plinks, 1.0 / dx2)
    field = float(dx2 * np.sum((b - hp) ** 2))
    return kinetic, well, field


def gradient_kernel(psi, a, src, dst, plinks, hp, dx2):
    """Exact partials of the total energy w.r.t. (psi, a).

    The complex entry gpsi[j] packs d/d(Re psi_j) + i * d/d(Im psi_j).
    """
    n = psi.shape[0]
    u = np.exp(-1j * a)
    d = u * psi[dst] - psi[src]

    contrib_src = -2.0 * d
    contrib_dst = 2.0 * np.conj(u) * d
    gpsi = (
        np.bincount(src, weights=contrib_src.real, minlength=n)
        + np.bincount(dst, weights=contrib_dst.real, minlength=n)
        + 1j * (np.bincount(src, weights=contrib_src.imag, minlength=n)
                + np.bincount(dst, weights=contrib_dst.imag, minlength=n))
    )
    m2 = psi.real**2 + psi.imag**2
    gpsi += -2.0 * dx2 * (1.0 - m2) * psi

    ga = 2.0 * np.imag(np.conj(d) * u * psi[dst])
    b = curl_kernel(a, plinks, 1.0 / dx2)
    r = 2.0 * (b - hp)  # dx2 * 2*(B-H) * (+-1/dx2)
    nl = a.shape[0]
    ga += (
        np.bincount(plinks[:, 0], weights=r, minlength=nl)
        + np.bincount(plinks[:, 1], weights=r, minlength=nl)
        - np.bincount(plinks[:, 2], weights=r, minlength=nl)
        - np.bincount(plinks[:, 3], weights=r, minlength=nl)
    )
    return gpsi, ga
