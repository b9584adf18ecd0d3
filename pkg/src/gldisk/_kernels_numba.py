"""Numba-compiled kernels; loop bodies mirror the numpy reference path."""

import numpy as np
from numba import njit


@njit(cache=True)
def curl_kernel(a, plinks, inv_dx2):
    n = plinks.shape[0]
    out = np.empty(n)
    for p in range(n):
        circ = a[plinks[p, 0]] + a[plinks[p, 1]] - a[plinks[p, 2]] - a[plinks[p, 3]]
        out[p] = circ * inv_dx2
    return out


@njit(cache=True)
def energy_terms(psi, a, src, dst, plinks, hp, dx2):
    kinetic = 0.0
    for l in range(src.shape[0]):
        d = np.exp(-1j * a[l]) * psi[dst[l]] - psi[src[l]]
        kinetic += d.real * d.real + d.imag * d.imag
    well = 0.0
    for j in range(psi.shape[0]):
        m2 = psi[j].real * psi[j].real + psi[j].imag * psi[j].imag
        t = 1.0 - m2
        well += 0.5 * t * t
    well *= dx2
    field = 0.0
    inv_dx2 = 1.0 / dx2
    for p in range(plinks.shape[0]):
        circ = a[plinks[p, 0]] + a[plinks[p, 1]] - a[plinks[p, 2]] - a[plinks[p, 3]]
        e = circ * inv_dx2 - hp[p]
        field += e * e
    field *= dx2
    return kinetic, well, field


@njit(cache=True)
def gradient_kernel(psi, a, src, dst, plinks, hp, dx2):
    n = psi.shape[0]
    gpsi = np.zeros(n, dtype=np.complex128)
    ga = np.empty(a.shape[0])
    for l in range(src.shape[0]):
        u = np.exp(-1j * a[l])
        pk = psi[dst[l]]
        d = u * pk - psi[src[l]]
        gpsi[src[l]] += -2.0 * d
        gpsi[dst[l]] += 2.0 * np.conj(u) * d
        ga[l] = 2.0 * (np.conj(d) * u * pk).imag
    for j in range(n):
        m2 = psi[j].real * psi[j].real + psi[j].imag * psi[j].imag
        gpsi[j] += -2.0 * dx2 * (1.0 - m2) * psi[j]
    inv_dx2 = 1.0 / dx2
    for p in range(plinks.shape[0]):
        circ = a[plinks[p, 0]] + a[plinks[p, 1]] - a[plinks[p, 2]] - a[plinks[p, 3]]
        r = 2.0 * (circ * inv_dx2 - hp[p])
        ga[plinks[p, 0]] += r
        ga[plinks[p, 1]] += r
        ga[plinks[p, 2]] -= r
        ga[plinks[p, 3]] -= r
    return gpsi, ga
