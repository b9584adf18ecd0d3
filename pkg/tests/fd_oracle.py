"""Independent finite-difference oracle for the energy gradient.

Recomputes, in extended precision (clongdouble), only the energy terms that
contain a perturbed coordinate; unaffected terms cancel identically in the
central difference, so the oracle resolves differences far below float64
rounding of the full energy sum.  Adjacency is rebuilt here from the raw
lattice arrays, independent of the production gradient."""

import numpy as np

CLD = np.clongdouble
LD = np.longdouble


class LocalEnergyOracle:
    def __init__(self, lat, hp):
        self.lat = lat
        self.n = lat.n_sites
        self.nl = lat.n_links
        self.dx2 = LD(lat.cell_area)
        self.hp = hp.astype(LD)
        self.site_links = [[] for _ in range(self.n)]
        for l in range(self.nl):
            self.site_links[lat.link_src[l]].append(l)
            self.site_links[lat.link_dst[l]].append(l)
        self.link_plaqs = [[] for _ in range(self.nl)]
        for p in range(lat.plaq_links.shape[0]):
            for col in range(4):
                self.link_plaqs[lat.plaq_links[p, col]].append(p)

    def _kin(self, psi, a, l):
        d = np.exp(CLD(-1j) * a[l]) * psi[self.lat.link_dst[l]] \
            - psi[self.lat.link_src[l]]
        return d.real * d.real + d.imag * d.imag

    def _well(self, psi, j):
        m2 = psi[j].real ** 2 + psi[j].imag ** 2
        return self.dx2 * LD(0.5) * (LD(1.0) - m2) ** 2

    def _field(self, a, p):
        pl = self.lat.plaq_links[p]
        circ = a[pl[0]] + a[pl[1]] - a[pl[2]] - a[pl[3]]
        e = circ / self.dx2 - self.hp[p]
        return self.dx2 * e * e

    def _cluster(self, psi, a, i):
        # energy terms containing packed coordinate i
        total = LD(0.0)
        if i < 2 * self.n:
            j = i % self.n
            for l in self.site_links[j]:
                total += self._kin(psi, a, l)
            total += self._well(psi, j)
        else:
            l = i - 2 * self.n
            total += self._kin(psi, a, l)
            for p in self.link_plaqs[l]:
                total += self._field(a, p)
        return total

    def central_difference(self, psi64, a64, i, step):
        """d(energy)/d(coordinate i) by central differences of the local
        term cluster, in extended precision."""
        psi = psi64.astype(CLD)
        a = a64.astype(LD)
        n = self.n

        def perturbed(sign):
            pp, aa = psi.copy(), a.copy()
            if i < n:
                pp[i] += sign * step
            elif i < 2 * n:
                pp[i - n] += CLD(1j) * sign * step
            else:
                aa[i - 2 * n] += sign * step
            return self._cluster(pp, aa, i)

        return float((perturbed(LD(1.0)) - perturbed(LD(-1.0))) / (2 * LD(step)))
