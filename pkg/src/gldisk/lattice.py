"""Uniform square lattice masked to a disk.

Sites are cell centers (i*delta, j*delta) with |center| <= R_dom; links join
member sites in the +x and +y directions; plaquettes are unit cells whose
four links all exist.  Ordering is row-major in the integer coordinates
(j outer, i inner), so construction is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class TooCoarseError(ValueError):
    """Domain radius below the minimum of 4 lattice spacings."""


@dataclass(frozen=True)
class Lattice:
    """Disk-masked square lattice with site/link/plaquette indexing.

    sites      : (N, 2) float centers; site_ij the matching integer coords
    link_src/dst : (L,) int32 endpoint site indices (directed +x / +y)
    link_mid   : (L, 2) float link midpoints
    link_axis  : (L,) int8, 0 for +x links, 1 for +y links
    plaq_links : (P, 4) int32 link indices [bottom, right, top, left]; the
                 oriented circulation is a[b] + a[r] - a[t] - a[l]
    plaq_center: (P, 2) float cell centers
    site_index : 2D int32 grid (j, i) -> site index, -1 outside the disk
    """

    spacing: float
    R_dom: float
    sites: np.ndarray
    site_ij: np.ndarray
    link_src: np.ndarray
    link_dst: np.ndarray
    link_mid: np.ndarray
    link_axis: np.ndarray
    plaq_links: np.ndarray
    plaq_center: np.ndarray
    site_index: np.ndarray
    nmax: int

    @property
    def n_sites(self) -> int:
        return self.sites.shape[0]

    @property
    def n_links(self) -> int:
        return self.link_src.shape[0]

    @property
    def n_plaquettes(self) -> int:
        return self.plaq_links.shape[0]

    @property
    def cell_area(self) -> float:
        return self.spacing * self.spacing

    def site_radii(self) -> np.ndarray:
        return np.hypot(self.sites[:, 0], self.sites[:, 1])


def build_lattice(R_dom: float, delta: float) -> Lattice:
    """Build the disk lattice; requires R_dom >= 4*delta > 0."""
    if not delta > 0:
        raise ValueError(f"spacing must be > 0, got {delta}")
    if R_dom < 4 * delta:
        raise TooCoarseError(
            f"R_dom={R_dom} too coarse for delta={delta} (need R_dom >= 4*delta)")

    nmax = int(np.floor(R_dom / delta))
    coords = np.arange(-nmax, nmax + 1, dtype=np.int32)
    ii, jj = np.meshgrid(coords, coords, indexing="xy")  # rows = fixed j
    mask = (ii * delta) ** 2 + (jj * delta) ** 2 <= R_dom * R_dom

    site_index = np.full(mask.shape, -1, dtype=np.int32)
    site_index[mask] = np.arange(np.count_nonzero(mask), dtype=np.int32)
    site_ij = np.stack([ii[mask], jj[mask]], axis=1).astype(np.int32)
    sites = site_ij.astype(float) * delta

    # +x links: both (i, j) and (i+1, j) inside
    lx_from = site_index[:, :-1]
    lx_to = site_index[:, 1:]
    lx_ok = (lx_from >= 0) & (lx_to >= 0)
    # +y links: both (i, j) and (i, j+1) inside
    ly_from = site_index[:-1, :]
    ly_to = site_index[1:, :]
    ly_ok = (ly_from >= 0) & (ly_to >= 0)

    link_src = np.concatenate([lx_from[lx_ok], ly_from[ly_ok]]).astype(np.int32)
    link_dst = np.concatenate([lx_to[lx_ok], ly_to[ly_ok]]).astype(np.int32)
    n_x = int(np.count_nonzero(lx_ok))
    link_axis = np.zeros(link_src.shape[0], dtype=np.int8)
    link_axis[n_x:] = 1
    mid = 0.5 * (sites[link_src] + sites[link_dst])
    link_mid = np.ascontiguousarray(mid)

    # link-index grids for plaquette assembly
    lx_index = np.full(lx_ok.shape, -1, dtype=np.int32)
    lx_index[lx_ok] = np.arange(n_x, dtype=np.int32)
    ly_index = np.full(ly_ok.shape, -1, dtype=np.int32)
    ly_index[ly_ok] = n_x + np.arange(link_src.shape[0] - n_x, dtype=np.int32)

    # plaquette at cell (i, j): bottom x-link (i, j), right y-link (i+1, j),
    # top x-link (i, j+1), left y-link (i, j)
    bottom = lx_index[:-1, :]
    top = lx_index[1:, :]
    left = ly_index[:, :-1]
    right = ly_index[:, 1:]
    p_ok = (bottom >= 0) & (top >= 0) & (left >= 0) & (right >= 0)
    plaq_links = np.stack(
        [bottom[p_ok], right[p_ok], top[p_ok], left[p_ok]], axis=1).astype(np.int32)

    pj, pi = np.nonzero(p_ok)
    plaq_center = np.stack(
        [(pi - nmax + 0.5) * delta, (pj - nmax + 0.5) * delta], axis=1)

    return Lattice(
        spacing=float(delta),
        R_dom=float(R_dom),
        sites=sites,
        site_ij=site_ij,
        link_src=link_src,
        link_dst=link_dst,
        link_mid=link_mid,
        link_axis=link_axis,
        plaq_links=plaq_links,
        plaq_center=plaq_center,
        site_index=site_index,
        nmax=nmax,
    )


def integrate(lat: Lattice, values) -> float:
    """Midpoint-rule integral: cell_area * sum of per-site values."""
    v = np.asarray(values, dtype=float)
    if v.shape != (lat.n_sites,):
        raise ValueError(
            f"values shape {v.shape} does not match site count {lat.n_sites}")
    return float(lat.cell_area * np.sum(v))
