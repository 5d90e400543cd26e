"""Periodic hypercubic lattices and their bond-preserving permutation groups.

A d-dimensional lattice with equal linear size L along every axis has the
dihedral group D_L acting on each axis (L translations x -> x + t and L
reflections x -> t - x, all mod L) and the symmetric group on the d axes on
top; the full symmetry group is the wreath product of D_L by the axis
permutations, of abstract order (2L)^d * d!.  For d = 1 this is just D_L.

Elements are realized as site permutations.  Distinct abstract factor tuples
can collapse onto the same permutation (for L = 2 the reflection x -> -x is
the identity), so the stored group is the deduplicated permutation image;
orbit structure only depends on that image.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .sectors import SectorBasis, SpinConfiguration


def _site_coords(site: int, dims: int, L: int) -> tuple[int, ...]:
    out = [0] * dims
    for axis in range(dims - 1, -1, -1):
        site, out[axis] = divmod(site, L)
    return tuple(out)


def _coords_site(coords: Sequence[int], L: int) -> int:
    site = 0
    for x in coords:
        site = site * L + x
    return site


@dataclass(frozen=True, eq=False)
class FiniteLattice:
    """L^d sites with periodic wrap; bonds are unordered nearest-neighbor pairs.

    Site indices encode coordinates in mixed radix with axis 0 most
    significant: site = x_0 L^(d-1) + ... + x_{d-1}.  Each unordered pair
    appears exactly once in `bonds`; for L = 2 the two wrap directions meet
    the same pair, which is deduplicated (each pair is coupled once).
    """

    dims: int
    linear_size: int
    n_sites: int
    bonds: tuple[tuple[int, int], ...]

    @property
    def n_bonds(self) -> int:
        return len(self.bonds)

    @property
    def bipartite(self) -> bool:
        # Odd L closes rings of odd length; only even L gives two sublattices.
        return self.linear_size % 2 == 0

    def coords(self, site: int) -> tuple[int, ...]:
        return _site_coords(site, self.dims, self.linear_size)

    def site_at(self, coords: Sequence[int]) -> int:
        return _coords_site(coords, self.linear_size)

    def distances(self) -> np.ndarray:
        """Wrap-around Manhattan distance between every pair of sites."""
        L = self.linear_size
        coords = np.array([self.coords(i) for i in range(self.n_sites)], dtype=np.int64)
        diff = np.abs(coords[:, None, :] - coords[None, :, :])
        diff = np.minimum(diff, L - diff)
        return diff.sum(axis=2)

    def sublattice_signs(self) -> np.ndarray:
        """Checkerboard signs (-1)^(sum of coordinates); meaningful if bipartite."""
        signs = np.empty(self.n_sites, dtype=np.int64)
        for i in range(self.n_sites):
            signs[i] = -1 if sum(self.coords(i)) % 2 else 1
        return signs

    def label(self) -> str:
        L = self.linear_size
        if self.dims == 1:
            return f"chain:{L}"
        if self.dims == 2:
            return f"square:{L}x{L}"
        if self.dims == 3:
            return f"cube:{L}x{L}x{L}"
        return f"hyper{self.dims}:" + "x".join([str(L)] * self.dims)


def build_lattice(dims: int, linear_size: int) -> FiniteLattice:
    """Periodic hypercubic lattice; for d=1 the ring 0-1-...-(L-1)-0."""
    if dims < 1:
        raise ValueError("dims must be >= 1")
    if linear_size < 2:
        raise ValueError("linear size must be >= 2")
    n = linear_size**dims
    pairs: set[tuple[int, int]] = set()
    for site in range(n):
        x = _site_coords(site, dims, linear_size)
        for axis in range(dims):
            y = list(x)
            y[axis] = (y[axis] + 1) % linear_size
            other = _coords_site(y, linear_size)
            pairs.add((site, other) if site < other else (other, site))
    return FiniteLattice(dims, linear_size, n, tuple(sorted(pairs)))


def parse_lattice_spec(spec: str) -> FiniteLattice:
    """Parse "chain:N", "square:LxL" or "cube:LxLxL" (equal sizes enforced)."""
    kind, sep, rest = spec.strip().partition(":")
    if not sep:
        raise ValueError(f"lattice spec {spec!r} must look like chain:N or square:LxL")
    kind = kind.lower()
    dims_by_kind = {"chain": 1, "square": 2, "cube": 3}
    if kind not in dims_by_kind:
        raise ValueError(f"unknown lattice kind {kind!r}")
    dims = dims_by_kind[kind]
    parts = rest.lower().split("x")
    if len(parts) != dims:
        raise ValueError(f"{kind} lattice needs {dims} size(s), got {rest!r}")
    try:
        sizes = [int(p) for p in parts]
    except ValueError as exc:
        raise ValueError(f"bad lattice sizes in {spec!r}") from exc
    if len(set(sizes)) != 1:
        raise ValueError("all linear sizes must be equal")
    return build_lattice(dims, sizes[0])


@dataclass(frozen=True)
class SpaceGroupElement:
    """A site permutation with its abstract factorization.

    The factors act on coordinates as y_i = shifts[i] +/- x_{axis_source[i]}
    (mod L), with the minus sign when flips[i] is set; axis_source is the
    inverse of the axis permutation.
    """

    perm: tuple[int, ...]
    shifts: tuple[int, ...]
    flips: tuple[int, ...]
    axis_source: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class SpaceGroup:
    """Deduplicated permutation image of the wreath-product symmetry group."""

    lattice: FiniteLattice
    elements: tuple[SpaceGroupElement, ...]
    abstract_order: int

    @property
    def order(self) -> int:
        return len(self.elements)

    def perms(self) -> list[tuple[int, ...]]:
        return [e.perm for e in self.elements]


def _wreath_perm(
    lattice: FiniteLattice,
    shifts: Sequence[int],
    flips: Sequence[int],
    axis_source: Sequence[int],
) -> tuple[int, ...]:
    L = lattice.linear_size
    d = lattice.dims
    perm = [0] * lattice.n_sites
    for site in range(lattice.n_sites):
        x = _site_coords(site, d, L)
        y = [0] * d
        for i in range(d):
            xi = x[axis_source[i]]
            y[i] = (shifts[i] - xi) % L if flips[i] else (shifts[i] + xi) % L
        perm[site] = _coords_site(y, L)
    return tuple(perm)


def _preserves_bonds(perm: Sequence[int], bonds: Iterable[tuple[int, int]], bond_set) -> bool:
    for i, j in bonds:
        a, b = perm[i], perm[j]
        if ((a, b) if a < b else (b, a)) not in bond_set:
            return False
    return True


def build_space_group(lattice: FiniteLattice) -> SpaceGroup:
    """All lattice symmetries as site permutations.

    For d=1 this realizes the dihedral group D_L (L rotations x -> x + t and
    L reflections x -> t - x); for d>1 the image of all (2L)^d * d! wreath
    elements.  Duplicate permutations are removed, and every element is
    checked to map the bond set onto itself.
    """
    d, L = lattice.dims, lattice.linear_size
    bond_set = set(lattice.bonds)
    seen: dict[tuple[int, ...], SpaceGroupElement] = {}
    for axis_source in itertools.permutations(range(d)):
        for flips in itertools.product((0, 1), repeat=d):
            for shifts in itertools.product(range(L), repeat=d):
                perm = _wreath_perm(lattice, shifts, flips, axis_source)
                if perm in seen:
                    continue
                if not _preserves_bonds(perm, lattice.bonds, bond_set):
                    raise RuntimeError(
                        f"generated permutation does not preserve bonds: "
                        f"shifts={shifts} flips={flips} axes={axis_source}"
                    )
                seen[perm] = SpaceGroupElement(perm, shifts, flips, axis_source)
    abstract_order = (2 * L) ** d * math.factorial(d)
    return SpaceGroup(lattice, tuple(seen.values()), abstract_order)


def act(element: SpaceGroupElement, config: SpinConfiguration) -> SpinConfiguration:
    """Move the configuration along the site permutation.

    The digit at site perm(i) of the result equals the digit at site i of the
    input; total magnetization is preserved.
    """
    if len(element.perm) != config.n_sites:
        raise ValueError("permutation length does not match configuration")
    out = [0] * config.n_sites
    for i, d in enumerate(config.digits):
        out[element.perm[i]] = d
    return SpinConfiguration(tuple(out), config.two_s)


def sector_index_perms(perms: Sequence[Sequence[int]], basis: SectorBasis) -> np.ndarray:
    """Index permutations induced on a sector basis by site permutations.

    Row k holds, for every sector index i, the index of the image of
    configuration i under perms[k].  Raises if any image leaves the sector
    (site permutations preserve magnetization, so this flags a broken input).
    """
    out = np.empty((len(perms), basis.dim), dtype=np.int64)
    digits = basis.digits
    for k, perm in enumerate(perms):
        p = np.asarray(perm, dtype=np.int64)
        moved = np.empty_like(digits)
        moved[:, p] = digits
        codes = moved.astype(np.int64) @ basis.weights
        idx = np.searchsorted(basis.codes, codes)
        if np.any(idx >= basis.dim) or np.any(basis.codes[idx] != codes):
            raise RuntimeError("group action left the magnetization sector")
        out[k] = idx
    return out


@dataclass(frozen=True, eq=False)
class Orbit:
    """One equivalence class of sector configurations under the group."""

    representative: SpinConfiguration
    members: np.ndarray  # ascending sector indices

    @property
    def size(self) -> int:
        return int(self.members.shape[0])


def orbit_decomposition(group: SpaceGroup, basis: SectorBasis) -> list[Orbit]:
    """Partition the sector into group orbits.

    Orbits come out ordered by their representative, which is the
    lexicographically minimal member (equivalently the smallest sector
    index).  Sizes sum to the sector dimension.
    """
    idx = sector_index_perms(group.perms(), basis)
    visited = np.zeros(basis.dim, dtype=bool)
    orbits: list[Orbit] = []
    for i in range(basis.dim):
        if visited[i]:
            continue
        members = np.unique(idx[:, i])
        visited[members] = True
        orbits.append(Orbit(basis.config(i), members))
    return orbits
