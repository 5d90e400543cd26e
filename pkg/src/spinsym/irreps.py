"""Character tables of the chain symmetry groups and symmetry-adapted bases.

Three groups label the eigenstates of a periodic chain of N sites: the
cyclic translation group C_N (irreps Theta_k, complex characters
exp(2 pi i k n / N)), the two-element reflection group C_s generated by the
site-through reflection x -> -x (irreps Xi_0, Xi_1), and the full dihedral
group D_N.

Convention fixed here: the C_s generator and the "even" reflection class of
D_N are the site-through reflections x -> t - x with t even.  B_1 is the
one-dimensional irrep of D_N (even N) with character -1 on the elementary
rotation and +1 on site-through reflections; B_2 has the reflection signs
swapped.

Only the trivial irrep's basis is built explicitly (one unit vector per
orbit, equal amplitudes); the other irreps are used for labeling eigenspaces
through projector traces.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .sectors import SectorBasis
from .spacegroup import Orbit


@dataclass(frozen=True)
class IrrepLabel:
    family: str  # "Theta" (cyclic), "Xi" (reflection), "Gamma" (dihedral)
    name: str
    dim: int

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, eq=False)
class CharacterTable:
    """Irreducible characters of a concrete permutation group on chain sites.

    `element_perms` lists the group elements as site permutations; `classes`
    partitions their indices into conjugacy classes; `characters[a, c]` is
    the (possibly complex) character of irrep a on class c.
    """

    name: str
    element_perms: tuple[tuple[int, ...], ...]
    classes: tuple[tuple[int, ...], ...]
    irreps: tuple[IrrepLabel, ...]
    characters: np.ndarray

    @property
    def order(self) -> int:
        return len(self.element_perms)

    def class_of_element(self) -> np.ndarray:
        out = np.empty(self.order, dtype=np.int64)
        for c, members in enumerate(self.classes):
            for e in members:
                out[e] = c
        return out


def _rotation_perm(n: int, t: int) -> tuple[int, ...]:
    return tuple((x + t) % n for x in range(n))


def _reflection_perm(n: int, t: int) -> tuple[int, ...]:
    return tuple((t - x) % n for x in range(n))


def cyclic_characters(n: int) -> CharacterTable:
    """Character table of the translation group C_n.

    Irreps Theta_k with k running from -floor((n-1)/2) to floor(n/2); the
    character of the translation by t is exp(2 pi i k t / n).  Element order
    matches the rotation part of the chain space group (t = 0, ..., n-1).
    """
    if n < 2:
        raise ValueError("cyclic group needs n >= 2")
    perms = tuple(_rotation_perm(n, t) for t in range(n))
    classes = tuple((t,) for t in range(n))
    ks = range(-((n - 1) // 2), n // 2 + 1)
    irreps = tuple(IrrepLabel("Theta", f"Theta_{k}", 1) for k in ks)
    chars = np.array(
        [[cmath.exp(2j * cmath.pi * k * t / n) for t in range(n)] for k in ks],
        dtype=complex,
    )
    return CharacterTable(f"C{n}", perms, classes, irreps, chars)


def reflection_characters(n: int) -> CharacterTable:
    """Character table of C_s = {identity, site-through reflection x -> -x}."""
    if n < 2:
        raise ValueError("reflection group needs n >= 2 chain sites")
    perms = (_rotation_perm(n, 0), _reflection_perm(n, 0))
    classes = ((0,), (1,))
    irreps = (IrrepLabel("Xi", "Xi_0", 1), IrrepLabel("Xi", "Xi_1", 1))
    chars = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex)
    return CharacterTable("Cs", perms, classes, irreps, chars)


def dihedral_characters(n: int) -> CharacterTable:
    """Real character table of the dihedral group D_n on chain sites.

    Elements are indexed rotations first (t = 0..n-1), then reflections
    x -> t - x (t = 0..n-1).  For even n the reflections split into the
    site-through class (t even) and the bond-midpoint class (t odd), and the
    four one-dimensional irreps A1, A2, B1, B2 exist; B1 carries character -1
    on the elementary rotation and +1 on site-through reflections.
    """
    if n < 3:
        raise ValueError("dihedral table needs n >= 3")
    perms = tuple(_rotation_perm(n, t) for t in range(n)) + tuple(
        _reflection_perm(n, t) for t in range(n)
    )

    classes: list[tuple[int, ...]] = [(0,)]
    rot_reps: list[int] = [0]  # exponent representative per rotation class
    for k in range(1, n // 2 + 1):
        if k != n - k:
            classes.append((k, n - k))
        else:
            classes.append((k,))
        rot_reps.append(k)
    n_rot_classes = len(classes)
    if n % 2 == 0:
        classes.append(tuple(n + t for t in range(0, n, 2)))  # site-through
        classes.append(tuple(n + t for t in range(1, n, 2)))  # bond-midpoint
    else:
        classes.append(tuple(n + t for t in range(n)))
    n_classes = len(classes)

    irreps: list[IrrepLabel] = []
    rows: list[list[complex]] = []

    def refl_chars(site: complex, bond: complex) -> list[complex]:
        return [site, bond] if n % 2 == 0 else [site]

    irreps.append(IrrepLabel("Gamma", "A1", 1))
    rows.append([1.0] * n_classes)
    irreps.append(IrrepLabel("Gamma", "A2", 1))
    rows.append([1.0] * n_rot_classes + refl_chars(-1.0, -1.0))
    if n % 2 == 0:
        irreps.append(IrrepLabel("Gamma", "B1", 1))
        rows.append([(-1.0) ** k for k in rot_reps] + refl_chars(1.0, -1.0))
        irreps.append(IrrepLabel("Gamma", "B2", 1))
        rows.append([(-1.0) ** k for k in rot_reps] + refl_chars(-1.0, 1.0))

    two_dim = range(1, (n - 1) // 2 + 1) if n % 2 else range(1, n // 2)
    labels = [f"E{j}" for j in two_dim] if len(list(two_dim)) > 1 else ["E"]
    for j, label in zip(two_dim, labels):
        irreps.append(IrrepLabel("Gamma", label, 2))
        rows.append(
            [2.0 * np.cos(2 * np.pi * j * k / n) for k in rot_reps]
            + refl_chars(0.0, 0.0)
        )

    chars = np.array(rows, dtype=complex)
    return CharacterTable(f"D{n}", perms, tuple(classes), tuple(irreps), chars)


@dataclass(frozen=True, eq=False)
class SymmetricBasis:
    """Orthonormal basis of the trivial-irrep subspace of a sector.

    One unit vector per orbit with amplitude 1/sqrt(|orbit|) on each member
    and zero elsewhere.  Every vector is invariant under the whole group.
    """

    sector: SectorBasis
    orbits: tuple[Orbit, ...]
    orbit_of: np.ndarray  # sector index -> position in `orbits`

    @property
    def n_orbits(self) -> int:
        return len(self.orbits)

    def sizes(self) -> np.ndarray:
        return np.array([o.size for o in self.orbits], dtype=np.int64)

    def dense_vectors(self) -> np.ndarray:
        """Column a is the normalized sum over orbit a (sector_dim x n_orbits)."""
        out = np.zeros((self.sector.dim, self.n_orbits))
        for a, orbit in enumerate(self.orbits):
            out[orbit.members, a] = 1.0 / np.sqrt(orbit.size)
        return out

    def expand(self, coefficients: np.ndarray) -> np.ndarray:
        """Raw sector amplitudes of sum_a coefficients[a] * vector_a."""
        out = np.zeros(self.sector.dim)
        for a, orbit in enumerate(self.orbits):
            out[orbit.members] = coefficients[a] / np.sqrt(orbit.size)
        return out


def symmetric_basis(orbits: list[Orbit], sector: SectorBasis) -> SymmetricBasis:
    """Build the trivial-irrep basis from an orbit decomposition."""
    orbit_of = np.full(sector.dim, -1, dtype=np.int64)
    for a, orbit in enumerate(orbits):
        if np.any(orbit_of[orbit.members] != -1):
            raise ValueError("orbits overlap")
        orbit_of[orbit.members] = a
    if np.any(orbit_of < 0):
        raise ValueError("orbits do not cover the sector")
    return SymmetricBasis(sector, tuple(orbits), orbit_of)


def eigenspace_irrep_multiplicities(
    table: CharacterTable,
    index_perms: np.ndarray,
    vectors: np.ndarray,
    tol: float = 1e-6,
) -> dict[IrrepLabel, int]:
    """Decompose an invariant eigenspace into irrep multiplicities.

    `vectors` holds orthonormal columns spanning the eigenspace in a sector
    basis on which the group acts by the index permutations `index_perms`
    (one row per table element, aligned with table.element_perms).  The trace
    tr(rho(g) P), with P the orthogonal projector on the span, is the
    character of the carried subrepresentation; its inner product
    (1 / |G|) sum_g conj(chi_a(g)) tr(rho(g) P) is the multiplicity of irrep
    a (the isotypic projector trace equals that times dim_a).  Values must
    round to nonnegative integers within `tol`, otherwise the space was not
    invariant (typically an energy-degeneracy grouping that was too tight).
    """
    V = vectors if vectors.ndim == 2 else vectors[:, None]
    k = V.shape[1]
    if index_perms.shape[0] != table.order:
        raise ValueError("index_perms rows must match the table elements")

    traces = np.empty(table.order)
    for e in range(table.order):
        traces[e] = float(np.sum(V[index_perms[e]] * V))
    class_sums = np.array([traces[list(members)].sum() for members in table.classes])

    out: dict[IrrepLabel, int] = {}
    total = 0
    for a, irrep in enumerate(table.irreps):
        value = np.vdot(table.characters[a], class_sums) / table.order
        m = int(round(value.real))
        if abs(value.imag) > tol or abs(value.real - m) > tol or m < 0:
            raise ValueError(
                f"projector trace for {irrep.name} is {value}; eigenspace is not "
                "group-invariant (degeneracy grouping too tight?)"
            )
        out[irrep] = m
        total += m * irrep.dim
    if total != k:
        raise ValueError(
            f"irrep dimensions sum to {total} but the eigenspace has dimension {k}"
        )
    return out
