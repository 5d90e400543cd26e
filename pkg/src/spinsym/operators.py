"""Heisenberg Hamiltonian and total-spin-square operator as symmetric matrices.

The model is  H = -J sum_<ij> s_i . s_j  -  h sum_i s_i^z  with the first sum
over the lattice bond list and J > 0 ferromagnetic, J < 0 antiferromagnetic.
Within a fixed-magnetization basis the Zeeman part is the constant -h M,
stored explicitly on the diagonal.

A pair coupling acts on a product state as
    s_i . s_j = s_i^z s_j^z + (s_i^+ s_j^- + s_i^- s_j^+) / 2
with ladder factors c_pm(m) = sqrt(s(s+1) - m(m pm 1)).  For s = 1/2 every
matrix element is an integer multiple of 1/4; quarters are dyadic, so the
float64 assembly is exact.  For s > 1/2 the square roots make entries
inexact, and the symmetric-basis matrices are explicitly symmetrized.

Bases: either the raw sector (SectorBasis) or the orbit-sum basis
(SymmetricBasis).  In the symmetric basis the element (a, b) is accumulated
from a single representative of orbit a and rescaled by sqrt(|O_a|/|O_b|),
so the cost scales with the number of orbits rather than the sector size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence, TextIO, Union

import numpy as np
import scipy.sparse as sparse

from .irreps import SymmetricBasis
from .sectors import SectorBasis, SpinConfiguration, SpinQuantum
from .spacegroup import FiniteLattice

BasisView = Union[SectorBasis, SymmetricBasis]


@dataclass(frozen=True)
class ModelParams:
    """Exchange J (J>0 ferro, J<0 antiferro) and Zeeman field h along z."""

    J: float
    h: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.J) and math.isfinite(self.h)):
            raise ValueError("model parameters must be finite")


@dataclass(eq=False)
class SparseSymmetricMatrix:
    """Real symmetric operator stored as row-indexed nonzeros (full pattern).

    Both (i, j) and (j, i) are stored; `symmetry_error` reports the largest
    deviation between them.
    """

    dim: int
    csr: sparse.csr_matrix

    @classmethod
    def from_coo(cls, dim: int, rows, cols, vals) -> "SparseSymmetricMatrix":
        mat = sparse.coo_matrix(
            (np.asarray(vals, dtype=float), (rows, cols)), shape=(dim, dim)
        ).tocsr()
        mat.sum_duplicates()
        return cls(dim, mat)

    @classmethod
    def from_dense(cls, dense: np.ndarray) -> "SparseSymmetricMatrix":
        dense = np.asarray(dense, dtype=float)
        if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
            raise ValueError("dense matrix must be square")
        return cls(dense.shape[0], sparse.csr_matrix(dense))

    @property
    def nnz(self) -> int:
        return self.csr.nnz

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return self.csr @ v

    def to_dense(self) -> np.ndarray:
        return self.csr.toarray()

    def trace(self) -> float:
        return float(self.csr.diagonal().sum())

    def symmetry_error(self) -> float:
        diff = self.csr - self.csr.T
        return 0.0 if diff.nnz == 0 else float(np.abs(diff.data).max())

    def iter_rows(self) -> Iterator[tuple[int, np.ndarray, np.ndarray]]:
        indptr, indices, data = self.csr.indptr, self.csr.indices, self.csr.data
        for i in range(self.dim):
            lo, hi = indptr[i], indptr[i + 1]
            yield i, indices[lo:hi], data[lo:hi]

    def dump(self, stream: TextIO) -> None:
        """Debug coordinate list: one "row col value" line per nonzero."""
        for i, cols, vals in self.iter_rows():
            for j, v in zip(cols, vals):
                stream.write(f"{i} {j} {v:.17g}\n")


def _ladder_up(two_s: int, two_m: int) -> float:
    """c_+(m) = sqrt(s(s+1) - m(m+1)), arguments doubled."""
    return 0.5 * math.sqrt(two_s * (two_s + 2) - two_m * (two_m + 2))


def _ladder_down(two_s: int, two_m: int) -> float:
    """c_-(m) = sqrt(s(s+1) - m(m-1)), arguments doubled."""
    return 0.5 * math.sqrt(two_s * (two_s + 2) - two_m * (two_m - 2))


def apply_pair_coupling(
    config: SpinConfiguration, i: int, j: int
) -> list[tuple[SpinConfiguration, float]]:
    """Expand s_i . s_j applied to a product state.

    Returns (configuration, coefficient) pairs: the diagonal term m_i m_j on
    the input itself and the two exchange terms (1/2) c_+ c_- on the
    raised/lowered neighbors; blocked ladder moves are omitted, and every
    output has the input's total magnetization.
    """
    if i == j:
        raise ValueError("pair coupling needs two distinct sites")
    two_s = config.two_s
    di, dj = config.digits[i], config.digits[j]
    two_mi, two_mj = 2 * di - two_s, 2 * dj - two_s

    terms: list[tuple[SpinConfiguration, float]] = []
    diag = (two_mi * two_mj) / 4.0
    if diag != 0.0:
        terms.append((config, diag))
    if di < two_s and dj > 0:
        raised = list(config.digits)
        raised[i] += 1
        raised[j] -= 1
        coeff = 0.5 * _ladder_up(two_s, two_mi) * _ladder_down(two_s, two_mj)
        terms.append((SpinConfiguration(tuple(raised), two_s), coeff))
    if di > 0 and dj < two_s:
        lowered = list(config.digits)
        lowered[i] -= 1
        lowered[j] += 1
        coeff = 0.5 * _ladder_down(two_s, two_mi) * _ladder_up(two_s, two_mj)
        terms.append((SpinConfiguration(tuple(lowered), two_s), coeff))
    return terms


def _ladder_tables(two_s: int) -> tuple[np.ndarray, np.ndarray]:
    up = np.array([_ladder_up(two_s, 2 * d - two_s) for d in range(two_s + 1)])
    down = np.array([_ladder_down(two_s, 2 * d - two_s) for d in range(two_s + 1)])
    return up, down


def _raw_coupling_matrix(
    pairs: Sequence[tuple[int, int]],
    scale: float,
    diag_const: float,
    basis: SectorBasis,
) -> SparseSymmetricMatrix:
    """Vectorized COO assembly of scale * sum_pairs s_i.s_j + diag_const * I."""
    two_s = basis.spin.two_s
    D = basis.digits
    codes = basis.codes
    W = basis.weights
    dim = basis.dim
    up, down = _ladder_tables(two_s)
    all_idx = np.arange(dim, dtype=np.int64)

    diag = np.full(dim, diag_const)
    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    vals: list[np.ndarray] = []
    for i, j in pairs:
        di = D[:, i].astype(np.int64)
        dj = D[:, j].astype(np.int64)
        diag += scale * ((2 * di - two_s) * (2 * dj - two_s)) / 4.0
        for sign in (+1, -1):
            # sign=+1 raises site i and lowers site j; sign=-1 the reverse.
            if sign > 0:
                mask = (di < two_s) & (dj > 0)
            else:
                mask = (di > 0) & (dj < two_s)
            if not mask.any():
                continue
            if sign > 0:
                coeff = 0.5 * up[D[mask, i]] * down[D[mask, j]]
            else:
                coeff = 0.5 * down[D[mask, i]] * up[D[mask, j]]
            target = codes[mask] + sign * (W[i] - W[j])
            rows.append(np.searchsorted(codes, target))
            cols.append(all_idx[mask])
            vals.append(scale * coeff)

    rows.append(all_idx)
    cols.append(all_idx)
    vals.append(diag)
    return SparseSymmetricMatrix.from_coo(
        dim, np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)
    )


def _symmetric_coupling_matrix(
    pairs: Sequence[tuple[int, int]],
    scale: float,
    diag_const: float,
    basis: SymmetricBasis,
) -> SparseSymmetricMatrix:
    """Orbit-sum compression from one representative per orbit.

    Element (a, b) sums the coupling amplitudes from the representative of
    orbit a into members of orbit b, rescaled by sqrt(|O_a|/|O_b|); the
    result is exactly symmetrized to absorb float noise in the rescaling.
    """
    sector = basis.sector
    n = basis.n_orbits
    sizes = basis.sizes().astype(float)
    A = np.zeros((n, n))
    for a, orbit in enumerate(basis.orbits):
        rep = sector.config(int(orbit.members[0]))
        acc: dict[int, float] = {}
        for i, j in pairs:
            for target, coeff in apply_pair_coupling(rep, i, j):
                b = int(basis.orbit_of[sector.index_of(target)])
                acc[b] = acc.get(b, 0.0) + coeff
        for b, total in acc.items():
            A[a, b] += scale * total * math.sqrt(sizes[a] / sizes[b])
    A = 0.5 * (A + A.T)
    A[np.diag_indices(n)] += diag_const
    return SparseSymmetricMatrix.from_dense(A)


def _coupling_matrix(
    pairs: Sequence[tuple[int, int]],
    scale: float,
    diag_const: float,
    basis: BasisView,
) -> SparseSymmetricMatrix:
    if isinstance(basis, SectorBasis):
        return _raw_coupling_matrix(pairs, scale, diag_const, basis)
    if isinstance(basis, SymmetricBasis):
        return _symmetric_coupling_matrix(pairs, scale, diag_const, basis)
    raise TypeError(f"unsupported basis type: {type(basis).__name__}")


def _basis_sector(basis: BasisView) -> SectorBasis:
    return basis if isinstance(basis, SectorBasis) else basis.sector


def build_hamiltonian(
    lattice: FiniteLattice, params: ModelParams, basis: BasisView
) -> SparseSymmetricMatrix:
    """H = -J sum_bonds s_i.s_j - h M in the given fixed-magnetization basis."""
    sector = _basis_sector(basis)
    if sector.n_sites != lattice.n_sites:
        raise ValueError("basis and lattice site counts differ")
    zeeman = -params.h * (sector.two_m / 2.0)
    return _coupling_matrix(lattice.bonds, -params.J, zeeman, basis)


def build_s2(n_sites: int, spin: SpinQuantum, basis: BasisView) -> SparseSymmetricMatrix:
    """S^2 = N s(s+1) I + 2 sum_{i<j} s_i.s_j over ALL site pairs.

    Eigenvalues land on S(S+1) for S = |M|, ..., N s.
    """
    sector = _basis_sector(basis)
    if sector.n_sites != n_sites or sector.spin.two_s != spin.two_s:
        raise ValueError("basis does not match the requested system")
    pairs = [(i, j) for i in range(n_sites) for j in range(i + 1, n_sites)]
    casimir = n_sites * spin.two_s * (spin.two_s + 2) / 4.0
    return _coupling_matrix(pairs, 2.0, casimir, basis)


def pair_correlations(basis: SectorBasis, psi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Correlation matrices of a normalized sector vector.

    Returns (C, Z) with C[i, j] = <psi| s_i . s_j |psi> (diagonal s(s+1)) and
    Z[i, j] = <psi| s_i^z s_j^z |psi>.
    """
    two_s = basis.spin.two_s
    D = basis.digits
    codes = basis.codes
    W = basis.weights
    n = basis.n_sites
    up, down = _ladder_tables(two_s)
    halves = (2 * D.astype(np.int64) - two_s) / 2.0  # m_i per configuration

    # Z[i,j] = sum_c psi_c^2 m_i(c) m_j(c): psi^2-weighted Gram matrix.
    Z = (halves * psi[:, None] ** 2).T @ halves
    C = Z.copy()
    for i in range(n):
        for j in range(i + 1, n):
            mask = (D[:, i] < two_s) & (D[:, j] > 0)
            flip = 0.0
            if mask.any():
                target = codes[mask] + (W[i] - W[j])
                tidx = np.searchsorted(codes, target)
                coeff = 0.5 * up[D[mask, i]] * down[D[mask, j]]
                flip = float(np.sum(psi[mask] * psi[tidx] * coeff))
            # <s+_i s-_j> equals <s-_i s+_j> for a real vector: double it.
            C[i, j] += 2.0 * flip
            C[j, i] = C[i, j]
    s_sq = two_s * (two_s + 2) / 4.0
    np.fill_diagonal(C, s_sq)
    return C, Z
