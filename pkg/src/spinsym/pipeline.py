"""Ground-state pipeline, small-chain classification, field sweeps, observables.

The symmetry-reduced ground-state solve runs, for an antiferromagnet whose
total spin N*s is an even integer (the regime where the ground state lies in
the trivial irrep of the space group):

  1. count the M = 0 sector,
  2. enumerate its basis,
  3. decompose it into space-group orbits,
  4. build the orbit-sum (trivial-irrep) basis,
  5. diagonalize S^2 there and keep the S = 0 eigenvectors,
  6. compress H onto that block, take the lowest eigenpair,
  7. expand the winner back to raw configuration amplitudes.

Any other case (ferromagnetic coupling, N*s odd or half-integer) falls back
to a dense or Lanczos solve of the raw minimal-|M| sector, with a warning
recorded on the result.

Field sweeps reuse the h = 0 sector spectra: within a fixed-M sector the
Zeeman term only shifts every level by -h M, so crossings and gaps follow
analytically from one set of solves.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_CONFIG, SolverConfig
from .eigensolve import (
    SpectrumEntry,
    dense_symmetric_eig,
    group_degeneracies,
    lanczos_ground,
)
from .errors import DenseCapError
from .irreps import (
    CharacterTable,
    cyclic_characters,
    dihedral_characters,
    eigenspace_irrep_multiplicities,
    reflection_characters,
    symmetric_basis,
)
from .operators import ModelParams, build_hamiltonian, build_s2, pair_correlations
from .sectors import (
    SectorBasis,
    SpinQuantum,
    sector_basis,
    sector_dimension,
    twice_to_string,
)
from .spacegroup import (
    FiniteLattice,
    build_lattice,
    build_space_group,
    orbit_decomposition,
    sector_index_perms,
)

logger = logging.getLogger(__name__)

# Thermodynamic-limit ground energy per spin of the s=1/2 antiferromagnetic
# chain, 1/4 - ln 2; reporting reference only, never used in computation.
INFINITE_CHAIN_REFERENCE = 0.25 - math.log(2.0)


def _two_s_total_from_expectation(value: float, tol: float = 1e-6) -> int:
    """Doubled total spin from an S^2 expectation S(S+1)."""
    if value < -tol:
        raise ValueError(f"negative S^2 expectation: {value}")
    two_s = int(round(math.sqrt(1.0 + 4.0 * max(value, 0.0)) - 1.0))
    return two_s


@dataclass(eq=False)
class GroundStateResult:
    """Ground state of one system, expanded over raw sector configurations."""

    lattice: FiniteLattice
    spin: SpinQuantum
    params: ModelParams
    method: str  # "symmetric", "raw-dense" or "raw-lanczos"
    basis: SectorBasis
    vector: np.ndarray
    energy_total: float
    two_s_total: int
    two_m: int
    s2_expectation: float
    orbit_count: int | None = None
    symmetric_dim: int | None = None
    s0_dim: int | None = None
    ground_multiplicity: int | None = None
    warnings: list[str] = field(default_factory=list)

    @property
    def energy_per_spin(self) -> float:
        return self.energy_total / self.lattice.n_sites

    @property
    def spin_label(self) -> str:
        return twice_to_string(self.two_s_total)

    @property
    def magnetization_label(self) -> str:
        return twice_to_string(self.two_m)

    def amplitude_map(self) -> dict[str, float]:
        """Configuration text -> amplitude, in lexicographic order."""
        return {
            self.basis.config(i).text(): float(self.vector[i])
            for i in range(self.basis.dim)
        }


def _fix_global_sign(vector: np.ndarray, threshold: float = 1e-12) -> np.ndarray:
    """Make the first configuration with |amplitude| > threshold positive."""
    nz = np.flatnonzero(np.abs(vector) > threshold)
    if nz.size and vector[nz[0]] < 0:
        return -vector
    return vector


def _symmetric_ground(
    lattice: FiniteLattice,
    spin: SpinQuantum,
    params: ModelParams,
    config: SolverConfig,
) -> GroundStateResult:
    basis = sector_basis(lattice.n_sites, spin, 0, cap=config.sector_cap)
    group = build_space_group(lattice)
    orbits = orbit_decomposition(group, basis)
    sym = symmetric_basis(orbits, basis)

    s2_sym = build_s2(lattice.n_sites, spin, sym)
    s2_entries = dense_symmetric_eig(s2_sym, dense_cap=config.dense_cap)
    singlets = [e.vectors for e in s2_entries if abs(e.eigenvalue) < config.s0_tol]
    if not singlets:
        raise RuntimeError(
            "no S=0 state in the fully symmetric subspace; "
            "the symmetric route does not apply to this system"
        )
    singlet_cols = np.hstack(singlets)

    h_sym = build_hamiltonian(lattice, params, sym)
    compressed = singlet_cols.T @ (h_sym.to_dense() @ singlet_cols)
    compressed = 0.5 * (compressed + compressed.T)
    w, V = np.linalg.eigh(compressed)
    energy = float(w[0])
    coeff_sym = singlet_cols @ V[:, 0]

    vector = sym.expand(coeff_sym)
    vector /= np.linalg.norm(vector)
    vector = _fix_global_sign(vector)

    s2_value = float(coeff_sym @ (s2_sym.matvec(coeff_sym)))
    two_s_total = _two_s_total_from_expectation(s2_value)
    result = GroundStateResult(
        lattice=lattice,
        spin=spin,
        params=params,
        method="symmetric",
        basis=basis,
        vector=vector,
        energy_total=energy,
        two_s_total=two_s_total,
        two_m=0,
        s2_expectation=s2_value,
        orbit_count=len(orbits),
        symmetric_dim=sym.n_orbits,
        s0_dim=singlet_cols.shape[1],
    )
    _check_spin_consistency(result)
    return result


def _raw_ground(
    lattice: FiniteLattice,
    spin: SpinQuantum,
    params: ModelParams,
    config: SolverConfig,
    force_lanczos: bool = False,
) -> GroundStateResult:
    two_m = (lattice.n_sites * spin.two_s) % 2  # smallest reachable |2M|
    basis = sector_basis(lattice.n_sites, spin, two_m, cap=config.sector_cap)
    ham = build_hamiltonian(lattice, params, basis)

    multiplicity: int | None = None
    if basis.dim <= config.dense_cap and not force_lanczos:
        method = "raw-dense"
        entries = dense_symmetric_eig(ham, dense_cap=config.dense_cap)
        levels = group_degeneracies(entries, tol=config.degeneracy_tol)
        energy = levels[0].eigenvalue
        vector = levels[0].vectors[:, 0].copy()
        multiplicity = levels[0].multiplicity
    else:
        method = "raw-lanczos"
        energy, vector = lanczos_ground(
            ham.matvec,
            basis.dim,
            seed=config.seed,
            tol=config.lanczos_tol,
            max_iter=config.lanczos_max_iter,
        )
    vector = _fix_global_sign(vector / np.linalg.norm(vector))

    s2 = build_s2(lattice.n_sites, spin, basis)
    s2_value = float(vector @ s2.matvec(vector))
    two_s_total = _two_s_total_from_expectation(s2_value)
    result = GroundStateResult(
        lattice=lattice,
        spin=spin,
        params=params,
        method=method,
        basis=basis,
        vector=vector,
        energy_total=float(energy),
        two_s_total=two_s_total,
        two_m=two_m,
        s2_expectation=s2_value,
        ground_multiplicity=multiplicity,
    )
    _check_spin_consistency(result)
    return result


def _check_spin_consistency(result: GroundStateResult, tol: float = 1e-8) -> None:
    target = result.two_s_total * (result.two_s_total + 2) / 4.0
    if abs(result.s2_expectation - target) > tol:
        raise RuntimeError(
            f"S^2 expectation {result.s2_expectation} is not S(S+1) for any "
            f"half-integer S (nearest {target}); degenerate levels may be mixing"
        )


def ground_state(
    lattice: FiniteLattice,
    spin: SpinQuantum,
    params: ModelParams,
    config: SolverConfig = DEFAULT_CONFIG,
    method: str = "auto",
) -> GroundStateResult:
    """Ground state of the Heisenberg model on a periodic lattice.

    `method` selects the route: "auto" uses the symmetry-reduced pipeline for
    an antiferromagnet with even integer N*s and otherwise falls back to the
    raw minimal-|M| sector; "symmetric", "raw", "raw-dense" and "raw-lanczos"
    force a route ("symmetric" raises for systems where the trivial-irrep
    argument does not hold).
    """
    if method not in ("auto", "symmetric", "raw", "raw-dense", "raw-lanczos"):
        raise ValueError(f"unknown method {method!r}")
    two_ns = lattice.n_sites * spin.two_s
    eligible = params.J < 0 and two_ns % 4 == 0

    if method == "symmetric" or (method == "auto" and eligible):
        if not eligible:
            raise ValueError(
                "symmetric route requires antiferromagnetic coupling (J<0) and "
                "even integer total spin N*s"
            )
        return _symmetric_ground(lattice, spin, params, config)

    result = _raw_ground(
        lattice, spin, params, config, force_lanczos=(method == "raw-lanczos")
    )
    if method == "auto":
        reason = (
            "non-antiferromagnetic coupling (J >= 0)"
            if params.J >= 0
            else "total spin N*s is not an even integer"
        )
        note = f"symmetric route not applicable ({reason}); solved the raw minimal-|M| sector"
        result.warnings.append(note)
        logger.info(note)
    return result


@dataclass(eq=False)
class ObservableReport:
    """Ground-state correlations binned by wrap-around graph distance."""

    bond_correlation: dict[int, float]  # <s_i . s_j> averaged at distance r
    zz_correlation: dict[int, float]  # <s_i^z s_j^z> averaged at distance r
    staggered_m_sq: float | None  # None on non-bipartite lattices
    sum_rule_residual: float
    gap_per_spin: list[tuple[float, float]] | None = None  # (h, gap) samples


def observables(ground: GroundStateResult, lattice: FiniteLattice | None = None) -> ObservableReport:
    """Spin-spin correlations, staggered magnetization and the S(S+1) sum rule.

    The sum rule N s(s+1) + 2 sum_{i<j} <s_i.s_j> = S(S+1) ties the computed
    correlations to the ground state's total spin; its residual is reported.
    """
    lattice = lattice or ground.lattice
    if lattice.n_sites != ground.basis.n_sites:
        raise ValueError("lattice does not match the ground-state basis")
    C, Z = pair_correlations(ground.basis, ground.vector)
    dist = lattice.distances()
    n = lattice.n_sites

    bond_corr: dict[int, float] = {}
    zz_corr: dict[int, float] = {}
    for r in range(1, int(dist.max()) + 1):
        mask = np.triu(dist == r, k=1)
        if mask.any():
            bond_corr[r] = float(C[mask].mean())
            zz_corr[r] = float(Z[mask].mean())

    staggered = None
    if lattice.bipartite:
        eps = lattice.sublattice_signs().astype(float)
        staggered = float(eps @ C @ eps) / n**2

    s_sq = ground.spin.two_s * (ground.spin.two_s + 2) / 4.0
    total = n * s_sq + 2.0 * float(np.triu(C, k=1).sum())
    target = ground.two_s_total * (ground.two_s_total + 2) / 4.0
    return ObservableReport(
        bond_correlation=bond_corr,
        zz_correlation=zz_corr,
        staggered_m_sq=staggered,
        sum_rule_residual=abs(total - target),
    )


@dataclass(eq=False)
class SectorLevel:
    """One degenerate level of a fixed-M sector at h = 0, split by total spin."""

    energy_total: float
    two_s_total: int
    two_m: int
    multiplicity: int
    vectors: np.ndarray | None = None


def _split_level_by_spin(
    entry: SpectrumEntry, s2_dense: np.ndarray, two_m: int
) -> list[SectorLevel]:
    """Split an energy eigenspace into total-spin blocks (S^2 commutes with H)."""
    V = entry.vectors
    K = V.T @ (s2_dense @ V)
    K = 0.5 * (K + K.T)
    mu, C = np.linalg.eigh(K)
    two_ss = np.array([_two_s_total_from_expectation(float(v)) for v in mu])
    out: list[SectorLevel] = []
    for two_s in sorted(set(int(t) for t in two_ss)):
        cols = np.flatnonzero(two_ss == two_s)
        W = V @ C[:, cols]
        W, _ = np.linalg.qr(W)
        out.append(SectorLevel(entry.eigenvalue, two_s, two_m, len(cols), W))
    return out


def sector_levels(
    lattice: FiniteLattice,
    spin: SpinQuantum,
    J: float,
    two_m: int,
    config: SolverConfig = DEFAULT_CONFIG,
    keep_vectors: bool = False,
) -> tuple[SectorBasis, list[SectorLevel]]:
    """Dense spectrum of one raw sector at h = 0, degeneracy-grouped and
    split by total spin."""
    basis = sector_basis(lattice.n_sites, spin, two_m, cap=config.sector_cap)
    ham = build_hamiltonian(lattice, ModelParams(J=J, h=0.0), basis)
    entries = dense_symmetric_eig(ham, dense_cap=config.dense_cap)
    grouped = group_degeneracies(entries, tol=config.degeneracy_tol)
    s2_dense = build_s2(lattice.n_sites, spin, basis).to_dense()
    levels: list[SectorLevel] = []
    for entry in grouped:
        for level in _split_level_by_spin(entry, s2_dense, two_m):
            if not keep_vectors:
                level.vectors = None
            levels.append(level)
    return basis, levels


@dataclass(eq=False)
class ClassificationRow:
    """One line of the small-chain classification table.

    Rows merge the +M and -M partners; `m_pattern` is "0" or "+-m", and the
    energy column carries the exact field dependence E(h) = e0 -+ (m/N) h
    per spin (upper sign for the +m member).
    """

    theta: str
    gamma: str
    xi: str
    two_s_total: int
    two_m_abs: int
    m_pattern: str
    e0_per_spin: float
    h_coefficient: float  # |M|/N; the +M member moves as e0 - h_coefficient*h
    energy_formula: str
    degeneracy_h0: int
    degeneracy_h: str

    @property
    def spin_label(self) -> str:
        return twice_to_string(self.two_s_total)


@dataclass(eq=False)
class ClassificationReport:
    n_sites: int
    spin: SpinQuantum
    J: float
    rows: list[ClassificationRow]

    @property
    def total_states(self) -> int:
        return sum(row.degeneracy_h0 for row in self.rows)


def _format_energy(value: float) -> str:
    rounded = round(value, 6)
    if rounded == 0:
        rounded = 0.0  # avoid "-0.000000"
    return f"{rounded:.6f}"


def _energy_formula(e0_per_spin: float, two_m_abs: int, n_sites: int) -> str:
    base = _format_energy(e0_per_spin)
    if two_m_abs == 0:
        return base
    coef = (two_m_abs / 2.0) / n_sites
    if abs(round(e0_per_spin, 6)) < 5e-7:
        return f"-+{coef:.6f}h"
    ratio = coef / abs(e0_per_spin)
    q = round(ratio)
    if q >= 1 and abs(ratio - q) < 1e-9:
        inner = "+-" if e0_per_spin < 0 else "-+"
        mult = "" if q == 1 else str(q)
        return f"{base}(1{inner}{mult}h)"
    return f"{base}-+{coef:.6f}h"


def _label_string(multiplicities, family_order) -> str:
    parts = []
    for irrep in family_order:
        m = multiplicities.get(irrep, 0)
        if m == 1:
            parts.append(irrep.name)
        elif m > 1:
            parts.append(f"{m}*{irrep.name}")
    return "+".join(parts)


def classify_small_chain(
    n_sites: int,
    spin: SpinQuantum,
    params: ModelParams,
    config: SolverConfig = DEFAULT_CONFIG,
) -> ClassificationReport:
    """Classify every level of a periodic chain by (Theta, Gamma, Xi, S, M).

    Dense-solves each magnetization sector at h = 0, splits eigenspaces by
    total spin, and labels them with irrep multiplicities of the translation
    group, the site-through reflection group and the full dihedral group.
    The zero-field energies are exact quarters for s = 1/2; field dependence
    is attached analytically as E(h) = E(0) - h M / N per spin.
    """
    if n_sites < 3:
        raise ValueError("classification needs a chain of at least 3 sites")
    if spin.site_dim**n_sites > config.dense_cap:
        raise DenseCapError(
            f"full space {spin.site_dim}**{n_sites} exceeds dense cap {config.dense_cap}"
        )
    lattice = build_lattice(1, n_sites)
    tables: list[CharacterTable] = [
        cyclic_characters(n_sites),
        dihedral_characters(n_sites),
        reflection_characters(n_sites),
    ]

    merged: dict[tuple, dict] = {}
    two_ns = n_sites * spin.two_s
    for two_m in range(two_ns % 2, two_ns + 1, 2):
        if sector_dimension(n_sites, spin, two_m) == 0:
            continue
        basis, levels = sector_levels(
            lattice, spin, params.J, two_m, config, keep_vectors=True
        )
        index_perms = [sector_index_perms(t.element_perms, basis) for t in tables]
        for level in levels:
            labels = []
            for table, perms in zip(tables, index_perms):
                mult = eigenspace_irrep_multiplicities(table, perms, level.vectors)
                labels.append(_label_string(mult, table.irreps))
            theta, gamma, xi = labels
            e0 = level.energy_total / n_sites
            key = (round(e0, 9), level.two_s_total, two_m, theta, gamma, xi)
            entry = merged.setdefault(
                key,
                {
                    "theta": theta,
                    "gamma": gamma,
                    "xi": xi,
                    "two_s": level.two_s_total,
                    "two_m": two_m,
                    "e0": e0,
                    "dim": 0,
                },
            )
            entry["dim"] += level.multiplicity

    rows: list[ClassificationRow] = []
    for entry in merged.values():
        two_m = entry["two_m"]
        dim = entry["dim"]
        if two_m == 0:
            m_pattern, deg0, degh = "0", dim, str(dim)
        else:
            # The -M partner sector is the spin-flip image with identical
            # spectrum and labels; count it without re-solving.
            m_pattern = f"+-{twice_to_string(two_m)}"
            deg0, degh = 2 * dim, f"{dim}+{dim}"
        rows.append(
            ClassificationRow(
                theta=entry["theta"],
                gamma=entry["gamma"],
                xi=entry["xi"],
                two_s_total=entry["two_s"],
                two_m_abs=two_m,
                m_pattern=m_pattern,
                e0_per_spin=entry["e0"],
                h_coefficient=(two_m / 2.0) / n_sites,
                energy_formula=_energy_formula(entry["e0"], two_m, n_sites),
                degeneracy_h0=deg0,
                degeneracy_h=degh,
            )
        )
    rows.sort(key=lambda r: (round(r.e0_per_spin, 9), r.two_m_abs, r.two_s_total))
    report = ClassificationReport(n_sites, spin, params.J, rows)
    expected = spin.site_dim**n_sites
    if report.total_states != expected:
        raise RuntimeError(
            f"classification counted {report.total_states} states, expected {expected}"
        )
    return report


@dataclass(eq=False)
class SweepPoint:
    """Ground data at one field value."""

    h: float
    two_s_total: int
    two_m: int
    energy_per_spin: float
    gap_per_spin: float
    degeneracy: int

    @property
    def spin_label(self) -> str:
        return twice_to_string(self.two_s_total)

    @property
    def magnetization_label(self) -> str:
        return twice_to_string(self.two_m)


def field_sweep(
    lattice: FiniteLattice,
    spin: SpinQuantum,
    J: float,
    h_values,
    config: SolverConfig = DEFAULT_CONFIG,
) -> list[SweepPoint]:
    """Ground quantum numbers and gap along an ascending field grid.

    Solves every magnetization sector once at h = 0 and applies the exact
    Zeeman shift -h M to each level.  At a crossing the reported ground is
    the tied level with the largest M (then the smallest S), and the gap,
    measured to the nearest level other than the reported one, closes to 0.
    """
    h_list = [float(h) for h in h_values]
    if any(h < 0 for h in h_list):
        raise ValueError("field grid must be nonnegative")
    if any(h_list[k] > h_list[k + 1] for k in range(len(h_list) - 1)):
        raise ValueError("field grid must be ascending")

    two_ns = lattice.n_sites * spin.two_s
    levels: list[SectorLevel] = []
    for two_m in range(two_ns % 2, two_ns + 1, 2):
        if sector_dimension(lattice.n_sites, spin, two_m) == 0:
            continue
        _, sec_levels = sector_levels(lattice, spin, J, two_m, config)
        levels.extend(sec_levels)
        if two_m > 0:
            # Mirror sector: identical h=0 spectrum, opposite magnetization.
            for lv in sec_levels:
                levels.append(
                    SectorLevel(lv.energy_total, lv.two_s_total, -two_m, lv.multiplicity)
                )

    out: list[SweepPoint] = []
    n = lattice.n_sites
    for h in h_list:
        shifted = [(lv.energy_total - h * (lv.two_m / 2.0), lv) for lv in levels]
        ground_energy = min(e for e, _ in shifted)
        tied = [lv for e, lv in shifted if e - ground_energy <= config.degeneracy_tol]
        degeneracy = sum(lv.multiplicity for lv in tied)
        winner = max(tied, key=lambda lv: (lv.two_m, -lv.two_s_total))
        others = [e for e, lv in shifted if lv is not winner]
        gap = (min(others) - ground_energy) if others else 0.0
        gap = max(gap, 0.0)
        out.append(
            SweepPoint(
                h=h,
                two_s_total=winner.two_s_total,
                two_m=winner.two_m,
                energy_per_spin=ground_energy / n,
                gap_per_spin=gap / n,
                degeneracy=degeneracy,
            )
        )
    return out
