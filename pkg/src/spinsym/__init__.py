"""Symmetry-reduced exact diagonalization of finite Heisenberg spin systems."""

__version__ = "0.1.0"

from .config import DEFAULT_CONFIG, SolverConfig
from .errors import ConvergenceError, DenseCapError, ResourceCapError, SectorCapError
from .operators import ModelParams
from .sectors import (
    MagnetizationSector,
    SpinConfiguration,
    SpinQuantum,
    enumerate_sector,
    multinomial,
    rank,
    sector_basis,
    sector_dimension,
    unrank,
)
from .spacegroup import (
    FiniteLattice,
    Orbit,
    SpaceGroup,
    act,
    build_lattice,
    build_space_group,
    orbit_decomposition,
    parse_lattice_spec,
)
from .pipeline import (
    INFINITE_CHAIN_REFERENCE,
    GroundStateResult,
    classify_small_chain,
    field_sweep,
    ground_state,
    observables,
)

__all__ = [
    "__version__",
    "DEFAULT_CONFIG",
    "SolverConfig",
    "ConvergenceError",
    "DenseCapError",
    "ResourceCapError",
    "SectorCapError",
    "ModelParams",
    "MagnetizationSector",
    "SpinConfiguration",
    "SpinQuantum",
    "enumerate_sector",
    "multinomial",
    "rank",
    "sector_basis",
    "sector_dimension",
    "unrank",
    "FiniteLattice",
    "Orbit",
    "SpaceGroup",
    "act",
    "build_lattice",
    "build_space_group",
    "orbit_decomposition",
    "parse_lattice_spec",
    "INFINITE_CHAIN_REFERENCE",
    "GroundStateResult",
    "classify_small_chain",
    "field_sweep",
    "ground_state",
    "observables",
]
