"""Request/response models of the solver service.

Spins and magnetizations travel as exact fraction strings ("1/2", "-3/2",
"0"); lattices as spec strings ("chain:16", "square:4x4", "cube:2x2x2").
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class SolverOptions(BaseModel):
    """Optional overrides of the run-wide caps and tolerances."""

    sector_cap: Optional[int] = Field(None, ge=1)
    dense_cap: Optional[int] = Field(None, ge=1)
    degeneracy_tol: Optional[float] = Field(None, gt=0)
    s0_tol: Optional[float] = Field(None, gt=0)
    lanczos_tol: Optional[float] = Field(None, gt=0)
    lanczos_max_iter: Optional[int] = Field(None, ge=1)
    seed: Optional[int] = None


class CountRequest(BaseModel):
    lattice: str
    spin: str
    mz: str = "0"


class CountResponse(BaseModel):
    lattice: str
    n_sites: int
    spin: str
    mz: str
    dimension: int


class OrbitsRequest(BaseModel):
    lattice: str
    spin: str
    mz: str = "0"
    options: SolverOptions = SolverOptions()


class OrbitRow(BaseModel):
    representative: str
    size: int


class OrbitsResponse(BaseModel):
    lattice: str
    n_sites: int
    spin: str
    mz: str
    dimension: int
    group_order: int
    abstract_group_order: int
    orbits: list[OrbitRow]


class GroundRequest(BaseModel):
    lattice: str
    spin: str
    J: float
    h: float = 0.0
    method: Literal["auto", "symmetric", "raw", "raw-dense", "raw-lanczos"] = "auto"
    options: SolverOptions = SolverOptions()


class LatticeInfo(BaseModel):
    spec: str
    dims: int
    linear_size: int
    n_sites: int
    n_bonds: int


class DimsInfo(BaseModel):
    sector_dim: int
    symmetric_dim: Optional[int] = None
    s0_dim: Optional[int] = None


class ObservablesInfo(BaseModel):
    bond_correlation: dict[str, float]
    zz_correlation: dict[str, float]
    staggered_m_sq: Optional[float] = None
    sum_rule_residual: float


class EnergyInfo(BaseModel):
    total: float
    per_spin: float
    # 1/4 - ln 2, the infinite-chain value; reported for chains only.
    reference_infinite_chain_per_spin: Optional[float] = None


class GroundResponse(BaseModel):
    params: dict[str, float]
    lattice: LatticeInfo
    spin: str
    method: str
    dims: DimsInfo
    orbit_count: Optional[int] = None
    energy: EnergyInfo
    S: str
    M: str
    ground_multiplicity: Optional[int] = None
    amplitudes: dict[str, float]
    observables: ObservablesInfo
    warnings: list[str] = []


class ClassifyRequest(BaseModel):
    lattice: str
    spin: str
    J: float
    options: SolverOptions = SolverOptions()


class ClassifyRow(BaseModel):
    theta: str
    gamma: str
    xi: str
    S: str
    M: str
    energy: str
    e0_per_spin: float
    h_coefficient: float
    degeneracy_h0: int
    degeneracy_h: str


class ClassifyResponse(BaseModel):
    lattice: str
    n_sites: int
    spin: str
    J: float
    total_states: int
    rows: list[ClassifyRow]


class SweepRequest(BaseModel):
    lattice: str
    spin: str
    J: float
    h_start: float = Field(0.0, ge=0)
    h_stop: float = Field(..., ge=0)
    h_step: float = Field(..., gt=0)
    options: SolverOptions = SolverOptions()


class SweepRow(BaseModel):
    h: float
    S: str
    M: str
    energy_per_spin: float
    gap_per_spin: float
    degeneracy: int


class SweepResponse(BaseModel):
    lattice: str
    n_sites: int
    spin: str
    J: float
    rows: list[SweepRow]


class HealthResponse(BaseModel):
    status: str
    version: str


class ErrorBody(BaseModel):
    code: Literal["invalid", "resource", "solver", "internal"]
    message: str
