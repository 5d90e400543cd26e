"""FastAPI service wrapping the solver package.

Each endpoint delegates to a plain handler (request model in, response model
out); the CLI calls those handlers directly when no remote server is given.
Error mapping: ValueError -> 400 "invalid", resource caps -> 413 "resource",
solver non-convergence -> 500 "solver".
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..config import DEFAULT_CONFIG, SolverConfig
from ..errors import ConvergenceError, ResourceCapError
from ..pipeline import (
    INFINITE_CHAIN_REFERENCE,
    classify_small_chain,
    field_sweep,
    ground_state,
    observables,
)
from ..operators import ModelParams
from ..sectors import (
    SpinQuantum,
    sector_basis,
    sector_dimension,
    twice_from_string,
    twice_to_string,
)
from ..spacegroup import build_space_group, orbit_decomposition, parse_lattice_spec
from . import schemas


def _config_from(options: schemas.SolverOptions) -> SolverConfig:
    return DEFAULT_CONFIG.with_overrides(**options.model_dump())


def run_count(req: schemas.CountRequest) -> schemas.CountResponse:
    lattice = parse_lattice_spec(req.lattice)
    spin = SpinQuantum.from_string(req.spin)
    two_m = twice_from_string(req.mz)
    dim = sector_dimension(lattice.n_sites, spin, two_m)
    return schemas.CountResponse(
        lattice=lattice.label(),
        n_sites=lattice.n_sites,
        spin=str(spin),
        mz=twice_to_string(two_m),
        dimension=dim,
    )


def run_orbits(req: schemas.OrbitsRequest) -> schemas.OrbitsResponse:
    lattice = parse_lattice_spec(req.lattice)
    spin = SpinQuantum.from_string(req.spin)
    two_m = twice_from_string(req.mz)
    config = _config_from(req.options)
    basis = sector_basis(lattice.n_sites, spin, two_m, cap=config.sector_cap)
    group = build_space_group(lattice)
    orbits = orbit_decomposition(group, basis)
    return schemas.OrbitsResponse(
        lattice=lattice.label(),
        n_sites=lattice.n_sites,
        spin=str(spin),
        mz=twice_to_string(two_m),
        dimension=basis.dim,
        group_order=group.order,
        abstract_group_order=group.abstract_order,
        orbits=[
            schemas.OrbitRow(representative=o.representative.text(), size=o.size)
            for o in orbits
        ],
    )


def run_ground(req: schemas.GroundRequest) -> schemas.GroundResponse:
    lattice = parse_lattice_spec(req.lattice)
    spin = SpinQuantum.from_string(req.spin)
    config = _config_from(req.options)
    params = ModelParams(J=req.J, h=req.h)
    result = ground_state(lattice, spin, params, config=config, method=req.method)
    report = observables(result)

    reference = INFINITE_CHAIN_REFERENCE if lattice.dims == 1 else None
    return schemas.GroundResponse(
        params={"J": req.J, "h": req.h},
        lattice=schemas.LatticeInfo(
            spec=lattice.label(),
            dims=lattice.dims,
            linear_size=lattice.linear_size,
            n_sites=lattice.n_sites,
            n_bonds=lattice.n_bonds,
        ),
        spin=str(spin),
        method=result.method,
        dims=schemas.DimsInfo(
            sector_dim=result.basis.dim,
            symmetric_dim=result.symmetric_dim,
            s0_dim=result.s0_dim,
        ),
        orbit_count=result.orbit_count,
        energy=schemas.EnergyInfo(
            total=result.energy_total,
            per_spin=result.energy_per_spin,
            reference_infinite_chain_per_spin=reference,
        ),
        S=result.spin_label,
        M=result.magnetization_label,
        ground_multiplicity=result.ground_multiplicity,
        amplitudes=result.amplitude_map(),
        observables=schemas.ObservablesInfo(
            bond_correlation={str(r): v for r, v in report.bond_correlation.items()},
            zz_correlation={str(r): v for r, v in report.zz_correlation.items()},
            staggered_m_sq=report.staggered_m_sq,
            sum_rule_residual=report.sum_rule_residual,
        ),
        warnings=result.warnings,
    )


def run_classify(req: schemas.ClassifyRequest) -> schemas.ClassifyResponse:
    lattice = parse_lattice_spec(req.lattice)
    if lattice.dims != 1:
        raise ValueError("classification is defined for chains only")
    spin = SpinQuantum.from_string(req.spin)
    config = _config_from(req.options)
    report = classify_small_chain(lattice.n_sites, spin, ModelParams(J=req.J), config)
    return schemas.ClassifyResponse(
        lattice=lattice.label(),
        n_sites=lattice.n_sites,
        spin=str(spin),
        J=req.J,
        total_states=report.total_states,
        rows=[
            schemas.ClassifyRow(
                theta=row.theta,
                gamma=row.gamma,
                xi=row.xi,
                S=row.spin_label,
                M=row.m_pattern,
                energy=row.energy_formula,
                e0_per_spin=row.e0_per_spin,
                h_coefficient=row.h_coefficient,
                degeneracy_h0=row.degeneracy_h0,
                degeneracy_h=row.degeneracy_h,
            )
            for row in report.rows
        ],
    )


def _grid(start: float, stop: float, step: float) -> list[float]:
    if stop < start:
        raise ValueError("h_stop must be >= h_start")
    count = int(round((stop - start) / step)) + 1
    values = [round(start + k * step, 9) for k in range(count)]
    return [v for v in values if v <= stop + 1e-12]


def run_sweep(req: schemas.SweepRequest) -> schemas.SweepResponse:
    lattice = parse_lattice_spec(req.lattice)
    spin = SpinQuantum.from_string(req.spin)
    config = _config_from(req.options)
    points = field_sweep(lattice, spin, req.J, _grid(req.h_start, req.h_stop, req.h_step), config)
    return schemas.SweepResponse(
        lattice=lattice.label(),
        n_sites=lattice.n_sites,
        spin=str(spin),
        J=req.J,
        rows=[
            schemas.SweepRow(
                h=p.h,
                S=p.spin_label,
                M=p.magnetization_label,
                energy_per_spin=p.energy_per_spin,
                gap_per_spin=p.gap_per_spin,
                degeneracy=p.degeneracy,
            )
            for p in points
        ],
    )


app = FastAPI(title="spinsym", version=__version__)


def _error_response(status: int, code: str, message: str) -> JSONResponse:
    body = schemas.ErrorBody(code=code, message=message)
    return JSONResponse(status_code=status, content={"error": body.model_dump()})


@app.exception_handler(ValueError)
async def _on_value_error(_: Request, exc: ValueError):
    return _error_response(400, "invalid", str(exc))


@app.exception_handler(ResourceCapError)
async def _on_cap_error(_: Request, exc: ResourceCapError):
    return _error_response(413, "resource", str(exc))


@app.exception_handler(ConvergenceError)
async def _on_convergence_error(_: Request, exc: ConvergenceError):
    return _error_response(500, "solver", str(exc))


@app.get("/health", response_model=schemas.HealthResponse)
def health() -> schemas.HealthResponse:
    return schemas.HealthResponse(status="ok", version=__version__)


@app.post("/count", response_model=schemas.CountResponse)
def count(req: schemas.CountRequest) -> schemas.CountResponse:
    return run_count(req)


@app.post("/orbits", response_model=schemas.OrbitsResponse)
def orbits(req: schemas.OrbitsRequest) -> schemas.OrbitsResponse:
    return run_orbits(req)


@app.post("/ground", response_model=schemas.GroundResponse)
def ground(req: schemas.GroundRequest) -> schemas.GroundResponse:
    return run_ground(req)


@app.post("/classify", response_model=schemas.ClassifyResponse)
def classify(req: schemas.ClassifyRequest) -> schemas.ClassifyResponse:
    return run_classify(req)


@app.post("/sweep", response_model=schemas.SweepResponse)
def sweep(req: schemas.SweepRequest) -> schemas.SweepResponse:
    return run_sweep(req)
