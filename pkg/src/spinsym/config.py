"""Run-wide caps and tolerances.

Every limit that decides between "solve" and "refuse" lives here so that the
CLI and the service can override them uniformly.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class SolverConfig:
    # Refuse to enumerate sectors above this many states.
    sector_cap: int = 20_000_000
    # Largest matrix dimension handled by the dense eigensolver.
    dense_cap: int = 4000
    # Absolute tolerance for merging eigenvalues into one degenerate level.
    degeneracy_tol: float = 1e-9
    # Eigenvalues of the total-spin-square operator below this are taken as S=0.
    s0_tol: float = 1e-6
    # Lanczos: relative residual target, iteration limit, start-vector seed.
    lanczos_tol: float = 1e-8
    lanczos_max_iter: int = 500
    seed: int = 0
    # Worker/BLAS thread bound; None leaves the environment untouched.
    threads: int | None = None

    def with_overrides(self, **kwargs) -> "SolverConfig":
        """Return a copy with the non-None entries of kwargs applied."""
        known = {f.name for f in fields(self)}
        updates = {}
        for key, value in kwargs.items():
            if key not in known:
                raise ValueError(f"unknown config key: {key}")
            if value is not None:
                updates[key] = value
        return replace(self, **updates) if updates else self


DEFAULT_CONFIG = SolverConfig()
