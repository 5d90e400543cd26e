"""Real symmetric eigenproblems: dense solves, Lanczos, degeneracy grouping.

The dense path hands square matrices below a configurable cap to LAPACK
(numpy.linalg.eigh).  Large sparse sectors use a hand-rolled Lanczos with
full reorthogonalization of the Krylov basis and a deterministic, seeded
start vector, so runs are bit-reproducible and ghost eigenvalues cannot
appear at the dimensions treated here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import ConvergenceError, DenseCapError
from .operators import SparseSymmetricMatrix

DEFAULT_DENSE_CAP = 4000
DEFAULT_DEGENERACY_TOL = 1e-9


@dataclass(eq=False)
class SpectrumEntry:
    """An eigenvalue with its eigenvectors and optional quantum labels."""

    eigenvalue: float
    multiplicity: int
    vectors: np.ndarray  # (dim, multiplicity), orthonormal columns
    labels: dict = field(default_factory=dict)


def dense_symmetric_eig(
    matrix: SparseSymmetricMatrix | np.ndarray,
    dense_cap: int = DEFAULT_DENSE_CAP,
    check_residuals: bool = False,
) -> list[SpectrumEntry]:
    """All eigenpairs of a real symmetric matrix, ascending, ungrouped.

    Refuses above `dense_cap` with DenseCapError so callers switch to the
    iterative path.  With `check_residuals` every pair is verified to satisfy
    ||A v - w v|| <= 1e-10 ||A||.
    """
    dense = matrix.to_dense() if isinstance(matrix, SparseSymmetricMatrix) else np.asarray(matrix, dtype=float)
    if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
        raise ValueError("matrix must be square")
    n = dense.shape[0]
    if n > dense_cap:
        raise DenseCapError(
            f"dimension {n} exceeds dense cap {dense_cap}; use lanczos_ground"
        )
    w, V = np.linalg.eigh(dense)
    if check_residuals:
        norm = float(np.linalg.norm(dense, 2)) if n else 0.0
        resid = np.linalg.norm(dense @ V - V * w, axis=0)
        if np.any(resid > 1e-10 * max(norm, 1e-300)):
            raise RuntimeError(f"eigenpair residual {resid.max():.3e} above tolerance")
    return [SpectrumEntry(float(w[k]), 1, V[:, k : k + 1]) for k in range(n)]


def group_degeneracies(
    entries: Sequence[SpectrumEntry], tol: float = DEFAULT_DEGENERACY_TOL
) -> list[SpectrumEntry]:
    """Merge consecutive eigenvalues within an absolute tolerance.

    Eigenvectors of each merged level are re-orthonormalized (QR) so the
    grouped entry carries an orthonormal basis of the eigenspace.
    """
    values = [e.eigenvalue for e in entries]
    if any(values[k] > values[k + 1] + tol for k in range(len(values) - 1)):
        raise ValueError("entries must be in ascending eigenvalue order")
    out: list[SpectrumEntry] = []
    start = 0
    while start < len(entries):
        stop = start + 1
        while stop < len(entries) and entries[stop].eigenvalue - entries[stop - 1].eigenvalue <= tol:
            stop += 1
        block = entries[start:stop]
        vectors = np.hstack([e.vectors for e in block])
        q, _ = np.linalg.qr(vectors)
        value = float(np.mean([e.eigenvalue for e in block for _ in range(e.multiplicity)]))
        out.append(SpectrumEntry(value, vectors.shape[1], q))
        start = stop
    return out


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return z ^ (z >> 31)


def _seed_vector(dim: int, seed: int) -> np.ndarray:
    """Deterministic start vector: entry i is a hash of (seed, i) in (-1, 1)."""
    state = _splitmix64(seed & 0xFFFFFFFFFFFFFFFF)
    out = np.empty(dim)
    for i in range(dim):
        out[i] = _splitmix64(state ^ (i + 1)) / 2.0**63 - 1.0
    return out


def lanczos_ground(
    operator: Callable[[np.ndarray], np.ndarray],
    dim: int,
    seed: int = 0,
    tol: float = 1e-8,
    max_iter: int = 500,
) -> tuple[float, np.ndarray]:
    """Smallest eigenpair of a symmetric operator given as vector -> vector.

    Full reorthogonalization keeps the Krylov basis orthonormal; iteration
    stops when the Ritz residual drops below tol * ||A||_est (Gershgorin
    estimate from the tridiagonal projection) or the Krylov space becomes
    invariant.  Deterministic for a fixed seed.  Raises ConvergenceError
    with the best residual after max_iter steps.
    """
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    first = np.zeros(dim)
    first[0] = 1.0
    if dim == 1:
        return float(operator(first)[0]), first

    steps = min(max_iter, dim)
    Q = np.zeros((steps, dim))
    alphas: list[float] = []
    betas: list[float] = []

    q = _seed_vector(dim, seed)
    q /= np.linalg.norm(q)
    Q[0] = q
    w = operator(q)
    alpha = float(q @ w)
    alphas.append(alpha)
    w = w - alpha * q

    best_residual = np.inf
    for k in range(1, steps + 1):
        # Full reorthogonalization, two classical Gram-Schmidt passes.
        for _ in range(2):
            w -= Q[:k].T @ (Q[:k] @ w)
        beta = float(np.linalg.norm(w))

        theta, y = eigh_tridiagonal(alphas, betas, select="i", select_range=(0, 0))
        ground = float(theta[0])
        bottom = float(y[-1, 0])
        anorm = max(
            abs(alphas[t]) + (betas[t - 1] if t > 0 else 0.0) + (betas[t] if t < len(betas) else 0.0)
            for t in range(len(alphas))
        )
        anorm = max(anorm, 1e-300)
        residual = beta * abs(bottom)
        best_residual = min(best_residual, residual)
        invariant = beta <= 1e-14 * anorm
        if residual <= tol * anorm or invariant or k == dim:
            vector = Q[:k].T @ y[:, 0]
            vector /= np.linalg.norm(vector)
            return ground, vector
        if k == steps:
            break

        q = w / beta
        Q[k] = q
        w = operator(q)
        alpha = float(q @ w)
        alphas.append(alpha)
        betas.append(beta)
        w = w - alpha * q - beta * Q[k - 1]

    raise ConvergenceError(
        f"Lanczos did not reach tolerance {tol} in {max_iter} iterations "
        f"(best residual {best_residual:.3e})",
        best_residual=best_residual,
    )
