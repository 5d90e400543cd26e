"""Fixed-magnetization sectors: counting, enumeration, ranking.

A product state of N spins s is a digit string (n_0, ..., n_{N-1}) with
n_i in {0, ..., 2s}; site i carries the z projection m_i = n_i - s.  Site 0
is the most significant digit, so lexicographic order on digit strings equals
numeric order of the packed base-(2s+1) codes.  Spin and magnetization are
stored doubled (two_s = 2s, two_m = 2M) so half-integer values stay exact;
no floating point enters any of the counting routines.

The sector L_M collects every configuration with sum_i m_i = M.  Its
dimension is the sum of multinomial coefficients N!/(n_0! ... n_{2s}!) over
all occupation decompositions (n_0, ..., n_{2s}) with sum n_i = N and
sum n_i (i - s) = M; for s = 1/2 this reduces to the binomial C(N, N/2 + M).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import SectorCapError

DEFAULT_SECTOR_CAP = 20_000_000


def twice_from_string(text: str) -> int:
    """Parse an integer or half-integer ("1", "1/2", "-3/2") into 2x."""
    value = Fraction(str(text).strip())
    doubled = 2 * value
    if doubled.denominator != 1:
        raise ValueError(f"not an integer or half-integer: {text!r}")
    return int(doubled)


def twice_to_string(two_x: int) -> str:
    """Inverse of twice_from_string: 2x -> "x" with exact halves."""
    return str(two_x // 2) if two_x % 2 == 0 else f"{two_x}/2"


@dataclass(frozen=True)
class SpinQuantum:
    """Single-site spin s, stored doubled so s = 1/2, 1, 3/2, ... are exact."""

    two_s: int

    def __post_init__(self):
        if self.two_s < 1:
            raise ValueError("spin must be at least 1/2 (two_s >= 1)")

    @property
    def site_dim(self) -> int:
        return self.two_s + 1

    @classmethod
    def from_string(cls, text: str) -> "SpinQuantum":
        return cls(twice_from_string(text))

    def __str__(self) -> str:
        return twice_to_string(self.two_s)


@dataclass(frozen=True, order=True)
class SpinConfiguration:
    """One product basis state, encoded as per-site digits n_i = m_i + s.

    Ordering compares the digit tuples, i.e. lexicographic with site 0 most
    significant.
    """

    digits: tuple[int, ...]
    two_s: int

    def __post_init__(self):
        if self.two_s < 1:
            raise ValueError("two_s must be >= 1")
        if len(self.digits) == 0:
            raise ValueError("empty configuration")
        if any(d < 0 or d > self.two_s for d in self.digits):
            raise ValueError(f"digits must lie in [0, {self.two_s}]")

    @property
    def n_sites(self) -> int:
        return len(self.digits)

    @property
    def two_m(self) -> int:
        """Doubled total magnetization 2M = sum_i (2 n_i - 2s)."""
        return 2 * sum(self.digits) - self.n_sites * self.two_s

    def code(self) -> int:
        """Packed base-(2s+1) integer; site 0 is the most significant digit."""
        base = self.two_s + 1
        value = 0
        for d in self.digits:
            value = value * base + d
        return value

    def text(self) -> str:
        """External text form: '+'/'-' for s=1/2, comma-separated digits else."""
        if self.two_s == 1:
            return "".join("+" if d else "-" for d in self.digits)
        return ",".join(str(d) for d in self.digits)

    @classmethod
    def parse(cls, text: str, two_s: int) -> "SpinConfiguration":
        text = text.strip()
        if two_s == 1:
            bad = set(text) - {"+", "-"}
            if bad:
                raise ValueError(f"spin-1/2 configurations use '+'/'-' only, got {text!r}")
            return cls(tuple(1 if ch == "+" else 0 for ch in text), two_s)
        return cls(tuple(int(part) for part in text.split(",")), two_s)


@dataclass(frozen=True)
class Composition:
    """Occupation counts (n_0, ..., n_{2s}): n_i sites hold digit i."""

    counts: tuple[int, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.counts):
            raise ValueError("occupation counts must be nonnegative")

    @property
    def total(self) -> int:
        return sum(self.counts)


def multinomial(n: int, counts: Composition | Sequence[int]) -> int:
    """Exact multinomial coefficient n! / prod(counts_i!).

    Raises ValueError unless the counts sum to n.  Arbitrary precision.
    """
    values = counts.counts if isinstance(counts, Composition) else tuple(counts)
    if any(c < 0 for c in values):
        raise ValueError("occupation counts must be nonnegative")
    if sum(values) != n:
        raise ValueError(f"counts sum to {sum(values)}, expected {n}")
    out = 1
    remaining = n
    for c in values:
        out *= math.comb(remaining, c)
        remaining -= c
    return out


def compositions(n_sites: int, spin: SpinQuantum, two_m: int) -> Iterator[Composition]:
    """All occupation decompositions of the sector (N, s, M).

    Yields every (n_0, ..., n_{2s}) with sum n_i = N and doubled magnetization
    sum n_i (2i - 2s) = 2M, pruning branches that cannot reach the target.
    """
    two_s = spin.two_s

    def descend(digit: int, left: int, target: int, acc: tuple[int, ...]):
        if digit == two_s:
            # Only the maximal digit remains; its weight is +two_s per site.
            if left * two_s == target:
                yield Composition(acc + (left,))
            return
        weight = 2 * digit - two_s
        next_min = 2 * (digit + 1) - two_s
        for c in range(left + 1):
            rest = left - c
            t = target - c * weight
            if rest * next_min <= t <= rest * two_s:
                yield from descend(digit + 1, rest, t, acc + (c,))

    if abs(two_m) > n_sites * two_s:
        return
    if (two_m - n_sites * two_s) % 2 != 0:
        return
    yield from descend(0, n_sites, two_m, ())


def sector_dimension(n_sites: int, spin: SpinQuantum, two_m: int) -> int:
    """dim L_M as the exact sum of multinomials; 0 for infeasible M."""
    if n_sites < 1:
        raise ValueError("n_sites must be positive")
    return sum(multinomial(n_sites, comp) for comp in compositions(n_sites, spin, two_m))


@dataclass(frozen=True)
class MagnetizationSector:
    """The subspace of all configurations with fixed total magnetization."""

    n_sites: int
    spin: SpinQuantum
    two_m: int
    dimension: int


def magnetization_sector(n_sites: int, spin: SpinQuantum, two_m: int) -> MagnetizationSector:
    return MagnetizationSector(n_sites, spin, two_m, sector_dimension(n_sites, spin, two_m))


@lru_cache(maxsize=None)
def _suffix_counts(two_s: int, length: int) -> tuple[dict[int, int], ...]:
    """tables[k][t] = number of k-digit strings with doubled magnetization t."""
    tables: list[dict[int, int]] = [{0: 1}]
    for _ in range(length):
        prev = tables[-1]
        cur: dict[int, int] = {}
        for t, count in prev.items():
            for d in range(two_s + 1):
                t2 = t + 2 * d - two_s
                cur[t2] = cur.get(t2, 0) + count
        tables.append(cur)
    return tuple(tables)


def _iter_sector_digits(n_sites: int, two_s: int, two_m: int) -> Iterator[tuple[int, ...]]:
    """Digit tuples of the sector in strictly increasing lexicographic order."""
    if abs(two_m) > n_sites * two_s or (two_m - n_sites * two_s) % 2 != 0:
        return

    prefix: list[int] = []

    def rec(pos: int, target: int) -> Iterator[tuple[int, ...]]:
        if pos == n_sites:
            yield tuple(prefix)
            return
        rest = n_sites - pos - 1
        for d in range(two_s + 1):
            t = target - (2 * d - two_s)
            if abs(t) <= rest * two_s and (t + rest * two_s) % 2 == 0:
                prefix.append(d)
                yield from rec(pos + 1, t)
                prefix.pop()

    yield from rec(0, two_m)


def enumerate_sector(
    n_sites: int,
    spin: SpinQuantum,
    two_m: int,
    cap: int = DEFAULT_SECTOR_CAP,
) -> list[SpinConfiguration]:
    """All sector configurations in lexicographic order.

    Refuses with SectorCapError when the sector dimension exceeds the cap so
    callers fail predictably instead of exhausting memory.
    """
    dim = sector_dimension(n_sites, spin, two_m)
    if dim > cap:
        raise SectorCapError(f"sector dimension {dim} exceeds cap {cap}")
    return [
        SpinConfiguration(digits, spin.two_s)
        for digits in _iter_sector_digits(n_sites, spin.two_s, two_m)
    ]


@dataclass(frozen=True, eq=False)
class SectorBasis:
    """Array-backed sector basis for matrix work.

    Rows of `digits` are the configurations in lexicographic order; `codes`
    holds the matching packed integers (strictly ascending), and `weights`
    the base-(2s+1) place values, so raising site i by one adds weights[i]
    to the code.
    """

    n_sites: int
    spin: SpinQuantum
    two_m: int
    digits: np.ndarray
    codes: np.ndarray
    weights: np.ndarray

    @property
    def dim(self) -> int:
        return self.codes.shape[0]

    def sector(self) -> MagnetizationSector:
        return MagnetizationSector(self.n_sites, self.spin, self.two_m, self.dim)

    def config(self, index: int) -> SpinConfiguration:
        return SpinConfiguration(tuple(int(d) for d in self.digits[index]), self.spin.two_s)

    def index_of_codes(self, codes: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.codes, codes)
        if np.any(idx >= self.dim) or np.any(self.codes[np.minimum(idx, self.dim - 1)] != codes):
            raise ValueError("code not present in sector")
        return idx

    def index_of(self, config: SpinConfiguration) -> int:
        if config.two_s != self.spin.two_s or config.n_sites != self.n_sites:
            raise ValueError("configuration does not match the sector shape")
        code = config.code()
        idx = int(np.searchsorted(self.codes, code))
        if idx >= self.dim or int(self.codes[idx]) != code:
            raise ValueError("configuration not in sector")
        return idx


def sector_basis(
    n_sites: int,
    spin: SpinQuantum,
    two_m: int,
    cap: int = DEFAULT_SECTOR_CAP,
) -> SectorBasis:
    """Materialize the sector as digit/code arrays (lexicographic order)."""
    dim = sector_dimension(n_sites, spin, two_m)
    if dim > cap:
        raise SectorCapError(f"sector dimension {dim} exceeds cap {cap}")
    rows = list(_iter_sector_digits(n_sites, spin.two_s, two_m))
    digits = np.array(rows, dtype=np.uint8).reshape(dim, n_sites)
    base = spin.two_s + 1
    weights = base ** np.arange(n_sites - 1, -1, -1, dtype=np.int64)
    codes = digits.astype(np.int64) @ weights
    return SectorBasis(n_sites, spin, two_m, digits, codes, weights)


def rank(config: SpinConfiguration, sector: MagnetizationSector) -> int:
    """Lexicographic index of `config` inside its sector."""
    spin = sector.spin
    if config.two_s != spin.two_s or config.n_sites != sector.n_sites:
        raise ValueError("configuration does not match the sector shape")
    if config.two_m != sector.two_m:
        raise ValueError("configuration not in sector (wrong magnetization)")
    tables = _suffix_counts(spin.two_s, sector.n_sites)
    index = 0
    target = sector.two_m
    for pos, d in enumerate(config.digits):
        rest = sector.n_sites - pos - 1
        for lower in range(d):
            index += tables[rest].get(target - (2 * lower - spin.two_s), 0)
        target -= 2 * d - spin.two_s
    return index


def unrank(index: int, sector: MagnetizationSector) -> SpinConfiguration:
    """Inverse of rank: the index-th configuration of the sector."""
    if not 0 <= index < sector.dimension:
        raise IndexError(f"index {index} out of range for dimension {sector.dimension}")
    spin = sector.spin
    tables = _suffix_counts(spin.two_s, sector.n_sites)
    digits: list[int] = []
    target = sector.two_m
    remaining = index
    for pos in range(sector.n_sites):
        rest = sector.n_sites - pos - 1
        for d in range(spin.two_s + 1):
            count = tables[rest].get(target - (2 * d - spin.two_s), 0)
            if remaining < count:
                digits.append(d)
                target -= 2 * d - spin.two_s
                break
            remaining -= count
        else:
            raise AssertionError("unrank walked off the digit table")
    return SpinConfiguration(tuple(digits), spin.two_s)
