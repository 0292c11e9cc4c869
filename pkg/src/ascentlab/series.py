"""Series containers: exact integer coefficient series and fixed-precision real series.

Counting series are indexed by sequence length starting at 1; the length-0
count is 1 by convention but lives outside the container (see LENGTH_ZERO_COUNT).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

# Number of objects of length 0 (the empty sequence), kept outside the series.
LENGTH_ZERO_COUNT = 1

# Default working precision in decimal digits for derived real series.
DEFAULT_DPS = 60


@dataclass
class CoefficientSeries:
    """Exact big-integer counts c_n for n = first_index, first_index+1, ..."""

    values: list
    first_index: int = 1

    def __post_init__(self):
        self.values = [int(v) for v in self.values]

    def __len__(self):
        return len(self.values)

    @property
    def last_index(self):
        return self.first_index + len(self.values) - 1

    def indices(self):
        return range(self.first_index, self.last_index + 1)

    def at(self, n: int) -> int:
        """Value at absolute index n."""
        if not self.first_index <= n <= self.last_index:
            raise IndexError(f"index {n} outside [{self.first_index}, {self.last_index}]")
        return self.values[n - self.first_index]

    def truncate(self, n: int) -> "CoefficientSeries":
        """Prefix through absolute index n."""
        if n < self.first_index:
            raise IndexError(f"cannot truncate below first index {self.first_index}")
        return CoefficientSeries(self.values[: n - self.first_index + 1], self.first_index)

    def check_count_invariants(self):
        """Invariants for pattern-avoider counting series."""
        if self.first_index != 1:
            raise ValueError("counting series start at length 1")
        if any(v < 1 for v in self.values):
            raise ValueError("counting series values must be >= 1")
        if self.values and self.values[0] != 1:
            raise ValueError("count at length 1 must be 1")
        return self


@dataclass
class RealSeries:
    """Arbitrary-precision real values aligned with absolute indices.

    `dps` records the decimal precision the values were computed at; derived
    series inherit the minimum precision of their inputs.
    """

    values: list
    first_index: int = 1
    dps: int = DEFAULT_DPS

    def __len__(self):
        return len(self.values)

    @property
    def last_index(self):
        return self.first_index + len(self.values) - 1

    def indices(self):
        return range(self.first_index, self.last_index + 1)

    def at(self, n: int):
        if not self.first_index <= n <= self.last_index:
            raise IndexError(f"index {n} outside [{self.first_index}, {self.last_index}]")
        return self.values[n - self.first_index]

    def tail(self, count: int) -> "RealSeries":
        count = min(count, len(self.values))
        return RealSeries(self.values[-count:], self.last_index - count + 1, self.dps)


def working_dps(*series, dps=None):
    """Precision to compute at: explicit override or the minimum of the inputs."""
    if dps is not None:
        return dps
    found = [s.dps for s in series if isinstance(s, RealSeries)]
    return min(found) if found else DEFAULT_DPS


def to_mpf(value, dps):
    """Convert an int/Fraction/float/mpf to mpf at the given precision."""
    with mpmath.workdps(dps):
        if isinstance(value, Fraction):
            return mpmath.mpf(value.numerator) / mpmath.mpf(value.denominator)
        return mpmath.mpf(value)
