"""Change-point set representation.

A change-point tau is the number of observations in everything up to and
including the left segment's last point, so segment j covers the Python
slice y[tau_{j-1}:tau_j] with tau_0 = 0 and tau_{k+1} = n.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidInputError


@dataclass(frozen=True)
class ChangePointSet:
    n: int
    cps: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInputError("series length must be >= 1")
        cps = tuple(int(c) for c in self.cps)
        object.__setattr__(self, "cps", cps)
        if any(not (0 < c < self.n) for c in cps):
            raise InvalidInputError("change-points must be interior: 0 < tau < n")
        if any(b <= a for a, b in zip(cps, cps[1:])):
            raise InvalidInputError("change-points must be strictly increasing")

    @property
    def k(self) -> int:
        return len(self.cps)

    def boundaries(self) -> tuple[int, ...]:
        """(0, tau_1, ..., tau_k, n)."""
        return (0, *self.cps, self.n)

    def segments(self) -> list[tuple[int, int]]:
        """Half-open (start, end) index pairs tiling [0, n)."""
        b = self.boundaries()
        return list(zip(b[:-1], b[1:]))

    def __iter__(self):
        return iter(self.cps)

    def __len__(self):
        return len(self.cps)
