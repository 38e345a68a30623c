"""Lattice points of the dilated triangle kT_a.

T_a has vertices (rho_i, rho_i^2). The edge through k*P_i and k*P_j is
y = (rho_i + rho_j) x - k rho_i rho_j; every line value at an integer
abscissa is an irrational element of Q(rho3), so no lattice point sits on
an edge and open/closed conventions agree.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .cubicfield import (
    CubicParams,
    FieldElement,
    compare_int,
    enclosure,
    floor_of,
    ceil_of,
    rho_as_elements,
)
from .errors import BudgetExceeded, RefinementError

METHODS = ("brute", "slice", "closed", "interlace")
DEFAULT_BUDGET = 10**8


def check_k(k) -> int:
    if isinstance(k, bool) or not isinstance(k, int):
        raise TypeError("k must be an integer")
    if k < 1:
        raise ValueError(f"dilation k must be >= 1, got {k}")
    return k


@dataclass(frozen=True)
class EdgeLine:
    params: CubicParams
    k: int
    i: int
    j: int
    slope: FieldElement
    intercept: FieldElement

    def at(self, n) -> FieldElement:
        return self.slope * n + self.intercept


@lru_cache(maxsize=4096)
def edge_line(params: CubicParams, k: int, i: int, j: int) -> EdgeLine:
    check_k(k)
    if i == j or {i, j} - {1, 2, 3}:
        raise ValueError(f"edge indices must be distinct elements of {{1,2,3}}, got ({i}, {j})")
    i, j = min(i, j), max(i, j)
    rho = rho_as_elements(params)
    ri, rj = rho[i - 1], rho[j - 1]
    return EdgeLine(params, k, i, j, ri + rj, -k * (ri * rj))


def line_floor(line: EdgeLine, n: int) -> int:
    value = line.at(n)
    if value.is_rational():
        raise RefinementError(
            f"edge l{line.i}{line.j} is rational at n={n} (a={line.params.a}, k={line.k})"
        )
    return floor_of(value)


def x_range(params: CubicParams, k: int) -> tuple[int, int]:
    """Integer abscissae spanned by kT_a: (ceil(k rho1), floor(k rho3))."""
    check_k(k)
    rho1, _, rho3 = rho_as_elements(params)
    return ceil_of(k * rho1), floor_of(k * rho3)


def _lower_edge(params: CubicParams, k: int, x: int) -> tuple[FieldElement, FieldElement]:
    l12 = edge_line(params, k, 1, 2).at(x)
    l23 = edge_line(params, k, 2, 3).at(x)
    return l12, l23


def point_in_triangle(params: CubicParams, k: int, x: int, y: int) -> bool:
    """Closed membership: y <= l13(x), y >= l12(x), y >= l23(x)."""
    check_k(k)
    l13 = edge_line(params, k, 1, 3).at(x)
    l12, l23 = _lower_edge(params, k, x)
    return (
        compare_int(l13, y) >= 0
        and compare_int(l12, y) <= 0
        and compare_int(l23, y) <= 0
    )


def slice_count(params: CubicParams, k: int, n: int) -> int:
    """Lattice points of kT_a on x = n as a difference of edge floors."""
    xmin, xmax = x_range(params, k)
    if n < xmin or n > xmax:
        return 0
    top = line_floor(edge_line(params, k, 1, 3), n)
    bottom = edge_line(params, k, 1, 2) if n <= -1 else edge_line(params, k, 2, 3)
    return max(top - line_floor(bottom, n), 0)


@dataclass(frozen=True)
class CountResult:
    params: CubicParams
    k: int
    count: int
    method: str
    elapsed_ns: int = 0

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("count must be nonnegative")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")

    @property
    def a(self) -> int:
        return self.params.a

    @property
    def in_theorem_domain(self) -> bool:
        return self.k <= self.params.a

    @property
    def elapsed(self) -> float:
        return self.elapsed_ns / 1e9


@dataclass(frozen=True)
class SliceProfile:
    params: CubicParams
    k: int
    counts: dict[int, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def csv_rows(self) -> list[tuple[int, int]]:
        return sorted(self.counts.items())

    def to_csv(self) -> str:
        lines = ["n,count"] + [f"{n},{c}" for n, c in self.csv_rows()]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({str(n): c for n, c in self.csv_rows()})

    @classmethod
    def from_json(cls, params: CubicParams, k: int, text: str) -> SliceProfile:
        return cls(params, k, {int(n): int(c) for n, c in json.loads(text).items()})


def count_by_slicing(params: CubicParams, k: int) -> tuple[CountResult, SliceProfile]:
    check_k(k)
    t0 = time.perf_counter_ns()
    xmin, xmax = x_range(params, k)
    top = edge_line(params, k, 1, 3)
    left = edge_line(params, k, 1, 2)
    right = edge_line(params, k, 2, 3)
    counts = {}
    for n in range(xmin, xmax + 1):
        bottom = left if n <= -1 else right
        counts[n] = max(line_floor(top, n) - line_floor(bottom, n), 0)
    profile = SliceProfile(params, k, counts)
    elapsed = time.perf_counter_ns() - t0
    return CountResult(params, k, profile.total, "slice", elapsed), profile


def estimated_points(params: CubicParams, k: int) -> Fraction:
    return Fraction(k * k * params.sqrt_discriminant, 2)


def lattice_points(params: CubicParams, k: int, budget: int = DEFAULT_BUDGET):
    """Yield every (x, y) in kT_a by exhaustive candidate testing.

    For each abscissa in the x-range, candidates y = 0 .. ub are tested
    against all three half-planes, ub being read off a rational
    over-approximation of the top edge. The triangle lies in y > 0.
    """
    check_k(k)
    if estimated_points(params, k) > budget:
        raise BudgetExceeded(
            f"brute force for a={params.a}, k={k} expects ~{float(estimated_points(params, k)):.3g} "
            f"points, budget is {budget}"
        )
    xmin, xmax = x_range(params, k)
    top = edge_line(params, k, 1, 3)
    for x in range(xmin, xmax + 1):
        upper = top.at(x)
        l12, l23 = _lower_edge(params, k, x)
        _, hi = enclosure(upper, 16)
        ub = hi.numerator // hi.denominator
        for y in range(0, ub + 1):
            if (
                compare_int(upper, y) >= 0
                and compare_int(l12, y) <= 0
                and compare_int(l23, y) <= 0
            ):
                yield x, y


def brute_force_count(params: CubicParams, k: int, budget: int = DEFAULT_BUDGET) -> CountResult:
    t0 = time.perf_counter_ns()
    count = sum(1 for _ in lattice_points(params, k, budget))
    return CountResult(params, k, count, "brute", time.perf_counter_ns() - t0)


def volume(params: CubicParams) -> Fraction:
    """Area of T_a, (a^2 + 3a + 9) / 2."""
    return Fraction(params.sqrt_discriminant, 2)


def discrepancy(params: CubicParams, k: int, count: int) -> Fraction:
    return count - k * k * volume(params)
