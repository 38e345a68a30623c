"""Integral quadratics k x^2 + n1 x + n2 interlacing f_a.

g interlaces f_a when rho1 < gamma1 < rho2 < gamma2 < rho3, which for k > 0
is the sign pattern (+, -, +) of g at (rho1, rho2, rho3). The affine map
(x, y) -> (x - k a, y - a x - k (a+3)) is unimodular and sends kT_a onto the
region of such (n1, n2): under it g(rho_i) = y - l_jk(x), where l_jk is the
edge opposite vertex i.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .cubicfield import (
    CubicParams,
    FieldElement,
    ceil_of,
    compare_int,
    floor_of,
    rho_as_elements,
    sign,
)
from .errors import BudgetExceeded, RefinementError
from .triangle import DEFAULT_BUDGET, CountResult, check_k


@dataclass(frozen=True)
class QuadraticPoly:
    k: int
    n1: int
    n2: int

    def __post_init__(self):
        check_k(self.k)

    def at(self, x):
        return (self.k * x + self.n1) * x + self.n2


def _rho_powers(params: CubicParams) -> list[tuple[FieldElement, FieldElement]]:
    return [(r, r * r) for r in rho_as_elements(params)]


def _g_at(g: QuadraticPoly, r: FieldElement, r2: FieldElement) -> FieldElement:
    return r2 * g.k + r * g.n1 + g.n2


def interlaces(params: CubicParams, g: QuadraticPoly) -> bool:
    expected = (1, -1, 1)
    for (r, r2), want in zip(_rho_powers(params), expected):
        s = sign(_g_at(g, r, r2))
        if s == 0:
            # g(rho_i) = 0 would make rho_i quadratic over Q
            raise RefinementError(f"{g} vanishes at a root of f_a (a={params.a})")
        if s != want:
            return False
    return True


def coeffs_from_point(params: CubicParams, k: int, x: int, y: int) -> tuple[int, int]:
    a = params.a
    return x - k * a, y - a * x - k * (a + 3)


def point_from_coeffs(params: CubicParams, k: int, n1: int, n2: int) -> tuple[int, int]:
    a = params.a
    x = n1 + k * a
    return x, n2 + a * x + k * (a + 3)


def coefficient_vertices(params: CubicParams, k: int) -> list[tuple[FieldElement, FieldElement]]:
    """(-k(rho_i+rho_j), k rho_i rho_j) for the three pairs, i.e. g = k(x-rho_i)(x-rho_j)."""
    rho = rho_as_elements(params)
    out = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        out.append((-k * (rho[i] + rho[j]), k * (rho[i] * rho[j])))
    return out


def coefficient_box(params: CubicParams, k: int) -> tuple[int, int, int, int]:
    verts = coefficient_vertices(params, k)
    n1_lo = min(ceil_of(v[0]) for v in verts)
    n1_hi = max(floor_of(v[0]) for v in verts)
    n2_lo = min(ceil_of(v[1]) for v in verts)
    n2_hi = max(floor_of(v[1]) for v in verts)
    return n1_lo, n1_hi, n2_lo, n2_hi


def interlacing_polys(params: CubicParams, k: int, budget: int = DEFAULT_BUDGET):
    """Yield every interlacing QuadraticPoly with leading coefficient k."""
    check_k(k)
    n1_lo, n1_hi, n2_lo, n2_hi = coefficient_box(params, k)
    size = max(n1_hi - n1_lo + 1, 0) * max(n2_hi - n2_lo + 1, 0)
    if size > budget:
        raise BudgetExceeded(
            f"interlacing box for a={params.a}, k={k} has {size} candidates, budget is {budget}"
        )
    powers = _rho_powers(params)
    (r1, s1), (r2, s2), (r3, s3) = powers
    for n1 in range(n1_lo, n1_hi + 1):
        # g(rho_i) - n2 does not depend on n2
        parts = [s1 * k + r1 * n1, s2 * k + r2 * n1, s3 * k + r3 * n1]
        for n2 in range(n2_lo, n2_hi + 1):
            g = QuadraticPoly(k, n1, n2)
            ok = True
            for part, want in zip(parts, (1, -1, 1)):
                s = compare_int(part, -n2)
                if s == 0:
                    raise RefinementError(f"{g} vanishes at a root of f_a (a={params.a})")
                if s != want:
                    ok = False
                    break
            if ok:
                yield g


def count_interlacing(params: CubicParams, k: int, budget: int = DEFAULT_BUDGET) -> CountResult:
    t0 = time.perf_counter_ns()
    count = sum(1 for _ in interlacing_polys(params, k, budget))
    return CountResult(params, k, count, "interlace", time.perf_counter_ns() - t0)


def write_csv(polys, fh) -> None:
    fh.write("k,n1,n2\n")
    for g in polys:
        fh.write(f"{g.k},{g.n1},{g.n2}\n")
