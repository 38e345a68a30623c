"""Closed-form lattice count, piecewise edge floors and their sums.

The piecewise tables give floor(l13(n)), floor(l12(n)), floor(l23(n)) as an
integer linear part plus a step offset, valid for a >= 34 and k <= a, where
rho3 = a + 1 + delta is pinned down by rational bounds on delta. Below
a = 34 they are not claimed and the functions refuse to run.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

from .cubicfield import CubicParams, eval_fa
from .errors import DomainError
from .triangle import check_k

LEMMA_MIN_A = 34


def eta(a: int, k: int) -> int:
    """1 if k > a/2 else 0."""
    return int(2 * k > a)


def eps(k: int) -> int:
    return k - 2 * (k // 2)


def theta(k: int) -> Fraction:
    check_k(k)
    return Fraction(1) if k % 2 == 0 else Fraction(-1, 2)


def theorem_count(params: CubicParams, k: int) -> int:
    """k^2 (a^2+3a+9)/2 + theta(k); integral since a^2+3a+9 is odd."""
    check_k(k)
    if k > params.a:
        raise DomainError(f"closed form needs k <= a (a={params.a}, k={k})")
    value = Fraction(k * k * params.sqrt_discriminant, 2) + theta(k)
    assert value.denominator == 1
    return value.numerator


def _check_lemma_domain(params: CubicParams, k: int) -> None:
    check_k(k)
    if params.a < LEMMA_MIN_A:
        raise DomainError(f"floor tables need a >= {LEMMA_MIN_A}, got a={params.a}")
    if k > params.a:
        raise DomainError(f"floor tables need k <= a (a={params.a}, k={k})")


@dataclass(frozen=True)
class Branch:
    lo: int
    hi: int
    offset: int
    label: str

    def __contains__(self, n: int) -> bool:
        return self.lo <= n <= self.hi

    @property
    def empty(self) -> bool:
        return self.hi < self.lo


@dataclass(frozen=True)
class PiecewiseSpec:
    """Breakpoints of one edge's floor table.

    For the top edge the base value is a*n + C, for the right edge g*n + n_star;
    each branch adds a constant offset. The left edge has no g/C/n_star and
    uses only k.
    """

    which: str
    a: int
    k: int
    g: int
    C: int
    n_star: int
    n_star_upper: int
    eta: int
    eps_k: int

    @property
    def start(self) -> int:
        return -self.k if self.which in ("top", "left") else 0

    @property
    def end(self) -> int:
        return -1 if self.which == "left" else self.k * (self.a + 1) + self.eta

    def base(self, n: int) -> int:
        if self.which == "top":
            return self.a * n + self.C
        if self.which == "right":
            return self.g * n + self.n_star
        return -n

    def branches(self) -> list[Branch]:
        return list(self._branches)

    @cached_property
    def _branches(self) -> tuple[Branch, ...]:
        """Branches clipped to [start, end]; empty families contribute nothing."""
        k, g, lo_star, hi_star = self.k, self.g, self.n_star, self.n_star_upper
        fk, ck = k // 2, (k + 1) // 2
        if self.which == "left":
            raw = [Branch(-k, -fk - 1, 0, "base"), Branch(-fk, -1, -1, "near")]
        else:
            # top: i-steps run to floor(k/2), j-steps to ceil(k/2)-1;
            # right: the other way round
            first, second = (fk, ck) if self.which == "top" else (ck, fk)
            raw = [Branch(self.start, lo_star, 0, "base")]
            raw += [
                Branch(lo_star + (i - 1) * g + 1, lo_star + i * g, i, f"i={i}")
                for i in range(1, first + 1)
            ]
            raw.append(Branch(hi_star, hi_star, first, "n^*"))
            raw += [
                Branch(hi_star + (j - 1) * g + 1, hi_star + j * g, first + j, f"j={j}")
                for j in range(1, second)
            ]
            # for k = 1 on the right edge the stated start n^* - g + 1 would
            # re-cover the i=1 range; nothing follows n^* there
            last = max(hi_star + (second - 1) * g + 1, hi_star + 1)
            raw.append(Branch(last, self.end, k, "last"))
        out = []
        for b in raw:
            lo, hi = max(b.lo, self.start), min(b.hi, self.end)
            out.append(Branch(lo, hi, b.offset, b.label))
        return tuple(b for b in out if not b.empty)

    @cached_property
    def _starts(self) -> list[int]:
        return [b.lo for b in self._branches]

    def value(self, n: int) -> int:
        if not self.start <= n <= self.end:
            raise DomainError(
                f"n={n} outside [{self.start}, {self.end}] for the {self.which} edge"
            )
        idx = bisect_right(self._starts, n) - 1
        b = self._branches[idx]
        if n not in b:
            raise AssertionError(f"branches do not cover n={n}")
        return self.base(n) + b.offset

    def partition_ok(self) -> bool:
        """Non-empty branches tile [start, end] in order, no gaps or overlaps."""
        expected = self.start
        for b in self.branches():
            if b.lo != expected:
                return False
            expected = b.hi + 1
        return expected == self.end + 1


@lru_cache(maxsize=1024)
def piecewise_spec(params: CubicParams, k: int, which: str) -> PiecewiseSpec:
    _check_lemma_domain(params, k)
    a = params.a
    e, ek = eta(a, k), eps(k)
    if which == "top":
        g = a + 2
        n_star = a + 1 - 2 * k
        return PiecewiseSpec("top", a, k, g, k * g, n_star, n_star + g * (k // 2) + 1, e, ek)
    if which == "right":
        g = a + 1
        n_star = k - 1
        return PiecewiseSpec("right", a, k, g, 0, n_star, n_star + g * ((k + 1) // 2) + 1, e, ek)
    if which == "left":
        return PiecewiseSpec("left", a, k, 0, 0, 0, 0, e, ek)
    raise ValueError(f"which must be 'top', 'left' or 'right', got {which!r}")


def topline_floor(params: CubicParams, k: int, n: int) -> int:
    return piecewise_spec(params, k, "top").value(n)


def leftline_floor(params: CubicParams, k: int, n: int) -> int:
    return piecewise_spec(params, k, "left").value(n)


def rightline_floor(params: CubicParams, k: int, n: int) -> int:
    return piecewise_spec(params, k, "right").value(n)


def sum_topline(params: CubicParams, k: int) -> Fraction:
    _check_lemma_domain(params, k)
    a = params.a
    poly = k*k*a**3 + 4*k*k*a*a + 9*k*k*a + k*a*a + k*a + 12*k*k + 3*k
    return Fraction(poly, 2) + eta(a, k) * (k*a*a + 2*k*a + 3*k + a) - Fraction(eps(k), 2)


def sum_leftline(params: CubicParams, k: int) -> Fraction:
    _check_lemma_domain(params, k)
    return Fraction(k * k + eps(k), 2)


def sum_rightline(params: CubicParams, k: int) -> Fraction:
    _check_lemma_domain(params, k)
    a = params.a
    poly = k*k*a**3 + 3*k*k*a*a + 6*k*k*a + k*a*a + k*a + 2*k*k + 3*k
    return Fraction(poly, 2) + eta(a, k) * (k*a*a + 2*k*a + 3*k + a) + Fraction(eps(k), 2) - 1


def assemble_count(params: CubicParams, k: int) -> int:
    # top - left - right: the a^3, ka^2, ka and eta terms cancel, leaving
    # k^2 (a^2 + 3a + 9)/2 + 1 - 3 eps_k / 2
    total = sum_topline(params, k) - sum_leftline(params, k) - sum_rightline(params, k)
    if total.denominator != 1:
        raise ArithmeticError(f"assembled count {total} is not an integer")
    return total.numerator


@dataclass(frozen=True)
class BoundsCheck:
    a: int
    passed: bool
    lower_arg: Fraction
    upper_arg: Fraction
    f_lower: Fraction
    f_upper: Fraction

    @property
    def detail(self) -> str:
        return (
            f"f_a(a+1+4/(2a+3)-7/(2a^3)) = {float(self.f_lower):.6g}, "
            f"f_a(a+1+4/(2a+3)-3/a^3) = {float(self.f_upper):.6g}"
        )


def delta_bound_args(a: int) -> tuple[Fraction, Fraction]:
    """Rational points a+1+4/(2a+3)-7/(2a^3) and a+1+4/(2a+3)-3/a^3."""
    center = a + 1 + Fraction(4, 2 * a + 3)
    return center - Fraction(7, 2 * a**3), center - Fraction(3, a**3)


def delta_bounds_check(params: CubicParams) -> BoundsCheck:
    lo, hi = delta_bound_args(params.a)
    f_lo, f_hi = eval_fa(params, lo), eval_fa(params, hi)
    return BoundsCheck(params.a, f_lo < 0 < f_hi, lo, hi, f_lo, f_hi)
