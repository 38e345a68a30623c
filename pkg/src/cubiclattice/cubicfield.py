"""Exact arithmetic in Q(rho), rho the largest root of x^3 - a x^2 - (a+3) x - 1.

Elements are stored as c0 + c1*rho + c2*rho^2 with Fraction coefficients.
Signs and floors are decided by enclosing rho in a dyadic bisection
interval and evaluating the element with exact integer interval arithmetic;
since f_a is irreducible, a nonzero element always separates from zero (and
an irrational one from every integer) after finitely many bisections.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm
from numbers import Rational as _RationalABC

from .errors import RefinementError

Rational = Fraction

# Bits of rho3 precision tried first by sign/floor; enough for nearly every
# element the lattice counts produce, so the refinement loop rarely runs.
INITIAL_BITS = 64


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def format_rational(q) -> str:
    """Serialize as "p/q" (denominator always present, positive)."""
    q = as_rational(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: str) -> Fraction:
    return Fraction(s.strip())


@dataclass(frozen=True)
class CubicParams:
    a: int

    def __post_init__(self):
        if isinstance(self.a, bool) or not isinstance(self.a, int):
            raise TypeError("a must be an integer")
        if self.a < 1:
            raise ValueError(f"a must be >= 1, got {self.a}")
        # rational-root test for a monic cubic with constant term -1
        if eval_fa(self, 1) == 0 or eval_fa(self, -1) == 0:
            raise RefinementError(f"f_a is reducible for a={self.a}")

    @property
    def sqrt_discriminant(self) -> int:
        """a^2 + 3a + 9, the square root of disc(f_a)."""
        a = self.a
        return a * a + 3 * a + 9


def eval_fa(params: CubicParams, x) -> Fraction:
    a = params.a
    x = as_rational(x)
    return ((x - a) * x - (a + 3)) * x - 1


def _fa_sign_dyadic(a: int, m: int, p: int) -> int:
    # sign of f_a(m / 2^p), scaled by 8^p
    s = 1 << p
    v = ((m - a * s) * m - (a + 3) * s * s) * m - s * s * s
    return (v > 0) - (v < 0)


# ---------------------------------------------------------------------------
# root brackets


@dataclass(frozen=True)
class RootInterval:
    params: CubicParams
    lo: Fraction
    hi: Fraction
    root_index: int

    def __post_init__(self):
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        if self.root_index not in (1, 2, 3):
            raise ValueError(f"root_index must be 1, 2 or 3, got {self.root_index!r}")
        if not self.lo < self.hi:
            raise ValueError("interval must satisfy lo < hi")
        if eval_fa(self.params, self.lo) * eval_fa(self.params, self.hi) >= 0:
            raise ValueError("f_a must change sign strictly across the interval")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, q) -> bool:
        return self.lo <= as_rational(q) <= self.hi


def seed_interval(params: CubicParams, root_index: int) -> RootInterval:
    """Disjoint starting brackets (-2,-1), (-1,0), (a+1,a+2) for rho1, rho2, rho3.

    f_a(-2) = -2a-3, f_a(-1) = 1, f_a(0) = -1, f_a(a+1) = -2a-3 and
    f_a(a+2) = (a+2)(a+1)-1, so each pair changes sign for every a >= 1.
    """
    a = params.a
    brackets = {1: (-2, -1), 2: (-1, 0), 3: (a + 1, a + 2)}
    if root_index not in brackets:
        raise ValueError(f"root_index must be 1, 2 or 3, got {root_index!r}")
    lo, hi = brackets[root_index]
    return RootInterval(params, Fraction(lo), Fraction(hi), root_index)


def refine(interval: RootInterval, max_width) -> RootInterval:
    """Bisect until hi - lo <= max_width."""
    max_width = as_rational(max_width)
    if max_width <= 0:
        raise ValueError("max_width must be positive")
    params = interval.params
    lo, hi = interval.lo, interval.hi
    if hi - lo <= max_width:
        return interval
    lo_sign = eval_fa(params, lo) > 0
    while hi - lo > max_width:
        mid = (lo + hi) / 2
        fm = eval_fa(params, mid)
        if fm == 0:
            raise RefinementError(f"f_a has a rational root {mid} (a={params.a})")
        if (fm > 0) == lo_sign:
            lo = mid
        else:
            hi = mid
    return RootInterval(params, lo, hi, interval.root_index)


class _Rho3Cache:
    """Per-a dyadic bracket for rho3, narrowed monotonically.

    The bracket is (lo / 2^p, (lo+1) / 2^p), bisected from the seed (a+1, a+2),
    so p is also the number of bisection steps taken. Narrowing never changes
    any sign or floor answer, only how soon it is reached.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._brackets: dict[int, tuple[int, int]] = {}

    def get(self, a: int, bits: int) -> tuple[int, int]:
        with self._lock:
            lo, p = self._brackets.get(a, (a + 1, 0))
            if p >= bits:
                return lo, p
            while p < bits:
                p += 1
                lo <<= 1
                mid = lo + 1
                sg = _fa_sign_dyadic(a, mid, p)
                if sg == 0:
                    raise RefinementError(f"f_a has a rational root (a={a})")
                if sg < 0:
                    lo = mid
            self._brackets[a] = (lo, p)
            return lo, p

    def clear(self):
        with self._lock:
            self._brackets.clear()


_rho3_cache = _Rho3Cache()


def rho3_interval(params: CubicParams, bits: int = INITIAL_BITS) -> RootInterval:
    """Cached bracket of rho3 with width at most 2^-bits."""
    lo, p = _rho3_cache.get(params.a, bits)
    s = 1 << p
    return RootInterval(params, Fraction(lo, s), Fraction(lo + 1, s), 3)


def clear_cache() -> None:
    _rho3_cache.clear()


# ---------------------------------------------------------------------------
# field elements


@dataclass(frozen=True)
class FieldElement:
    params: CubicParams
    c0: Fraction = Fraction(0)
    c1: Fraction = Fraction(0)
    c2: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("c0", "c1", "c2"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    @classmethod
    def rational(cls, params: CubicParams, q) -> FieldElement:
        return cls(params, q)

    @classmethod
    def rho(cls, params: CubicParams) -> FieldElement:
        return cls(params, 0, 1, 0)

    @property
    def coeffs(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.c0, self.c1, self.c2)

    def is_zero(self) -> bool:
        return not (self.c0 or self.c1 or self.c2)

    def is_rational(self) -> bool:
        return not (self.c1 or self.c2)

    @cached_property
    def _integer_form(self) -> tuple[int, int, int, int]:
        # (n0, n1, n2, d) with element = (n0 + n1 rho + n2 rho^2) / d, d > 0
        d = lcm(self.c0.denominator, self.c1.denominator, self.c2.denominator)
        return (
            self.c0.numerator * (d // self.c0.denominator),
            self.c1.numerator * (d // self.c1.denominator),
            self.c2.numerator * (d // self.c2.denominator),
            d,
        )

    def _coerce(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.params != self.params:
                raise ValueError(
                    f"mismatched fields: a={self.params.a} vs a={other.params.a}"
                )
            return other
        return FieldElement(self.params, as_rational(other))

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return FieldElement(self.params, self.c0 + o.c0, self.c1 + o.c1, self.c2 + o.c2)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.params, -self.c0, -self.c1, -self.c2)

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return FieldElement(self.params, self.c0 - o.c0, self.c1 - o.c1, self.c2 - o.c2)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if o.is_rational():
            q = o.c0
            return FieldElement(self.params, self.c0 * q, self.c1 * q, self.c2 * q)
        if self.is_rational():
            q = self.c0
            return FieldElement(self.params, o.c0 * q, o.c1 * q, o.c2 * q)
        a = self.params.a
        x0, x1, x2 = self.coeffs
        y0, y1, y2 = o.coeffs
        p0 = x0 * y0
        p1 = x0 * y1 + x1 * y0
        p2 = x0 * y2 + x1 * y1 + x2 * y0
        p3 = x1 * y2 + x2 * y1
        p4 = x2 * y2
        # rho^3 = a rho^2 + (a+3) rho + 1, applied from the top degree down
        p3 += a * p4
        p2 += (a + 3) * p4
        p1 += p4
        p2 += a * p3
        p1 += (a + 3) * p3
        p0 += p3
        return FieldElement(self.params, p0, p1, p2)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self * inverse(o)

    def __rtruediv__(self, other):
        return self._coerce(other) * inverse(self)

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return inverse(self) ** (-e)
        result = FieldElement(self.params, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __float__(self):
        lo, hi = enclosure(self, 80)
        return float((lo + hi) / 2)

    def __str__(self):
        return f"{self.c0} + ({self.c1})*rho + ({self.c2})*rho^2"


def add(x: FieldElement, y: FieldElement) -> FieldElement:
    return x + y


def sub(x: FieldElement, y: FieldElement) -> FieldElement:
    return x - y


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    return x * y


def neg(x: FieldElement) -> FieldElement:
    return -x


# polynomials over Q as coefficient lists, lowest degree first


def _trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(num: list[Fraction], den: list[Fraction]):
    num = list(num)
    q = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
    lead = den[-1]
    while len(num) >= len(den) and num:
        shift = len(num) - len(den)
        c = num[-1] / lead
        q[shift] = c
        for i, dc in enumerate(den):
            num[shift + i] -= c * dc
        num.pop()
        _trim(num)
    return _trim(q), num


def _poly_sub(p, q):
    n = max(len(p), len(q))
    return _trim([(p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0) for i in range(n)])


def _poly_mul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, pc in enumerate(p):
        for j, qc in enumerate(q):
            out[i + j] += pc * qc
    return _trim(out)


def inverse(x: FieldElement) -> FieldElement:
    """Multiplicative inverse via the extended Euclidean algorithm against f_a."""
    if x.is_zero():
        raise ZeroDivisionError("inverse of the zero element")
    if x.is_rational():
        return FieldElement(x.params, 1 / x.c0)
    a = x.params.a
    # invariant: s_i * x(t) == r_i  (mod f_a)
    r0 = [Fraction(-1), Fraction(-(a + 3)), Fraction(-a), Fraction(1)]
    r1 = _trim(list(x.coeffs))
    s0: list[Fraction] = []
    s1 = [Fraction(1)]
    while len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    if not r1:
        raise RefinementError(f"f_a shares a factor with {x}")
    c = r1[0]
    s = [si / c for si in s1] + [Fraction(0)] * 3
    # deg s < 3 since deg s_i < deg f_a throughout
    return FieldElement(x.params, s[0], s[1], s[2])


def rho_as_elements(params: CubicParams) -> tuple[FieldElement, FieldElement, FieldElement]:
    """(rho1, rho2, rho3) written in the basis 1, rho3, rho3^2.

    rho2 = -1/(1+rho3) and rho1 = a - rho2 - rho3.
    """
    a = params.a
    rho1 = FieldElement(params, a + 2, a, -1)
    rho2 = FieldElement(params, -2, -(a + 1), 1)
    rho3 = FieldElement(params, 0, 1, 0)
    return rho1, rho2, rho3


def eval_fa_element(x: FieldElement) -> FieldElement:
    a = x.params.a
    return ((x - a) * x - (a + 3)) * x - 1


# ---------------------------------------------------------------------------
# sign and floor


def _iteration_cap(form: tuple[int, int, int, int], a: int) -> int:
    coeff_bits = max(abs(c).bit_length() for c in form)
    return 10 * (coeff_bits + a.bit_length()) + 64


def _enclose_int(form, a: int, bits: int) -> tuple[int, int, int]:
    """Integer enclosure (lo, hi, D) with lo/D <= value <= hi/D."""
    n0, n1, n2, d = form
    L, p = _rho3_cache.get(a, bits)
    H = L + 1
    s = 1 << p
    # rho3 > 0, so rho^2 is increasing on the bracket
    t1a, t1b = n1 * L, n1 * H
    t2a, t2b = n2 * L * L, n2 * H * H
    base = n0 * s * s
    lo = base + min(t1a, t1b) * s + min(t2a, t2b)
    hi = base + max(t1a, t1b) * s + max(t2a, t2b)
    return lo, hi, d * s * s


def enclosure(x: FieldElement, bits: int = INITIAL_BITS) -> tuple[Fraction, Fraction]:
    """Rational interval containing x, from the rho3 bracket of width <= 2^-bits."""
    lo, hi, D = _enclose_int(x._integer_form, x.params.a, bits)
    return Fraction(lo, D), Fraction(hi, D)


def _next_bits(bits: int, cap: int, form, a: int) -> int:
    if bits >= cap:
        raise RefinementError(
            f"refinement cap of {cap} bisections exceeded (a={a}, form={form})"
        )
    return min(2 * bits, cap)


def _sign_form(form, a: int) -> int:
    n0, n1, n2, _ = form
    if not (n1 or n2):
        return (n0 > 0) - (n0 < 0)
    cap = _iteration_cap(form, a)
    bits = min(INITIAL_BITS, cap)
    while True:
        lo, hi, _ = _enclose_int(form, a, bits)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits = _next_bits(bits, cap, form, a)


def sign(x: FieldElement) -> int:
    return _sign_form(x._integer_form, x.params.a)


def compare_int(x: FieldElement, m: int) -> int:
    """sign(x - m) without building the difference element."""
    n0, n1, n2, d = x._integer_form
    return _sign_form((n0 - m * d, n1, n2, d), x.params.a)


def floor_of(x: FieldElement) -> int:
    form = x._integer_form
    n0, n1, n2, d = form
    if not (n1 or n2):
        return n0 // d
    a = x.params.a
    cap = _iteration_cap(form, a)
    bits = min(INITIAL_BITS, cap)
    while True:
        lo, hi, D = _enclose_int(form, a, bits)
        fl = lo // D
        if fl == hi // D:
            return fl
        bits = _next_bits(bits, cap, form, a)


def ceil_of(x: FieldElement) -> int:
    return -floor_of(-x)
