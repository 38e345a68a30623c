"""Exit criteria. Each test prints one PASS/FAIL line; run with -s to see them inline."""

import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from cubiclattice.closedform import (
    assemble_count,
    delta_bounds_check,
    eta,
    leftline_floor,
    rightline_floor,
    sum_leftline,
    sum_rightline,
    sum_topline,
    theorem_count,
    theta,
    topline_floor,
)
from cubiclattice.cubicfield import (
    CubicParams,
    FieldElement,
    eval_fa,
    floor_of,
    inverse,
    refine,
    rho_as_elements,
    seed_interval,
)
from cubiclattice.errors import RefinementError
from cubiclattice.interlace import coeffs_from_point, count_interlacing, interlacing_polys
from cubiclattice.triangle import (
    brute_force_count,
    count_by_slicing,
    discrepancy,
    edge_line,
    lattice_points,
    line_floor,
)

SEED = 20241016
LEMMA_AS = (34, 35, 50, 101)


def lemma_ks(a):
    return sorted({1, 2, 3, a // 2, a // 2 + 1, a - 1, a})


LEMMA_GRID = [(a, k) for a in LEMMA_AS for k in lemma_ks(a)]
EDGE_EVENTS = []  # rational edge values seen during criteria 1-2; must stay empty


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {n}] {'PASS' if ok else 'FAIL'} {detail}")
    return emit


def _checked_floor(line, n):
    try:
        return line_floor(line, n)
    except RefinementError as exc:
        EDGE_EVENTS.append(str(exc))
        raise


@pytest.fixture(scope="module")
def slicing_counts():
    counts = {}
    t0 = time.perf_counter()
    for a in range(1, 34):
        p = CubicParams(a)
        for k in range(1, a + 1):
            try:
                counts[a, k] = count_by_slicing(p, k)[0].count
            except RefinementError as exc:
                EDGE_EVENTS.append(str(exc))
                raise
    for a, k in LEMMA_GRID:
        counts[a, k] = count_by_slicing(CubicParams(a), k)[0].count
    return counts, time.perf_counter() - t0


def test_c1_computer_check(report, slicing_counts):
    counts, elapsed = slicing_counts
    t0 = time.perf_counter()
    bad = [
        (a, k) for a in range(1, 34) for k in range(1, a + 1)
        if counts[a, k] != theorem_count(CubicParams(a), k)
    ]
    cases = sum(1 for a in range(1, 34) for k in range(1, a + 1))
    brute_bad = []
    for a in range(1, 13):
        p = CubicParams(a)
        for k in range(1, a + 1):
            if brute_force_count(p, k).count != counts[a, k]:
                brute_bad.append((a, k))
    elapsed += time.perf_counter() - t0
    ok = cases == 561 and not bad and not brute_bad and elapsed < 120
    report(1, ok, f"{cases} slice/closed cases, {len(bad)} mismatches; brute a<=12: "
                  f"{len(brute_bad)} mismatches; {elapsed:.1f}s")
    assert cases == 561
    assert bad == [] and brute_bad == []
    assert elapsed < 120


def test_c2_lemma_tables(report):
    t0 = time.perf_counter()
    failures = []
    checked = 0
    for a, k in LEMMA_GRID:
        p = CubicParams(a)
        end = k * (a + 1) + eta(a, k)
        l13, l12, l23 = edge_line(p, k, 1, 3), edge_line(p, k, 1, 2), edge_line(p, k, 2, 3)
        for n in range(-k, end + 1):
            checked += 1
            if topline_floor(p, k, n) != _checked_floor(l13, n):
                failures.append((a, k, "top", n))
            if n <= -1:
                if leftline_floor(p, k, n) != _checked_floor(l12, n):
                    failures.append((a, k, "left", n))
            elif rightline_floor(p, k, n) != _checked_floor(l23, n):
                failures.append((a, k, "right", n))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 300
    report(2, ok, f"{len(LEMMA_GRID)} (a,k) pairs, {checked} abscissae, "
                  f"{len(failures)} mismatches; {elapsed:.1f}s")
    assert failures == []
    assert elapsed < 300


def test_c3_summation_identities(report):
    bad = []
    for a, k in LEMMA_GRID:
        p = CubicParams(a)
        end = k * (a + 1) + eta(a, k)
        top = sum(topline_floor(p, k, n) for n in range(-k, end + 1))
        left = sum(leftline_floor(p, k, n) for n in range(-k, 0))
        right = sum(rightline_floor(p, k, n) for n in range(0, end + 1))
        if sum_topline(p, k) != top:
            bad.append((a, k, "top"))
        if sum_leftline(p, k) != left:
            bad.append((a, k, "left"))
        if sum_rightline(p, k) != right:
            bad.append((a, k, "right"))
        if assemble_count(p, k) != theorem_count(p, k):
            bad.append((a, k, "assembly"))
    report(3, not bad, f"{len(LEMMA_GRID)} (a,k) pairs, {len(bad)} identity failures")
    assert bad == []


def test_c4_delta_bounds(report):
    t0 = time.perf_counter()
    failing = [a for a in range(34, 5001) if not delta_bounds_check(CubicParams(a)).passed]
    elapsed = time.perf_counter() - t0
    report(4, not failing and elapsed < 60, f"a in [34, 5000]: {len(failing)} failures; {elapsed:.1f}s")
    assert failing == []
    assert elapsed < 60


def test_c5_discrepancy(report, slicing_counts):
    counts, _ = slicing_counts
    bad = []
    for (a, k), c in counts.items():
        d = discrepancy(CubicParams(a), k, c)
        expected = Fraction(1) if k % 2 == 0 else Fraction(-1, 2)
        if d != expected or d != theta(k):
            bad.append((a, k, d))
    report(5, not bad, f"{len(counts)} cases, {len(bad)} with discrepancy outside {{1, -1/2}}")
    assert bad == []


def test_c6_corollary(report):
    bad = []
    for a in range(1, 11):
        p = CubicParams(a)
        for k in range(1, a + 1):
            if count_interlacing(p, k).count != theorem_count(p, k):
                bad.append((a, k))
    not_bijective = []
    for a in range(1, 7):
        p = CubicParams(a)
        for k in range(1, a + 1):
            images = [coeffs_from_point(p, k, x, y) for x, y in lattice_points(p, k)]
            polys = {(g.n1, g.n2) for g in interlacing_polys(p, k)}
            if len(set(images)) != len(images) or set(images) != polys:
                not_bijective.append((a, k))
    ok = not bad and not not_bijective
    report(6, ok, f"count_interlacing vs theorem a<=10: {len(bad)} mismatches; "
                  f"bijection a<=6: {len(not_bijective)} failures")
    assert bad == [] and not_bijective == []


def test_c7_known_cases(report):
    bad = []
    for a in range(2, 101):
        p = CubicParams(a)
        if 2 * theorem_count(p, 1) != a * a + 3 * a + 8:
            bad.append((a, 1))
        if theorem_count(p, 2) != 2 * (a * a + 3 * a + 9) + 1:
            bad.append((a, 2))
    report(7, not bad, f"k=1,2 for a in [2, 100]: {len(bad)} mismatches")
    assert bad == []


def test_c8_property_suites(report, slicing_counts):
    rng = random.Random(SEED)
    failures = []

    def rq():
        return Fraction(rng.randint(-60, 60), rng.randint(1, 25))

    for _ in range(400):
        a = rng.randint(1, 200)
        p = CubicParams(a)
        x = FieldElement(p, rq(), rq(), rq())
        if not x.is_zero() and x * inverse(x) != FieldElement(p, 1):
            failures.append(("inverse", a, str(x)))
        m = rng.randint(-10**4, 10**4)
        if floor_of(x + m) != floor_of(x) + m:
            failures.append(("translation", a, str(x), m))
        idx = rng.choice((1, 2, 3))
        iv = refine(seed_interval(p, idx), Fraction(1, 2 ** rng.randint(1, 120)))
        if eval_fa(p, iv.lo) * eval_fa(p, iv.hi) >= 0:
            failures.append(("bracketing", a, idx))
    for a in range(1, 201):
        p = CubicParams(a)
        r1, r2, r3 = rho_as_elements(p)
        if (r1 + r2 + r3, r1 * r2 + r1 * r3 + r2 * r3, r1 * r2 * r3) != (
            FieldElement(p, a), FieldElement(p, -(a + 3)), FieldElement(p, 1)
        ):
            failures.append(("symmetric", a))
    ok = not failures and not EDGE_EVENTS
    report(8, ok, f"seed {SEED}: {len(failures)} property failures; "
                  f"{len(EDGE_EVENTS)} lattice-point-on-edge events")
    assert failures == []
    assert EDGE_EVENTS == []


def _sweep(jobs):
    proc = subprocess.run(
        [sys.executable, "-m", "cubiclattice", "sweep", "--a", "1..10", "--k", "all",
         "--methods", "brute,slice,closed,interlace", "--jobs", str(jobs)],
        capture_output=True, check=True,
    )
    return proc.stdout


def _drop_timing(raw: bytes) -> bytes:
    lines = raw.decode().splitlines()
    col = lines[0].split(",").index("elapsed_ns")
    out = [",".join(c for i, c in enumerate(line.split(",")) if i != col) for line in lines]
    return "\n".join(out).encode()


def test_c9_determinism(report):
    serial, parallel = _sweep(1), _sweep(8)
    same = _drop_timing(serial) == _drop_timing(parallel)
    rows = len(serial.decode().splitlines()) - 1
    report(9, same, f"sweep a=1..10, 4 methods, {rows} rows: --jobs 1 vs --jobs 8 "
                    f"{'byte-identical' if same else 'differ'} (elapsed_ns excluded)")
    assert rows == 220
    assert same
