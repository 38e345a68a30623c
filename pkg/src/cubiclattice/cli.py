"""Command-line entry point: count, verify, sweep, bounds, bench.

Exit codes: 0 ok, 1 verification mismatch or bound failure, 2 bad flags,
3 outside the closed form's domain (k > a), 4 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations

from .closedform import (
    LEMMA_MIN_A,
    assemble_count,
    delta_bounds_check,
    piecewise_spec,
    sum_leftline,
    sum_rightline,
    sum_topline,
    theorem_count,
)
from .cubicfield import CubicParams, format_rational
from .errors import BudgetExceeded, DomainError
from .interlace import count_interlacing, interlacing_polys, write_csv
from .triangle import (
    DEFAULT_BUDGET,
    METHODS,
    CountResult,
    brute_force_count,
    count_by_slicing,
    discrepancy,
    edge_line,
    line_floor,
    volume,
)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_DOMAIN, EXIT_BUDGET = 0, 1, 2, 3, 4
SWEEP_FIELDS = [
    "a", "k", "method", "count", "volume_times_k2", "discrepancy",
    "in_theorem_domain", "elapsed_ns",
]
K_RULES = ("all_k_le_a", "fixed", "k_gt_a_exploration")


class UsageError(Exception):
    pass


def parse_range(text: str) -> tuple[int, int]:
    """'lo..hi' (inclusive) or a single integer."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return int(lo), int(hi)
        v = int(text)
        return v, v
    except ValueError:
        raise UsageError(f"bad range {text!r}, expected N or LO..HI") from None


@dataclass
class SweepConfig:
    a_min: int
    a_max: int
    k_rule: str = "all_k_le_a"
    k_min: int = 1
    k_max: int = 1
    methods: tuple[str, ...] = ("slice",)
    output_format: str = "csv"
    output_path: str | None = None
    parallelism: int = 1
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if not 1 <= self.a_min <= self.a_max:
            raise UsageError(f"need 1 <= a_min <= a_max, got {self.a_min}..{self.a_max}")
        if not self.methods:
            raise UsageError("select at least one method")
        if self.k_rule not in K_RULES:
            raise UsageError(f"unknown k rule {self.k_rule!r}")
        if self.k_rule == "fixed" and not 1 <= self.k_min <= self.k_max:
            raise UsageError("k range must satisfy 1 <= lo <= hi")
        if self.parallelism < 1:
            raise UsageError("--jobs must be >= 1")

    def ks(self, a: int) -> range:
        if self.k_rule == "all_k_le_a":
            return range(1, a + 1)
        if self.k_rule == "fixed":
            return range(self.k_min, self.k_max + 1)
        return range(a + 1, 2 * a + 1)

    def pairs(self):
        for a in range(self.a_min, self.a_max + 1):
            for k in self.ks(a):
                yield a, k


def parse_k(text: str) -> tuple[str, int, int]:
    if text == "all":
        return "all_k_le_a", 1, 1
    if text == "gt":
        return "k_gt_a_exploration", 1, 1
    lo, hi = parse_range(text)
    return "fixed", lo, hi


def parse_methods(text: str, allowed) -> tuple[str, ...]:
    methods = tuple(m.strip() for m in text.split(",") if m.strip())
    bad = [m for m in methods if m not in allowed]
    if bad:
        raise UsageError(f"unknown method(s) {bad}; choose from {sorted(allowed)}")
    return methods


def run_method(a: int, k: int, method: str, budget: int = DEFAULT_BUDGET) -> CountResult:
    params = CubicParams(a)
    if method == "slice":
        return count_by_slicing(params, k)[0]
    if method == "brute":
        return brute_force_count(params, k, budget)
    if method == "interlace":
        return count_interlacing(params, k, budget)
    if method == "closed":
        t0 = time.perf_counter_ns()
        count = theorem_count(params, k)
        return CountResult(params, k, count, "closed", time.perf_counter_ns() - t0)
    raise UsageError(f"unknown method {method!r}")


def _decimal(q: Fraction, digits: int) -> str:
    scaled = round(q * 10**digits)
    sgn = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**digits)
    return f"{sgn}{whole}.{frac:0{digits}d}" if digits else f"{sgn}{whole}"


def _pool_map(fn, tasks, jobs: int):
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    chunk = max(1, len(tasks) // (jobs * 8))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks, chunksize=chunk))


def _default_jobs() -> int:
    env = os.environ.get("CUBICLATTICE_JOBS")
    if env is None:
        return 1
    try:
        return max(1, int(env))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# sweep


def _sweep_task(task):
    a, k, method, budget = task
    try:
        res = run_method(a, k, method, budget)
    except BudgetExceeded as exc:
        return ("budget", str(exc))
    params = res.params
    return (
        "ok",
        {
            "a": a,
            "k": k,
            "method": method,
            "count": res.count,
            "volume_times_k2": format_rational(k * k * volume(params)),
            "discrepancy": format_rational(discrepancy(params, k, res.count)),
            "in_theorem_domain": res.in_theorem_domain,
            "elapsed_ns": res.elapsed_ns,
        },
    )


def sweep_rows(config: SweepConfig) -> list[dict]:
    tasks = []
    for a, k in config.pairs():
        for method in config.methods:
            if method == "closed" and k > a:
                continue
            tasks.append((a, k, method, config.budget))
    rows = []
    for status, payload in _pool_map(_sweep_task, tasks, config.parallelism):
        if status == "budget":
            raise BudgetExceeded(payload)
        rows.append(payload)
    return rows


def render_rows(rows: list[dict], fmt: str, decimal: int | None = None) -> str:
    fields = list(SWEEP_FIELDS)
    if decimal is not None:
        fields += ["volume_times_k2_approx", "discrepancy_approx"]
        rows = [
            dict(
                r,
                volume_times_k2_approx=_decimal(Fraction(r["volume_times_k2"]), decimal),
                discrepancy_approx=_decimal(Fraction(r["discrepancy"]), decimal),
            )
            for r in rows
        ]
    if fmt == "json":
        return json.dumps([{f: r[f] for f in fields} for r in rows], indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({f: (str(r[f]).lower() if isinstance(r[f], bool) else r[f]) for f in fields})
    return buf.getvalue()


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# verify


@dataclass
class VerifyReport:
    cases_run: int = 0
    mismatches: list = field(default_factory=list)
    lemma_failures: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    elapsed_ns: int = 0

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.lemma_failures

    def to_json(self) -> str:
        d = asdict(self)
        d["ok"] = self.ok
        return json.dumps(d, indent=2) + "\n"


def lemma_failures_for(a: int, k: int) -> list[tuple]:
    """Piecewise tables vs exact floors, sums vs direct sums, assembly vs theorem."""
    params = CubicParams(a)
    failures = []
    edges = {"top": (1, 3), "left": (1, 2), "right": (2, 3)}
    sums = {"top": sum_topline, "left": sum_leftline, "right": sum_rightline}
    for which, (i, j) in edges.items():
        spec = piecewise_spec(params, k, which)
        if not spec.partition_ok():
            failures.append((a, k, f"{which}-partition", None))
        line = edge_line(params, k, i, j)
        direct = 0
        for n in range(spec.start, spec.end + 1):
            v = spec.value(n)
            direct += v
            if v != line_floor(line, n):
                failures.append((a, k, f"{which}-floor", n))
        if sums[which](params, k) != direct:
            failures.append((a, k, f"{which}-sum", None))
    if assemble_count(params, k) != theorem_count(params, k):
        failures.append((a, k, "assembly", None))
    return failures


def _verify_task(task):
    a, k, methods, budget = task
    counts = {}
    skipped = []
    for m in methods:
        if m == "lemmas" or (m == "closed" and k > a):
            continue
        try:
            counts[m] = run_method(a, k, m, budget).count
        except BudgetExceeded:
            skipped.append((a, k, m, "budget"))
    mismatches = [
        (a, k, f"{m1}/{m2}", [counts[m1], counts[m2]])
        for m1, m2 in combinations(sorted(counts), 2)
        if counts[m1] != counts[m2]
    ]
    lemma = []
    if "lemmas" in methods and a >= LEMMA_MIN_A and k <= a:
        lemma = lemma_failures_for(a, k)
    return mismatches, lemma, skipped


def run_verify(config: SweepConfig) -> VerifyReport:
    t0 = time.perf_counter_ns()
    report = VerifyReport()
    tasks = [(a, k, config.methods, config.budget) for a, k in config.pairs()]
    for mism, lemma, skipped in _pool_map(_verify_task, tasks, config.parallelism):
        report.cases_run += 1
        report.mismatches.extend(mism)
        report.lemma_failures.extend(lemma)
        report.skipped.extend(skipped)
    if "lemmas" in config.methods:
        for a in range(max(config.a_min, LEMMA_MIN_A), config.a_max + 1):
            if not delta_bounds_check(CubicParams(a)).passed:
                report.lemma_failures.append((a, None, "delta-bounds", None))
    report.elapsed_ns = time.perf_counter_ns() - t0
    return report


# ---------------------------------------------------------------------------
# argument handling


def _add_common(p: argparse.ArgumentParser, methods_default: str, allow_lemmas=False):
    p.add_argument("--a", required=True, help="a value or inclusive range LO..HI")
    p.add_argument("--k", default="all", help="'all' (1..a), 'gt' (a+1..2a), N or LO..HI")
    p.add_argument("--methods", "--method", dest="methods", default=methods_default,
                   help="comma-separated subset of " + ",".join(METHODS)
                   + (",lemmas" if allow_lemmas else ""))
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--jobs", type=int, default=None,
                   help="worker processes (default $CUBICLATTICE_JOBS or 1)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubiclattice",
        description="Exact lattice-point counts in dilated simplest-cubic triangles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", help="count lattice points of kT_a with one method")
    c.add_argument("--a", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--method", "--methods", dest="method", choices=METHODS, default="slice")
    c.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    c.add_argument("--format", choices=("text", "csv", "json"), default="text",
                   help="format of the printed result and of --profile-out")
    c.add_argument("--profile-out", default=None,
                   help="write the per-abscissa slice profile (method slice)")
    c.add_argument("--polys-out", default=None,
                   help="write interlacing polynomials as CSV (method interlace)")

    v = sub.add_parser("verify", help="cross-check counting methods and floor tables")
    _add_common(v, "slice,closed", allow_lemmas=True)

    s = sub.add_parser("sweep", help="tabulate counts and discrepancies")
    _add_common(s, "slice")
    s.add_argument("--decimal", type=int, default=None, metavar="N",
                   help="add approximate decimal columns with N digits")

    b = sub.add_parser("bench", help="sweep with a per-method timing summary")
    _add_common(b, "slice,closed")
    b.add_argument("--decimal", type=int, default=None, metavar="N")

    bd = sub.add_parser("bounds", help="check the rational bounds on rho3 - (a+1)")
    bd.add_argument("--a", required=True, help="LO..HI")
    return parser


def _config(args, allowed) -> SweepConfig:
    a_min, a_max = parse_range(args.a)
    k_rule, k_min, k_max = parse_k(args.k)
    jobs = args.jobs if args.jobs is not None else _default_jobs()
    return SweepConfig(
        a_min, a_max, k_rule, k_min, k_max,
        parse_methods(args.methods, allowed),
        args.format, args.out, jobs, args.budget,
    )


def cmd_count(args) -> int:
    params = CubicParams(args.a)
    res = run_method(args.a, args.k, args.method, args.budget)
    info = {
        "a": args.a,
        "k": args.k,
        "method": res.method,
        "count": res.count,
        "volume": str(volume(params)),
        "discrepancy": str(discrepancy(params, args.k, res.count)),
        "in_theorem_domain": res.in_theorem_domain,
        "elapsed_ns": res.elapsed_ns,
    }
    if args.format == "json":
        print(json.dumps(info))
    else:
        for key, val in info.items():
            print(f"{key}={val}")
    if args.profile_out:
        profile = count_by_slicing(params, args.k)[1]
        _emit(profile.to_json() + "\n" if args.format == "json" else profile.to_csv(),
              args.profile_out)
    if args.polys_out:
        with open(args.polys_out, "w") as fh:
            write_csv(interlacing_polys(params, args.k, args.budget), fh)
    return EXIT_OK


def cmd_verify(args) -> int:
    config = _config(args, set(METHODS) | {"lemmas"})
    report = run_verify(config)
    if config.output_path:
        _emit(report.to_json(), config.output_path)
    print(f"cases={report.cases_run} mismatches={len(report.mismatches)} "
          f"lemma_failures={len(report.lemma_failures)} skipped={len(report.skipped)} "
          f"elapsed={report.elapsed_ns / 1e9:.2f}s")
    for m in report.mismatches[:20]:
        print("mismatch", m)
    for f in report.lemma_failures[:20]:
        print("lemma failure", f)
    return EXIT_OK if report.ok else EXIT_MISMATCH


def cmd_sweep(args, bench=False) -> int:
    config = _config(args, set(METHODS))
    rows = sweep_rows(config)
    _emit(render_rows(rows, config.output_format, args.decimal), config.output_path)
    skipped = sum(1 for a, k in config.pairs() if k > a) if "closed" in config.methods else 0
    if skipped:
        print(f"note: closed method skipped for {skipped} case(s) with k > a", file=sys.stderr)
    if bench:
        out = sys.stderr if config.output_path in (None, "-") else sys.stdout
        print(f"{'method':<10} {'cases':>6} {'total_s':>10} {'mean_ms':>10} {'max_ms':>10}", file=out)
        for m in config.methods:
            ts = [r["elapsed_ns"] for r in rows if r["method"] == m]
            if ts:
                print(f"{m:<10} {len(ts):>6} {sum(ts) / 1e9:>10.3f} "
                      f"{sum(ts) / len(ts) / 1e6:>10.3f} {max(ts) / 1e6:>10.3f}", file=out)
    return EXIT_OK


def cmd_bounds(args) -> int:
    a_min, a_max = parse_range(args.a)
    if a_min < 1 or a_min > a_max:
        raise UsageError("need 1 <= LO <= HI")
    status = EXIT_OK
    print("a,passed,in_lemma_range")
    for a in range(a_min, a_max + 1):
        res = delta_bounds_check(CubicParams(a))
        print(f"{a},{'pass' if res.passed else 'fail'},{str(a >= LEMMA_MIN_A).lower()}")
        if a >= LEMMA_MIN_A and not res.passed:
            status = EXIT_MISMATCH
    return status


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "count":
            return cmd_count(args)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "sweep":
            return cmd_sweep(args)
        if args.command == "bench":
            return cmd_sweep(args, bench=True)
        if args.command == "bounds":
            return cmd_bounds(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    parser.error(f"unknown command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
