"""Command line front end: solve instances, verify, measure query scaling.

Exit codes: 0 success, 1 suite violations, 2 usage or input error,
3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .algorithms import (
    ALGORITHMS,
    DEFAULT_X,
    gain_curve,
    parameters,
    rp_greedy,
    solve,
    split,
)
from .core import is_base
from .instances import (
    Instance,
    InstanceFormatError,
    build,
    enumerate_small_instances,
    load,
    random_instance,
)
from .testkit import (
    TOLERANCE,
    BudgetExceededError,
    bases_within,
    brute_force_opt,
    rr_greedy_exact_expectation,
    split_partition_witness,
    validate_matroid_axioms,
    validate_monotone_submodular,
)

SPLIT_P_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
SPLIT_BETA_GRID = (0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8)
RP_X_GRID = (0.0, 0.5, 0.9, 1.0)
DET_GUARANTEE = 0.5008
EXPECTATION_LEAF_LIMIT = 200
BASE_ENUM_LIMIT = 20

ROW_FIELDS = (
    "label",
    "n",
    "k",
    "algorithm",
    "value",
    "opt",
    "ratio",
    "value_queries",
    "independence_queries",
    "params",
    "seed",
)


def _err(message: str) -> None:
    print(f"error: {message}", file=sys.stderr)


def _ratio(value: float, opt: float) -> float:
    if opt > 0:
        return value / opt
    return 1.0 if value == 0 else float("inf")


def _beats_guarantee(value: float, opt: float) -> bool:
    """value >= DET_GUARANTEE * opt, in exact arithmetic on integral values."""
    if float(value).is_integer() and float(opt).is_integer():
        return 10_000 * int(value) >= 5_008 * int(opt)
    return value >= DET_GUARANTEE * opt


@dataclass
class SuiteReport:
    rows: list[dict]
    summary: dict
    violations: list[dict]


def check_instance(instance: Instance) -> tuple[list[dict], list[dict]]:
    """Run every verification check and algorithm on one instance."""
    rows: list[dict] = []
    violations: list[dict] = []

    def violate(check: str, detail: str) -> None:
        violations.append({"label": instance.label, "check": check, "detail": detail})

    f, matroid = build(instance)
    k = matroid.rank
    opt_value, opt_base = brute_force_opt(f, matroid)

    for algorithm in ALGORITHMS:
        report = solve(f, matroid, algorithm, x=DEFAULT_X, seed=0)
        if not is_base(matroid, report.solution):
            violate("solution-is-base", f"{algorithm} returned a non-base")
        if report.value > opt_value + TOLERANCE:
            violate("value-below-opt", f"{algorithm} exceeded the exact optimum")
        rows.append(
            {
                "label": instance.label,
                "n": instance.n,
                "k": k,
                "algorithm": algorithm,
                "value": report.value,
                "opt": opt_value,
                "ratio": _ratio(report.value, opt_value),
                "value_queries": report.counts.value_queries,
                "independence_queries": report.counts.independence_queries,
                "params": ""
                if report.parameters is None
                else f"x={report.parameters.x!r};p={report.parameters.p!r}",
                "seed": "" if report.seed is None else report.seed,
            }
        )
        if algorithm == "msg-det" and not _beats_guarantee(report.value, opt_value):
            violate(
                "deterministic-guarantee",
                f"value {report.value} below {DET_GUARANTEE} * opt {opt_value}",
            )

    if instance.n <= 8:
        function_report = validate_monotone_submodular(f)
        if not function_report.ok:
            violate("monotone-submodular", "; ".join(function_report.violations[:3]))
        matroid_report = validate_matroid_axioms(matroid)
        if not matroid_report.ok:
            violate("matroid-axioms", "; ".join(matroid_report.violations[:3]))

    # disjoint split sweeping a p grid, plus its completion-partition witness
    for p in SPLIT_P_GRID:
        half = split(f, matroid, p)
        if set(half.a) & set(half.b):
            violate("split-disjoint", f"p={p}: halves intersect")
        if not is_base(matroid, set(half.a) | set(half.b)):
            violate("split-union-base", f"p={p}: union is not a base")
        try:
            split_partition_witness(half.a, half.b, opt_base, f, matroid)
        except Exception as exc:  # noqa: BLE001 - recorded as a violation
            violate("completion-partition", f"p={p}: {exc}")

    # weighted-average value guarantee of the split across the bias grid
    for beta in SPLIT_BETA_GRID:
        root = ((1.0 - beta) * beta) ** 0.5
        p = beta / (beta + root)
        half = split(f, matroid, p)
        lhs = beta * f(half.a) + (1.0 - beta) * f(half.b)
        rhs = (2.0 / 3.0) * (1.0 - root) * opt_value
        if lhs < rhs - TOLERANCE:
            violate("split-weighted-average", f"beta={beta}: {lhs} < {rhs}")

    # exact expectation bounds for the randomized greedy
    expectation_checked = False
    if _leaf_count(k) <= EXPECTATION_LEAF_LIMIT:
        expectation_checked = True
        expected, tree = rr_greedy_exact_expectation(f, matroid)
        if abs(sum(leaf.probability for leaf in tree.leaves) - 1.0) > 1e-12:
            violate("expectation-probabilities", "leaf probabilities do not sum to 1")
        if expected < opt_value / 2.0 - TOLERANCE:
            violate("expected-value-half", f"{expected} < opt/2 = {opt_value / 2.0}")
        for i in range(k + 1):
            delta = 1.0 / (2.0 * k * k) if 0 < i < k else 0.0
            bound = (gain_curve(i / k) + delta) * opt_value
            if tree.level_expectations[i] < bound - TOLERANCE:
                violate(
                    "expected-value-curve",
                    f"iteration {i}: {tree.level_expectations[i]} < {bound}",
                )

    bases = bases_within(matroid, BASE_ENUM_LIMIT)
    if bases is not None:
        if expectation_checked:
            # composite lower bound of the randomized greedy over all base pairs
            values = {base: f(base) for base in bases}
            for first in bases:
                for second in bases:
                    joint = f(set(first) | set(second))
                    for x in (0.0, 0.25, 0.5, 0.75, 0.9, 1.0):
                        lhs = 3.0 * expected
                        rhs = (1.0 + gain_curve(x)) * values[first] + (1.0 - x) * (
                            joint - values[first]
                        )
                        if lhs < rhs - TOLERANCE:
                            violate(
                                "expected-composite-bound",
                                f"bases {first}/{second}, x={x}: {lhs} < {rhs}",
                            )
        # deterministic parallel greedy bounds, one run per residue base
        for residue in bases:
            output = rp_greedy(f, matroid, residue)
            value = f(output)
            if value < opt_value / 2.0:
                violate("parallel-greedy-half", f"residue {residue}: {value} < opt/2")
            residual_gain = f(set(residue) | set(opt_base)) - opt_value
            for x in RP_X_GRID:
                rhs = (1.0 + gain_curve(x)) * opt_value + (1.0 - x) * residual_gain
                if 3.0 * value < rhs - TOLERANCE:
                    violate(
                        "parallel-greedy-composite",
                        f"residue {residue}, x={x}: {3.0 * value} < {rhs}",
                    )

    return rows, violations


def _leaf_count(k: int) -> int:
    total = 1
    for i in range(2, k + 1):
        total *= i
    return total


def run_suite(max_n: int, max_k: int, jobs: int = 1) -> SuiteReport:
    instances = list(enumerate_small_instances(max_n, max_k))
    if not instances:
        raise ValueError("the requested budgets produce no instances (rank >= 2 required)")
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(check_instance, instances))
    else:
        results = [check_instance(instance) for instance in instances]
    rows: list[dict] = []
    violations: list[dict] = []
    for instance_rows, instance_violations in results:
        rows.extend(instance_rows)
        violations.extend(instance_violations)
    rows.sort(key=lambda row: (row["label"], row["algorithm"]))
    summary: dict = {"instances": len(instances), "violations": len(violations), "per_algorithm": {}}
    for algorithm in ALGORITHMS:
        ratios = [row["ratio"] for row in rows if row["algorithm"] == algorithm]
        summary["per_algorithm"][algorithm] = {
            "min_ratio": min(ratios),
            "mean_ratio": sum(ratios) / len(ratios),
        }
    return SuiteReport(rows=rows, summary=summary, violations=violations)


def _write_suite_files(report: SuiteReport, out_base: str) -> tuple[str, str]:
    csv_path = f"{out_base}.csv"
    json_path = f"{out_base}.json"
    with open(csv_path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=ROW_FIELDS)
        writer.writeheader()
        for row in report.rows:
            writer.writerow({field: row[field] for field in ROW_FIELDS})
    with open(json_path, "w", encoding="utf-8") as handle:
        json.dump(
            {"rows": report.rows, "summary": report.summary, "violations": report.violations},
            handle,
            indent=2,
            sort_keys=True,
        )
        handle.write("\n")
    return csv_path, json_path


def measure_complexity(
    n_grid: list[int],
    k_grid: list[int],
    seeds: int,
    matroid_kind: str = "partition",
    function_kind: str = "modular",
    x: float = DEFAULT_X,
) -> list[dict]:
    """Query counts of the deterministic solver across an (n, k) grid."""
    rows: list[dict] = []
    for n in n_grid:
        for k in k_grid:
            for s in range(seeds):
                seed = n * 1_000 + k * 10 + s
                try:
                    instance = random_instance(
                        seed, n, matroid_kind=matroid_kind, function_kind=function_kind, rank=k
                    )
                except ValueError as exc:
                    rows.append({"n": n, "k": k, "seed": seed, "skipped": str(exc)})
                    continue
                f, matroid = build(instance)
                report = solve(f, matroid, "msg-det", x=x)
                denominator = n * k * k
                rows.append(
                    {
                        "n": n,
                        "k": k,
                        "seed": seed,
                        "value_queries": report.counts.value_queries,
                        "independence_queries": report.counts.independence_queries,
                        "value_fit": report.counts.value_queries / denominator,
                        "independence_fit": report.counts.independence_queries / denominator,
                    }
                )
    return rows


def _parse_grid(text: str) -> list[int]:
    items = [piece.strip() for piece in text.split(",") if piece.strip()]
    return [int(piece) for piece in items]


def _parse_p(text: str) -> float | None:
    if text == "auto":
        return None
    try:
        value = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"p must be a real number or 'auto', got {text!r}") from exc
    return value


def cmd_run(args: argparse.Namespace) -> int:
    try:
        instance = load(args.instance)
    except (OSError, InstanceFormatError) as exc:
        _err(str(exc))
        return 2
    if args.p is not None and not 0.0 <= args.p <= 1.0:
        _err(f"p must lie in [0, 1], got {args.p}")
        return 2
    f, matroid = build(instance)
    try:
        report = solve(f, matroid, args.algorithm, x=args.x, p=args.p, seed=args.seed)
    except ValueError as exc:
        _err(str(exc))
        return 2
    payload = report.to_dict()
    payload["instance"] = {"path": args.instance, "label": instance.label, "n": instance.n, "k": matroid.rank}
    if args.opt:
        try:
            opt_value, opt_base = brute_force_opt(f, matroid, max_bases=args.max_bases)
        except BudgetExceededError as exc:
            _err(str(exc))
            return 3
        payload["opt"] = opt_value
        payload["opt_witness"] = list(opt_base)
        payload["ratio"] = _ratio(report.value, opt_value)
    text = json.dumps(payload, indent=2, sort_keys=True)
    print(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    return 0


def cmd_suite(args: argparse.Namespace) -> int:
    if args.max_k < 2:
        _err("the suite needs max-k >= 2; rank-1 instances are excluded by design")
        return 2
    if args.max_n < 2 or args.max_n > 10 or args.max_k > 4:
        _err("suite budgets are limited to 2 <= max-n <= 10 and 2 <= max-k <= 4")
        return 2
    try:
        report = run_suite(args.max_n, args.max_k, jobs=args.jobs)
    except ValueError as exc:
        _err(str(exc))
        return 2
    csv_path, json_path = _write_suite_files(report, args.out)
    print(f"instances: {report.summary['instances']}")
    for algorithm, stats in report.summary["per_algorithm"].items():
        print(
            f"{algorithm}: min ratio {stats['min_ratio']:.6f}, "
            f"mean ratio {stats['mean_ratio']:.6f}"
        )
    print(f"violations: {len(report.violations)}")
    print(f"wrote {csv_path} and {json_path}")
    if report.violations:
        for violation in report.violations[:20]:
            print(f"  {violation['label']}: {violation['check']}: {violation['detail']}")
        return 1
    return 0


def cmd_complexity(args: argparse.Namespace) -> int:
    n_grid = _parse_grid(args.n_grid)
    k_grid = _parse_grid(args.k_grid)
    if not n_grid or not k_grid or args.seeds < 1:
        _err("complexity needs non-empty n and k grids and at least one seed")
        return 2
    rows = measure_complexity(
        n_grid,
        k_grid,
        args.seeds,
        matroid_kind=args.matroid,
        function_kind=args.function,
        x=args.x,
    )
    measured = [row for row in rows if "skipped" not in row]
    print(f"{'n':>5} {'k':>3} {'seed':>6} {'value_q':>9} {'indep_q':>9} {'value_fit':>10}")
    for row in rows:
        if "skipped" in row:
            print(f"{row['n']:>5} {row['k']:>3} {row['seed']:>6} skipped: {row['skipped']}")
        else:
            print(
                f"{row['n']:>5} {row['k']:>3} {row['seed']:>6} "
                f"{row['value_queries']:>9} {row['independence_queries']:>9} "
                f"{row['value_fit']:>10.4f}"
            )
    if measured:
        fits = [row["value_fit"] for row in measured]
        print(f"value_fit spread: min {min(fits):.4f}, max {max(fits):.4f}, "
              f"ratio {max(fits) / min(fits):.3f}")
    if args.out:
        fields = ["n", "k", "seed", "value_queries", "independence_queries", "value_fit", "independence_fit"]
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=fields)
            writer.writeheader()
            for row in measured:
                writer.writerow({field: row[field] for field in fields})
        print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="submod",
        description="Monotone submodular maximization under a matroid constraint",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="solve a single instance file")
    run_parser.add_argument("--instance", required=True, help="path to an instance JSON file")
    run_parser.add_argument("--algorithm", default="msg-det", choices=ALGORITHMS)
    run_parser.add_argument("--x", type=float, default=DEFAULT_X)
    run_parser.add_argument("--p", type=_parse_p, default="auto",
                            help="split bias in [0, 1], or 'auto' to derive it from x")
    run_parser.add_argument("--seed", type=int, default=0)
    run_parser.add_argument("--opt", action="store_true",
                            help="also compute the exact optimum by base enumeration")
    run_parser.add_argument("--max-bases", type=int, default=50_000)
    run_parser.add_argument("--out", default=None, help="also write the JSON report here")
    run_parser.set_defaults(handler=cmd_run)

    suite_parser = commands.add_parser("suite", help="run the exhaustive verification suite")
    suite_parser.add_argument("--max-n", type=int, default=8)
    suite_parser.add_argument("--max-k", type=int, default=3)
    suite_parser.add_argument("--out", default="suite_report")
    suite_parser.add_argument("--jobs", type=int, default=1)
    suite_parser.set_defaults(handler=cmd_suite)

    complexity_parser = commands.add_parser("complexity", help="measure oracle query scaling")
    complexity_parser.add_argument("--n-grid", default="20,40,80")
    complexity_parser.add_argument("--k-grid", default="4,8")
    complexity_parser.add_argument("--seeds", type=int, default=3)
    complexity_parser.add_argument("--matroid", default="partition",
                                   choices=("uniform", "partition", "graphic"))
    complexity_parser.add_argument("--function", default="modular",
                                   choices=("modular", "coverage", "weighted_coverage", "concave_of_modular"))
    complexity_parser.add_argument("--x", type=float, default=DEFAULT_X)
    complexity_parser.add_argument("--out", default=None)
    complexity_parser.set_defaults(handler=cmd_complexity)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
