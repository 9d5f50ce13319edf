"""Command-line front end: ``simulate``, ``analyze``, ``sweep`` and ``verify``.

Exit codes: 0 ok, 1 usage or I/O error, 2 inconsistent table, 3 soundness violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Sequence

from .attack import AttackConfig, random_attack, soundness_check
from .channel import ChannelParams, ideal_table, sampled_table
from .core import AnalysisSettings, InconsistentTableError, Mode, ProbabilityTable, TableError
from .keyrate import NoKeyEventsError, analyze

EXIT_OK, EXIT_USAGE, EXIT_INCONSISTENT, EXIT_VIOLATION = 0, 1, 2, 3

SWEEP_COLUMNS = (
    "theta", "e_b", "omega", "e_bit", "e_phase", "rate",
    "L22", "U22", "L23", "U23", "L32", "U32", "L33", "U33",
)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_analysis_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.RFI.value)
    p.add_argument("--grid-coeff", type=int, default=301, help="coefficient grid points per axis over [0, A_MAX]")
    p.add_argument("--r-step", type=float, default=1e-3, help="modulus sweep step")
    p.add_argument("--angle-step-deg", type=float, default=1.0, help="angle grid step for --modulus-method grid")
    p.add_argument("--modulus-method", choices=["arc", "grid"], default="arc")


def _settings(args: argparse.Namespace) -> AnalysisSettings:
    return AnalysisSettings(
        grid_coeff=args.grid_coeff,
        r_step=args.r_step,
        angle_step_deg=args.angle_step_deg,
        modulus_method=args.modulus_method,
    )


def _jobs(value: int | None) -> int:
    return value if value and value > 0 else (os.cpu_count() or 1)


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rfiqkd", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sim = sub.add_parser("simulate", help="write the channel-model table")
    sim.add_argument("--eb", type=float, required=True)
    angle = sim.add_mutually_exclusive_group(required=True)
    angle.add_argument("--theta", type=float, help="rotation angle in radians")
    angle.add_argument("--theta-deg", type=float, help="rotation angle in degrees")
    sim.add_argument("--shots", type=int)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out")

    ana = sub.add_parser("analyze", help="key-rate report for a table file")
    ana.add_argument("--table", required=True)
    ana.add_argument("--out")
    _add_analysis_flags(ana)

    sw = sub.add_parser("sweep", help="CSV of key rates over angles in [0, pi] and bit error rates")
    sw.add_argument("--eb-list", required=True, help="comma-separated bit error rates")
    sw.add_argument("--theta-steps", type=int, required=True)
    sw.add_argument("--full-circle", action="store_true", help="mirror onto (pi, 2pi) by symmetry")
    sw.add_argument("--jobs", type=int, default=None)
    sw.add_argument("--out")
    _add_analysis_flags(sw)

    ver = sub.add_parser("verify", help="soundness fuzz against random attacks")
    ver.add_argument("--instances", type=int, required=True)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--states", choices=["random", "ideal"], default="random")
    ver.add_argument("--ideal-mix", type=float, default=0.0)
    ver.add_argument("--jitter", type=float, default=0.05)
    ver.add_argument("--jobs", type=int, default=None)
    ver.add_argument("--verbose", action="store_true")
    return parser


def cmd_simulate(args: argparse.Namespace) -> int:
    theta = args.theta if args.theta is not None else math.radians(args.theta_deg)
    params = ChannelParams(args.eb, theta)
    if args.shots is None:
        text = ideal_table(params).dumps()
    else:
        table, counts = sampled_table(params, args.shots, args.seed)
        text = json.dumps({"size": table.size, "shots": args.shots, "counts": counts.tolist()})
    _emit(text + "\n", args.out)
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    try:
        with open(args.table, encoding="utf-8") as fh:
            table = ProbabilityTable.loads(fh.read())
        report = analyze(table, args.mode, _settings(args))
    except InconsistentTableError as exc:
        print(f"rfiqkd: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (OSError, TableError, NoKeyEventsError) as exc:
        print(f"rfiqkd: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(json.dumps(report.to_dict(), indent=2) + "\n", args.out)
    return EXIT_OK


def _sweep_point(job: tuple[float, float, str, AnalysisSettings]) -> list[float]:
    theta, eb, mode, settings = job
    report = analyze(ideal_table(ChannelParams(eb, theta)), mode, settings)
    bounds: list[float] = []
    for label in ("22", "23", "32", "33"):
        iv = report.intervals.get(label)
        bounds += [iv.lower, iv.upper] if iv is not None else [math.nan, math.nan]
    return [theta, eb, report.omega, report.e_bit, report.e_phase, report.rate, *bounds]


def _mirror(row: Sequence[float]) -> list[float]:
    """Row for 2pi - theta: intervals of pairs 23 and 32 trade places."""
    theta, eb, omega, e_bit, e_phase, rate, l22, u22, l23, u23, l32, u32, l33, u33 = row
    return [2.0 * math.pi - theta, eb, omega, e_bit, e_phase, rate, l22, u22, l32, u32, l23, u23, l33, u33]


def sweep_rows(
    eb_list: Sequence[float],
    theta_steps: int,
    mode: Mode | str = Mode.RFI,
    settings: AnalysisSettings | None = None,
    full_circle: bool = False,
    jobs: int = 1,
) -> list[list[float]]:
    settings = settings or AnalysisSettings()
    thetas = [math.pi * i / (theta_steps - 1) for i in range(theta_steps)]
    work = [(th, eb, Mode(mode).value, settings) for th in thetas for eb in eb_list]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_point, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        rows = [_sweep_point(w) for w in work]
    if full_circle:
        n = len(eb_list)
        # skip theta = 0 and pi, whose mirrors coincide with computed angles
        inner = rows[n:-n] if theta_steps > 2 else []
        mirrored = [_mirror(r) for r in inner]
        mirrored.sort(key=lambda r: (r[0], eb_list.index(r[1])))
        rows = rows + mirrored
    return rows


def format_csv(rows: Iterable[Sequence[float]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        eb_list = [float(x) for x in args.eb_list.split(",") if x.strip()]
    except ValueError:
        print("rfiqkd: --eb-list must be comma-separated numbers", file=sys.stderr)
        return EXIT_USAGE
    if not eb_list or any(not 0.0 <= eb <= 0.5 for eb in eb_list):
        print("rfiqkd: --eb-list values must lie in [0, 0.5]", file=sys.stderr)
        return EXIT_USAGE
    if args.theta_steps < 2:
        print("rfiqkd: --theta-steps must be at least 2", file=sys.stderr)
        return EXIT_USAGE
    rows = sweep_rows(eb_list, args.theta_steps, args.mode, _settings(args), args.full_circle, _jobs(args.jobs))
    _emit(format_csv(rows), args.out)
    return EXIT_OK


def _verify_one(job: tuple[int, AttackConfig]) -> tuple[int, str, float | None, float | None, list[str], dict | None]:
    seed, config = job
    res = soundness_check(random_attack(seed, config))
    return seed, res.status, res.omega, res.true_modulus, res.violations, res.dump


def cmd_verify(args: argparse.Namespace) -> int:
    if args.instances < 1:
        print("rfiqkd: --instances must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    config = AttackConfig(states=args.states, ideal_mix=args.ideal_mix, jitter=args.jitter)
    work = [(args.seed + i, config) for i in range(args.instances)]
    jobs = _jobs(args.jobs)
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_verify_one, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        results = [_verify_one(w) for w in work]
    counts = {"pass": 0, "degenerate": 0, "violation": 0}
    for seed, status, omega, modulus, violations, dump in results:
        counts[status] += 1
        if args.verbose or status == "violation":
            om = "-" if omega is None else f"{omega:.6f}"
            rr = "-" if modulus is None else f"{modulus:.6f}"
            print(f"seed={seed} status={status} omega={om} true_r={rr}")
        for msg in violations:
            print(f"  {msg}")
        if dump is not None:
            print("  instance: " + json.dumps(dump))
    print(
        f"instances={args.instances} pass={counts['pass']} "
        f"degenerate={counts['degenerate']} violation={counts['violation']}"
    )
    return EXIT_VIOLATION if counts["violation"] else EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return cmd_simulate(args)
        if args.command == "analyze":
            return cmd_analyze(args)
        if args.command == "sweep":
            return cmd_sweep(args)
        return cmd_verify(args)
    except ValueError as exc:
        print(f"rfiqkd: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
