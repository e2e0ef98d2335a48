"""Command-line interface.

Subcommands:

    moments   point evaluation of mean / second moment / variance
    sweep     CSV sweep of the mean over a location grid (figure data)
    verify    closed forms vs quadrature and Monte Carlo over a grid
    sample    seeded draws from the base, folded, or truncated variate

Exit codes: 0 success, 2 usage or domain error, 3 I/O error,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Sequence, TextIO

import numpy as np

from .errors import NonexistentMomentError
from .folded import FoldedT, mean_folded, second_moment_folded, variance_folded
from .oracle import (
    QUANTITIES,
    McConfig,
    QuadratureConfig,
    VerificationReport,
    verify_grid,
)
from .student import StudentParams, sample
from .truncated import (
    TruncatedT,
    mean_truncated,
    sample_truncated,
    second_moment_truncated,
    variance_truncated,
)

__all__ = ["main", "SweepSpec", "run_moments", "run_sweep", "run_verify"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_VERIFY = 4


@dataclass(frozen=True)
class SweepSpec:
    """Location sweep of one derived variate at fixed degrees of freedom."""

    dist: str
    nu: float
    mu_min: float
    mu_max: float
    steps: int
    sigma: float = 1.0

    def __post_init__(self) -> None:
        if self.dist not in ("folded", "truncated"):
            raise ValueError(f"dist must be 'folded' or 'truncated', got {self.dist!r}")
        if not self.mu_min < self.mu_max:
            raise ValueError("mu_min must be strictly below mu_max")
        if self.steps < 2:
            raise ValueError(f"steps must be >= 2, got {self.steps!r}")
        if not (math.isfinite(self.sigma) and self.sigma > 0.0):
            raise ValueError(f"sigma must be finite and > 0, got {self.sigma!r}")


def _fmt(value: float) -> str:
    """CSV cell: 12 significant digits, plain decimal point."""
    return f"{value:.12g}"


def _moment_fields(dist: str, params: StudentParams, lower: float | None) -> dict:
    """mean / second_raw / variance for one parameter point, omitting the
    moments that do not exist (with a note) per the nu gates."""
    if dist == "folded":
        fold = FoldedT(params)
        fields: dict = {"mean": mean_folded(fold)}
        if params.nu > 2.0:
            fields["second_raw"] = second_moment_folded(fold)
            fields["variance"] = variance_folded(fold)
    else:
        trunc = TruncatedT(params, lower=lower if lower is not None else 0.0)
        fields = {"mean": mean_truncated(trunc)}
        if params.nu > 2.0:
            fields["second_raw"] = second_moment_truncated(trunc)
            fields["variance"] = variance_truncated(trunc)
    if params.nu <= 2.0:
        fields["note"] = f"second_raw and variance require nu > 2 (nu = {params.nu:g})"
    return fields


def run_moments(args: argparse.Namespace, out: TextIO) -> int:
    if args.lower is not None and args.dist != "truncated":
        raise ValueError("--lower is only valid with --dist truncated")
    params = StudentParams(args.mu, args.nu, args.sigma)
    fields = _moment_fields(args.dist, params, args.lower)
    if args.format == "json":
        print(json.dumps(fields), file=out)
    elif args.format == "csv":
        print(",".join(fields), file=out)
        print(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in fields.values()), file=out)
    else:
        for key, value in fields.items():
            print(f"{key}={value!r}" if isinstance(value, float) else f"{key}={value}", file=out)
    return EXIT_OK


def sweep_rows(spec: SweepSpec) -> list[tuple[float, float, float | None, float]]:
    """(mu, mean, variance-or-None, diag_gap) rows, location ascending."""
    rows = []
    for mu in np.linspace(spec.mu_min, spec.mu_max, spec.steps):
        params = StudentParams(float(mu), spec.nu, spec.sigma)
        if spec.dist == "folded":
            mean = mean_folded(FoldedT(params))
            var = variance_folded(FoldedT(params)) if spec.nu > 2.0 else None
        else:
            mean = mean_truncated(TruncatedT(params))
            var = variance_truncated(TruncatedT(params)) if spec.nu > 2.0 else None
        rows.append((float(mu), mean, var, mean - float(mu)))
    return rows


def sweep_csv(rows: Sequence[tuple[float, float, float | None, float]]) -> str:
    lines = ["mu,mean,variance,diag_gap"]
    for mu, mean, var, gap in rows:
        var_cell = _fmt(var) if var is not None else ""
        lines.append(f"{_fmt(mu)},{_fmt(mean)},{var_cell},{_fmt(gap)}")
    return "\n".join(lines) + "\n"


def _ascii_chart(
    mus: Sequence[float], means: Sequence[float], width: int = 60, height: int = 20
) -> str:
    """Coarse character plot: '*' mean curve, '.' the diagonal."""
    lo = min(min(means), min(mus))
    hi = max(max(means), max(mus))
    if hi <= lo:
        hi = lo + 1.0
    grid = [[" "] * width for _ in range(height)]

    def put(col: int, value: float, mark: str) -> None:
        frac = (value - lo) / (hi - lo)
        row = height - 1 - min(height - 1, max(0, int(round(frac * (height - 1)))))
        if grid[row][col] == " " or mark == "*":
            grid[row][col] = mark

    mu_lo, mu_hi = mus[0], mus[-1]
    for col in range(width):
        mu = mu_lo + (mu_hi - mu_lo) * col / (width - 1)
        put(col, mu, ".")
        put(col, float(np.interp(mu, mus, means)), "*")
    lines = ["".join(row) for row in grid]
    lines.append(f"mu in [{mu_lo:g}, {mu_hi:g}]; y in [{lo:g}, {hi:g}]; * mean, . diagonal")
    return "\n".join(lines)


def run_sweep(spec: SweepSpec, out_path: str, ascii_plot: bool = False, plot_path: str | None = None) -> int:
    rows = sweep_rows(spec)
    text = sweep_csv(rows)
    if out_path == "-":
        sys.stdout.write(text)
    else:
        with open(out_path, "w", newline="\n") as handle:
            handle.write(text)
    if plot_path is not None:
        from .plotting import save_sweep_figure

        save_sweep_figure([r[0] for r in rows], [r[1] for r in rows], spec.dist, spec.nu, plot_path)
    if ascii_plot:
        print(_ascii_chart([r[0] for r in rows], [r[1] for r in rows]))
    return EXIT_OK


def _report_lines_plain(report: VerificationReport) -> list[str]:
    header = f"{'mu':>8} {'nu':>6} {'quantity':<13} {'closed':>16} {'quadrature':>16} {'rel_err':>10} {'mc':>14} {'mc_se':>10} {'ok':>4}"
    lines = [header]
    for e in report.entries:
        lines.append(
            f"{e.mu:8.2f} {e.nu:6.2f} {e.quantity:<13} {e.closed_form:16.9e} "
            f"{e.quadrature:16.9e} {e.rel_err:10.2e} {e.mc_estimate:14.6e} "
            f"{e.mc_stderr:10.2e} {'yes' if e.passed else 'NO':>4}"
        )
    return lines


def _report_csv(report: VerificationReport) -> str:
    lines = ["mu,nu,quantity,closed_form,quadrature,mc_estimate,mc_stderr,rel_err,pass"]
    for e in report.entries:
        lines.append(
            f"{_fmt(e.mu)},{_fmt(e.nu)},{e.quantity},{_fmt(e.closed_form)},"
            f"{_fmt(e.quadrature)},{_fmt(e.mc_estimate)},{_fmt(e.mc_stderr)},"
            f"{_fmt(e.rel_err)},{str(e.passed).lower()}"
        )
    return "\n".join(lines) + "\n"


def _report_json(report: VerificationReport) -> str:
    return json.dumps(
        {
            "entries": [
                {
                    "mu": e.mu,
                    "nu": e.nu,
                    "quantity": e.quantity,
                    "closed_form": e.closed_form,
                    "quadrature": e.quadrature,
                    "mc_estimate": e.mc_estimate,
                    "mc_stderr": e.mc_stderr,
                    "rel_err": e.rel_err,
                    "pass": e.passed,
                }
                for e in report.entries
            ],
            "skipped": [
                {"mu": s.mu, "nu": s.nu, "quantity": s.quantity, "reason": s.reason}
                for s in report.skipped
            ],
            "overall_pass": report.overall_pass,
        }
    )


def run_verify(args: argparse.Namespace) -> int:
    if args.mu_step <= 0.0:
        raise ValueError(f"--mu-step must be > 0, got {args.mu_step!r}")
    if args.mu_min > args.mu_max:
        raise ValueError("--mu-min must not exceed --mu-max")
    nu_grid = [float(v) for v in args.nu_list.split(",") if v.strip()]
    if not nu_grid:
        raise ValueError("--nu-list must name at least one value")
    quantities = tuple(q.strip() for q in args.quantities.split(",") if q.strip())
    n_steps = int(math.floor((args.mu_max - args.mu_min) / args.mu_step + 1e-9)) + 1
    mu_grid = [args.mu_min + i * args.mu_step for i in range(n_steps)]
    report = verify_grid(
        mu_grid,
        nu_grid,
        quantities=quantities,
        qcfg=QuadratureConfig(),
        mcfg=McConfig(n=args.mc_samples, seed=args.seed),
        threshold=args.tol,
    )
    if args.format == "json":
        print(_report_json(report))
    elif args.format == "csv":
        sys.stdout.write(_report_csv(report))
    else:
        for line in _report_lines_plain(report):
            print(line)
        if report.skipped:
            print(f"skipped {len(report.skipped)} (moment does not exist)")
    total = len(report.entries)
    failed = sum(1 for e in report.entries if not e.passed)
    if report.overall_pass:
        print(f"PASS {total}/{total}")
        return EXIT_OK
    print(f"FAIL {failed}/{total}")
    return EXIT_VERIFY


def run_sample(args: argparse.Namespace, out: TextIO) -> int:
    params = StudentParams(args.mu, args.nu, args.sigma)
    if args.dist == "student":
        draws = sample(params, args.n, args.seed)
    elif args.dist == "folded":
        from .folded import sample_folded

        draws = sample_folded(FoldedT(params), args.n, args.seed)
    else:
        draws = sample_truncated(
            TruncatedT(params, lower=args.lower if args.lower is not None else 0.0),
            args.n,
            args.seed,
        )
    for value in draws:
        print(repr(float(value)), file=out)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tmoments",
        description="Moments of folded and zero-truncated Student t variates, "
        "with quadrature and Monte Carlo verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    mom = sub.add_parser("moments", help="closed-form moments at one parameter point")
    mom.add_argument("--dist", choices=("folded", "truncated"), required=True)
    mom.add_argument("--mu", type=float, required=True, help="location")
    mom.add_argument("--nu", type=float, required=True, help="degrees of freedom")
    mom.add_argument("--sigma", type=float, default=1.0, help="scale (default 1)")
    mom.add_argument("--lower", type=float, default=None, help="truncation point (truncated only)")
    mom.add_argument("--format", choices=("json", "csv", "plain"), default="plain")

    swp = sub.add_parser("sweep", help="CSV sweep of the mean over a location grid")
    swp.add_argument("--dist", choices=("folded", "truncated"), required=True)
    swp.add_argument("--nu", type=float, required=True)
    swp.add_argument("--mu-min", type=float, default=-5.0)
    swp.add_argument("--mu-max", type=float, default=10.0)
    swp.add_argument("--steps", type=int, default=301)
    swp.add_argument("--sigma", type=float, default=1.0)
    swp.add_argument("--out", required=True, help="output CSV path, or - for stdout")
    swp.add_argument("--ascii-plot", action="store_true", help="print a coarse character chart")
    swp.add_argument("--plot", default=None, metavar="PATH", help="also render the figure to PATH")

    ver = sub.add_parser("verify", help="closed forms vs quadrature and Monte Carlo")
    ver.add_argument("--mu-min", type=float, default=-10.0)
    ver.add_argument("--mu-max", type=float, default=10.0)
    ver.add_argument("--mu-step", type=float, default=0.5)
    ver.add_argument("--nu-list", default="2.5,3,5,10,30", help="comma-separated degrees of freedom")
    ver.add_argument("--quantities", default=",".join(QUANTITIES), help="comma-separated subset of " + ",".join(QUANTITIES))
    ver.add_argument("--tol", type=float, default=1e-8, help="quadrature relative-error threshold")
    ver.add_argument("--mc-samples", type=int, default=1_000_000)
    ver.add_argument("--seed", type=int, default=42)
    ver.add_argument("--format", choices=("json", "csv", "plain"), default="plain")

    smp = sub.add_parser("sample", help="seeded draws, one per line")
    smp.add_argument("--dist", choices=("student", "folded", "truncated"), required=True)
    smp.add_argument("--mu", type=float, required=True)
    smp.add_argument("--nu", type=float, required=True)
    smp.add_argument("--sigma", type=float, default=1.0)
    smp.add_argument("--lower", type=float, default=None)
    smp.add_argument("-n", type=int, required=True, help="number of draws")
    smp.add_argument("--seed", type=int, required=True)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "moments":
            return run_moments(args, sys.stdout)
        if args.command == "sweep":
            spec = SweepSpec(args.dist, args.nu, args.mu_min, args.mu_max, args.steps, args.sigma)
            return run_sweep(spec, args.out, ascii_plot=args.ascii_plot, plot_path=args.plot)
        if args.command == "verify":
            return run_verify(args)
        return run_sample(args, sys.stdout)
    except (NonexistentMomentError, ValueError) as exc:
        print(f"tmoments: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"tmoments: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
