"""Command-line surface.

Subcommands: entropy, smooth, gap, rate, aep, quantum-entropy,
quantum-smooth, quantum-rate, weyl-check. Report-producing commands
(rate, quantum-rate, aep) write a fixed-point CSV plus a rendered figure
alongside it. Exit codes: 0 success, 1 validation error, 2 numerical
failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import fileio
from .entropy import EntropyOrder, renyi_entropy
from .errors import EntropyError, NumericalError, ValidationError
from .experiments import (
    ExperimentConfig,
    quantum_rate_convergence,
    rate_convergence,
    write_rate_csv,
)
from .quantum import quantum_renyi, smooth_quantum_renyi, weyl_check
from .smoothing import BallKind, closeness_gap, smooth_subball, smooth_traceball
from .sources import typical_fraction_mc, typical_set_report
from .units import unit_label, using_log_base


class _CliParser(argparse.ArgumentParser):
    """Argparse that reports usage problems as validation errors (exit 1)."""

    def error(self, message):
        raise ValidationError(message)


def _parse_grid(text: str) -> tuple[int, ...]:
    try:
        grid = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise ValidationError(f"--n expects a comma-separated integer list, got {text!r}") from exc
    if not grid:
        raise ValidationError("--n expects at least one block length")
    return grid


def _add_common(parser: argparse.ArgumentParser, *, eps: bool = False, ball: bool = False,
                grid: bool = False, seed: bool = False, out: bool = False) -> None:
    parser.add_argument("--alpha", required=True, type=EntropyOrder.parse,
                        help="entropy order: a real, 0, 1 or inf")
    if eps:
        parser.add_argument("--eps", required=True, type=float, help="smoothing radius")
    if ball:
        parser.add_argument("--ball", default="sub", type=BallKind.parse,
                            help="closeness notion: sub or trace")
    if grid:
        parser.add_argument("--n", required=True, type=_parse_grid,
                            help="comma-separated ascending block lengths")
    if seed:
        parser.add_argument("--seed", default=0, type=int, help="rng seed")
    if out:
        parser.add_argument("--out", required=True, type=Path, help="output CSV path")
        parser.add_argument("--plot", type=Path, default=None,
                            help="figure path (default: CSV path with .png)")
        parser.add_argument("--no-plot", action="store_true", help="skip the figure")


def build_parser() -> argparse.ArgumentParser:
    parser = _CliParser(prog="smoothrenyi",
                        description="smooth Renyi entropy toolkit")
    parser.add_argument("--base", default="2", choices=("2", "e"),
                        help="output log base (default 2: bits)")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("entropy", help="Renyi entropy of a distribution file")
    p.add_argument("--dist", required=True, type=Path)
    _add_common(p)
    p.set_defaults(func=_cmd_entropy)

    p = commands.add_parser("smooth", help="smooth Renyi entropy of a distribution file")
    p.add_argument("--dist", required=True, type=Path)
    _add_common(p, eps=True, ball=True)
    p.set_defaults(func=_cmd_smooth)

    p = commands.add_parser("gap", help="trace-ball minus sub-ball smoothed entropy")
    p.add_argument("--dist", required=True, type=Path)
    _add_common(p, eps=True)
    p.set_defaults(func=_cmd_gap)

    p = commands.add_parser("rate", help="classical rate-convergence experiment")
    p.add_argument("--chain", required=True, type=Path)
    _add_common(p, eps=True, ball=True, grid=True, seed=True, out=True)
    p.set_defaults(func=_cmd_rate)

    p = commands.add_parser("aep", help="typical-set mass and size diagnostics")
    p.add_argument("--chain", required=True, type=Path)
    p.add_argument("--eps", required=True, type=float)
    p.add_argument("--n", required=True, type=_parse_grid)
    p.add_argument("--samples", default=0, type=int,
                   help="Monte-Carlo samples per n (0: exact only)")
    p.add_argument("--seed", default=0, type=int)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--plot", type=Path, default=None)
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=_cmd_aep)

    p = commands.add_parser("quantum-entropy", help="Renyi entropy of a density file")
    p.add_argument("--density", required=True, type=Path)
    _add_common(p)
    p.set_defaults(func=_cmd_quantum_entropy)

    p = commands.add_parser("quantum-smooth",
                            help="smooth Renyi entropy of a density file")
    p.add_argument("--density", required=True, type=Path)
    _add_common(p, eps=True, ball=True)
    p.set_defaults(func=_cmd_quantum_smooth)

    p = commands.add_parser("quantum-rate", help="quantum rate-convergence experiment")
    p.add_argument("--qsource", required=True, type=Path)
    _add_common(p, eps=True, ball=True, grid=True, seed=True, out=True)
    p.set_defaults(func=_cmd_quantum_rate)

    p = commands.add_parser("weyl-check",
                            help="ordered-eigenvalue margins after adding a PSD matrix")
    p.add_argument("--a", type=Path, default=None, help="Hermitian matrix file")
    p.add_argument("--b", type=Path, default=None, help="PSD Hermitian matrix file")
    p.add_argument("--dim", type=int, default=8, help="dimension for the random campaign")
    p.add_argument("--trials", type=int, default=100, help="random pairs to test")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_weyl)

    return parser


def _print_value(value: float) -> None:
    print(f"{value:.6f} {unit_label()}")


def _cmd_entropy(args) -> int:
    _print_value(renyi_entropy(fileio.load_distribution(args.dist), args.alpha))
    return 0


def _cmd_smooth(args) -> int:
    dist = fileio.load_distribution(args.dist)
    if args.ball is BallKind.SUB_NORMALIZED:
        result = smooth_subball(dist, args.alpha, args.eps)
    else:
        result = smooth_traceball(dist, args.alpha, args.eps)
    _print_value(result.value)
    if not result.exact:
        print("note: non-certified search value (trace ball at a general order)")
    return 0


def _cmd_gap(args) -> int:
    report = closeness_gap(fileio.load_distribution(args.dist), args.alpha, args.eps)
    unit = unit_label()
    print(f"sub {report.sub_value:.6f} {unit}")
    print(f"trace {report.trace_value:.6f} {unit}")
    print(f"gap {report.gap:.6f} {unit}")
    print(f"bound {report.bound:.6f} {unit}")
    print(f"sandwich {'ok' if report.sandwich_ok else 'VIOLATED'}")
    return 0 if report.sandwich_ok else 2


def _figure_path(args) -> Path | None:
    if args.no_plot:
        return None
    return args.plot if args.plot is not None else args.out.with_suffix(".png")


def _cmd_rate(args) -> int:
    chain = fileio.load_chain(args.chain)
    config = ExperimentConfig(order=args.alpha, epsilon=args.eps, n_grid=args.n,
                              ball=args.ball, seed=args.seed)
    series = rate_convergence(chain, config)
    path = write_rate_csv(series, args.out)
    print(f"wrote {path}")
    figure = _figure_path(args)
    if figure is not None:
        from .figures import save_rate_figure

        print(f"wrote {save_rate_figure(series, figure)}")
    last = series.entries[-1]
    inside = last.lower - 1e-12 <= last.value_per_n <= last.upper + 1e-12
    print(f"final n={last.n}: {last.value_per_n:.6f} {unit_label()} "
          f"(band [{last.lower:.6f}, {last.upper:.6f}], {'inside' if inside else 'outside'})")
    return 0


def _cmd_quantum_rate(args) -> int:
    source = fileio.load_quantum_source(args.qsource)
    config = ExperimentConfig(order=args.alpha, epsilon=args.eps, n_grid=args.n,
                              ball=args.ball, seed=args.seed)
    series = quantum_rate_convergence(source, config)
    path = write_rate_csv(series, args.out)
    print(f"wrote {path}")
    figure = _figure_path(args)
    if figure is not None:
        from .figures import save_rate_figure

        print(f"wrote {save_rate_figure(series, figure)}")
    return 0


def _cmd_aep(args) -> int:
    chain = fileio.load_chain(args.chain)
    grid = args.n
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValidationError("--n must be strictly ascending")
    rows = []
    for n in grid:
        exact_feasible = (
            chain.n_states ** n <= 1 << 22 or (chain.is_binary and n <= 2048)
        )
        report = typical_set_report(chain, n, args.eps) if exact_feasible else None
        fraction = (
            typical_fraction_mc(chain, n, args.eps, args.samples, args.seed)
            if args.samples > 0
            else None
        )
        rows.append((n, report, fraction))
    lines = ["n,eps,mass,log_card,log_card_bound,mass_ok,card_ok,mc_fraction"]
    for n, report, fraction in rows:
        if report is not None:
            card = "-inf" if report.log_cardinality == float("-inf") else f"{report.log_cardinality:.6f}"
            cells = [
                f"{report.mass:.6f}", card, f"{report.log_card_bound:.6f}",
                str(report.mass_ok).lower(), str(report.card_ok).lower(),
            ]
        else:
            cells = ["", "", "", "", ""]
        cells.append("" if fraction is None else f"{fraction:.6f}")
        lines.append(f"{n},{args.eps:.6f}," + ",".join(cells))
    args.out.write_text("\n".join(lines) + "\n", encoding="ascii")
    print(f"wrote {args.out}")
    figure = _figure_path(args)
    if figure is not None:
        from .figures import save_aep_figure

        plot_rows = [
            (n, report.mass if report is not None else None, fraction)
            for n, report, fraction in rows
        ]
        print(f"wrote {save_aep_figure(plot_rows, args.eps, figure)}")
    return 0


def _cmd_quantum_entropy(args) -> int:
    _print_value(quantum_renyi(fileio.load_density(args.density), args.alpha))
    return 0


def _cmd_quantum_smooth(args) -> int:
    rho = fileio.load_density(args.density)
    if args.ball is BallKind.SUB_NORMALIZED:
        result = smooth_quantum_renyi(rho, args.alpha, args.eps)
    else:
        result = smooth_traceball(rho.spectrum().as_prob_vector(), args.alpha, args.eps)
        if not result.exact:
            print("note: non-certified search value (trace ball at a general order)")
    _print_value(result.value)
    return 0


def _cmd_weyl(args) -> int:
    if (args.a is None) != (args.b is None):
        raise ValidationError("weyl-check needs both --a and --b, or neither")
    if args.a is not None:
        report = weyl_check(fileio.load_hermitian(args.a), fileio.load_hermitian(args.b))
        print(f"min_margin {report.min_margin:.3e}")
        print(f"ok {str(report.ok).lower()}")
        return 0 if report.ok else 2
    violations = 0
    worst = float("inf")
    for i in range(args.trials):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=args.seed, spawn_key=(i,)))
        d = args.dim
        g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        a = 0.5 * (g + g.conj().T)
        g2 = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        b = g2 @ g2.conj().T / d
        report = weyl_check(a, b)
        worst = min(worst, report.min_margin)
        if not report.ok:
            violations += 1
    print(f"trials {args.trials}")
    print(f"violations {violations}")
    print(f"min_margin {worst:.3e}")
    return 0 if violations == 0 else 2


def run_cli(argv=None) -> int:
    """Parse and execute; returns the process exit code."""
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        with using_log_base(args.base):
            return args.func(args)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except EntropyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
