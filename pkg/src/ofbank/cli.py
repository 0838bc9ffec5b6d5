"""Command-line interface.

Subcommands mirror the library: ``lengths``, ``feasible``, ``design``,
``simulate``, ``mc-feasibility``, ``distortion-sweep``,
``distortion-boxplot``.  Tabular results go to ``--out`` as CSV and the
matching figure to ``--svg``.  Exit codes: 0 success, 2 domain error,
3 numerical-solver failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import experiments, feasibility, plots
from .errors import DomainError, SolverFailure
from .fb_core import read_bank, write_bank
from .lengths import counting_length


def _int_range(text: str) -> list[int]:
    """Parse '7' -> [7], '3..9' -> [3..9], '3..9..2' -> [3,5,7,9]."""
    parts = text.split("..")
    try:
        if len(parts) == 1:
            return [int(parts[0])]
        if len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
            return list(range(lo, hi + 1))
        if len(parts) == 3:
            lo, hi, st = (int(p) for p in parts)
            return list(range(lo, hi + 1, st))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected INT or LO..HI[..STEP], got {text!r}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated ints, got {text!r}")


def _write(path, text: str) -> None:
    with open(path, "w") as fh:
        fh.write(text)


def _add_common(p: argparse.ArgumentParser, *names) -> None:
    if "channels" in names:
        p.add_argument("--channels", "-C", type=_int_range, required=True,
                       help="channel count, or a LO..HI[..STEP] sweep")
    if "subsampling" in names:
        p.add_argument("--subsampling", "-D", type=int, required=True)
    if "filter-len" in names:
        p.add_argument("--filter-len", type=int, required=True,
                       help="analysis filter length")
    if "synth-len" in names:
        p.add_argument("--synth-len", type=_int_range, required=True,
                       help="synthesis filter length, or a LO..HI[..STEP] sweep")
    if "trials" in names:
        p.add_argument("--trials", type=int, default=200)
    if "seed" in names:
        p.add_argument("--seed", type=int, default=0)
    if "tol" in names:
        p.add_argument("--tol", type=float, default=1e-8)
    if "out" in names:
        p.add_argument("--out", metavar="PATH", help="write CSV here")
    if "svg" in names:
        p.add_argument("--svg", metavar="PATH", help="render a figure here")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ofbank",
        description="Oversampled FIR filter banks: synthesis lengths, PR "
                    "feasibility, and reconstruction experiments.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lengths", help="length functionals over a (C, D, m_h) grid")
    p.add_argument("--channels", "-C", type=_int_range, required=True)
    p.add_argument("--subsampling", "-D", type=_int_list, required=True,
                   help="one or more subsampling factors, comma separated")
    p.add_argument("--filter-len", type=_int_list, required=True,
                   help="one or more analysis lengths, comma separated")
    _add_common(p, "out", "svg")

    p = sub.add_parser("feasible", help="test PR feasibility for a bank file")
    p.add_argument("--bank", required=True, help="analysis bank (text format)")
    _add_common(p, "synth-len", "tol", "out")
    p.add_argument("--delay", type=int, default=None,
                   help="test this delay only; default scans all admissible delays")

    p = sub.add_parser("design", help="design a synthesis bank (minimum norm)")
    p.add_argument("--bank", required=True)
    _add_common(p, "synth-len", "tol")
    p.add_argument("--delay", type=int, required=True)
    p.add_argument("--out", required=True,
                   help="write the synthesis bank here (text format)")

    p = sub.add_parser("simulate", help="run a bank pair on a signal")
    p.add_argument("--bank", required=True)
    p.add_argument("--synth", required=True, help="synthesis bank (text format)")
    p.add_argument("--input", help="whitespace-separated samples; default unit pulse")
    p.add_argument("--delay", type=int, default=None,
                   help="also report distortion after this alignment")
    _add_common(p, "out")

    p = sub.add_parser("mc-feasibility",
                       help="Monte-Carlo PR-feasibility phase diagram")
    _add_common(p, "channels", "subsampling", "filter-len", "synth-len",
                "trials", "seed", "tol", "out", "svg")
    p.add_argument("--all-delays", action="store_true",
                   help="scan every admissible delay, not just multiples of D")
    p.add_argument("--workers", type=int, default=None)

    p = sub.add_parser("distortion-sweep",
                       help="distortion of one bank vs synthesis length")
    _add_common(p, "channels", "subsampling", "filter-len", "synth-len",
                "seed", "tol", "out", "svg")

    p = sub.add_parser("distortion-boxplot",
                       help="distortion population just below the counting length")
    _add_common(p, "channels", "subsampling", "filter-len",
                "trials", "seed", "tol", "out", "svg")
    return ap


def _cmd_lengths(args) -> int:
    header, rows = experiments.run_length_curves(
        args.subsampling, args.filter_len, max(args.channels))
    rows = [r for r in rows if r[0] in set(args.channels)]
    csv_text = experiments.rows_to_csv(header, rows)
    if args.out:
        _write(args.out, csv_text)
    else:
        sys.stdout.write(csv_text)
    if args.svg:
        plots.save_length_curves(header, rows, args.svg)
    return 0


def _single(values, flag) -> int:
    if len(values) != 1:
        raise DomainError(f"{flag} expects a single value here, got {values}")
    return values[0]


def _cmd_feasible(args) -> int:
    bank = read_bank(args.bank)
    m_v = _single(args.synth_len, "--synth-len")
    if args.delay is not None:
        res = feasibility.pr_feasible(bank, m_v, args.delay, args.tol)
        print(f"m_v={m_v} n0={args.delay} feasible={res.feasible} "
              f"residuals={[f'{r:.3e}' for r in res.residuals]}")
        results = [res]
    else:
        n0 = feasibility.pr_feasible_any_delay(bank, m_v, args.tol)
        if n0 is None:
            print(f"m_v={m_v}: no feasible delay in the admissible range")
            results = []
        else:
            res = feasibility.pr_feasible(bank, m_v, n0, args.tol)
            print(f"m_v={m_v}: first feasible delay n0={n0}")
            results = [res]
    if args.out:
        rows = [(r.m_v, r.delay, int(r.feasible)) + r.residuals for r in results]
        D = bank.subsampling
        header = ("m_v", "n0", "feasible") + tuple(f"residual_p{p}" for p in range(D))
        _write(args.out, experiments.rows_to_csv(header, rows))
    return 0


def _cmd_design(args) -> int:
    bank = read_bank(args.bank)
    m_v = _single(args.synth_len, "--synth-len")
    design = feasibility.design_synthesis(bank, m_v, args.delay, args.tol)
    write_bank(design.bank, args.out)
    kind = "exact PR" if design.feasible else "least-squares approximation"
    print(f"wrote {args.out} ({kind}; residuals="
          f"{[f'{r:.3e}' for r in design.residuals]})")
    return 0


def _cmd_simulate(args) -> int:
    analysis = read_bank(args.bank)
    synth = read_bank(args.synth)
    if args.input:
        with open(args.input) as fh:
            try:
                x = np.array([float(tok) for tok in fh.read().split()])
            except ValueError as exc:
                raise DomainError(f"bad sample in {args.input}: {exc}") from exc
        if x.size == 0:
            raise DomainError(f"no samples in {args.input}")
    else:
        x = np.zeros(100)
        x[0] = 1.0
    xh = feasibility.simulate(analysis, synth, x)
    if args.delay is not None:
        rep = feasibility.distortion(analysis, synth, x, args.delay)
        print(f"distortion at delay {args.delay}: {rep.percent:.6g}%")
    if args.out:
        _write(args.out, "\n".join(repr(float(v.real)) if v.imag == 0
                                   else repr(complex(v)) for v in xh) + "\n")
    return 0


def _cmd_mc(args) -> int:
    D = args.subsampling
    grid = experiments.run_feasibility_mc(
        args.channels, D, args.filter_len, args.synth_len,
        trials=args.trials, seed=args.seed, tol=args.tol,
        all_delays=args.all_delays, workers=args.workers)
    csv_text = grid.to_csv()
    if args.out:
        _write(args.out, csv_text)
    else:
        sys.stdout.write(csv_text)
    if args.svg:
        plots.save_mc_heatmap(grid, args.svg)
    return 0


def _cmd_sweep(args) -> int:
    C = _single(args.channels, "--channels")
    header, rows = experiments.run_distortion_sweep(
        C, args.subsampling, args.filter_len, args.synth_len,
        seed=args.seed, tol=args.tol)
    csv_text = experiments.rows_to_csv(header, rows)
    if args.out:
        _write(args.out, csv_text)
    else:
        sys.stdout.write(csv_text)
    if args.svg:
        knee = counting_length(C, args.subsampling, args.filter_len)
        plots.save_distortion_sweep(header, rows, args.svg, knee=knee)
    return 0


def _cmd_boxplot(args) -> int:
    header, rows = experiments.run_distortion_boxplot(
        args.channels, args.subsampling, args.filter_len,
        trials=args.trials, seed=args.seed, tol=args.tol)
    csv_text = experiments.rows_to_csv(header, rows)
    if args.out:
        _write(args.out, csv_text)
    else:
        sys.stdout.write(csv_text)
    if args.svg:
        plots.save_distortion_boxplot(header, rows, args.svg)
    return 0


_COMMANDS = {
    "lengths": _cmd_lengths,
    "feasible": _cmd_feasible,
    "design": _cmd_design,
    "simulate": _cmd_simulate,
    "mc-feasibility": _cmd_mc,
    "distortion-sweep": _cmd_sweep,
    "distortion-boxplot": _cmd_boxplot,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverFailure as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
