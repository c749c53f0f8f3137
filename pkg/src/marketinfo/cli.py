"""Command-line interface.

Exit codes: 0 success, 1 usage, 2 data error, 3 numerical or budget limit.
CSV goes to stdout (or ``--out``), diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import exact_dist
from .asymptotic import BoundParams, error_bound
from .efficiency_test import LEVELS, test_efficiency
from .errors import BudgetExceededError, MarketInfoError
from .montecarlo import GeneratorSpec, calibration_curve, simulate
from .pipeline import (
    RollingConfig,
    figure_bound,
    figure_calibration,
    figure_critical,
    figure_distribution,
    level_tag,
    roll_header,
    roll_records,
    run_roll,
)
from .symbolic import encode_returns, read_price_csv

EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "" if math.isnan(value) else format(float(value), ".10g")
    return str(value)


def write_csv(header, rows, out):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])


def _open_out(path):
    return open(path, "w", newline="") if path else sys.stdout


def _emit(args, header, rows):
    out = _open_out(args.out)
    try:
        write_csv(header, rows, out)
    finally:
        if out is not sys.stdout:
            out.close()


def _ints(text):
    return [int(float(v)) for v in text.split(",") if v.strip()]


def _floats(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _read_prices(path):
    if path == "-":
        return read_price_csv(sys.stdin)
    with open(path, newline="") as fh:
        return read_price_csv(fh)


def _log(msg):
    print(msg, file=sys.stderr)


# --- subcommands ---------------------------------------------------------------

def cmd_encode(args):
    series = _read_prices(args.input)
    bits = encode_returns(series)
    rows = zip(series.timestamps[1:], bits)
    _emit(args, ["date", "bit"], rows)


def cmd_test(args):
    if args.bits is not None:
        bits = args.bits.strip()
        if not bits:
            raise UsageError("empty bit string")
        if set(bits) - set("01"):
            raise MarketInfoError("bit string may only contain 0 and 1")
    elif args.input is not None:
        series = _read_prices(args.input)
        prices = series.prices
        if args.window is not None:
            if len(prices) < args.window + 1:
                raise MarketInfoError(f"need {args.window + 1} prices for window {args.window}")
            prices = prices[-(args.window + 1):]
        bits = encode_returns(prices)
    else:
        raise UsageError("give --bits or --input")

    res = test_efficiency(bits, args.L)
    crit = res.critical_values()
    est = res.estimate
    record = {
        "L": est.L,
        "N": est.N,
        "info": est.info,
        "H_full": est.H_full,
        "H_star": est.H_star,
        "shape": res.params.shape,
        "scale": res.params.scale,
        "p_value": res.p_value,
        **{f"crit{level_tag(k)}": v for k, v in crit.items()},
        "reject95": res.reject_95,
        "reject99": res.reject_99,
        "reject999": res.reject_999,
        "small_sample_warning": res.small_sample_warning,
    }
    out = _open_out(args.out)
    try:
        if args.json:
            json.dump(record, out, indent=2)
            out.write("\n")
        else:
            for k, v in record.items():
                out.write(f"{k}: {fmt(v)}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    if res.small_sample_warning:
        _log(f"warning: only N={est.N} windows; the gamma law is reliable from about 100")


def cmd_roll(args):
    series = _read_prices(args.input)
    config = RollingConfig(window=args.window, L=args.L, levels=tuple(args.levels), step=args.step)
    rows, summary = run_roll(series, config, workers=args.workers)
    _emit(args, roll_header(config), roll_records(rows, config))
    lines = [["level", "rejected", "tested", "fraction"]]
    for lvl, r, f in zip(summary.levels, summary.rejected, summary.fractions):
        lines.append([lvl, r, summary.tested, f])
    if args.summary:
        with open(args.summary, "w", newline="") as fh:
            write_csv(lines[0], lines[1:], fh)
    for lvl, f in zip(summary.levels, summary.fractions):
        _log(f"rejected at {lvl:.1%}: {f:.1%} of {summary.tested} dates")
    if summary.skipped:
        _log(f"{summary.skipped} windows skipped: unobserved prefix")


def _generator(args):
    if args.kind == "fair_coin":
        return GeneratorSpec.fair_coin(args.n)
    if args.kind == "biased_coin":
        return GeneratorSpec.biased_coin(args.p, args.n)
    return GeneratorSpec.markov(args.pi0, args.pi1, args.n)


def cmd_simulate(args):
    rep = simulate(_generator(args), args.L, args.trials, args.seed, args.workers)
    rows = zip(range(rep.trials), rep.infos, rep.p_values)
    _emit(args, ["trial", "info", "p_value"], rows)
    _log(f"ks_stat={fmt(rep.ks_statistic)} ks_pvalue={fmt(rep.ks_pvalue)} "
         f"unobserved={rep.unobserved}")
    for lvl, rate in rep.rejection_rates.items():
        _log(f"rejection rate at {lvl:.1%}: {fmt(rate)}")


def cmd_calibrate(args):
    rows = calibration_curve(args.L, args.grid, args.trials, args.seed, args.workers)
    _emit(args, ["n", "ks_stat", "ks_pvalue"], [r[:3] for r in rows])
    for n, *_, unseen in rows:
        if unseen:
            _log(f"n={n}: {unseen} trajectories with an unobserved prefix")


def cmd_figures(args):
    if args.which in ("distribution", "calibration") and args.seed is None:
        raise UsageError(f"figures {args.which} needs --seed")
    if args.which == "bound":
        header, rows = figure_bound()
    elif args.which == "critical":
        header, rows = figure_critical(args.L)
    elif args.which == "distribution":
        n = args.n if args.n is not None else (100 if args.L == 1 else 4000)
        header, rows, rep = figure_distribution(args.L, n, args.trials, args.seed, args.workers)
        _log(f"ks_stat={fmt(rep.ks_statistic)} ks_pvalue={fmt(rep.ks_pvalue)}")
    else:
        header, rows = figure_calibration(args.L, trials=args.trials, seed=args.seed,
                                          workers=args.workers)
    _emit(args, header, rows)


def cmd_exact(args):
    setup = exact_dist.ConditionalSetup(args.counts)
    if args.pmf:
        pmf = exact_dist.enumerate_pmf(setup, budget=args.budget)
        _emit(args, ["value", "probability"], pmf.atoms)
        return
    rows = [["mean", "", exact_dist.mean_exact(setup)]]
    for r in args.moment:
        rows.append(["moment", r, exact_dist.moment_exact(r, setup, budget=args.budget)])
    for t in args.mgf:
        rows.append(["mgf", t, exact_dist.mgf_exact(t, setup)])
    _emit(args, ["quantity", "arg", "value"], rows)


def cmd_bound(args):
    grid = np.logspace(math.log10(args.n_min), math.log10(args.n_max), args.points)
    header = ["n"] + [f"q{q}" for q in args.q]
    rows = [[n] + [error_bound(BoundParams(args.t, args.p, q, args.eps, n)) for q in args.q]
            for n in grid]
    _emit(args, header, rows)


# --- parser ---------------------------------------------------------------------

def build_parser():
    parser = _Parser(prog="marketinfo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--out", help="write CSV here instead of stdout")
        return p

    p = add("encode", cmd_encode, "price CSV -> increase indicators")
    p.add_argument("input", help="date,price CSV ('-' for stdin)")

    p = add("test", cmd_test, "test one series")
    p.add_argument("--bits", help="bit string such as 0101")
    p.add_argument("--input", help="date,price CSV ('-' for stdin)")
    p.add_argument("--window", type=int, help="use only the last WINDOW returns")
    p.add_argument("-L", "--L", type=int, default=1, dest="L")
    p.add_argument("--json", action="store_true")

    p = add("roll", cmd_roll, "rolling-window test")
    p.add_argument("input", help="date,price CSV ('-' for stdin)")
    p.add_argument("--window", type=int, default=100)
    p.add_argument("-L", "--L", type=int, default=1, dest="L")
    p.add_argument("--levels", type=_floats, default=list(LEVELS))
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--summary", help="write the per-level rejection summary CSV here")

    p = add("simulate", cmd_simulate, "Monte Carlo draws of the estimate")
    p.add_argument("--kind", choices=["fair_coin", "biased_coin", "markov"], default="fair_coin")
    p.add_argument("--n", type=int, default=100, help="bits per trajectory")
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--pi0", type=float, default=0.5)
    p.add_argument("--pi1", type=float, default=0.5)
    p.add_argument("-L", "--L", type=int, default=1, dest="L")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)

    p = add("calibrate", cmd_calibrate, "KS distance to the gamma law across n")
    p.add_argument("--grid", type=_ints, default=[25, 50, 100, 200, 400])
    p.add_argument("-L", "--L", type=int, default=1, dest="L")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)

    p = add("figures", cmd_figures, "plot data for the figures")
    p.add_argument("which", choices=["bound", "distribution", "calibration", "critical"])
    p.add_argument("-L", "--L", type=int, default=1, dest="L")
    p.add_argument("--n", type=int)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, default=1)

    p = add("exact", cmd_exact, "exact conditional moments, MGF, or pmf")
    p.add_argument("--counts", type=_ints, required=True, help="prefix counts, e.g. 2,2")
    p.add_argument("--moment", type=_ints, default=[], help="moment orders, e.g. 1,2")
    p.add_argument("--mgf", type=_floats, default=[], help="MGF arguments, e.g. -1,0.5")
    p.add_argument("--pmf", action="store_true", help="print the exact pmf instead")
    p.add_argument("--budget", type=int, default=exact_dist.DEFAULT_BUDGET)

    p = add("bound", cmd_bound, "error bound curves, columns n,q2..q5")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--eps", type=float, default=1.0)
    p.add_argument("--q", type=_ints, default=[2, 3, 4, 5])
    p.add_argument("--n-min", type=float, default=1e2)
    p.add_argument("--n-max", type=float, default=1e6)
    p.add_argument("--points", type=int, default=41)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        _log(f"error: {exc}")
        return EXIT_USAGE
    except (BudgetExceededError, OverflowError) as exc:
        _log(f"error: {exc}")
        return EXIT_NUMERIC
    except (MarketInfoError, OSError) as exc:
        _log(f"error: {exc}")
        return EXIT_DATA
    except ValueError as exc:
        _log(f"error: {exc}")
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
