"""Write plot-ready CSVs for the error-bound, distribution, KS-calibration and
critical-value curves into an output directory."""

import argparse
import pathlib

from marketinfo.cli import write_csv
from marketinfo.pipeline import figure_bound, figure_calibration, figure_critical, figure_distribution


def save(path, header, rows):
    with open(path, "w", newline="") as fh:
        write_csv(header, rows, fh)
    print(f"wrote {path}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="figures")
    ap.add_argument("--seed", type=int, required=True)
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    save(out / "bound.csv", *figure_bound())
    for L, n in ((1, 100), (2, 4000)):
        header, rows, rep = figure_distribution(L, n, args.trials, args.seed, args.workers)
        save(out / f"distribution_L{L}_n{n}.csv", header, rows)
        print(f"  L={L} n={n}: KS={rep.ks_statistic:.4f} p={rep.ks_pvalue:.3f}")
    save(out / "calibration.csv",
         *figure_calibration(1, trials=args.trials, seed=args.seed, workers=args.workers))
    save(out / "critical.csv", *figure_critical(1))


if __name__ == "__main__":
    main()
