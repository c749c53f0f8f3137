"""Rejection rates of the test under the fair coin and under Markov alternatives
with up-move probabilities 0.5 - delta (after a down-move) and 0.5 + delta."""

import argparse

from marketinfo.montecarlo import GeneratorSpec, simulate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, required=True)
    ap.add_argument("--n", type=int, default=100)
    ap.add_argument("-L", type=int, default=1)
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--deltas", default="0,0.025,0.05,0.1,0.15,0.2")
    args = ap.parse_args()

    print("delta,reject95,reject99,reject999,unobserved")
    for delta in (float(d) for d in args.deltas.split(",")):
        spec = GeneratorSpec.markov(0.5 - delta, 0.5 + delta, args.n)
        rep = simulate(spec, args.L, args.trials, args.seed)
        r = rep.rejection_rates
        print(f"{delta:g},{r[0.95]:.4f},{r[0.99]:.4f},{r[0.999]:.4f},{rep.unobserved}")


if __name__ == "__main__":
    main()
