"""Sweep seeds and iteration counts to show Monte Carlo spread of the headline figures.

Prints one CSV row per (iterations, seed): ALE, P10, P90 and truncated VaR.
"""

import argparse
import csv
import sys

from aivar.risk_model import get_template
from aivar.simulation import SimulationConfig, VarQuery, simulate, summarize, truncated_var


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--template", default="data-poisoning-biased-ranking")
    p.add_argument("--seeds", type=int, default=10, help="seeds 0..N-1")
    p.add_argument("--iterations", type=int, nargs="+", default=[1_000, 10_000, 100_000])
    p.add_argument("--workers", type=int, default=4)
    args = p.parse_args(argv)

    scenario = get_template(args.template)
    q = VarQuery(0.10, 0.90, 0.95)
    out = csv.writer(sys.stdout)
    out.writerow(["iterations", "seed", "ale", "p10", "p90", "var"])
    for n in args.iterations:
        for seed in range(args.seeds):
            dist = simulate(scenario, SimulationConfig(seed=seed, iterations=n, workers=args.workers))
            s = summarize(dist)
            out.writerow([n, seed, *(round(x, 2) for x in (s.ale, s.p10, s.p90, truncated_var(dist, q)))])


if __name__ == "__main__":
    main()
