"""Run the data-poisoning preset and print ALE, P10, P90, truncated VaR and CVaR.

    python3 scripts/reproduce_ai_var.py --iterations 100000 --seed 42
"""

import argparse

from aivar.risk_model import get_template
from aivar.simulation import SimulationConfig, VarQuery, cvar, simulate, summarize, truncated_var


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--template", default="data-poisoning-biased-ranking")
    p.add_argument("--iterations", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--workers", type=int, default=1)
    args = p.parse_args(argv)

    scenario = get_template(args.template)
    dist = simulate(scenario, SimulationConfig(seed=args.seed, iterations=args.iterations, workers=args.workers))
    s = summarize(dist)
    q = VarQuery(0.10, 0.90, 0.95)
    print(f"scenario   {scenario.name}")
    print(f"iterations {dist.iterations}  seed {dist.seed}")
    for label, value in [("ALE", s.ale), ("P10", s.p10), ("P90", s.p90),
                         ("VaR", truncated_var(dist, q)), ("CVaR", cvar(dist, q.confidence))]:
        print(f"{label:<5} {value:>12,.0f}")


if __name__ == "__main__":
    main()
