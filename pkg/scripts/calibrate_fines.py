"""Calibrate a (min, most likely, max) estimate from historical breach costs.

Uses the bundled administrative-fines corpus by default; the 10th/50th/90th
nearest-rank percentiles become the three-point estimate.
"""

import argparse
import json

from aivar import corpus
from aivar.risk_model import calibrate_from_samples, pert_point_estimate
from aivar.tabular import load_dataset


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--data", default=str(corpus.ADMINISTRATIVE_FINES))
    p.add_argument("--column", default="breach_cost")
    args = p.parse_args(argv)

    values = load_dataset(args.data).column(args.column)
    est = calibrate_from_samples(values)
    doc = est.to_dict() | {"pert_mean": pert_point_estimate(est), "n": len(values)}
    print(json.dumps(doc, indent=2))


if __name__ == "__main__":
    main()
