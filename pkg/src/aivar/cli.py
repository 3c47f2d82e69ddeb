"""Command-line front end.

Exit codes: 0 success, 1 domain error (one JSON line on stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import fairness as fm
from . import perf_metrics as pm
from .errors import AivarError
from .masking import NameDictionary, mask_text
from .report import build_report, file_digest, render
from .risk_model import TEMPLATE_ALIASES, TEMPLATES, Scenario, get_template
from .simulation import (
    LossDistribution,
    SimulationConfig,
    VarQuery,
    cvar,
    histogram,
    quantile,
    simulate,
    truncated_var,
)
from .tabular import identifiability_report, load_dataset


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: usage error: {message}\n")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _emit(args, text: str):
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _note(args, msg: str):
    if not args.quiet:
        print(msg, file=sys.stderr)


def _column_ref(ref: str) -> tuple[str, str]:
    path, sep, col = ref.rpartition(":")
    if not sep or not path or not col:
        raise AivarError(f"expected <csv>:<column>, got {ref!r}")
    return path, col


def _load_scenario(args) -> tuple[Scenario, dict]:
    if args.scenario:
        return Scenario.load(args.scenario), {"scenario": file_digest(args.scenario)}
    return get_template(args.template), {"template": args.template}


def cmd_profile(args):
    d = load_dataset(args.data)
    subsets = [[c.strip() for c in spec.split(",") if c.strip()] for spec in args.qi]
    rep = identifiability_report(d, subsets, args.threshold)
    labels = d.column(args.label_column) if args.label_column else None
    doc = rep.to_dict(labels)
    doc["data"] = {"path": str(args.data), "digest": file_digest(args.data), "rows": len(d)}
    _emit(args, _dump(doc))


def cmd_fairness(args):
    d = load_dataset(args.data)
    g = fm.GroupSpec(args.group, d.coerce(args.group, args.unprivileged), d.coerce(args.group, args.privileged))
    doc = {
        "data": {"path": str(args.data), "digest": file_digest(args.data)},
        "group": {"column": args.group, "unprivileged": g.unprivileged, "privileged": g.privileged},
        "metric": args.metric,
    }
    if args.metric == "aod":
        if not (args.labels and args.preds):
            raise AivarError("aod needs --labels and --preds columns")
        doc["value"] = fm.average_odds_difference_from(d, args.labels, args.preds, g)
        doc["columns"] = {"labels": args.labels, "preds": args.preds}
    else:
        if args.outcome:
            rule = fm.OutcomeRule.binary(args.outcome)
            doc["rule"] = {"mode": rule.mode, "outcome_column": args.outcome}
        else:
            rule = fm.OutcomeRule.score(args.score, args.threshold)
            doc["rule"] = {"mode": rule.mode, "score_column": args.score, "threshold": args.threshold}
        metric = fm.statistical_parity_difference if args.metric == "spd" else fm.demographic_parity_difference
        doc["value"] = metric(d, rule, g)
        doc["rates"] = {
            "unprivileged": fm.favorable_rate(d, rule, g, g.unprivileged),
            "privileged": fm.favorable_rate(d, rule, g, g.privileged),
        }
    _emit(args, _dump(doc))


def cmd_metrics(args):
    if args.kind == "classify":
        (lp, lc), (pp, pc) = _column_ref(args.labels), _column_ref(args.preds)
        labels = load_dataset(lp).column(lc)
        preds = load_dataset(pp).column(pc)
        cm = pm.confusion_matrix(labels, preds)
        doc = pm.classification_summary(cm)
        doc["inputs"] = {"labels": file_digest(lp), "preds": file_digest(pp)}
    else:
        d = load_dataset(args.pairs)
        doc = pm.regression_summary(d.column(args.actual_column), d.column(args.predicted_column))
        doc["inputs"] = {"pairs": file_digest(args.pairs)}
    doc["kind"] = args.kind
    _emit(args, _dump(doc))


def _require_seed(parser, args):
    if args.seed is None:
        parser.error("--seed is required for simulation (no implicit randomness)")


def cmd_simulate(args, parser):
    _require_seed(parser, args)
    bins = None
    if args.histogram:
        key, _, val = args.histogram.partition("=")
        if key != "bins" or not val.isdigit() or int(val) < 1:
            parser.error(f"--histogram expects bins=<positive int>, got {args.histogram!r}")
        if not args.histogram_out:
            parser.error("--histogram needs --histogram-out <file>")
        bins = int(val)
    scenario, inputs = _load_scenario(args)
    cfg = SimulationConfig(seed=args.seed, iterations=args.iterations, workers=args.workers)
    dist = simulate(scenario, cfg)
    query = VarQuery(args.low, args.high, args.confidence)
    rep = build_report(scenario=scenario, distribution=dist, var_query=query, inputs=inputs)
    if args.samples:
        Path(args.samples).write_text("".join(f"{x!r}\n" for x in dist.samples.tolist()), encoding="utf-8")
        _note(args, f"wrote {len(dist)} samples to {args.samples}")
    if bins:
        rows = histogram(dist, bins)
        Path(args.histogram_out).write_text(
            "lower_edge,count\n" + "".join(f"{e!r},{c}\n" for e, c in rows), encoding="utf-8"
        )
        _note(args, f"wrote {bins}-bin histogram to {args.histogram_out}")
    _emit(args, render(rep, args.format))


def _read_samples(path) -> list[float]:
    out = []
    for i, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines()):
        line = line.strip()
        if not line:
            continue
        try:
            out.append(float(line))
        except ValueError:
            if i == 0:
                continue  # header
            raise AivarError(f"{path}:{i + 1}: not a number: {line!r}") from None
    return out


def cmd_var(args):
    dist = LossDistribution.from_values(_read_samples(args.samples))
    q = VarQuery(args.low, args.high, args.confidence)
    doc = {
        "n": len(dist),
        "query": q.to_dict(),
        "p_low": dist.samples[0].item() if q.low_pct == 0 else quantile(dist, q.low_pct),
        "p_high": quantile(dist, q.high_pct),
        "var": quantile(dist, q.confidence),
        "truncated_var": truncated_var(dist, q),
        "cvar": cvar(dist, q.confidence),
        "inputs": {"samples": file_digest(args.samples)},
    }
    _emit(args, _dump(doc))


def cmd_mask(args):
    names = NameDictionary.load(args.names)
    text = Path(args.input).read_text(encoding="utf-8")
    _emit(args, mask_text(text, names))


def cmd_report(args, parser):
    parts = {}
    inputs = {}
    for flag in ("identifiability", "fairness", "performance", "information_security"):
        path = getattr(args, flag)
        if path:
            parts[flag] = json.loads(Path(path).read_text(encoding="utf-8"))
            inputs[flag] = file_digest(path)
    scenario = dist = None
    if args.scenario or args.template:
        _require_seed(parser, args)
        scenario, extra = _load_scenario(args)
        inputs.update(extra)
        dist = simulate(scenario, SimulationConfig(seed=args.seed, iterations=args.iterations, workers=args.workers))
    rep = build_report(
        scenario=scenario,
        distribution=dist,
        var_query=VarQuery(args.low, args.high, args.confidence),
        inputs=inputs,
        **parts,
    )
    _emit(args, render(rep, args.format))


def _add_scenario_source(p, required: bool):
    src = p.add_mutually_exclusive_group(required=required)
    src.add_argument("--scenario", help="scenario JSON document")
    names = sorted(set(TEMPLATES) | set(TEMPLATE_ALIASES))
    src.add_argument("--template", choices=names, help="built-in scenario preset")
    p.add_argument("--iterations", type=int, default=1000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--low", type=float, default=0.10, help="truncation lower percentile")
    p.add_argument("--high", type=float, default=0.90, help="truncation upper percentile")
    p.add_argument("--confidence", type=float, default=0.95)
    p.add_argument("--format", choices=["json", "plain"], default="json")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="unsigned 64-bit seed; required for simulation")
    common.add_argument("--out", help="write the primary output here instead of stdout")
    common.add_argument("--quiet", action="store_true", help="suppress progress notes on stderr")

    parser = _Parser(prog="aivar", description="Quantitative AI risk engine (FAIR Monte Carlo, AI-VaR).")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("profile", parents=[common], help="identifiability of records by quasi-identifiers")
    p.add_argument("--data", required=True)
    p.add_argument("--qi", action="append", required=True, help="comma-separated quasi-identifier set; repeatable")
    p.add_argument("--threshold", type=float, default=0.40)
    p.add_argument("--label-column", help="column echoed next to each entry (e.g. Name)")

    p = sub.add_parser("fairness", parents=[common], help="pairwise group-fairness metric")
    p.add_argument("--data", required=True)
    p.add_argument("--group", required=True)
    p.add_argument("--unprivileged", required=True)
    p.add_argument("--privileged", required=True)
    p.add_argument("--metric", choices=["spd", "dpd", "aod"], default="spd")
    p.add_argument("--score", default="Score")
    p.add_argument("--threshold", type=float, default=7.0)
    p.add_argument("--outcome", help="explicit 0/1 favorable-outcome column instead of a score")
    p.add_argument("--labels")
    p.add_argument("--preds")

    p = sub.add_parser("metrics", help="classification / regression metrics")
    msub = p.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    c = msub.add_parser("classify", parents=[common])
    c.add_argument("--labels", required=True, help="<csv>:<column>")
    c.add_argument("--preds", required=True, help="<csv>:<column>")
    r = msub.add_parser("regress", parents=[common])
    r.add_argument("--pairs", required=True, help="CSV with actual and predicted columns")
    r.add_argument("--actual-column", default="actual")
    r.add_argument("--predicted-column", default="predicted")

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo loss distribution and report")
    _add_scenario_source(p, required=True)
    p.add_argument("--samples", help="write sorted annual-loss samples, one per line")
    p.add_argument("--histogram", help="bins=<n>")
    p.add_argument("--histogram-out", help="CSV file for histogram rows (lower_edge,count)")

    p = sub.add_parser("var", parents=[common], help="truncated VaR and CVaR of a samples file")
    p.add_argument("--samples", required=True)
    p.add_argument("--low", type=float, default=0.10)
    p.add_argument("--high", type=float, default=0.90)
    p.add_argument("--confidence", type=float, default=0.95)

    p = sub.add_parser("mask", parents=[common], help="mask dictionary names in a text file")
    p.add_argument("--input", required=True)
    p.add_argument("--names", required=True, help="one name token per line")

    p = sub.add_parser("report", parents=[common], help="integrated assessment report")
    _add_scenario_source(p, required=False)
    p.add_argument("--identifiability", help="JSON output of `profile`")
    p.add_argument("--fairness", help="JSON output of `fairness`")
    p.add_argument("--performance", help="JSON output of `metrics`")
    p.add_argument("--information-security", dest="information_security", help="JSON findings document")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    sub = parser._subparsers._group_actions[0].choices[args.command]
    try:
        if args.command == "simulate":
            cmd_simulate(args, sub)
        elif args.command == "report":
            cmd_report(args, sub)
        else:
            {"profile": cmd_profile, "fairness": cmd_fairness, "metrics": cmd_metrics,
             "var": cmd_var, "mask": cmd_mask}[args.command](args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except (AivarError, OSError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
