"""Exit criteria. Each test carries a ``criterion`` marker; a PASS/FAIL line per
criterion is printed in the terminal summary.

Run alone with ``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
"""

import json
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from aivar import corpus
from aivar.fairness import (
    GroupSpec,
    OutcomeRule,
    average_odds_difference,
    statistical_parity_difference,
)
from aivar.masking import mask_text, mask_token
from aivar.perf_metrics import ConfusionMatrix, accuracy, mae, precision, recall, rmse
from aivar.risk_model import CalibratedEstimate, get_template, pert_point_estimate
from aivar.simulation import (
    SimulationConfig,
    VarQuery,
    cvar,
    quantile,
    sample_pert,
    simulate,
    summarize,
    truncated_var,
    uniform_block,
)
from aivar.tabular import Column, Dataset, identifiability_report, identification_probability, load_dataset
from oracles import nearest_rank, pairwise_class_size, tail_mean
from oracles import truncated_var as oracle_tvar

criterion = pytest.mark.criterion

ALE_BAND = (48_000, 62_000)
P10_BAND = (26_000, 35_000)
P90_BAND = (80_000, 95_000)
VAR_BAND = (75_000, 87_000)


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def in_band(x, band):
    return band[0] <= x <= band[1]


@criterion(1, "classification oracle: accuracy 19/30, recall 0.25, precision 0.6")
def test_c1_classification():
    with Timer() as t:
        cm = ConfusionMatrix(tp=3, tn=16, fp=2, fn=9)
        assert abs(accuracy(cm) - 19 / 30) <= 1e-12
        assert recall(cm) == 0.25
        assert precision(cm) == 0.6
    assert t.elapsed < 0.5


@criterion(2, "regression oracle: RMSE 3582.54 +/- 0.05, MAE 2956.55 +/- 0.05")
def test_c2_regression():
    actual = [283000, 73000, 181000]
    predicted = [279052.21, 68214.59, 180863.54]
    with Timer() as t:
        assert abs(rmse(actual, predicted) - 3582.54) <= 0.05
        assert abs(mae(actual, predicted) - 2956.55) <= 0.05
    assert t.elapsed < 0.5


@criterion(3, "identifiability oracle: five-person values + 200 random datasets vs pairwise oracle")
def test_c3_identifiability():
    with Timer() as t:
        d = load_dataset(str(corpus.FIVE_PERSONS))
        assert identification_probability(d, {"Age"}, 1) == 1.0
        assert identification_probability(d, {"Gender", "Music"}, 0) == 0.5

        rng = np.random.default_rng(20240601)
        for _ in range(200):
            nrows = int(rng.integers(1, 201))
            ncols = int(rng.integers(1, 6))
            cardinality = rng.integers(1, 6, size=ncols)
            cols = tuple(Column(f"q{j}", "categorical") for j in range(ncols))
            rows = tuple(
                tuple(f"v{int(rng.integers(0, cardinality[j]))}" for j in range(ncols)) for _ in range(nrows)
            )
            ds = Dataset(cols, rows)
            names = ds.names
            subsets = [
                [n for n in names if rng.random() < 0.5],
                names,
            ]
            rep = identifiability_report(ds, subsets, 0.40)
            dict_rows = [dict(zip(names, r)) for r in rows]
            expected = []
            for qi in subsets:
                cols_sorted = sorted(qi)
                for r in range(nrows):
                    expected.append((r, tuple(cols_sorted), pairwise_class_size(dict_rows, cols_sorted, r)))
            got = [(e.row_id, e.qi_columns, e.class_size) for e in rep.entries]
            assert got == expected
            assert [e.probability for e in rep.entries] == [1 / k for *_, k in expected]
            assert {(e.row_id, e.qi_columns) for e in rep.flagged} == {
                (r, q) for r, q, k in expected if 1 / k > 0.40
            }
    assert t.elapsed < 5.0


@criterion(4, "fairness oracle: SPD(Nationality 0 vs 2) = -5/7; antisymmetry/zero over 1000 tables")
def test_c4_fairness():
    with Timer() as t:
        d = load_dataset(str(corpus.CANDIDATES))
        rule = OutcomeRule.score("Score", 7.0)
        spd = statistical_parity_difference(d, rule, GroupSpec("Nationality", 0, 2))
        assert abs(spd - (-5 / 7)) <= 1e-12

        rng = np.random.default_rng(7)
        g = GroupSpec("g", "u", "p")
        for _ in range(1000):
            n = int(rng.integers(2, 40))
            groups = ["u", "p"] + [("u", "p")[int(b)] for b in rng.integers(0, 2, size=n - 2)]
            labels = [int(x) for x in rng.integers(0, 2, size=n)]
            preds = [int(x) for x in rng.integers(0, 2, size=n)]
            table = Dataset.from_columns({"g": groups, "out": preds})
            out = OutcomeRule.binary("out")
            a = statistical_parity_difference(table, out, g)
            assert a == -statistical_parity_difference(table, out, g.swapped())
            assert -1 <= a <= 1

            # mirror the u-group's joint (label, prediction) distribution onto p
            mirrored_groups = ["u"] * n + ["p"] * n
            mirrored = Dataset.from_columns({"g": mirrored_groups, "out": preds + preds})
            assert statistical_parity_difference(mirrored, out, g) == 0.0
            if 0 < sum(labels) < n:
                assert average_odds_difference(labels * 2, preds * 2, mirrored_groups, g) == 0.0
    assert t.elapsed < 5.0


@criterion(5, "PERT: point (1,5,10) = 31/6; 1e6-sample mean of (0.2,0.5,0.8) = 0.50 +/- 0.01; support")
def test_c5_pert():
    with Timer() as t:
        assert abs(pert_point_estimate(CalibratedEstimate(1, 5, 10, "rate")) - 31 / 6) <= 1e-12
        e = CalibratedEstimate(0.20, 0.50, 0.80, "probability")
        x = sample_pert(e, uniform_block(123, 0, 125_000).ravel())
        assert x.size == 1_000_000
        assert abs(float(x.mean()) - 0.50) <= 0.01
        assert x.min() >= 0.20 and x.max() <= 0.80
    assert t.elapsed < 10.0


@pytest.fixture(scope="module")
def poisoning_run():
    with Timer() as t:
        dist = simulate(get_template("table3"), SimulationConfig(seed=42, iterations=100_000))
    return dist, t.elapsed


@criterion(6, "data-poisoning preset at 1e5 iterations: ALE/P10/P90/truncated VaR inside their bands")
def test_c6_poisoning_bands(poisoning_run):
    dist, elapsed = poisoning_run
    s = summarize(dist)
    v = truncated_var(dist, VarQuery(0.10, 0.90, 0.95))
    print(f"ALE={s.ale:.0f} P10={s.p10:.0f} P90={s.p90:.0f} VaR={v:.0f}")
    assert in_band(s.ale, ALE_BAND)
    assert in_band(s.p10, P10_BAND)
    assert in_band(s.p90, P90_BAND)
    assert in_band(v, VAR_BAND)
    assert elapsed < 30.0


@criterion(6, "data-poisoning preset at 1e5 iterations: ALE/P10/P90/truncated VaR inside their bands")
def test_c6_analytic_justification(poisoning_run):
    # the band centre follows from the PERT means of the factors
    dist, _ = poisoning_run
    s = get_template("table3")
    tef = pert_point_estimate(s.tef)
    per_event = pert_point_estimate(s.primary_loss) + pert_point_estimate(
        s.secondary_loss_frequency
    ) * pert_point_estimate(s.secondary_loss_magnitude)
    assert abs(tef - 31 / 6) < 1e-12
    assert abs(per_event - 10833.33) < 0.01
    vuln = float(dist.trace.vulnerability.mean())
    assert 0.95 <= vuln <= 1.0
    # factors are independent, so E[loss] = E[tef] * P(tcap > rs) * E[per-event loss]
    analytic = tef * vuln * per_event
    assert abs(summarize(dist).ale - analytic) / analytic < 0.01


@criterion(7, "quantile/VaR oracles on 1..100 (10, 86, 98); CVaR >= VaR on 1000 distributions")
def test_c7_quantiles():
    with Timer() as t:
        xs = list(range(1, 101))
        assert quantile(xs, 0.10) == 10 == nearest_rank(xs, 0.10)
        assert truncated_var(xs, VarQuery(0.10, 0.90, 0.95)) == 86 == oracle_tvar(xs, 0.10, 0.90, 0.95)
        assert cvar(xs, 0.95) == 98 == tail_mean(xs, 0.95)
        rng = np.random.default_rng(99)
        for _ in range(1000):
            n = int(rng.integers(1, 200))
            sample = rng.lognormal(10, 1, size=n)
            if rng.random() < 0.3:
                sample = np.round(sample, -4)  # force ties
            c = float(rng.uniform(0.5, 0.99))
            assert cvar(sample, c) >= quantile(sample, c)
    assert t.elapsed < 5.0


@criterion(8, "determinism: seed 42, 1e4 iterations twice identical; workers 1/2/8 identical")
def test_c8_determinism():
    s = get_template("table3")
    with Timer() as t:
        a = simulate(s, SimulationConfig(seed=42, iterations=10_000))
        b = simulate(s, SimulationConfig(seed=42, iterations=10_000))
        assert np.array_equal(a.samples, b.samples)
        for workers in (1, 2, 8):
            w = simulate(s, SimulationConfig(seed=42, iterations=10_000, workers=workers))
            assert np.array_equal(w.samples, a.samples)
    assert t.elapsed < 10.0


@criterion(9, "masking: patient names -> published masked forms; idempotence/length over 1e4 strings")
def test_c9_masking():
    names = corpus.PATIENT_NAMES.read_text(encoding="utf-8").split()
    expected = {
        "Carlos Torres": "Cxxxxx Txxxxx",
        "Claudia Pereira": "Cxxxxxx Pxxxxxx",
        "Mette Smit": "Mxxxx Sxxx",
        # length preservation gives 10 characters
        "Tim Sutherland": "Txx Sxxxxxxxxx",
        "Jane Bright": "Jxxx Bxxxxx",
    }
    with Timer() as t:
        for full, masked in expected.items():
            assert mask_text(full, names) == masked
        assert len("Sxxxxxxxxx") == len("Sutherland") == 10

        rng = np.random.default_rng(5)
        alphabet = np.array(list("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"))
        for _ in range(10_000):
            s = "".join(rng.choice(alphabet, size=int(rng.integers(1, 25))))
            m = mask_token(s)
            assert len(m) == len(s) and m[0] == s[0]
            assert mask_token(m) == m
            sentence = f"{s}, met {s.lower()} and Tim."
            once = mask_text(sentence, [s, "Tim"])
            assert len(once) == len(sentence)
            assert mask_text(once, [s, "Tim"]) == once
    assert t.elapsed < 5.0


@criterion(10, "end-to-end: `simulate --template table3 --iterations 100000 --seed 42` in bands, byte-identical")
def test_c10_end_to_end():
    cmd = [sys.executable, "-m", "aivar", "simulate", "--template", "table3",
           "--iterations", "100000", "--seed", "42"]
    with Timer() as t:
        first = subprocess.run(cmd, capture_output=True)
        second = subprocess.run(cmd, capture_output=True)
    assert first.returncode == 0, first.stderr.decode()
    assert first.stdout == second.stdout
    doc = json.loads(first.stdout)
    assert in_band(doc["simulation"]["ale"], ALE_BAND)
    assert in_band(doc["simulation"]["p10"], P10_BAND)
    assert in_band(doc["simulation"]["p90"], P90_BAND)
    assert in_band(doc["var"]["value"], VAR_BAND)
    assert doc["var"]["query"] == {"low_pct": 0.10, "high_pct": 0.90, "confidence": 0.95}
    assert t.elapsed < 60.0


if __name__ == "__main__":
    sys.exit(pytest.main([str(Path(__file__)), "-q"]))
