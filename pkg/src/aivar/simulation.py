"""Seeded Monte Carlo over a FAIR scenario, plus nearest-rank quantile, truncated VaR and CVaR.

RNG contract (``RNG_CONTRACT``): Philox4x64-10 keyed by the 64-bit seed.
Iteration ``i`` owns counter blocks ``2i`` and ``2i + 1``, i.e. eight raw
64-bit words, of which lanes 0..5 feed tef, tcap (or direct vulnerability),
rs, primary loss, secondary loss frequency and secondary loss magnitude.
A word ``w`` maps to the open unit interval as ``((w >> 11) + 0.5) / 2**53``
and every factor is drawn by inverse CDF, so each iteration consumes a fixed
amount of randomness and any partition of the iteration range across workers
reproduces the single-worker run exactly.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats

from .errors import DistributionError
from .risk_model import CalibratedEstimate, Scenario, nearest_rank_index, validate_scenario

RNG_CONTRACT = "philox4x64-10/seed-key/iteration-block-8/v1"
PERT_LAMBDA = 4.0
_LANES = 8
_LANE = {"tef": 0, "tcap": 1, "direct": 1, "rs": 2, "pl": 3, "slef": 4, "slm": 5}
_MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class SimulationConfig:
    seed: int
    iterations: int = 1000
    workers: int = 1
    event_model: str = "rate-multiplication"

    def __post_init__(self):
        if isinstance(self.iterations, bool) or not isinstance(self.iterations, int) or self.iterations < 1:
            raise DistributionError(f"iterations must be a positive integer, got {self.iterations!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed <= _MAX_SEED:
            raise DistributionError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.workers < 1:
            raise DistributionError(f"workers must be >= 1, got {self.workers!r}")
        if self.event_model != "rate-multiplication":
            raise DistributionError(f"unsupported event model {self.event_model!r}")


def pert_shape(e: CalibratedEstimate) -> tuple[float, float]:
    span = e.max - e.min
    alpha = 1.0 + PERT_LAMBDA * (e.most_likely - e.min) / span
    beta = 1.0 + PERT_LAMBDA * (e.max - e.most_likely) / span
    return alpha, beta


def sample_pert(e: CalibratedEstimate, draw):
    """Map unit-uniform draw(s) in (0, 1) to modified-PERT (lambda = 4) variates.

    ``draw`` may be a float or an array; the result has the same shape.
    A degenerate estimate returns its point value for every draw.
    """
    e.check()
    u = np.asarray(draw, dtype=float)
    if np.any((u < 0.0) | (u > 1.0)):
        raise DistributionError("uniform draws must lie in [0, 1]")
    if e.is_point:
        out = np.full(u.shape, float(e.min))
    else:
        a, b = pert_shape(e)
        out = e.min + (e.max - e.min) * stats.beta.ppf(u, a, b)
        # ppf can overshoot by an ulp
        out = np.clip(out, e.min, e.max)
    return float(out) if out.ndim == 0 else out


def uniform_block(seed: int, start: int, stop: int) -> np.ndarray:
    """Unit uniforms for iterations [start, stop), shape (stop - start, 8)."""
    n = stop - start
    if n <= 0:
        return np.empty((0, _LANES))
    bg = np.random.Philox(key=seed, counter=2 * start)
    words = bg.random_raw(_LANES * n).reshape(n, _LANES)
    return ((words >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


@dataclass(frozen=True)
class SimulationTrace:
    """Per-iteration factor draws in iteration order."""

    tef: np.ndarray
    vulnerability: np.ndarray
    lef: np.ndarray
    primary_loss: np.ndarray
    slef: np.ndarray
    slm: np.ndarray
    loss: np.ndarray
    tcap: np.ndarray | None = None
    rs: np.ndarray | None = None

    def means(self) -> dict[str, float]:
        out = {}
        for name in ("tef", "tcap", "rs", "vulnerability", "lef", "primary_loss", "slef", "slm"):
            arr = getattr(self, name)
            if arr is not None:
                out[name] = float(np.mean(arr))
        return out


def _simulate_block(s: Scenario, seed: int, start: int, stop: int) -> dict[str, np.ndarray]:
    u = uniform_block(seed, start, stop)
    draws = {
        "tef": sample_pert(s.tef, u[:, _LANE["tef"]]),
        "pl": sample_pert(s.primary_loss, u[:, _LANE["pl"]]),
        "slef": sample_pert(s.secondary_loss_frequency, u[:, _LANE["slef"]]),
        "slm": sample_pert(s.secondary_loss_magnitude, u[:, _LANE["slm"]]),
    }
    node = s.vulnerability
    if node.is_direct:
        draws["vuln"] = sample_pert(node.direct, u[:, _LANE["direct"]])
    else:
        draws["tcap"] = sample_pert(node.tcap, u[:, _LANE["tcap"]])
        draws["rs"] = sample_pert(node.rs, u[:, _LANE["rs"]])
        # a tie is resisted
        draws["vuln"] = (draws["tcap"] > draws["rs"]).astype(float)
    draws["lef"] = draws["tef"] * draws["vuln"]
    draws["loss"] = draws["lef"] * (draws["pl"] + draws["slef"] * draws["slm"])
    return draws


def _partition(n: int, parts: int) -> list[tuple[int, int]]:
    parts = min(parts, n)
    edges = [n * k // parts for k in range(parts + 1)]
    return [(edges[k], edges[k + 1]) for k in range(parts)]


@dataclass(frozen=True)
class LossDistribution:
    samples: np.ndarray
    seed: int | None = None
    iterations: int | None = None
    currency: str = "USD"
    trace: SimulationTrace | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        arr = np.sort(np.asarray(self.samples, dtype=float))
        if arr.ndim != 1:
            raise DistributionError("samples must be one-dimensional")
        if not np.isfinite(arr).all():
            raise DistributionError("samples must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    def __len__(self):
        return self.samples.size

    def __eq__(self, other):
        if not isinstance(other, LossDistribution):
            return NotImplemented
        return (
            np.array_equal(self.samples, other.samples)
            and (self.seed, self.iterations, self.currency) == (other.seed, other.iterations, other.currency)
        )

    __hash__ = None

    @classmethod
    def from_values(cls, values: Sequence[float], currency: str = "USD") -> "LossDistribution":
        return cls(np.asarray(values, dtype=float), currency=currency)


def simulate(s: Scenario, cfg: SimulationConfig) -> LossDistribution:
    """Annual loss per iteration: tef * vulnerability * (primary + slef * slm)."""
    validate_scenario(s)
    blocks = _partition(cfg.iterations, cfg.workers)
    if len(blocks) == 1:
        results = [_simulate_block(s, cfg.seed, *blocks[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(blocks)) as pool:
            results = list(pool.map(lambda b: _simulate_block(s, cfg.seed, *b), blocks))

    def cat(key):
        return np.concatenate([r[key] for r in results])

    direct = s.vulnerability.is_direct
    trace = SimulationTrace(
        tef=cat("tef"),
        vulnerability=cat("vuln"),
        lef=cat("lef"),
        primary_loss=cat("pl"),
        slef=cat("slef"),
        slm=cat("slm"),
        loss=cat("loss"),
        tcap=None if direct else cat("tcap"),
        rs=None if direct else cat("rs"),
    )
    return LossDistribution(trace.loss, cfg.seed, cfg.iterations, s.currency, trace)


def _values(d) -> np.ndarray:
    arr = d.samples if isinstance(d, LossDistribution) else np.sort(np.asarray(d, dtype=float))
    if arr.size == 0:
        raise DistributionError("empty distribution")
    return arr


def quantile(d: LossDistribution | Sequence[float], q: float) -> float:
    """Nearest-rank quantile: the sorted sample at 1-based index ceil(q * n)."""
    xs = _values(d)
    if not 0.0 < q <= 1.0:
        raise DistributionError(f"quantile level {q!r} outside (0, 1]")
    return float(xs[nearest_rank_index(q, xs.size)])


@dataclass(frozen=True)
class VarQuery:
    low_pct: float = 0.10
    high_pct: float = 0.90
    confidence: float = 0.95

    def __post_init__(self):
        if not 0.0 <= self.low_pct < self.high_pct <= 1.0:
            raise DistributionError(f"need 0 <= low_pct < high_pct <= 1, got {self.low_pct}, {self.high_pct}")
        if not 0.0 < self.confidence < 1.0:
            raise DistributionError(f"confidence {self.confidence!r} outside (0, 1)")

    def to_dict(self) -> dict:
        return {"low_pct": self.low_pct, "high_pct": self.high_pct, "confidence": self.confidence}


def truncated_var(d: LossDistribution | Sequence[float], v: VarQuery = VarQuery()) -> float:
    """VaR at ``v.confidence`` within the samples lying in [q(low_pct), q(high_pct)]."""
    xs = _values(d)
    lo = xs[0] if v.low_pct == 0.0 else quantile(xs, v.low_pct)
    hi = quantile(xs, v.high_pct)
    kept = xs[(xs >= lo) & (xs <= hi)]
    if kept.size == 0:
        raise DistributionError("truncated interval holds no samples")
    return quantile(kept, v.confidence)


def cvar(d: LossDistribution | Sequence[float], confidence: float = 0.95) -> float:
    """Mean of the samples strictly above the nearest-rank VaR; the VaR itself if none are."""
    xs = _values(d)
    var = quantile(xs, confidence)
    tail = xs[xs > var]
    if tail.size == 0:
        return var
    return math.fsum(tail) / tail.size


@dataclass(frozen=True)
class SimulationSummary:
    ale: float
    p10: float
    p90: float
    n: int
    minimum: float
    maximum: float
    factor_means: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "ale": self.ale,
            "p10": self.p10,
            "p90": self.p90,
            "n": self.n,
            "min": self.minimum,
            "max": self.maximum,
            "factor_means": dict(self.factor_means),
        }


def summarize(d: LossDistribution) -> SimulationSummary:
    xs = _values(d)
    ale = math.fsum(xs) / xs.size
    # fsum mean can sit an ulp outside [min, max] for constant samples
    ale = min(max(ale, float(xs[0])), float(xs[-1]))
    means = d.trace.means() if isinstance(d, LossDistribution) and d.trace is not None else {}
    return SimulationSummary(
        ale=ale,
        p10=quantile(xs, 0.10),
        p90=quantile(xs, 0.90),
        n=int(xs.size),
        minimum=float(xs[0]),
        maximum=float(xs[-1]),
        factor_means=means,
    )


def histogram(d: LossDistribution | Sequence[float], bins: int = 50) -> list[tuple[float, int]]:
    """(lower edge, count) per bin over [min, max]."""
    xs = _values(d)
    if bins < 1:
        raise DistributionError(f"bins must be >= 1, got {bins}")
    counts, edges = np.histogram(xs, bins=bins)
    return [(float(e), int(c)) for e, c in zip(edges[:-1], counts)]
