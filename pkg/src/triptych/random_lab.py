"""Haar/Ginibre sampling and Monte-Carlo checks for random scrambling unitaries.

Every trial draws from its own Philox stream. The stream seed is derived from
``(seed, d, trial)`` and stored in the trial record, so a single CSV row is
enough to reproduce that trial.
"""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .codespace import from_tensor, purify
from .infotheory import entropy_of, tripartite_information
from .tensor_core import LEGS, Tensor4, fold, operator_norm
from .verifier import secret_ensemble

CSV_HEADER = ("seed", "d", "norm_t", "norm_r", "norm_g", "i3_worst_nats", "elapsed_s")
DEFAULT_MU = 3.0
DEFAULT_DELTA = 0.01


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(int(seed)))


def trial_seed(seed: int, d: int, trial: int) -> int:
    """64-bit stream seed for one trial of a sweep."""
    ss = np.random.SeedSequence([int(seed), int(d), int(trial)])
    return int(ss.generate_state(1, np.uint64)[0])


def sample_ginibre(n: int, seed, m: int | None = None) -> np.ndarray:
    """``n x m`` matrix of i.i.d. standard complex Gaussians, ``(x + i y) / sqrt(2)``."""
    rng = make_rng(seed)
    m = n if m is None else m
    return (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))) / math.sqrt(2)


def sample_haar_unitary(n: int, seed) -> np.ndarray:
    z = sample_ginibre(n, seed)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def norm_triple_bound(delta: float) -> float:
    """Tail bound ``48 e sqrt(2 ln(1/delta))`` on max(||u||, ||u^R||, ||u^Gamma||)."""
    return 48 * math.e * math.sqrt(2 * math.log(1 / delta))


def i3_bound_nats(mu: float) -> float:
    """``ln(48 sqrt 2) + 6 + 3 ln mu``, holding with probability ``1 - exp(-mu)``."""
    return math.log(48 * math.sqrt(2)) + 6 + 3 * math.log(mu)


def scrambler_tensor(u: np.ndarray, d: int) -> Tensor4:
    """``t[i, s1, s2, s3] = u[(i, s1), (s2, s3)]``."""
    return Tensor4(np.asarray(u).reshape(d, d, d, d))


def triple_norms(t: Tensor4) -> tuple[float, float, float]:
    return tuple(operator_norm(fold(t, leg)) for leg in LEGS)


@dataclass
class TrialRecord:
    seed: int
    d: int
    norms: tuple
    i3_worst: float = math.nan
    folding_bound: float = math.nan
    elapsed: float = 0.0

    @property
    def max_norm(self) -> float:
        return max(self.norms)

    def row(self) -> tuple:
        return (self.seed, self.d, *(repr(float(x)) for x in self.norms), repr(float(self.i3_worst)),
                repr(float(self.elapsed)))


def norm_triple_trial(d: int, seed: int, timing: bool = False) -> TrialRecord:
    start = time.perf_counter()
    u = sample_haar_unitary(d * d, seed)
    norms = triple_norms(scrambler_tensor(u, d))
    return TrialRecord(seed, d, norms, elapsed=time.perf_counter() - start if timing else 0.0)


def i3_trial(d: int, seed: int, secrets_per_trial: int = 20, timing: bool = False) -> TrialRecord:
    """One Haar scrambler: norms, worst ``I3 + 2 S(R)`` (nats) and the folding-norm bound."""
    start = time.perf_counter()
    rng = make_rng(seed)
    u = sample_haar_unitary(d * d, rng)
    t = scrambler_tensor(u, d)
    norms = triple_norms(t)
    cs = from_tensor(t)
    worst = -math.inf
    for rho in secret_ensemble(d, secrets_per_trial, rng):
        phi = purify(cs, rho)
        val = tripartite_information(phi, "nats").value + 2 * entropy_of(rho, "R", "nats")
        worst = max(worst, val)
    bound = sum(2 * math.log(x) for x in norms)
    elapsed = time.perf_counter() - start if timing else 0.0
    return TrialRecord(seed, d, norms, worst, bound, elapsed)


def _quantiles(values) -> dict:
    v = np.asarray(values, dtype=float)
    qs = (0.0, 0.5, 0.9, 0.99, 1.0)
    return {f"q{int(q * 100)}": float(np.quantile(v, q)) for q in qs}


@dataclass
class SweepSummary:
    d: list
    trials: int
    mu: float
    delta: float
    bound_nats: float
    bound_nats_from_delta: float
    norm_bound: float
    norm_bound_from_mu: float
    violations_i3_mu: int
    violations_i3_delta: int
    violations_norm_delta: int
    violations_norm_mu: int
    violations_folding_bound: int
    lower_bound_violations: int
    worst_i3_slack: float
    quantiles: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)


def summarize(records: list[TrialRecord], mu: float = DEFAULT_MU, delta: float = DEFAULT_DELTA,
              tol: float = 1e-8) -> SweepSummary:
    """Compare trials against both parameterizations of the tail bounds (``delta = exp(-mu)``)."""
    b_mu = i3_bound_nats(mu)
    b_delta = i3_bound_nats(math.log(1 / delta))
    n_delta = norm_triple_bound(delta)
    n_mu = norm_triple_bound(math.exp(-mu))
    i3 = np.array([r.i3_worst for r in records], dtype=float)
    cor = np.array([r.folding_bound for r in records], dtype=float)
    mx = np.array([r.max_norm for r in records], dtype=float)
    has_i3 = np.isfinite(i3)
    quant = {
        "norm_t": _quantiles([r.norms[0] for r in records]),
        "norm_r": _quantiles([r.norms[1] for r in records]),
        "norm_g": _quantiles([r.norms[2] for r in records]),
    }
    if has_i3.any():
        quant["i3_worst_nats"] = _quantiles(i3[has_i3])
    return SweepSummary(
        d=sorted({r.d for r in records}),
        trials=len(records),
        mu=mu,
        delta=delta,
        bound_nats=b_mu,
        bound_nats_from_delta=b_delta,
        norm_bound=n_delta,
        norm_bound_from_mu=n_mu,
        violations_i3_mu=int(np.sum(i3[has_i3] > b_mu)),
        violations_i3_delta=int(np.sum(i3[has_i3] > b_delta)),
        violations_norm_delta=int(np.sum(mx > n_delta)),
        violations_norm_mu=int(np.sum(mx > n_mu)),
        violations_folding_bound=int(np.sum(i3[has_i3] > cor[has_i3] + tol)),
        lower_bound_violations=int(np.sum(i3[has_i3] < -tol)),
        worst_i3_slack=float(np.min(b_mu - i3[has_i3])) if has_i3.any() else math.nan,
        quantiles=quant,
    )


def _run_trial(args):
    d, s, secrets, timing = args
    return i3_trial(d, s, secrets, timing)


def i3_sweep(d, trials: int, secrets_per_trial: int = 20, seed: int = 0, mu: float = DEFAULT_MU,
             delta: float = DEFAULT_DELTA, workers: int = 1, timing: bool = False):
    """Run ``trials`` Haar trials for each dimension in ``d``; returns (records, summary).

    Records come back ordered by (d, trial) whatever the worker count.
    """
    ds = [d] if isinstance(d, int) else list(d)
    jobs = [(dd, trial_seed(seed, dd, k), secrets_per_trial, timing) for dd in ds for k in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_trial, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        records = [_run_trial(job) for job in jobs]
    return records, summarize(records, mu, delta)


def write_csv(records, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for rec in records:
            w.writerow(rec.row())


def read_csv(path) -> list[TrialRecord]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [
        TrialRecord(int(r["seed"]), int(r["d"]), (float(r["norm_t"]), float(r["norm_r"]), float(r["norm_g"])),
                    float(r["i3_worst_nats"]), elapsed=float(r["elapsed_s"]))
        for r in rows
    ]


@dataclass
class RatioStats:
    n: int
    trials: int
    seminorm: str
    mean_g: float
    mean_u: float
    ratio: float
    ci_low: float
    ci_high: float
    lower_bracket: float
    upper_bracket: float

    @property
    def inside(self) -> bool:
        return self.lower_bracket <= self.ci_low and self.ci_high <= self.upper_bracket

    def to_json(self) -> dict:
        out = asdict(self)
        out["inside"] = self.inside
        return out


def _seminorm(m: np.ndarray, kind: str) -> float:
    if kind == "operator":
        return operator_norm(m)
    if kind == "triple-max":
        d = math.isqrt(m.shape[0])
        if d * d != m.shape[0]:
            raise ValueError(f"triple-max seminorm needs n = d**2, got n = {m.shape[0]}")
        return max(triple_norms(scrambler_tensor(m, d)))
    raise ValueError(f"unknown seminorm {kind!r}")


def ratio_with_ci(g_norms, u_norms, z: float = 3.0) -> tuple[float, float, float]:
    """Ratio of sample means with a delta-method interval of ``z`` standard errors."""
    g = np.asarray(g_norms, dtype=float)
    u = np.asarray(u_norms, dtype=float)
    mg, mu_ = g.mean(), u.mean()
    ratio = mg / mu_
    var = g.var(ddof=1) / (g.size * mg**2) + u.var(ddof=1) / (u.size * mu_**2)
    half = z * ratio * math.sqrt(var)
    return ratio, ratio - half, ratio + half


def gaussian_unitary_comparison(n: int, trials: int, seminorm: str = "operator", seed: int = 0,
                                z: float = 3.0) -> RatioStats:
    """Empirical ``E||g|| / E||u||`` for Ginibre ``g`` and Haar ``u`` (p = 1)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    g_norms, u_norms = [], []
    for k in range(trials):
        g_norms.append(_seminorm(sample_ginibre(n, trial_seed(seed, n, 2 * k)), seminorm))
        u_norms.append(_seminorm(sample_haar_unitary(n, trial_seed(seed, n, 2 * k + 1)), seminorm))
    ratio, lo, hi = ratio_with_ci(g_norms, u_norms, z)
    return RatioStats(n, trials, seminorm, float(np.mean(g_norms)), float(np.mean(u_norms)), ratio, lo, hi,
                      math.sqrt(n) / 8, 4 * math.sqrt(n))
