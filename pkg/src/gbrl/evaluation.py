"""Post-training calibration, win/tie/loss testing, ordering sweeps and
ECDF export.

Agent and baseline are always evaluated on the same sampled ideal (one RNG
seed per instance), so ties are exact reward equalities, not tolerance
bands.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import multiprocessing as mp

import numpy as np
from scipy import stats

from .f4 import f4_groebner
from .nn import Mlp
from .orders import GREVLEX, MonomialOrder, WeightedOrder, parse_order
from .poly import Ideal
from .reward import (
    EnvConfig,
    SupportSet,
    discretize,
    initial_state,
    project_simplex,
    relative_reward,
    sample_ideal,
    trace_reward,
)


@dataclass
class WinTieLoss:
    win_pct: float
    tie_pct: float
    loss_pct: float
    improvement: float | None  # mean positive delta, conditional on wins
    degradation: float | None  # mean negative delta, conditional on losses
    samples: np.ndarray  # per-instance delta r percent

    def __post_init__(self):
        if abs(self.win_pct + self.tie_pct + self.loss_pct - 100.0) > 1e-9:
            raise ValueError("win/tie/loss percentages must sum to 100")
        if self.improvement is not None and self.improvement < 0:
            raise ValueError("improvement must be >= 0")
        if self.degradation is not None and self.degradation > 0:
            raise ValueError("degradation must be <= 0")

    def to_json(self):
        return {
            "win_pct": self.win_pct,
            "tie_pct": self.tie_pct,
            "loss_pct": self.loss_pct,
            "improvement": self.improvement,
            "degradation": self.degradation,
            "n": int(self.samples.size),
        }

    @classmethod
    def from_samples(cls, deltas) -> "WinTieLoss":
        deltas = np.asarray(deltas, dtype=np.float64)
        n = deltas.size
        wins = deltas > 0
        losses = deltas < 0
        win = 100.0 * int(wins.sum()) / n
        loss = 100.0 * int(losses.sum()) / n
        tie = 100.0 - win - loss  # exact by construction
        improvement = float(deltas[wins].mean()) if wins.any() else None
        degradation = float(deltas[losses].mean()) if losses.any() else None
        return cls(win, tie, loss, improvement, degradation, deltas)


def rollout_weights(actor: Mlp, support: SupportSet, cfg: EnvConfig, rng) -> tuple:
    """Deterministic (noise-free) actor rollout; returns the final
    discretized weight vector after cfg.episode_len steps."""
    base = support.base_matrix()
    peak = base.max()
    features = (base / peak if peak > 0 else base).ravel()
    state = initial_state(support.nvars, rng)
    for _ in range(cfg.episode_len):
        a = actor.forward(np.concatenate([features, state]))
        state = project_simplex(a, cfg.floor_alpha)
    return discretize(state, cfg.scale)


def calibrate(
    actor: Mlp,
    support: SupportSet,
    cfg: EnvConfig,
    rng: np.random.Generator,
    n_calib: int = 100,
) -> tuple:
    """Pick the final weight vector: collect one candidate per calibration
    rollout, score every distinct candidate by its mean trace reward over
    the whole calibration batch, and return the best (ties resolved toward
    the lexicographically smallest vector)."""
    ideals = [sample_ideal(support, rng, cfg.modulus) for _ in range(n_calib)]
    candidates = sorted(
        {rollout_weights(actor, support, cfg, rng) for _ in range(n_calib)}
    )
    best_w, best_score = None, None
    for w in candidates:
        order = WeightedOrder(w, cfg.tiebreak)
        score = float(
            np.mean([trace_reward(f4_groebner(ideal, order).trace) for ideal in ideals])
        )
        if best_score is None or score > best_score:
            best_w, best_score = w, score
    return best_w


def _test_one(args):
    support_json, order_spec, baseline_spec, p, seed = args
    support = SupportSet.from_json(support_json)
    order = parse_order(order_spec)
    baseline = parse_order(baseline_spec)
    ideal = sample_ideal(support, np.random.default_rng(seed), p)
    ra = trace_reward(f4_groebner(ideal, order).trace)
    rb = trace_reward(f4_groebner(ideal, baseline).trace)
    return relative_reward(ra, rb)


def test_order(
    order: MonomialOrder,
    baseline: MonomialOrder,
    support: SupportSet,
    n_ideals: int,
    rng,
    p: int = 32003,
    threads: int = 1,
) -> WinTieLoss:
    """Win/tie/loss statistics of ``order`` against ``baseline`` over
    n_ideals freshly sampled instances (paired per-ideal seeds)."""
    if n_ideals < 1:
        raise ValueError("n_ideals must be >= 1")
    master = np.random.default_rng(rng)
    seeds = master.integers(0, 2**63 - 1, size=n_ideals)
    jobs = [
        (support.to_json(), order.spec(), baseline.spec(), p, int(s)) for s in seeds
    ]
    if threads > 1:
        with ProcessPoolExecutor(
            max_workers=threads, mp_context=mp.get_context("fork")
        ) as pool:
            deltas = list(pool.map(_test_one, jobs, chunksize=max(1, n_ideals // (8 * threads))))
    else:
        deltas = [_test_one(job) for job in jobs]
    return WinTieLoss.from_samples(deltas)


@dataclass
class SweepRecord:
    weights: tuple
    reward: float  # trace reward under this order
    delta_pct: float  # relative to GrevLex on the same ideal
    runtime_s: float  # median of the repeated timings

    def to_json(self):
        return {
            "weights": list(self.weights),
            "reward": self.reward,
            "delta_pct": self.delta_pct,
            "runtime_s": self.runtime_s,
        }


def _timed_groebner(ideal: Ideal, order: MonomialOrder, repeats: int):
    times = []
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = f4_groebner(ideal, order)
        times.append(time.perf_counter() - t0)
    return result, float(np.median(times))


def sweep(
    target,
    weight_grid,
    tiebreak: str = "grevlex",
    repeats: int = 3,
    rng=None,
    p: int = 32003,
):
    """Reward-versus-runtime sweep over weighted orders on one fixed ideal.

    ``target`` may be an Ideal or a SupportSet (one instance is then
    sampled with ``rng``).  Returns (records, pearson, spearman) where the
    correlations relate reward delta to wall-clock runtime and are None
    when undefined (fewer than two points, or a constant column).
    """
    grid = [tuple(int(v) for v in w) for w in weight_grid]
    if not grid:
        raise ValueError("empty weight grid")
    if isinstance(target, SupportSet):
        ideal = sample_ideal(target, np.random.default_rng(rng), p)
    else:
        ideal = target
    base_reward = trace_reward(f4_groebner(ideal, GREVLEX).trace)
    records = []
    for w in grid:
        result, runtime = _timed_groebner(ideal, WeightedOrder(w, tiebreak), repeats)
        reward = trace_reward(result.trace)
        records.append(
            SweepRecord(w, reward, relative_reward(reward, base_reward), runtime)
        )
    deltas = np.array([r.delta_pct for r in records])
    times = np.array([r.runtime_s for r in records])
    if len(records) < 2 or deltas.std() == 0.0 or times.std() == 0.0:
        return records, None, None
    pearson = float(stats.pearsonr(deltas, times).statistic)
    spearman = float(stats.spearmanr(deltas, times).statistic)
    return records, pearson, spearman


def ecdf(samples):
    """Right-continuous empirical CDF: unique sorted values with their
    cumulative probabilities."""
    samples = np.asarray(samples, dtype=np.float64)
    if samples.size == 0:
        raise ValueError("ecdf of an empty sample")
    xs, counts = np.unique(samples, return_counts=True)
    return xs, np.cumsum(counts) / samples.size
