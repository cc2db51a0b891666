"""Trace reward, random ideal instantiation and the RL weight environment.

The reward of a basis computation is -sum_i n_M(i) * n_P(i) * ln(d_P(i))
over its trace; the environment reports it relative to a baseline order as
a percent improvement, estimated by Monte Carlo over coefficient samples
drawn on a fixed monomial support.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .f4 import TraceStats, f4_groebner
from .field import DEFAULT_MODULUS, validate_modulus
from .orders import GREVLEX, MonomialOrder, WeightedOrder, parse_order
from .poly import Ideal, Polynomial

REL_EPS = 1e-9


class SupportSet:
    """Monomial supports of a polynomial system, one set per generator.

    Vectors are stored sorted so observations and coefficient sampling are
    reproducible regardless of input order.
    """

    __slots__ = ("nvars", "supports")

    def __init__(self, supports, nvars: int):
        sups = []
        for sup in supports:
            vecs = sorted({tuple(int(e) for e in v) for v in sup})
            if not vecs:
                raise ValueError("empty support")
            for v in vecs:
                if len(v) != nvars or any(e < 0 for e in v):
                    raise ValueError(f"bad exponent vector {v} for nvars={nvars}")
            sups.append(tuple(vecs))
        if not sups:
            raise ValueError("support set needs at least one polynomial")
        self.supports = tuple(sups)
        self.nvars = nvars

    @classmethod
    def from_json(cls, obj):
        return cls(obj["supports"], int(obj["nvars"]))

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def to_json(self):
        return {
            "nvars": self.nvars,
            "supports": [[list(v) for v in sup] for sup in self.supports],
        }

    def base_matrix(self) -> np.ndarray:
        """Distinct exponent vectors across all supports, sorted; the
        'base set' that observations encode."""
        union = sorted({v for sup in self.supports for v in sup})
        return np.array(union, dtype=np.float64)

    def __eq__(self, other):
        return (
            isinstance(other, SupportSet)
            and self.nvars == other.nvars
            and self.supports == other.supports
        )

    def __len__(self):
        return len(self.supports)


@dataclass
class EnvConfig:
    episode_len: int = 25
    batch: int = 10
    modulus: int = DEFAULT_MODULUS
    scale: int = 1000
    baseline: str = "grevlex"
    floor_alpha: int | None = None
    reward_mode: str = "percent"  # or "raw"
    tiebreak: str = "grevlex"  # tiebreak of action-induced weighted orders

    def __post_init__(self):
        if self.episode_len < 1 or self.batch < 1 or self.scale < 1:
            raise ValueError("episode_len, batch and scale must be >= 1")
        validate_modulus(self.modulus)
        if self.reward_mode not in ("percent", "raw"):
            raise ValueError(f"unknown reward_mode {self.reward_mode!r}")

    @property
    def baseline_order(self) -> MonomialOrder:
        return parse_order(self.baseline)


def trace_reward(trace: TraceStats) -> float:
    return -sum(
        m * q * math.log(d) for m, q, d in zip(trace.n_m, trace.n_p, trace.d_p)
    )


def relative_reward(agent: float, base: float) -> float:
    """Percent improvement of the agent reward over the baseline reward."""
    return 100.0 * (agent - base) / (abs(base) + REL_EPS)


def sample_ideal(support: SupportSet, rng: np.random.Generator, p: int = DEFAULT_MODULUS) -> Ideal:
    """One polynomial per support with iid uniform nonzero coefficients, so
    each sampled support equals the prescribed one exactly."""
    gens = []
    for sup in support.supports:
        coeffs = rng.integers(1, p, size=len(sup))
        gens.append(Polynomial(dict(zip(sup, (int(c) for c in coeffs))), support.nvars, p))
    return Ideal(gens, support.nvars, p)


def project_simplex(a, floor_alpha: int | None = None) -> np.ndarray:
    """Clamp to >= 0 and renormalize to sum 1; optionally post-clamp every
    coordinate to n**-alpha and renormalize once more."""
    a = np.asarray(a, dtype=np.float64)
    a = np.maximum(a, 0.0)
    s = a.sum()
    a = a / s if s > 0 else np.full(a.shape, 1.0 / a.size)
    if floor_alpha is not None:
        a = np.maximum(a, float(a.size) ** -float(floor_alpha))
        a = a / a.sum()
    return a


def discretize(a, scale: int = 1000) -> tuple:
    """Integer weight vector max(round(scale * a), 1), entrywise."""
    w = np.rint(np.asarray(a, dtype=np.float64) * scale).astype(np.int64)
    return tuple(int(v) for v in np.maximum(w, 1))


def action_order(a, cfg: EnvConfig) -> WeightedOrder:
    return WeightedOrder(discretize(project_simplex(a, cfg.floor_alpha), cfg.scale), cfg.tiebreak)


def mc_reward(a, support: SupportSet, cfg: EnvConfig, rng: np.random.Generator) -> float:
    """Mean relative reward of the action's order over cfg.batch sampled
    ideals, each compared against the baseline order on the same ideal."""
    order = action_order(a, cfg)
    base = cfg.baseline_order
    total = 0.0
    for _ in range(cfg.batch):
        ideal = sample_ideal(support, rng, cfg.modulus)
        ra = trace_reward(f4_groebner(ideal, order).trace)
        rb = trace_reward(f4_groebner(ideal, base).trace)
        total += relative_reward(ra, rb) if cfg.reward_mode == "percent" else ra - rb
    return total / cfg.batch


def initial_state(nvars: int, rng: np.random.Generator) -> np.ndarray:
    """eps_i = 1 + Unif(0,1), normalized to the simplex."""
    eps = 1.0 + rng.random(nvars)
    return eps / eps.sum()


class WeightEnv:
    """Episodic environment over the weight simplex for one support set.

    The observation is the support's normalized exponent matrix with the
    current simplex point appended; the next state is the (projected)
    action itself and the reward is its Monte Carlo estimate.
    """

    def __init__(self, support: SupportSet, cfg: EnvConfig, rng: np.random.Generator):
        self.support = support
        self.cfg = cfg
        self.rng = rng
        base = support.base_matrix()
        peak = base.max()
        self._features = (base / peak if peak > 0 else base).ravel()
        self.state = None
        self.steps = 0

    @property
    def obs_dim(self) -> int:
        return self._features.size + self.support.nvars

    @property
    def action_dim(self) -> int:
        return self.support.nvars

    def observe(self) -> np.ndarray:
        return np.concatenate([self._features, self.state])

    def reset(self) -> np.ndarray:
        self.state = initial_state(self.support.nvars, self.rng)
        self.steps = 0
        return self.observe()

    def step(self, action):
        if self.state is None:
            raise RuntimeError("reset the environment before stepping")
        action = project_simplex(action, self.cfg.floor_alpha)
        reward = mc_reward(action, self.support, self.cfg, self.rng)
        self.state = action
        self.steps += 1
        done = self.steps >= self.cfg.episode_len
        return self.observe(), reward, done
