"""TD3 with twin critics, target networks, delayed policy updates and a
proportional prioritized replay buffer, specialized to the simplex action
space of the weight environment.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field, asdict

import numpy as np

from .nn import Adam, LrSchedule, Mlp
from .orders import GREVLEX, GRLEX
from .reward import (
    EnvConfig,
    SupportSet,
    WeightEnv,
    project_simplex,
    relative_reward,
    sample_ideal,
    trace_reward,
)
from .f4 import f4_groebner

HIDDEN = (512, 512, 512)


@dataclass
class Td3Config:
    episodes: int = 10_000
    steps: int = 25
    gamma: float = 0.99
    tau: float = 0.05
    actor_lr: float = 1e-4
    actor_lr_min: float = 1e-5
    critic_lr: float = 1e-4
    critic_lr_min: float = 1e-6
    sigma: float = 0.002  # exploration noise std
    policy_delay: int = 100
    batch: int = 100  # PER sampling batch
    buffer_capacity: int = 1_000_000
    per_alpha: float = 0.6
    per_beta: float = 0.4
    per_beta_step: float = 1e-4
    per_eps: float = 0.01
    target_smoothing: bool = True
    smoothing_std: float | None = None  # defaults to 2*sigma
    smoothing_clip: float | None = None  # defaults to 5*sigma

    def __post_init__(self):
        if min(self.episodes, self.steps, self.policy_delay, self.batch) < 1:
            raise ValueError("episodes, steps, policy_delay, batch must be >= 1")
        if not (0 <= self.gamma < 1) or not (0 < self.tau <= 1):
            raise ValueError("need 0 <= gamma < 1 and 0 < tau <= 1")
        if self.smoothing_std is None:
            self.smoothing_std = 2.0 * self.sigma
        if self.smoothing_clip is None:
            self.smoothing_clip = 5.0 * self.sigma


class SumTree:
    """Binary indexed tree over leaf priorities; root holds the total."""

    def __init__(self, capacity: int):
        self.capacity = capacity
        self.tree = np.zeros(2 * capacity)

    def total(self) -> float:
        return float(self.tree[1])

    def update(self, leaf: int, value: float):
        i = leaf + self.capacity
        delta = value - self.tree[i]
        while i >= 1:
            self.tree[i] += delta
            i //= 2

    def get(self, leaf: int) -> float:
        return float(self.tree[leaf + self.capacity])

    def find(self, mass: float) -> int:
        """Leaf index whose cumulative-priority interval contains mass."""
        i = 1
        while i < self.capacity:
            left = 2 * i
            if mass <= self.tree[left] or self.tree[left + 1] == 0.0:
                i = left
            else:
                mass -= self.tree[left]
                i = left + 1
        return i - self.capacity


class PerBuffer:
    """Proportional prioritized replay: P(i) = p_i^alpha / sum p_j^alpha,
    importance weights (M * P(i))^-beta normalized by the batch maximum,
    beta annealed toward 1 on every sampling call."""

    def __init__(
        self,
        capacity: int = 1_000_000,
        batch: int = 100,
        alpha: float = 0.6,
        beta: float = 0.4,
        beta_step: float = 1e-4,
        eps: float = 0.01,
    ):
        self.capacity = capacity
        self.batch = batch
        self.alpha = alpha
        self.beta = beta
        self.beta_step = beta_step
        self.eps = eps
        self.tree = SumTree(capacity)
        self.data = [None] * capacity
        self.size = 0
        self.cursor = 0
        self.max_priority = 1.0

    def __len__(self):
        return self.size

    def push(self, obs, action, reward, next_obs, done):
        self.data[self.cursor] = (
            np.asarray(obs, dtype=np.float64),
            np.asarray(action, dtype=np.float64),
            float(reward),
            np.asarray(next_obs, dtype=np.float64),
            float(done),
        )
        self.tree.update(self.cursor, self.max_priority**self.alpha)
        self.cursor = (self.cursor + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def sample(self, rng: np.random.Generator):
        if self.size == 0:
            raise ValueError("cannot sample from an empty buffer")
        n = min(self.batch, self.size)
        total = self.tree.total()
        idx = np.empty(n, dtype=np.int64)
        probs = np.empty(n)
        for k, u in enumerate(rng.random(n) * total):
            leaf = self.tree.find(u)
            idx[k] = leaf
            probs[k] = self.tree.get(leaf) / total
        weights = (self.size * probs) ** -self.beta
        weights /= weights.max()
        self.beta = min(1.0, self.beta + self.beta_step)
        rows = [self.data[i] for i in idx]
        batch = {
            "obs": np.stack([r[0] for r in rows]),
            "action": np.stack([r[1] for r in rows]),
            "reward": np.array([r[2] for r in rows]),
            "next_obs": np.stack([r[3] for r in rows]),
            "done": np.array([r[4] for r in rows]),
        }
        return batch, idx, weights

    def update_priorities(self, idx, td_errors):
        for i, err in zip(idx, np.abs(np.asarray(td_errors, dtype=float)).ravel()):
            p = err + self.eps
            self.max_priority = max(self.max_priority, p)
            self.tree.update(int(i), p**self.alpha)


def act(actor: Mlp, obs, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """Softmax policy output plus Gaussian exploration noise, projected
    back onto the simplex."""
    a = actor.forward(np.asarray(obs, dtype=np.float64))
    if sigma > 0:
        a = a + rng.normal(0.0, sigma, size=a.shape)
    return project_simplex(a)


class Td3Agent:
    def __init__(self, obs_dim: int, action_dim: int, cfg: Td3Config, rng: np.random.Generator):
        self.cfg = cfg
        self.obs_dim = obs_dim
        self.action_dim = action_dim
        self.actor = Mlp((obs_dim, *HIDDEN, action_dim), head="softmax", rng=rng)
        self.critic1 = Mlp((obs_dim + action_dim, *HIDDEN, 1), rng=rng)
        self.critic2 = Mlp((obs_dim + action_dim, *HIDDEN, 1), rng=rng)
        self.target_actor = self.actor.copy()
        self.target_critic1 = self.critic1.copy()
        self.target_critic2 = self.critic2.copy()
        self.actor_opt = Adam(self.actor.params())
        self.critic1_opt = Adam(self.critic1.params())
        self.critic2_opt = Adam(self.critic2.params())
        self.actor_sched = LrSchedule(cfg.actor_lr, cfg.actor_lr_min, cfg.episodes)
        self.critic_sched = LrSchedule(cfg.critic_lr, cfg.critic_lr_min, cfg.episodes)
        self.episode = 0
        self.updates = 0

    def act(self, obs, rng, sigma=None):
        return act(self.actor, obs, self.cfg.sigma if sigma is None else sigma, rng)

    def _target_action(self, next_obs, rng):
        a = self.target_actor.forward(next_obs)
        if self.cfg.target_smoothing and self.cfg.smoothing_std > 0:
            noise = rng.normal(0.0, self.cfg.smoothing_std, size=a.shape)
            clip = self.cfg.smoothing_clip
            a = a + np.clip(noise, -clip, clip)
        return np.apply_along_axis(project_simplex, 1, a)

    def update(self, buffer: PerBuffer, rng: np.random.Generator):
        """One critic regression step; every policy_delay-th call also
        updates the actor and soft-updates all targets."""
        if len(buffer) < self.cfg.batch:
            raise ValueError(
                f"buffer holds {len(buffer)} transitions, need {self.cfg.batch}"
            )
        cfg = self.cfg
        batch, idx, is_w = buffer.sample(rng)
        n = len(idx)

        next_a = self._target_action(batch["next_obs"], rng)
        target_in = np.concatenate([batch["next_obs"], next_a], axis=1)
        q1t = self.target_critic1.forward(target_in)[:, 0]
        q2t = self.target_critic2.forward(target_in)[:, 0]
        y = batch["reward"] + cfg.gamma * (1.0 - batch["done"]) * np.minimum(q1t, q2t)

        critic_in = np.concatenate([batch["obs"], batch["action"]], axis=1)
        lr = self.critic_sched.rate(self.episode)
        td = None
        losses = {}
        for name, net, opt in (
            ("critic1", self.critic1, self.critic1_opt),
            ("critic2", self.critic2, self.critic2_opt),
        ):
            q, cache = net.forward_cache(critic_in)
            delta = q[:, 0] - y
            if td is None:
                td = delta  # critic 1 drives the priorities
            losses[name] = float(np.mean(is_w * delta**2))
            upstream = (2.0 * is_w * delta / n)[:, None]
            gw, gb, _ = net.backward(cache, upstream)
            opt.step(net.params(), gw + gb, lr)
        buffer.update_priorities(idx, td)

        self.updates += 1
        if self.updates % cfg.policy_delay == 0:
            a, actor_cache = self.actor.forward_cache(batch["obs"])
            q_in = np.concatenate([batch["obs"], a], axis=1)
            q, critic_cache = self.critic1.forward_cache(q_in)
            losses["actor"] = float(-np.mean(q))
            upstream = np.full((n, 1), -1.0 / n)
            _, _, grad_in = self.critic1.backward(critic_cache, upstream)
            grad_a = grad_in[:, self.obs_dim :]
            gw, gb, _ = self.actor.backward(actor_cache, grad_a)
            self.actor_opt.step(
                self.actor.params(), gw + gb, self.actor_sched.rate(self.episode)
            )
            self._soft_update()
        return losses

    def _soft_update(self):
        tau = self.cfg.tau
        for online, target in (
            (self.actor, self.target_actor),
            (self.critic1, self.target_critic1),
            (self.critic2, self.target_critic2),
        ):
            for po, pt in zip(online.params(), target.params()):
                pt *= 1.0 - tau
                pt += tau * po


@dataclass
class TrainResult:
    agent: Td3Agent
    curve: list  # rows of (episode, mean_reward, grevlex_ref, grlex_ref)
    run_dir: str | None = None


def _reference_rewards(support, env_cfg: EnvConfig, rng) -> tuple:
    """Mean relative reward of GrevLex and GrLex against the baseline on a
    fresh evaluation batch (exactly 0 for the baseline itself)."""
    base = env_cfg.baseline_order
    out = []
    for order in (GREVLEX, GRLEX):
        total = 0.0
        for _ in range(env_cfg.batch):
            ideal = sample_ideal(support, rng, env_cfg.modulus)
            rb = trace_reward(f4_groebner(ideal, base).trace)
            ra = rb if order == base else trace_reward(f4_groebner(ideal, order).trace)
            total += relative_reward(ra, rb)
        out.append(total / env_cfg.batch)
    return tuple(out)


def write_curve(path, curve):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["episode", "mean_reward", "grevlex_ref", "grlex_ref"])
        for episode, mean_reward, gv, gl in curve:
            writer.writerow([episode, repr(mean_reward), repr(gv), repr(gl)])


def train(
    support: SupportSet,
    env_cfg: EnvConfig,
    td3_cfg: Td3Config,
    seed: int,
    out_dir=None,
    checkpoint_every: int | None = None,
    progress=None,
) -> TrainResult:
    """Run the full training loop: N episodes of L environment steps, one
    critic update per step once the buffer can fill a batch."""
    streams = np.random.SeedSequence(seed).spawn(5)
    env_rng, net_rng, explore_rng, per_rng, eval_rng = map(np.random.default_rng, streams)

    env = WeightEnv(support, env_cfg, env_rng)
    agent = Td3Agent(env.obs_dim, env.action_dim, td3_cfg, net_rng)
    buffer = PerBuffer(
        capacity=td3_cfg.buffer_capacity,
        batch=td3_cfg.batch,
        alpha=td3_cfg.per_alpha,
        beta=td3_cfg.per_beta,
        beta_step=td3_cfg.per_beta_step,
        eps=td3_cfg.per_eps,
    )

    curve = []
    for episode in range(td3_cfg.episodes):
        agent.episode = episode
        obs = env.reset()
        total = 0.0
        for _ in range(td3_cfg.steps):
            action = agent.act(obs, explore_rng)
            next_obs, reward, done = env.step(action)
            buffer.push(obs, action, reward, next_obs, done)
            obs = next_obs
            total += reward
            if len(buffer) >= td3_cfg.batch:
                agent.update(buffer, per_rng)
            if done:
                break
        gv_ref, gl_ref = _reference_rewards(support, env_cfg, eval_rng)
        curve.append((episode, total / td3_cfg.steps, gv_ref, gl_ref))
        if progress is not None:
            progress(curve[-1])
        if out_dir is not None and checkpoint_every and (episode + 1) % checkpoint_every == 0:
            save_agent(f"{out_dir}/checkpoint.npz", agent, support, env_cfg)

    run_dir = None
    if out_dir is not None:
        run_dir = str(out_dir)
        save_agent(f"{out_dir}/checkpoint.npz", agent, support, env_cfg)
        write_curve(f"{out_dir}/curve.csv", curve)
    return TrainResult(agent, curve, run_dir)


def save_agent(path, agent: Td3Agent, support: SupportSet, env_cfg: EnvConfig):
    from .nn import save_checkpoint

    meta = {
        "obs_dim": agent.obs_dim,
        "action_dim": agent.action_dim,
        "optimizer": "adam",
        "td3": asdict(agent.cfg),
        "env": asdict(env_cfg),
        "support": support.to_json(),
        "episode": agent.episode,
        "updates": agent.updates,
    }
    nets = {
        "actor": agent.actor,
        "critic1": agent.critic1,
        "critic2": agent.critic2,
        "target_actor": agent.target_actor,
        "target_critic1": agent.target_critic1,
        "target_critic2": agent.target_critic2,
    }
    optimizers = {
        "actor": agent.actor_opt,
        "critic1": agent.critic1_opt,
        "critic2": agent.critic2_opt,
    }
    save_checkpoint(path, nets, meta, optimizers)


def load_agent(path):
    """Rebuild a Td3Agent (plus its support and env config) from disk."""
    from .nn import load_checkpoint

    nets, meta, (header, data) = load_checkpoint(path)
    cfg = Td3Config(**meta["td3"])
    agent = Td3Agent.__new__(Td3Agent)
    agent.cfg = cfg
    agent.obs_dim = meta["obs_dim"]
    agent.action_dim = meta["action_dim"]
    agent.actor = nets["actor"]
    agent.critic1 = nets["critic1"]
    agent.critic2 = nets["critic2"]
    agent.target_actor = nets["target_actor"]
    agent.target_critic1 = nets["target_critic1"]
    agent.target_critic2 = nets["target_critic2"]
    agent.actor_opt = Adam(agent.actor.params())
    agent.critic1_opt = Adam(agent.critic1.params())
    agent.critic2_opt = Adam(agent.critic2.params())
    for name, opt in (
        ("actor", agent.actor_opt),
        ("critic1", agent.critic1_opt),
        ("critic2", agent.critic2_opt),
    ):
        if name in header["optim"]:
            arrays = {
                key.split("/", 2)[2]: data[key]
                for key in data.files
                if key.startswith(f"optim/{name}/")
            }
            opt.load_state(arrays, header["optim"][name]["t"])
    agent.actor_sched = LrSchedule(cfg.actor_lr, cfg.actor_lr_min, cfg.episodes)
    agent.critic_sched = LrSchedule(cfg.critic_lr, cfg.critic_lr_min, cfg.episodes)
    agent.episode = meta.get("episode", 0)
    agent.updates = meta.get("updates", 0)
    support = SupportSet.from_json(meta["support"])
    env_cfg = EnvConfig(**meta["env"])
    return agent, support, env_cfg
