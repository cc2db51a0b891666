"""Small dense networks with hand-rolled backprop, in float64 numpy.

Enough machinery for the TD3 agent: linear layers with ReLU, an optional
softmax head, Glorot-uniform init, Adam with a linear learning-rate decay,
and versioned npz checkpoints.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

CHECKPOINT_VERSION = 1


def glorot_init(shape, rng: np.random.Generator) -> np.ndarray:
    """Uniform(-lim, lim) with lim = sqrt(6 / (fan_in + fan_out))."""
    fan_in, fan_out = shape
    lim = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-lim, lim, size=shape)


def softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


class Mlp:
    """Fully connected net, ReLU between layers, optional softmax head.

    Weights are (in, out); inputs are (batch, dim) or a single vector.
    """

    def __init__(self, sizes, head: str = "identity", rng: np.random.Generator | None = None):
        if head not in ("identity", "softmax"):
            raise ValueError(f"unknown head {head!r}")
        self.sizes = list(sizes)
        self.head = head
        self.weights = []
        self.biases = []
        if rng is None:
            rng = np.random.default_rng(0)
        for din, dout in zip(sizes, sizes[1:]):
            self.weights.append(glorot_init((din, dout), rng))
            self.biases.append(np.zeros(dout))

    def params(self):
        return self.weights + self.biases

    def copy(self) -> "Mlp":
        other = Mlp.__new__(Mlp)
        other.sizes = list(self.sizes)
        other.head = self.head
        other.weights = [w.copy() for w in self.weights]
        other.biases = [b.copy() for b in self.biases]
        return other

    def forward(self, x: np.ndarray) -> np.ndarray:
        return self.forward_cache(x)[0]

    def forward_cache(self, x):
        x = np.asarray(x, dtype=np.float64)
        single = x.ndim == 1
        a = x.reshape(1, -1) if single else x
        if a.shape[1] != self.sizes[0]:
            raise ValueError(f"input dim {a.shape[1]} != {self.sizes[0]}")
        pre = []
        acts = [a]
        last = len(self.weights) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            z = a @ w + b
            pre.append(z)
            a = np.maximum(z, 0.0) if i < last else z
            acts.append(a)
        out = softmax(a) if self.head == "softmax" else a
        cache = (pre, acts, out, single)
        return (out[0] if single else out), cache

    def backward(self, cache, grad_out):
        """Gradients of sum(upstream * output) w.r.t. parameters and input.

        Returns (grad_weights, grad_biases, grad_input) matching shapes.
        """
        pre, acts, out, single = cache
        g = np.asarray(grad_out, dtype=np.float64)
        if single:
            g = g.reshape(1, -1)
        if self.head == "softmax":
            g = out * (g - (g * out).sum(axis=-1, keepdims=True))
        grad_w = [None] * len(self.weights)
        grad_b = [None] * len(self.weights)
        last = len(self.weights) - 1
        for i in range(last, -1, -1):
            if i < last:
                g = g * (pre[i] > 0.0)
            grad_w[i] = acts[i].T @ g
            grad_b[i] = g.sum(axis=0)
            g = g @ self.weights[i].T
        return grad_w, grad_b, (g[0] if single else g)


@dataclass
class LrSchedule:
    """Linear decay from init to minimum over the first 90% of episodes,
    then held at the minimum."""

    init: float
    minimum: float
    total_episodes: int

    def rate(self, episode: int) -> float:
        horizon = 0.9 * self.total_episodes
        frac = min(1.0, episode / horizon) if horizon > 0 else 1.0
        return self.init + (self.minimum - self.init) * frac


class Adam:
    """Adam with the conventional (0.9, 0.999, 1e-8) moment settings."""

    def __init__(self, params, beta1=0.9, beta2=0.999, eps=1e-8):
        self.beta1, self.beta2, self.eps = beta1, beta2, eps
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]
        self.t = 0

    def step(self, params, grads, lr: float):
        self.t += 1
        b1, b2 = self.beta1, self.beta2
        c1 = 1.0 - b1**self.t
        c2 = 1.0 - b2**self.t
        for p, g, m, v in zip(params, grads, self.m, self.v):
            m *= b1
            m += (1 - b1) * g
            v *= b2
            v += (1 - b2) * g * g
            p -= lr * (m / c1) / (np.sqrt(v / c2) + self.eps)

    def state_arrays(self):
        out = {}
        for i, (m, v) in enumerate(zip(self.m, self.v)):
            out[f"m{i}"] = m
            out[f"v{i}"] = v
        return out

    def load_state(self, arrays, t):
        self.m = [arrays[f"m{i}"] for i in range(len(self.m))]
        self.v = [arrays[f"v{i}"] for i in range(len(self.v))]
        self.t = t


def save_checkpoint(path, nets: dict, meta: dict, optimizers: dict | None = None):
    """Versioned npz bundle of named networks plus optimizer state."""
    arrays = {}
    header = {"version": CHECKPOINT_VERSION, "meta": meta, "nets": {}, "optim": {}}
    for name, net in nets.items():
        header["nets"][name] = {"sizes": net.sizes, "head": net.head}
        for i, (w, b) in enumerate(zip(net.weights, net.biases)):
            arrays[f"{name}/w{i}"] = w
            arrays[f"{name}/b{i}"] = b
    for name, opt in (optimizers or {}).items():
        header["optim"][name] = {"t": opt.t}
        for key, arr in opt.state_arrays().items():
            arrays[f"optim/{name}/{key}"] = arr
    arrays["header"] = np.frombuffer(
        json.dumps(header, sort_keys=True).encode(), dtype=np.uint8
    )
    with open(path, "wb") as fh:
        np.savez(fh, **arrays)


def load_checkpoint(path):
    """Returns (nets, meta, raw arrays) from a checkpoint written above."""
    data = np.load(path)
    header = json.loads(bytes(data["header"]).decode())
    if header["version"] != CHECKPOINT_VERSION:
        raise ValueError(f"unsupported checkpoint version {header['version']}")
    nets = {}
    for name, desc in header["nets"].items():
        net = Mlp.__new__(Mlp)
        net.sizes = list(desc["sizes"])
        net.head = desc["head"]
        net.weights = []
        net.biases = []
        for i in range(len(net.sizes) - 1):
            net.weights.append(data[f"{name}/w{i}"])
            net.biases.append(data[f"{name}/b{i}"])
        nets[name] = net
    return nets, header["meta"], (header, data)
