"""Command-line entry points: ``gb`` (basis engine), ``rl`` (agent
training/evaluation), ``bench`` (support-set catalog).

Option values resolve as CLI flag > GBF_* environment variable > config
file (JSON or TOML) > built-in default, and the resolved configuration is
written verbatim into every run directory.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from .evaluation import WinTieLoss, calibrate, ecdf, sweep, test_order
from .f4 import f4_groebner
from .orders import WeightedOrder, parse_order
from .poly import Ideal
from .reward import EnvConfig, SupportSet, trace_reward
from .td3 import Td3Config, load_agent, train

ENV_PREFIX = "GBF_"


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _load_config_file(path):
    if path is None:
        return {}
    text = Path(path).read_bytes()
    if str(path).endswith((".toml", ".tml")):
        try:
            import tomllib as toml
        except ImportError:
            import tomli as toml
        return toml.loads(text.decode())
    return json.loads(text)


def resolve_config(ns, defaults: dict) -> dict:
    """Merge flag/env/file/default layers; explicit flags always win."""
    file_cfg = _load_config_file(getattr(ns, "config", None))
    out = {}
    for key, default in defaults.items():
        value = getattr(ns, key, None)
        if value is None:
            env = os.environ.get(ENV_PREFIX + key.upper())
            if env is not None:
                value = _coerce(env, default)
            elif key in file_cfg:
                value = file_cfg[key]
            else:
                value = default
        out[key] = value
    return out


def _coerce(text, default):
    if isinstance(default, bool):
        return text.lower() in ("1", "true", "yes", "on")
    if isinstance(default, int):
        return int(text)
    if isinstance(default, float):
        return float(text)
    return text


def make_run_dir(out_root, seed) -> Path:
    """Fresh run directory under out_root; existing runs are never reused."""
    root = Path(out_root)
    root.mkdir(parents=True, exist_ok=True)
    stamp = time.strftime("%Y%m%d-%H%M%S")
    base = f"run-{seed}-{stamp}"
    path = root / base
    k = 1
    while path.exists():
        path = root / f"{base}-{k}"
        k += 1
    path.mkdir()
    return path


def write_config(run_dir: Path, cfg: dict):
    with open(run_dir / "config.json", "w") as fh:
        json.dump(cfg, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_support(spec: str) -> SupportSet:
    if spec in bench_mod.BENCHMARK_NAMES:
        return bench_mod.load_benchmark(spec)
    if not Path(spec).exists():
        raise UsageError(
            f"--support {spec!r} is neither a benchmark name "
            f"({', '.join(bench_mod.BENCHMARK_NAMES)}) nor a file"
        )
    return SupportSet.load(spec)


# ---------------------------------------------------------------------------
# gb


def cmd_gb_compute(ns) -> int:
    defaults = {"order": "grevlex", "emit": "basis,trace", "modulus": 32003}
    cfg = resolve_config(ns, defaults)
    if ns.ideal is None:
        raise UsageError("gb compute: --ideal is required")
    if not Path(ns.ideal).exists():
        raise UsageError(f"gb compute: ideal file {ns.ideal!r} not found")
    ideal = Ideal.load(ns.ideal, p=cfg["modulus"])
    order = parse_order(cfg["order"])
    result = f4_groebner(ideal, order)
    emit = {part.strip() for part in cfg["emit"].split(",")}
    out = {"nvars": ideal.nvars, "modulus": ideal.p, "order": order.spec()}
    if "basis" in emit:
        out["basis"] = [g.to_json(order) for g in result.basis]
    if "trace" in emit:
        out["trace"] = result.trace.to_json()
        out["reward"] = trace_reward(result.trace)
    text = json.dumps(out, indent=1)
    if ns.out:
        Path(ns.out).write_text(text + "\n")
    else:
        print(text)
    return 0


def _parse_grid(text: str, nvars: int):
    try:
        lo, hi, step = (int(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"bad --grid {text!r}, expected lo:hi:step") from None
    if step < 1 or hi < lo:
        raise UsageError(f"bad --grid {text!r}")
    axis = list(range(lo, hi + 1, step))
    return list(itertools.product(axis, repeat=nvars))


def cmd_gb_sweep(ns) -> int:
    defaults = {"grid": "30:70:10", "tiebreak": "grevlex", "repeats": 3, "seed": 0}
    cfg = resolve_config(ns, defaults)
    if ns.ideal is not None:
        target = Ideal.load(ns.ideal)
        nvars = target.nvars
    elif ns.support is not None:
        target = load_support(ns.support)
        nvars = target.nvars
    else:
        raise UsageError("gb sweep: provide --ideal or --support")
    grid = _parse_grid(cfg["grid"], nvars)
    records, pearson, spearman = sweep(
        target, grid, tiebreak=cfg["tiebreak"], repeats=cfg["repeats"], rng=cfg["seed"]
    )
    if ns.out:
        with open(ns.out, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["weights", "reward", "delta_pct", "runtime_s"])
            for r in records:
                writer.writerow(
                    [":".join(map(str, r.weights)), repr(r.reward), repr(r.delta_pct), repr(r.runtime_s)]
                )
    summary = {
        "points": len(records),
        "pearson": pearson,
        "spearman": spearman,
        "best_weights": list(min(records, key=lambda r: (-r.delta_pct, r.weights)).weights),
    }
    print(json.dumps(summary, indent=1))
    return 0


# ---------------------------------------------------------------------------
# rl


def _env_config(cfg) -> EnvConfig:
    return EnvConfig(
        episode_len=cfg["steps"],
        batch=cfg["batch"],
        modulus=cfg["modulus"],
        scale=cfg["scale"],
        baseline=cfg["baseline"],
        floor_alpha=cfg["floor_alpha"],
        reward_mode=cfg["reward_mode"],
    )


TRAIN_DEFAULTS = {
    "episodes": 10_000,
    "steps": 25,
    "batch": 10,
    "seed": 0,
    "modulus": 32003,
    "scale": 1000,
    "baseline": "grevlex",
    "floor_alpha": None,
    "reward_mode": "percent",
    "gamma": 0.99,
    "tau": 0.05,
    "actor_lr": 1e-4,
    "actor_lr_min": 1e-5,
    "critic_lr": 1e-4,
    "critic_lr_min": 1e-6,
    "sigma": 0.002,
    "policy_delay": 100,
    "replay_batch": 100,
    "buffer_capacity": 1_000_000,
    "target_smoothing": True,
}


def cmd_rl_train(ns) -> int:
    cfg = resolve_config(ns, TRAIN_DEFAULTS)
    if ns.support is None:
        raise UsageError("rl train: --support is required")
    if ns.out is None:
        raise UsageError("rl train: --out is required")
    support = load_support(ns.support)
    env_cfg = _env_config(cfg)
    td3_cfg = Td3Config(
        episodes=cfg["episodes"],
        steps=cfg["steps"],
        gamma=cfg["gamma"],
        tau=cfg["tau"],
        actor_lr=cfg["actor_lr"],
        actor_lr_min=cfg["actor_lr_min"],
        critic_lr=cfg["critic_lr"],
        critic_lr_min=cfg["critic_lr_min"],
        sigma=cfg["sigma"],
        policy_delay=cfg["policy_delay"],
        batch=cfg["replay_batch"],
        buffer_capacity=cfg["buffer_capacity"],
        target_smoothing=cfg["target_smoothing"],
    )
    run_dir = make_run_dir(ns.out, cfg["seed"])
    write_config(run_dir, {"command": "rl train", "support": ns.support, **cfg})
    quiet = bool(ns.quiet)

    def progress(row):
        if not quiet and (row[0] % 10 == 0 or row[0] == cfg["episodes"] - 1):
            print(f"episode {row[0]}: mean_reward {row[1]:.4f}", flush=True)

    train(support, env_cfg, td3_cfg, cfg["seed"], out_dir=run_dir, progress=progress)
    print(str(run_dir))
    return 0


EVAL_DEFAULTS = {
    "n_test": 100_000,
    "n_calib": 100,
    "baseline": "grevlex",
    "seed": 0,
    "threads": 1,
}


def cmd_rl_eval(ns) -> int:
    cfg = resolve_config(ns, EVAL_DEFAULTS)
    if ns.agent is None:
        raise UsageError("rl eval: --agent is required")
    if ns.out is None:
        raise UsageError("rl eval: --out is required")
    if not Path(ns.agent).exists():
        raise UsageError(f"rl eval: checkpoint {ns.agent!r} not found")
    agent, support, env_cfg = load_agent(ns.agent)
    if ns.support is not None:
        support = load_support(ns.support)
    run_dir = make_run_dir(ns.out, cfg["seed"])
    write_config(run_dir, {"command": "rl eval", "agent": ns.agent, **cfg})

    streams = np.random.SeedSequence(cfg["seed"]).spawn(2)
    calib_rng = np.random.default_rng(streams[0])
    weights = calibrate(agent.actor, support, env_cfg, calib_rng, n_calib=cfg["n_calib"])
    order = WeightedOrder(weights, env_cfg.tiebreak)
    baseline = parse_order(cfg["baseline"])
    wtl = test_order(
        order,
        baseline,
        support,
        cfg["n_test"],
        streams[1],
        p=env_cfg.modulus,
        threads=cfg["threads"],
    )
    summary = {
        "weights": list(weights),
        "order": order.spec(),
        "baseline": baseline.spec(),
        **wtl.to_json(),
        "median_delta_pct": float(np.median(wtl.samples)),
    }
    with open(run_dir / "summary.json", "w") as fh:
        json.dump(summary, fh, indent=1)
        fh.write("\n")
    with open(run_dir / "per_instance.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["instance", "delta_pct"])
        for i, d in enumerate(wtl.samples):
            writer.writerow([i, repr(float(d))])
    xs, fs = ecdf(wtl.samples)
    with open(run_dir / "ecdf.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["delta_pct", "cdf"])
        for x, f in zip(xs, fs):
            writer.writerow([repr(float(x)), repr(float(f))])
    print(json.dumps(summary, indent=1))
    print(str(run_dir))
    return 0


# ---------------------------------------------------------------------------
# bench


def cmd_bench_list(ns) -> int:
    for name in bench_mod.BENCHMARK_NAMES:
        info = bench_mod.benchmark_info(name)
        sizes = [len(s) for s in info["supports"]]
        print(
            f"{name}: {info['nvars']} vars, {len(sizes)} polynomials, "
            f"support sizes {min(sizes)}..{max(sizes)}"
        )
    return 0


def cmd_bench_export(ns) -> int:
    if ns.name is None or ns.out is None:
        raise UsageError("bench export: --name and --out are required")
    try:
        support = bench_mod.load_benchmark(ns.name)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    with open(ns.out, "w") as fh:
        json.dump(support.to_json(), fh, indent=1)
        fh.write("\n")
    print(f"wrote {ns.out}")
    return 0


# ---------------------------------------------------------------------------
# dispatch


def build_parser() -> Parser:
    parser = Parser(prog="gbrl", description=__doc__)
    sub = parser.add_subparsers(dest="group")

    gb = sub.add_parser("gb", parents=[], add_help=True)
    gb_sub = gb.add_subparsers(dest="command")
    pc = gb_sub.add_parser("compute")
    pc.add_argument("--ideal")
    pc.add_argument("--order")
    pc.add_argument("--emit")
    pc.add_argument("--modulus", type=int)
    pc.add_argument("--out")
    pc.add_argument("--config")
    pc.set_defaults(func=cmd_gb_compute)
    psw = gb_sub.add_parser("sweep")
    psw.add_argument("--ideal")
    psw.add_argument("--support")
    psw.add_argument("--grid")
    psw.add_argument("--tiebreak")
    psw.add_argument("--repeats", type=int)
    psw.add_argument("--seed", type=int)
    psw.add_argument("--out")
    psw.add_argument("--config")
    psw.set_defaults(func=cmd_gb_sweep)

    rl = sub.add_parser("rl")
    rl_sub = rl.add_subparsers(dest="command")
    pt = rl_sub.add_parser("train")
    pt.add_argument("--support")
    pt.add_argument("--episodes", type=int)
    pt.add_argument("--steps", type=int)
    pt.add_argument("--batch", type=int)
    pt.add_argument("--seed", type=int)
    pt.add_argument("--out")
    pt.add_argument("--modulus", type=int)
    pt.add_argument("--scale", type=int)
    pt.add_argument("--baseline")
    pt.add_argument("--floor-alpha", dest="floor_alpha", type=int)
    pt.add_argument("--reward-mode", dest="reward_mode")
    pt.add_argument("--gamma", type=float)
    pt.add_argument("--tau", type=float)
    pt.add_argument("--actor-lr", dest="actor_lr", type=float)
    pt.add_argument("--actor-lr-min", dest="actor_lr_min", type=float)
    pt.add_argument("--critic-lr", dest="critic_lr", type=float)
    pt.add_argument("--critic-lr-min", dest="critic_lr_min", type=float)
    pt.add_argument("--sigma", type=float)
    pt.add_argument("--policy-delay", dest="policy_delay", type=int)
    pt.add_argument("--replay-batch", dest="replay_batch", type=int)
    pt.add_argument("--buffer-capacity", dest="buffer_capacity", type=int)
    smoothing = pt.add_mutually_exclusive_group()
    smoothing.add_argument(
        "--target-smoothing", dest="target_smoothing", action="store_true", default=None
    )
    smoothing.add_argument(
        "--no-target-smoothing", dest="target_smoothing", action="store_false", default=None
    )
    pt.add_argument("--quiet", action="store_true")
    pt.add_argument("--config")
    pt.set_defaults(func=cmd_rl_train)
    pe = rl_sub.add_parser("eval")
    pe.add_argument("--agent")
    pe.add_argument("--support")
    pe.add_argument("--n-test", dest="n_test", type=int)
    pe.add_argument("--n-calib", dest="n_calib", type=int)
    pe.add_argument("--baseline")
    pe.add_argument("--seed", type=int)
    pe.add_argument("--threads", type=int)
    pe.add_argument("--out")
    pe.add_argument("--config")
    pe.set_defaults(func=cmd_rl_eval)

    bench = sub.add_parser("bench")
    bench_sub = bench.add_subparsers(dest="command")
    pl = bench_sub.add_parser("list")
    pl.set_defaults(func=cmd_bench_list)
    px = bench_sub.add_parser("export")
    px.add_argument("--name")
    px.add_argument("--out")
    px.set_defaults(func=cmd_bench_export)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        if not hasattr(ns, "func"):
            parser.parse_args(argv + ["--help"])
            return 1
        return ns.func(ns)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except SystemExit as exc:  # argparse --help path
        return 0 if exc.code in (0, None) else 1
    except (OSError, ValueError, KeyError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def gb_entry():
    raise SystemExit(main(["gb"] + sys.argv[1:]))


def rl_entry():
    raise SystemExit(main(["rl"] + sys.argv[1:]))


def bench_entry():
    raise SystemExit(main(["bench"] + sys.argv[1:]))
