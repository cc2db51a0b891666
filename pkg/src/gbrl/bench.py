"""Benchmark support-set catalog and a random support generator.

The four shipped benchmarks live as JSON data files next to this module;
their digests are pinned here so silent edits fail loudly.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from importlib import resources

import numpy as np

from .reward import SupportSet

_DIGESTS = {
    "relative_pose": "ab1002b0798b2060e572fae2040eed1df0d2da069e41a8cf9f7ce601caff8a08",
    "triangulation": "390b5f08365c6830c55ea444f4636d2205458937146bc2c54a85f75593347a7c",
    "nsite14": "dbbd44341571d0193b4f6c4eb95e6d68ffd71c0d6abb1ce2eaf907d030e54aac",
    "wnt": "a9c3694a61b11eb058199941f33b4dd112f9420a0eeeeab3d5b7ae48585ffe19",
}

BENCHMARK_NAMES = tuple(_DIGESTS)


def _read_raw(name: str) -> bytes:
    return resources.files("gbrl").joinpath(f"data/{name}.json").read_bytes()


def benchmark_info(name: str) -> dict:
    """Raw catalog entry (name, nvars, note, supports) after a hash check."""
    if name not in _DIGESTS:
        raise KeyError(
            f"unknown benchmark {name!r}; valid names: {', '.join(BENCHMARK_NAMES)}"
        )
    blob = _read_raw(name)
    digest = hashlib.sha256(blob).hexdigest()
    if digest != _DIGESTS[name]:
        raise RuntimeError(
            f"benchmark data file {name}.json is corrupted "
            f"(sha256 {digest}, expected {_DIGESTS[name]})"
        )
    return json.loads(blob)


def load_benchmark(name: str) -> SupportSet:
    info = benchmark_info(name)
    return SupportSet(info["supports"], info["nvars"])


def random_support(
    nvars: int,
    npolys: int,
    max_deg: int,
    terms_per_poly: int,
    rng: np.random.Generator,
) -> SupportSet:
    """Random supports of distinct exponent vectors with total degree
    <= max_deg, each containing at least one vector of positive degree."""
    if min(nvars, npolys, max_deg, terms_per_poly) < 1:
        raise ValueError("all parameters must be >= 1")
    pool = sorted(
        m
        for m in itertools.product(range(max_deg + 1), repeat=nvars)
        if sum(m) <= max_deg
    )
    if terms_per_poly > len(pool):
        raise ValueError(
            f"terms_per_poly={terms_per_poly} exceeds the {len(pool)} "
            f"monomials of degree <= {max_deg} in {nvars} variables"
        )
    positive = [m for m in pool if sum(m) > 0]
    supports = []
    for _ in range(npolys):
        anchor = positive[int(rng.integers(len(positive)))]
        rest = [m for m in pool if m != anchor]
        picks = rng.choice(len(rest), size=terms_per_poly - 1, replace=False)
        supports.append([anchor] + [rest[int(i)] for i in sorted(picks)])
    return SupportSet(supports, nvars)
