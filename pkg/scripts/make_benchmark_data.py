#!/usr/bin/env python3
"""Regenerate the packaged benchmark support-set JSON files and print their
SHA-256 digests (the catalog in gbrl.bench pins these)."""

import hashlib
import json
from pathlib import Path

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "gbrl" / "data"


def unit(n, *pos):
    v = [0] * n
    for i in pos:
        v[i - 1] += 1
    return tuple(v)


RELATIVE_POSE = {
    "name": "relative_pose",
    "nvars": 3,
    "note": "two-view relative pose with shared unknown focal length; "
    "variables (l1, l2, p); one shared support for all 10 equations",
    "shared": [
        (3, 0, 2), (3, 0, 1), (3, 0, 0),
        (2, 1, 2), (1, 2, 2), (0, 3, 2),
        (2, 1, 1), (1, 2, 1), (0, 3, 1),
        (2, 1, 0), (1, 1, 2), (2, 0, 2),
        (0, 2, 2), (1, 0, 3), (1, 2, 0),
        (0, 3, 0), (2, 0, 1), (0, 1, 3),
        (1, 1, 1), (0, 2, 1), (1, 0, 2),
        (0, 1, 2), (0, 0, 3), (2, 0, 0),
        (1, 1, 0), (0, 2, 0), (1, 0, 1),
        (0, 1, 1), (0, 0, 2), (1, 0, 0),
        (0, 1, 0), (0, 0, 1), (0, 0, 0),
    ],
    "npolys": 10,
}

TRIANGULATION = {
    "name": "triangulation",
    "nvars": 3,
    "note": "optimal three-view triangulation stationarity system; variables (x, y, z)",
    "supports": [
        [
            (4, 2, 0), (4, 0, 2), (3, 3, 0), (3, 2, 1), (3, 2, 0), (3, 1, 2),
            (3, 0, 3), (3, 0, 2), (1, 3, 2), (1, 2, 3), (1, 2, 2), (0, 4, 2),
            (0, 3, 3), (0, 3, 2), (0, 2, 4), (0, 2, 3), (0, 2, 2),
        ],
        [
            (4, 0, 2), (3, 3, 0), (3, 1, 2), (3, 0, 3), (3, 0, 2), (2, 4, 0),
            (2, 3, 1), (2, 3, 0), (2, 1, 3), (2, 1, 2), (2, 0, 4), (2, 0, 3),
            (2, 0, 2), (1, 3, 2), (0, 4, 2), (0, 3, 3), (0, 3, 2),
        ],
        [
            (4, 2, 0), (3, 3, 0), (3, 2, 1), (3, 2, 0), (3, 0, 3), (2, 4, 0),
            (2, 3, 1), (2, 3, 0), (2, 2, 1), (2, 2, 0), (2, 1, 3), (2, 0, 4),
            (2, 0, 3), (1, 2, 3), (0, 3, 3), (0, 2, 4), (0, 2, 3),
        ],
    ],
}

NSITE14 = {
    "name": "nsite14",
    "nvars": 2,
    "note": "sequential 14-site phosphorylation steady-state reduction; "
    "variables (s0, e); both equations share one support",
    "shared": [(1, 0), (0, 1)] + [(1, k) for k in range(1, 15)] + [(0, 0)],
    "npolys": 2,
}

N = 19
WNT_SUPPORTS = [
    [unit(N, 1), unit(N, 2)],
    [unit(N, 1), unit(N, 2), unit(N, 3), unit(N, 2, 4), unit(N, 14)],
    [unit(N, 2), unit(N, 3), unit(N, 3, 6), unit(N, 15)],
    [unit(N, 2, 4), unit(N, 4, 10), unit(N, 14), unit(N, 16), unit(N, 18)],
    [unit(N, 5), unit(N, 7), unit(N, 5, 8), unit(N, 14), unit(N, 16)],
    [unit(N, 3, 6), unit(N, 6, 11), unit(N, 15), unit(N, 17), unit(N, 19)],
    [unit(N, 5), unit(N, 7), unit(N, 7, 9), unit(N, 15), unit(N, 17)],
    [unit(N, 5, 8), unit(N, 16)],
    [unit(N, 7, 9), unit(N, 17)],
    [unit(N), unit(N, 10), unit(N, 4, 10), unit(N, 11), unit(N, 18)],
    [unit(N, 11), unit(N, 10), unit(N, 6, 11), unit(N, 11, 12), unit(N, 13), unit(N, 19)],
    [unit(N, 11, 12), unit(N, 13)],
    [unit(N, 11, 12), unit(N, 13)],
    [unit(N, 2, 4), unit(N, 14)],
    [unit(N, 3, 6), unit(N, 15)],
    [unit(N, 5, 8), unit(N, 16)],
    [unit(N, 7, 9), unit(N, 17)],
    [unit(N, 4, 10), unit(N, 18)],
    [unit(N, 6, 11), unit(N, 19)],
    [unit(N), unit(N, 1), unit(N, 2), unit(N, 3), unit(N, 14), unit(N, 15)],
    [unit(N), unit(N, 4), unit(N, 5), unit(N, 6), unit(N, 7), unit(N, 14),
     unit(N, 15), unit(N, 16), unit(N, 17), unit(N, 18), unit(N, 19)],
    [unit(N), unit(N, 8), unit(N, 16)],
    [unit(N), unit(N, 9), unit(N, 17)],
    [unit(N), unit(N, 12), unit(N, 13)],
]

WNT = {
    "name": "wnt",
    "nvars": 19,
    "note": "Wnt shuttle model steady states plus conservation laws; "
    "24 equations in 19 species variables",
    "supports": WNT_SUPPORTS,
}


def emit(entry):
    supports = entry.get("supports")
    if supports is None:
        supports = [entry["shared"]] * entry["npolys"]
    obj = {
        "name": entry["name"],
        "nvars": entry["nvars"],
        "note": entry["note"],
        "supports": [sorted([list(v) for v in sup]) for sup in supports],
    }
    path = DATA_DIR / f"{entry['name']}.json"
    blob = json.dumps(obj, indent=1, sort_keys=True).encode() + b"\n"
    path.write_bytes(blob)
    digest = hashlib.sha256(blob).hexdigest()
    sizes = [len(s) for s in obj["supports"]]
    print(f'    "{entry["name"]}": "{digest}",  # {len(sizes)} supports, sizes {sizes[:4]}...')


if __name__ == "__main__":
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    for entry in (RELATIVE_POSE, TRIANGULATION, NSITE14, WNT):
        emit(entry)
