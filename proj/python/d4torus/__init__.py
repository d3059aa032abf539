"""Python access to the D4 kagome-torus simulator. Results are plain dicts."""

import json

from . import _core
from ._core import D4Error, SCHEMA_VERSION

__all__ = [
    "D4Error",
    "SCHEMA_VERSION",
    "anyon_table",
    "borromean",
    "cost",
    "degeneracy_scan",
    "fidelity_bounds",
    "fuse",
    "prepare",
    "sectors",
    "torus",
]


def torus(lx=3, ly=3):
    return json.loads(_core.torus(lx, ly))


def prepare(lx=3, ly=3, variant="compiled", sector="000000", seed=1, forced=None,
            mode="exact", shots=500):
    forced = {int(k): int(v) for k, v in (forced or {}).items()}
    return json.loads(_core.prepare(lx, ly, variant, sector, seed, forced, mode, shots))


def cost(lx=3, ly=3, variant="compiled"):
    return json.loads(_core.cost(lx, ly, variant))


def sectors():
    return json.loads(_core.sectors())


def borromean(lx=3, ly=3, variant="rgb"):
    return json.loads(_core.borromean(lx, ly, variant))


def degeneracy_scan(lx=3, ly=3, trials=2200, seed=1):
    return json.loads(_core.degeneracy_scan(lx, ly, trials, seed))


def fidelity_bounds(r, g, b, n_sites):
    return json.loads(_core.fidelity_bounds(r, g, b, n_sites))


def anyon_table():
    return json.loads(_core.anyon_table())


def fuse(a, b):
    return _core.fuse(a, b)
