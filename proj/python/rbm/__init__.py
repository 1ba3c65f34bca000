"""Random binary matroid minors.

Thin wrapper over the compiled ``_rbm`` extension. Matrices are lists of
0/1 rows; structured results come back as dicts.
"""

import json

from ._rbm import (
    RbmError,
    core_prediction,
    d_core,
    fano,
    invert,
    profiles,
    rank,
    sample,
)

__all__ = [
    "RbmError",
    "core_prediction",
    "d_core",
    "fano",
    "invert",
    "profiles",
    "rank",
    "run_experiment",
    "run_pipeline",
    "sample",
]


def run_pipeline(n, m, k, seed=0, target="fano", **config):
    """Sample an n x m matrix and search it for `target` as a minor.

    Keyword arguments are pipeline settings (L, zeta, m1_fraction, eps0,
    omega, even_k, candidates_only, ...).
    """
    from ._rbm import _run_pipeline

    return json.loads(_run_pipeline(n, m, k, seed, target, json.dumps(config)))


def run_experiment(profile, trials=None, seed=None, threads=0):
    """Run a built-in experiment profile and return the report as a dict."""
    from ._rbm import _run_experiment

    return json.loads(_run_experiment(profile, trials, seed, threads))
