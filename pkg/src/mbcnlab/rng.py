"""Deterministic RNG streams derived from one master seed.

Every stochastic element of a campaign (quench disorder, shot sampling,
noise, bootstrap) draws from its own stream addressed by a small integer
path, so any piece can be regenerated in isolation.
"""

import numpy as np

# stream namespaces (first path element after the master seed)
NS_QUENCH = 1
NS_SHOTS = 2
NS_NOISE = 3
NS_HAAR = 4
NS_BOOTSTRAP = 5
NS_REPETITION = 6
NS_FRAME = 7

EXPERIMENT_TAG = {"A": 0, "B": 1}


def stream(master_seed, *path):
    """Generator for the stream addressed by (master_seed, *path).

    Path elements must be nonnegative integers; the same address always
    yields the same stream, independent of any other stream's history.
    """
    for p in path:
        if p < 0:
            raise ValueError(f"negative stream path element: {path}")
    ss = np.random.SeedSequence([int(master_seed) & 0xFFFFFFFFFFFFFFFF, *map(int, path)])
    return np.random.default_rng(ss)
