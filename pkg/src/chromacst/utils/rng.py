"""
rng.py
Named random streams split from a single job seed.
Created 17/10/2026
"""

from hashlib import sha256

import numpy as np

# Stream names in use. A new consumer takes a new name, so existing streams never shift.
STREAMS = ("dirichlet", "split", "init", "batch", "noise", "perturb")


def _name_key(name: str) -> int:
    return int.from_bytes(sha256(name.encode("utf-8")).digest()[:8], "little")


def stream(seed: int, name: str, *keys: int) -> np.random.Generator:
    """
    A PCG64 generator for one named consumer of a seed.

    Args:
        seed (int): The job seed.
        name (str): Stream name.
        *keys (int): Further integers separating sub-streams, e.g. a chart index.

    Returns:
        np.random.Generator: The generator.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), _name_key(name), *keys])))
