"""Named, independent random streams derived from one master seed."""

from typing import Dict

import numpy as np

# Stream order is part of the reproducibility contract: append, never reorder.
STREAM_NAMES = ("topology", "arrivals", "fading")


def stream(seed: int, name: str) -> np.random.Generator:
    """Generator for one named stream; unaffected by draws on the others."""
    try:
        index = STREAM_NAMES.index(name)
    except ValueError:
        raise ValueError(f"Unknown random stream '{name}', expected one of {STREAM_NAMES}")
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def spawn_streams(seed: int) -> Dict[str, np.random.Generator]:
    return {name: stream(seed, name) for name in STREAM_NAMES}
