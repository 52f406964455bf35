"""Deterministic random streams.

Every randomized operation draws from its own PCG64 generator, seeded by the
pair (user seed, operation tag).  Repeated runs with the same seed reproduce
bit-for-bit, while distinct operations never share a stream even when they
receive the same seed.
"""

import hashlib

import numpy as np


def substream(seed: int, tag: str) -> np.random.Generator:
    """Return a PCG64 generator for the given (seed, tag) pair.

    The tag is hashed with SHA-256 (not the process-salted builtin hash) so
    the mapping is stable across interpreter runs.
    """
    digest = hashlib.sha256(tag.encode("utf-8")).digest()
    tag_entropy = int.from_bytes(digest[:8], "big")
    return np.random.default_rng(np.random.SeedSequence([int(seed), tag_entropy]))
