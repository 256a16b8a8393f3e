"""Per-task random streams derived from a master seed.

A stream seed is the first eight bytes of BLAKE2b keyed with the master seed
over ``tag || ":" || index``. Any reimplementation that follows this rule
reproduces every transcript.
"""
import hashlib

import numpy as np


def derive_seed(master_seed: int, tag: str, index: int = 0) -> int:
    key = int(master_seed).to_bytes(16, "big", signed=True)
    digest = hashlib.blake2b(f"{tag}:{index}".encode(), key=key, digest_size=8)
    return int.from_bytes(digest.digest(), "big")


def derive_rng(master_seed: int, tag: str, index: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(derive_seed(master_seed, tag, index)))
