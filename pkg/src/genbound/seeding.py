"""Deterministic per-task seed derivation.

A sub-seed is the first 8 bytes (little endian) of BLAKE2b over the string
``"{seed}:{task}:{index}"``. It depends only on its three inputs, so parallel
work items get the same random streams regardless of execution order.
"""

import hashlib

import numpy as np


def sub_seed(seed: int, task: str, index: int) -> int:
    digest = hashlib.blake2b(f"{int(seed)}:{task}:{int(index)}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def task_rng(seed: int, task: str, index: int) -> np.random.Generator:
    return np.random.default_rng(sub_seed(seed, task, index))
